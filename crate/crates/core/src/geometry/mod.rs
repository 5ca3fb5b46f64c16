//! Delaunay triangulation and clipped Voronoi partition of a layout.

mod delaunay;
mod voronoi;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

pub use voronoi::{single_cell, voronoi, BoundarySegment, Cell, EdgeSource, VoronoiPartition};

use crate::error::{Error, Result};
use crate::projection::{bounding_box, Point};
use delaunay::{orient, Triangulator, INF};

/// Axis-aligned rectangle with its lower-left corner at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    /// Bounding box of `points` and `base`, grown by `margin` of its size on every side.
    /// A zero extent is grown by `margin` in absolute units instead.
    pub fn enclosing(points: &[Point], base: Option<Rect>, margin: f64) -> Option<Rect> {
        let mut corners: Vec<Point> = points.to_vec();
        if let Some(b) = base {
            corners.push([b.x, b.y]);
            corners.push([b.x + b.w, b.y + b.h]);
        }
        let (lo, hi) = bounding_box(&corners)?;
        let w = hi[0] - lo[0];
        let h = hi[1] - lo[1];
        let mx = if w > 0.0 { w * margin } else { margin.max(1.0) };
        let my = if h > 0.0 { h * margin } else { margin.max(1.0) };
        Some(Rect::new(lo[0] - mx, lo[1] - my, w + 2.0 * mx, h + 2.0 * my))
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.x && p[0] <= self.x + self.w && p[1] >= self.y && p[1] <= self.y + self.h
    }

    /// Corners in counterclockwise order.
    pub fn corners(&self) -> [Point; 4] {
        [
            [self.x, self.y],
            [self.x + self.w, self.y],
            [self.x + self.w, self.y + self.h],
            [self.x, self.y + self.h],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayGraph {
    /// Vertex coordinates indexed by id; duplicates carry their tiny offset.
    pub positions: Vec<Point>,
    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Convex hull in counterclockwise order starting at the smallest id.
    pub hull: Vec<usize>,
    /// Counterclockwise triangles; empty in the collinear path mode.
    pub triangles: Vec<[usize; 3]>,
    /// `(kept, moved)` pairs of coincident input points.
    pub duplicates: Vec<(usize, usize)>,
    /// Set when all points are collinear and the graph is a path.
    pub collinear: bool,
}

impl DelaunayGraph {
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    /// Sorted neighbour lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.positions.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }
}

fn position_key(p: Point) -> (u64, u64) {
    // adding zero folds -0.0 into 0.0
    ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits())
}

/// Moves every later copy of an already used position by a tiny step.
fn separate_duplicates(points: &[Point]) -> (Vec<Point>, Vec<(usize, usize)>) {
    let mut seen: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(points.len());
    let mut dups = Vec::new();
    for (id, &p) in points.iter().enumerate() {
        let mut q = p;
        if let Some(&first) = seen.get(&position_key(q)) {
            let step = 1e-9 * q[0].abs().max(q[1].abs()).max(1.0);
            while seen.contains_key(&position_key(q)) {
                q[0] += step;
            }
            dups.push((first, id));
        }
        seen.insert(position_key(q), id);
        out.push(q);
    }
    (out, dups)
}

/// Delaunay triangulation of the given sites.
///
/// Two sites give a single edge and collinear sites a path in sorted order.
/// Coincident sites are pulled apart by `1e-9` (relative to their magnitude)
/// before triangulating, and reported in [`DelaunayGraph::duplicates`].
pub fn delaunay(points: &[Point]) -> Result<DelaunayGraph> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(Error::InvalidParameter("site coordinates must be finite".into()));
    }
    let (pts, duplicates) = separate_duplicates(points);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
            .then(a.cmp(&b))
    });

    let first_off_line = (2..n).find(|&k| orient(pts[order[0]], pts[order[1]], pts[order[k]]) != 0.0);
    let Some(k) = first_off_line else {
        let edges = order
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let (a, b) = (order[0], order[n - 1]);
        return Ok(DelaunayGraph {
            positions: pts,
            edges,
            hull: alloc::vec![a.min(b), a.max(b)],
            triangles: Vec::new(),
            duplicates,
            collinear: true,
        });
    };

    let (mut a, mut b, c) = (order[0], order[1], order[k]);
    if orient(pts[a], pts[b], pts[c]) < 0.0 {
        core::mem::swap(&mut a, &mut b);
    }
    let mut tri = Triangulator::new(&pts, a, b, c);
    for &p in order[2..k].iter().chain(&order[k + 1..]) {
        tri.insert(p);
    }

    let mut edges = BTreeSet::new();
    let mut triangles = Vec::new();
    let mut hull_next = BTreeMap::new();
    for t in tri.live() {
        match t.iter().position(|&v| v == INF) {
            Some(s) => {
                // ghost (u, v) runs clockwise around the hull
                let u = t[(s + 1) % 3];
                let v = t[(s + 2) % 3];
                hull_next.insert(v, u);
                edges.insert((u.min(v), u.max(v)));
            }
            None => {
                triangles.push(t);
                for s in 0..3 {
                    let u = t[s];
                    let v = t[(s + 1) % 3];
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    let start = *hull_next.keys().next().expect("hull is non-empty");
    let mut hull = alloc::vec![start];
    let mut cur = hull_next[&start];
    while cur != start {
        hull.push(cur);
        cur = hull_next[&cur];
    }
    triangles.sort_unstable();

    Ok(DelaunayGraph {
        positions: pts,
        edges: edges.into_iter().collect(),
        hull,
        triangles,
        duplicates,
        collinear: false,
    })
}

/// Even-odd containment test; points on the boundary may go either way.
pub fn polygon_contains(polygon: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + n - 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Signed shoelace area, positive for counterclockwise polygons.
pub fn polygon_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    s / 2.0
}
