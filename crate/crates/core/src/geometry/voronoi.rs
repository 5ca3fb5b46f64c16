//! Voronoi cells clipped to a rectangle, built from Delaunay neighbours.

use alloc::vec::Vec;

use super::{polygon_area, polygon_contains, DelaunayGraph, Rect};
use crate::error::{Error, Result};
use crate::projection::Point;

/// Where a cell edge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeSource {
    /// Part of the clipping rectangle.
    Boundary,
    /// Bisector shared with the given neighbouring site.
    Site(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub site: usize,
    /// Convex polygon in counterclockwise order.
    pub polygon: Vec<Point>,
    /// `sources[k]` labels the edge from `polygon[k]` to `polygon[k + 1]`.
    pub sources: Vec<EdgeSource>,
}

impl Cell {
    pub fn area(&self) -> f64 {
        polygon_area(&self.polygon)
    }

    pub fn contains(&self, p: Point) -> bool {
        polygon_contains(&self.polygon, p)
    }

    /// Sites whose cells share an edge of positive length with this one.
    pub fn neighbours(&self) -> impl Iterator<Item = usize> + '_ {
        self.sources.iter().filter_map(|s| match s {
            EdgeSource::Site(j) => Some(*j),
            EdgeSource::Boundary => None,
        })
    }
}

/// A straight piece of the partition: between two cells or on the rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub a: Point,
    pub b: Point,
    pub left: usize,
    /// `None` on the clipping rectangle.
    pub right: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiPartition {
    pub bounds: Rect,
    pub cells: Vec<Cell>,
}

impl VoronoiPartition {
    /// Every shared edge once (from the lower site id) followed by the outer edges.
    pub fn segments(&self) -> Vec<BoundarySegment> {
        let mut out = Vec::new();
        for cell in &self.cells {
            let n = cell.polygon.len();
            for k in 0..n {
                let right = match cell.sources[k] {
                    EdgeSource::Site(j) if j < cell.site => continue,
                    EdgeSource::Site(j) => Some(j),
                    EdgeSource::Boundary => None,
                };
                out.push(BoundarySegment {
                    a: cell.polygon[k],
                    b: cell.polygon[(k + 1) % n],
                    left: cell.site,
                    right,
                });
            }
        }
        out
    }

    /// Site whose cell contains `p`, by nearest-site search.
    pub fn locate(&self, p: Point, sites: &[Point]) -> Option<usize> {
        if !self.bounds.contains(p) {
            return None;
        }
        (0..sites.len()).min_by(|&i, &j| {
            let d = |s: Point| (s[0] - p[0]) * (s[0] - p[0]) + (s[1] - p[1]) * (s[1] - p[1]);
            d(sites[i]).total_cmp(&d(sites[j])).then(i.cmp(&j))
        })
    }
}

/// Clips `poly` to the half-plane closer to `site` than to `other`.
fn clip(poly: &[(Point, EdgeSource)], site: Point, other: Point, tag: EdgeSource) -> Vec<(Point, EdgeSource)> {
    let normal = [other[0] - site[0], other[1] - site[1]];
    let mid = [(site[0] + other[0]) / 2.0, (site[1] + other[1]) / 2.0];
    let side = |p: Point| (p[0] - mid[0]) * normal[0] + (p[1] - mid[1]) * normal[1];
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let (a, src) = poly[k];
        let b = poly[(k + 1) % n].0;
        let (sa, sb) = (side(a), side(b));
        let cross = |sa: f64, sb: f64| {
            let t = sa / (sa - sb);
            [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
        };
        match (sa <= 0.0, sb <= 0.0) {
            (true, true) => out.push((a, src)),
            (true, false) => {
                out.push((a, src));
                out.push((cross(sa, sb), tag));
            }
            (false, true) => out.push((cross(sa, sb), src)),
            (false, false) => {}
        }
    }
    // drop zero-length edges produced by vertices lying on the clip line
    let mut k = 0;
    while out.len() > 1 && k < out.len() {
        let next = (k + 1) % out.len();
        if out[k].0 == out[next].0 {
            out.remove(k);
        } else {
            k += 1;
        }
    }
    out
}

/// Voronoi partition of the triangulated sites, clipped to `bounds`.
///
/// Each cell is the rectangle cut by the bisectors to the site's Delaunay
/// neighbours, which are exactly the sites that can bound it.
pub fn voronoi(graph: &DelaunayGraph, bounds: Rect) -> Result<VoronoiPartition> {
    let sites = &graph.positions;
    if let Some(i) = sites.iter().position(|&p| !bounds.contains(p)) {
        return Err(Error::SiteOutsideBounds(i));
    }
    let adjacency = graph.adjacency();
    let rect: Vec<(Point, EdgeSource)> = bounds
        .corners()
        .into_iter()
        .map(|c| (c, EdgeSource::Boundary))
        .collect();
    let cells = (0..sites.len())
        .map(|i| {
            let mut poly = rect.clone();
            for &j in &adjacency[i] {
                poly = clip(&poly, sites[i], sites[j], EdgeSource::Site(j));
            }
            let (polygon, sources) = poly.into_iter().unzip();
            Cell {
                site: i,
                polygon,
                sources,
            }
        })
        .collect();
    Ok(VoronoiPartition { bounds, cells })
}

/// Single-site partition: the whole rectangle.
pub fn single_cell(site: Point, bounds: Rect) -> Result<VoronoiPartition> {
    if !bounds.contains(site) {
        return Err(Error::SiteOutsideBounds(0));
    }
    Ok(VoronoiPartition {
        bounds,
        cells: alloc::vec![Cell {
            site: 0,
            polygon: bounds.corners().to_vec(),
            sources: alloc::vec![EdgeSource::Boundary; 4],
        }],
    })
}
