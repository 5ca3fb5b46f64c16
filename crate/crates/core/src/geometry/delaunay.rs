//! Incremental Bowyer-Watson triangulation with ghost triangles and exact predicates.
//!
//! Every hull edge carries a ghost triangle `(u, v, INF)` whose exterior lies
//! left of `u -> v`, so points outside the hull are inserted like any other.
//! Cocircular ties are broken by symbolically raising each lifted point by an
//! amount that shrinks with its id, which makes the result unique for any input.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use robust::Coord;

use crate::projection::Point;

pub(super) const INF: usize = usize::MAX;

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

pub(super) fn orient(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

/// Whether `p` lies strictly inside the open segment `ab`, given it is on its line.
fn within_segment(a: Point, b: Point, p: Point) -> bool {
    let along = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
    let len = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]);
    p != a && p != b && along > 0.0 && along < len
}

pub(super) struct Triangulator<'a> {
    pts: &'a [Point],
    pub tris: Vec<[usize; 3]>,
    /// `nbr[t][i]` is the triangle across the edge opposite `tris[t][i]`.
    nbr: Vec<[usize; 3]>,
    pub alive: Vec<bool>,
    recent: Vec<usize>,
}

impl<'a> Triangulator<'a> {
    /// Starts from the counterclockwise triangle `(a, b, c)` and its three ghosts.
    pub fn new(pts: &'a [Point], a: usize, b: usize, c: usize) -> Self {
        let mut t = Self {
            pts,
            tris: Vec::new(),
            nbr: Vec::new(),
            alive: Vec::new(),
            recent: Vec::new(),
        };
        let all = [[a, b, c], [b, a, INF], [c, b, INF], [a, c, INF]];
        for tri in all {
            t.tris.push(tri);
            t.nbr.push([INF; 3]);
            t.alive.push(true);
        }
        let mut open = BTreeMap::new();
        for ti in 0..4 {
            t.link_edges(ti, &mut open);
        }
        t.recent = (0..4).collect();
        t
    }

    fn link_edges(&mut self, ti: usize, open: &mut BTreeMap<(usize, usize), (usize, usize)>) {
        for slot in 0..3 {
            let u = self.tris[ti][(slot + 1) % 3];
            let v = self.tris[ti][(slot + 2) % 3];
            let key = (u.min(v), u.max(v));
            match open.remove(&key) {
                Some((tj, sj)) => {
                    self.nbr[ti][slot] = tj;
                    self.nbr[tj][sj] = ti;
                }
                None => {
                    open.insert(key, (ti, slot));
                }
            }
        }
    }

    /// Sign of the lifted in-circle determinant, never zero.
    fn incircle(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let p = self.pts;
        let det = robust::incircle(coord(p[a]), coord(p[b]), coord(p[c]), coord(p[d]));
        if det != 0.0 {
            return det;
        }
        // cofactors of the lifted column; the smallest id has the largest perturbation
        let mut terms = [
            (a, orient(p[b], p[c], p[d])),
            (b, -orient(p[a], p[c], p[d])),
            (c, orient(p[a], p[b], p[d])),
            (d, -orient(p[a], p[b], p[c])),
        ];
        terms.sort_by_key(|t| t.0);
        terms
            .iter()
            .map(|t| t.1)
            .find(|v| *v != 0.0)
            .unwrap_or(-1.0)
    }

    fn conflicts(&self, ti: usize, p: usize) -> bool {
        let t = self.tris[ti];
        match t.iter().position(|&v| v == INF) {
            Some(s) => {
                let u = self.pts[t[(s + 1) % 3]];
                let v = self.pts[t[(s + 2) % 3]];
                let q = self.pts[p];
                let o = orient(u, v, q);
                o > 0.0 || (o == 0.0 && within_segment(u, v, q))
            }
            None => self.incircle(t[0], t[1], t[2], p) > 0.0,
        }
    }

    fn locate(&self, p: usize) -> usize {
        if let Some(&t) = self
            .recent
            .iter()
            .find(|&&t| self.alive[t] && self.conflicts(t, p))
        {
            return t;
        }
        (0..self.tris.len())
            .find(|&t| self.alive[t] && self.conflicts(t, p))
            .expect("a point outside the vertex set conflicts with some triangle")
    }

    pub fn insert(&mut self, p: usize) {
        let start = self.locate(p);
        let mut cavity = vec![start];
        let mut in_cavity = BTreeMap::new();
        in_cavity.insert(start, ());
        let mut k = 0;
        while k < cavity.len() {
            let t = cavity[k];
            for &n in &self.nbr[t] {
                if !in_cavity.contains_key(&n) && self.conflicts(n, p) {
                    in_cavity.insert(n, ());
                    cavity.push(n);
                }
            }
            k += 1;
        }

        let mut created = Vec::new();
        let mut open = BTreeMap::new();
        for &t in &cavity {
            for slot in 0..3 {
                let outside = self.nbr[t][slot];
                if in_cavity.contains_key(&outside) {
                    continue;
                }
                let mut tri = self.tris[t];
                tri[slot] = p;
                let id = self.tris.len();
                self.tris.push(tri);
                self.alive.push(true);
                let mut links = [INF; 3];
                links[slot] = outside;
                self.nbr.push(links);
                // point the outer triangle back at the replacement
                let back = self.nbr[outside]
                    .iter()
                    .position(|&x| x == t)
                    .expect("neighbour links are symmetric");
                self.nbr[outside][back] = id;
                for s in 0..3 {
                    if s == slot {
                        continue;
                    }
                    // the edge opposite slot s joins p and the remaining vertex
                    let other = tri[3 - slot - s];
                    match open.remove(&other) {
                        Some((tj, sj)) => {
                            self.nbr[id][s] = tj;
                            self.nbr[tj][sj] = id;
                        }
                        None => {
                            open.insert(other, (id, s));
                        }
                    }
                }
                created.push(id);
            }
        }
        debug_assert!(open.is_empty(), "cavity boundary must be a closed loop");
        for &t in &cavity {
            self.alive[t] = false;
        }
        self.recent = created;
    }

    pub fn live(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.tris
            .iter()
            .zip(&self.alive)
            .filter(|(_, a)| **a)
            .map(|(t, _)| *t)
    }
}
