//! 2-D layouts of subsets: MDS and MCA projection, overlap removal, viewport fitting.

mod mca;
mod mds;
mod overlap;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use mca::mca_project;
pub use mds::{mds_project, raw_stress, MdsConfig, MdsInit};
pub use overlap::{reduce_overlap, reduce_overlap_with, OverlapConfig, OVERLAP_TOLERANCE};

use crate::distance::DistanceMeasure;
use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mds,
    Mca,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mds => "mds",
            Method::Mca => "mca",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mds" => Ok(Method::Mds),
            "mca" => Ok(Method::Mca),
            _ => Err(Error::InvalidParameter(alloc::format!(
                "unknown method `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub positions: Vec<Point>,
    pub method: Method,
    pub measure: Option<DistanceMeasure>,
    /// Final normalized stress, MDS only.
    pub stress: Option<f64>,
    /// Normalized stress before the first and after every accepted SMACOF step.
    pub stress_history: Vec<f64>,
    pub iterations_run: usize,
    pub overlap_reduced: bool,
    /// Positions before overlap reduction; `None` until it has run.
    pub pre_overlap_positions: Option<Vec<Point>>,
    /// Set when MCA found fewer than two informative axes.
    pub degenerate: bool,
}

impl Layout {
    pub fn from_positions(positions: Vec<Point>, method: Method) -> Self {
        Self {
            positions,
            method,
            measure: None,
            stress: None,
            stress_history: Vec::new(),
            iterations_run: 0,
            overlap_reduced: false,
            pre_overlap_positions: None,
            degenerate: false,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Positions as they were before overlap reduction (or the current ones).
    pub fn original_positions(&self) -> &[Point] {
        self.pre_overlap_positions
            .as_deref()
            .unwrap_or(&self.positions)
    }

    /// Axis-aligned bounding box `(min, max)`; `None` for an empty layout.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        bounding_box(&self.positions)
    }
}

pub(crate) fn bounding_box(points: &[Point]) -> Option<(Point, Point)> {
    let first = *points.first()?;
    Some(points.iter().fold((first, first), |(lo, hi), p| {
        (
            [lo[0].min(p[0]), lo[1].min(p[1])],
            [hi[0].max(p[0]), hi[1].max(p[1])],
        )
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub width: f64,
    pub height: f64,
    pub padding: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Self {
            width: 800.0,
            height: 800.0,
            padding: 40.0,
        }
    }
}

/// Uniformly scales and translates the layout into the padded viewport, keeping
/// the aspect ratio and centering the bounding box. A layout without extent lands
/// on the viewport center.
pub fn normalize_layout(layout: &Layout, viewport: Viewport) -> Result<Layout> {
    let (lo, hi) = layout.bounding_box().ok_or(Error::TooFewPoints {
        needed: 1,
        found: 0,
    })?;
    let inner_w = viewport.width - 2.0 * viewport.padding;
    let inner_h = viewport.height - 2.0 * viewport.padding;
    if !(inner_w >= 0.0 && inner_h >= 0.0) {
        return Err(Error::InvalidParameter(
            "padding leaves no room inside the viewport".into(),
        ));
    }
    let dx = hi[0] - lo[0];
    let dy = hi[1] - lo[1];
    let scale = match (dx > 0.0, dy > 0.0) {
        (true, true) => (inner_w / dx).min(inner_h / dy),
        (true, false) => inner_w / dx,
        (false, true) => inner_h / dy,
        (false, false) => 0.0,
    };
    let src_center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let dst_center = [viewport.width / 2.0, viewport.height / 2.0];
    let map = |p: &Point| {
        [
            dst_center[0] + (p[0] - src_center[0]) * scale,
            dst_center[1] + (p[1] - src_center[1]) * scale,
        ]
    };
    let mut out = layout.clone();
    out.positions = layout.positions.iter().map(map).collect();
    out.pre_overlap_positions = layout
        .pre_overlap_positions
        .as_ref()
        .map(|ps| ps.iter().map(map).collect());
    Ok(out)
}
