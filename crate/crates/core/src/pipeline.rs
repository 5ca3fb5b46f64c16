//! The full map pipeline: distances, projection, viewport fitting, overlap
//! removal, tessellation and fracturedness.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dataset::{deduplicate, CategoricalTable, SubsetTable};
use crate::distance::{build_matrix, DistanceMeasure};
use crate::error::{Error, Result};
use crate::fracturedness::{fracturedness_report, rank_attributes, FracturednessReport};
use crate::geometry::{delaunay, single_cell, voronoi, DelaunayGraph, Rect, VoronoiPartition};
use crate::glyph::{collision_radius, GlyphSpec};
use crate::projection::{
    mca_project, mds_project, normalize_layout, reduce_overlap_with, Layout, MdsConfig, Method, OverlapConfig, Point,
    Viewport,
};
use crate::quality::{quality_report, QualityReport};

/// Share of the enclosing box added around the sites before clipping cells.
pub const BOUNDS_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub measure: DistanceMeasure,
    pub method: Method,
    pub overlap_reduction: bool,
    pub seed: u64,
    pub glyph: GlyphSpec,
    pub viewport: Viewport,
    /// SMACOF settings; its seed is replaced by `seed`.
    pub mds: MdsConfig,
    pub overlap: OverlapConfig,
}

impl Default for PipelineConfig {
    /// MDS on the overlap coefficient with overlap reduction.
    fn default() -> Self {
        Self {
            measure: DistanceMeasure::Overlap,
            method: Method::Mds,
            overlap_reduction: true,
            seed: 0,
            glyph: GlyphSpec::default(),
            viewport: Viewport::default(),
            mds: MdsConfig::default(),
            overlap: OverlapConfig::default(),
        }
    }
}

/// Collision radius of every subset glyph.
pub fn glyph_radii(subsets: &SubsetTable, spec: &GlyphSpec) -> Result<Vec<f64>> {
    let max = subsets.max_relative_frequency();
    (0..subsets.len())
        .map(|i| collision_radius(subsets.relative_frequency(i), max, spec))
        .collect()
}

/// Projection in its own units, before viewport fitting.
pub fn raw_projection(subsets: &SubsetTable, method: Method, measure: DistanceMeasure, mds: &MdsConfig) -> Result<Layout> {
    match method {
        Method::Mds => mds_project(&build_matrix(subsets, measure)?, mds),
        Method::Mca => mca_project(subsets),
    }
}

/// Viewport-fitted layout, with glyph overlap removed when configured.
pub fn project(subsets: &SubsetTable, cfg: &PipelineConfig) -> Result<Layout> {
    let mds = MdsConfig {
        seed: cfg.seed,
        ..cfg.mds
    };
    let raw = raw_projection(subsets, cfg.method, cfg.measure, &mds)?;
    let fitted = normalize_layout(&raw, cfg.viewport)?;
    if !cfg.overlap_reduction {
        return Ok(fitted);
    }
    reduce_overlap_with(&fitted, &glyph_radii(subsets, &cfg.glyph)?, &cfg.overlap)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tessellation {
    /// `None` for a single site.
    pub graph: Option<DelaunayGraph>,
    pub partition: VoronoiPartition,
}

impl Tessellation {
    pub fn edges(&self) -> &[(usize, usize)] {
        self.graph.as_ref().map_or(&[], |g| &g.edges)
    }
}

/// Clipping rectangle: the viewport together with all sites, grown by 5%.
pub fn tessellation_bounds(positions: &[Point], viewport: Viewport) -> Option<Rect> {
    let base = Rect::new(0.0, 0.0, viewport.width, viewport.height);
    Rect::enclosing(positions, Some(base), BOUNDS_MARGIN)
}

pub fn tessellate(positions: &[Point], viewport: Viewport) -> Result<Tessellation> {
    let bounds = tessellation_bounds(positions, viewport).ok_or(Error::TooFewPoints { needed: 1, found: 0 })?;
    if positions.len() == 1 {
        return Ok(Tessellation {
            graph: None,
            partition: single_cell(positions[0], bounds)?,
        });
    }
    let graph = delaunay(positions)?;
    let partition = voronoi(&graph, bounds)?;
    Ok(Tessellation {
        graph: Some(graph),
        partition,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataMap {
    pub layout: Layout,
    pub tessellation: Tessellation,
    pub fracturedness: FracturednessReport,
    /// Attributes by ascending edge fracturedness.
    pub ranking: Vec<usize>,
}

/// Runs every stage on one subset table. Tessellation uses the final positions,
/// i.e. after overlap reduction when it ran.
pub fn build_map(subsets: &SubsetTable, cfg: &PipelineConfig) -> Result<DataMap> {
    let layout = project(subsets, cfg)?;
    let tessellation = tessellate(&layout.positions, cfg.viewport)?;
    let fracturedness = fracturedness_report(tessellation.edges(), subsets)?;
    let ranking = rank_attributes(&fracturedness);
    Ok(DataMap {
        layout,
        tessellation,
        fracturedness,
        ranking,
    })
}

/// One row of a projection comparison: a method and, optionally, its measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QualityConfig {
    pub method: Method,
    /// Distance for MDS and the grounding distance for the metrics.
    pub measure: Option<DistanceMeasure>,
}

impl fmt::Display for QualityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.measure {
            Some(m) => write!(f, "{}:{}", self.method, m),
            None => write!(f, "{}", self.method),
        }
    }
}

impl FromStr for QualityConfig {
    type Err = Error;

    /// `mds:overlap`, `mca`, `mca:jaccard`; MDS defaults to the overlap coefficient.
    fn from_str(s: &str) -> Result<Self> {
        let (method, measure) = match s.split_once(':') {
            Some((a, b)) => (a.trim().parse::<Method>()?, Some(b.trim().parse::<DistanceMeasure>()?)),
            None => (s.trim().parse::<Method>()?, None),
        };
        let measure = match (method, measure) {
            (Method::Mds, None) => Some(DistanceMeasure::Overlap),
            (_, m) => m,
        };
        Ok(Self { method, measure })
    }
}

/// Quality metrics for several projections of one table.
///
/// Metrics use the projection before viewport fitting and overlap reduction.
/// An MCA row without its own measure is grounded in the measure of the first
/// MDS row, or the overlap coefficient when there is none.
pub fn compare_pipelines(
    table: &CategoricalTable,
    configs: &[QualityConfig],
    k: usize,
    seed: u64,
) -> Result<Vec<QualityReport>> {
    if configs.is_empty() {
        return Err(Error::NoConfigs);
    }
    let subsets = deduplicate(table);
    let paired = configs
        .iter()
        .find(|c| c.method == Method::Mds)
        .and_then(|c| c.measure)
        .unwrap_or(DistanceMeasure::Overlap);
    let mds = MdsConfig {
        seed,
        ..MdsConfig::default()
    };
    configs
        .iter()
        .map(|c| {
            let measure = c.measure.unwrap_or(paired);
            let high = build_matrix(&subsets, measure)?;
            let layout = raw_projection(&subsets, c.method, measure, &mds)?;
            quality_report(&high, &layout.positions, &subsets, c.method, k)
        })
        .collect()
}
