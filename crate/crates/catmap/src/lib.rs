//! Command-line tool and HTTP service for categorical data maps: CSV loading,
//! JSON and SVG artifacts, metric tables and matrix exports.

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod io;
pub mod service;
pub mod wire;

use catmap_core::dataset::SubsetTable;
use catmap_core::distance::DistanceMeasure;
use catmap_core::glyph::{GlyphDesign, GlyphSpec};
use catmap_core::pipeline::{build_map, glyph_radii, DataMap, PipelineConfig};
use catmap_core::projection::Method;

pub use error::{Error, Result};

/// The three rows of the paper-style comparison table.
pub const DEFAULT_QUALITY_CONFIGS: &str = "mds:overlap,mds:jaccard,mca";

/// Everything that changes a map, and nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MapOptions {
    pub measure: DistanceMeasure,
    pub method: Method,
    pub overlap_reduction: bool,
    pub seed: u64,
    pub glyph: GlyphDesign,
}

impl Default for MapOptions {
    fn default() -> Self {
        let d = PipelineConfig::default();
        Self {
            measure: d.measure,
            method: d.method,
            overlap_reduction: d.overlap_reduction,
            seed: d.seed,
            glyph: d.glyph.design,
        }
    }
}

impl MapOptions {
    pub fn glyph_spec(&self) -> GlyphSpec {
        GlyphSpec {
            design: self.glyph,
            ..GlyphSpec::default()
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            measure: self.measure,
            method: self.method,
            overlap_reduction: self.overlap_reduction,
            seed: self.seed,
            glyph: self.glyph_spec(),
            ..PipelineConfig::default()
        }
    }
}

/// A built map plus the glyph radii its layout was separated with.
#[derive(Debug, Clone)]
pub struct MapArtifacts {
    pub map: DataMap,
    pub radii: Vec<f64>,
    pub viewport: catmap_core::projection::Viewport,
}

impl MapArtifacts {
    pub fn build(subsets: &SubsetTable, options: &MapOptions) -> Result<Self> {
        let cfg = options.pipeline();
        Ok(Self {
            map: build_map(subsets, &cfg)?,
            radii: glyph_radii(subsets, &cfg.glyph)?,
            viewport: cfg.viewport,
        })
    }

    pub fn layout_json(&self, subsets: &SubsetTable) -> wire::LayoutJson {
        wire::LayoutJson::new(&self.map.layout, subsets, &self.radii, self.viewport)
    }
}
