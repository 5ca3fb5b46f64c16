//! `catmap` command line.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use catmap_core::dataset::{deduplicate, SubsetTable};
use catmap_core::distance::{build_matrix, DistanceMeasure};
use catmap_core::glyph::{GlyphDesign, Palette};
use catmap_core::pipeline::{compare_pipelines, tessellate, QualityConfig};
use catmap_core::projection::Method;
use catmap_core::render::{render_map, MapStyle};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::ServiceConfig;
use crate::error::{Error, Result};
use crate::export::{matrix_binary, matrix_csv, quality_csv, quality_markdown};
use crate::io::{load_csv, read_table, CsvOptions};
use crate::wire::{LayoutJson, PartitionJson, ReportJson};
use crate::{MapArtifacts, MapOptions, DEFAULT_QUALITY_CONFIGS};

#[derive(Debug, Parser)]
#[command(name = "catmap", version, about = "Similarity maps of categorical data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CSV to layout JSON.
    Project(Common),
    /// Layout JSON to Delaunay edges and clipped Voronoi cells.
    Tessellate(Common),
    /// CSV to per-attribute fracturedness JSON.
    Fracturedness(Common),
    /// CSV to a projection quality table.
    Metrics(MetricsArgs),
    /// CSV to an SVG map.
    Render(Common),
    /// CSV to its dissimilarity matrix.
    Matrix(MatrixArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input file, `-` for stdin.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// overlap, jaccard, dice, manhattan_onehot or euclidean_onehot.
    #[arg(long, default_value = "overlap")]
    pub distance: DistanceMeasure,
    /// mds or mca.
    #[arg(long, default_value = "mds")]
    pub method: Method,
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub overlap_reduction: bool,
    /// area_square, bar_square, area_circle or arc_circle.
    #[arg(long, default_value = "area_square")]
    pub glyph: GlyphDesign,
    /// Attribute colouring the background; the least fractured one by default.
    #[arg(long)]
    pub attribute: Option<String>,
    /// Attribute whose category borders are outlined.
    #[arg(long)]
    pub secondary_attribute: Option<String>,
    /// Neighbourhood size for the quality metrics.
    #[arg(long, default_value_t = 7)]
    pub k: usize,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Cell value marking a missing category.
    #[arg(long, default_value = "")]
    pub missing: String,
    /// Accept all-numeric columns as categorical.
    #[arg(long)]
    pub allow_numeric: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated `method[:distance]` list.
    #[arg(long, default_value = DEFAULT_QUALITY_CONFIGS)]
    pub configs: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
    pub format: MatrixFormat,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub common: Common,
    /// `key = value` file with host, port, data_dir and default_k.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub host: Option<String>,
    #[arg(long)]
    pub port: Option<u16>,
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
}

impl Common {
    fn map_options(&self) -> MapOptions {
        MapOptions {
            measure: self.distance,
            method: self.method,
            overlap_reduction: self.overlap_reduction,
            seed: self.seed,
            glyph: self.glyph,
        }
    }

    fn csv_options(&self) -> Result<CsvOptions> {
        let delimiter = u8::try_from(self.delimiter)
            .ok()
            .filter(u8::is_ascii)
            .ok_or_else(|| catmap_core::Error::InvalidParameter("delimiter must be ASCII".into()))?;
        Ok(CsvOptions {
            delimiter,
            missing_token: self.missing.clone(),
            allow_numeric: self.allow_numeric,
        })
    }

    fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| catmap_core::Error::InvalidParameter("--input is required".into()).into())
    }

    fn read_input(&self) -> Result<Vec<u8>> {
        let path = self.input()?;
        if path == Path::new("-") {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(|e| Error::io("<stdin>", e))?;
            return Ok(buf);
        }
        std::fs::read(path).map_err(|e| Error::io(path, e))
    }

    fn subsets(&self) -> Result<SubsetTable> {
        let options = self.csv_options()?;
        let path = self.input()?;
        let table = if path == Path::new("-") {
            read_table(self.read_input()?.as_slice(), &options)?
        } else {
            load_csv(path, &options)?
        };
        Ok(deduplicate(&table))
    }

    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.output {
            Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p, e)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).and_then(|()| out.flush()).map_err(|e| Error::io("<stdout>", e))
            }
        }
    }
}

fn json(value: &impl serde::Serialize) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn attribute_index(subsets: &SubsetTable, name: &str) -> Result<usize> {
    subsets
        .schema()
        .find_attribute(name)
        .ok_or_else(|| catmap_core::Error::UnknownAttribute(name.to_owned()).into())
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Project(c) => {
            let subsets = c.subsets()?;
            let m = MapArtifacts::build(&subsets, &c.map_options())?;
            c.write(&json(&m.layout_json(&subsets))?)
        }
        Command::Tessellate(c) => {
            let layout: LayoutJson = serde_json::from_slice(&c.read_input()?)?;
            let t = tessellate(&layout.positions()?, layout.viewport())?;
            c.write(&json(&PartitionJson::from(&t))?)
        }
        Command::Fracturedness(c) => {
            let subsets = c.subsets()?;
            let m = MapArtifacts::build(&subsets, &c.map_options())?;
            c.write(&json(&ReportJson::from_map(&m.map))?)
        }
        Command::Metrics(a) => {
            let c = &a.common;
            let configs = a
                .configs
                .split(',')
                .map(str::parse::<QualityConfig>)
                .collect::<Result<Vec<_>, _>>()?;
            let table = match c.input()? {
                p if p == Path::new("-") => read_table(c.read_input()?.as_slice(), &c.csv_options()?)?,
                p => load_csv(p, &c.csv_options()?)?,
            };
            let rows = compare_pipelines(&table, &configs, c.k, c.seed)?;
            let text = match a.format {
                TableFormat::Csv => quality_csv(&rows),
                TableFormat::Markdown => quality_markdown(&rows),
            };
            c.write(text.as_bytes())
        }
        Command::Render(c) => {
            let subsets = c.subsets()?;
            let options = c.map_options();
            let m = MapArtifacts::build(&subsets, &options)?;
            let primary = match &c.attribute {
                Some(name) => attribute_index(&subsets, name)?,
                None => m.map.ranking[0],
            };
            let secondary = c.secondary_attribute.as_deref().map(|n| attribute_index(&subsets, n)).transpose()?;
            let svg = render_map(
                &m.map.layout.positions,
                &m.map.tessellation.partition,
                &subsets,
                MapStyle {
                    primary: Some(primary),
                    secondary,
                },
                &options.glyph_spec(),
                &Palette::category10(),
            )?;
            c.write(svg.as_bytes())
        }
        Command::Matrix(a) => {
            let m = build_matrix(&a.common.subsets()?, a.common.distance)?;
            match a.format {
                MatrixFormat::Csv => a.common.write(matrix_csv(&m).as_bytes()),
                MatrixFormat::Binary => a.common.write(&matrix_binary(&m)),
            }
        }
        Command::Serve(a) => {
            let mut cfg = match &a.config {
                Some(p) => ServiceConfig::load(p)?,
                None => ServiceConfig::default(),
            };
            if let Some(h) = a.host {
                cfg.host = h;
            }
            if let Some(p) = a.port {
                cfg.port = p;
            }
            if a.data_dir.is_some() {
                cfg.data_dir = a.data_dir;
            }
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
            runtime.block_on(crate::service::serve(cfg))
        }
    }
}

/// Runs the tool and returns its exit code: 0 on success, 2 for usage errors
/// and 1 for everything else. Errors go to stderr as `error: <code>: <message>`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            eprintln!("error: usage: {}", first.strip_prefix("error: ").unwrap_or(first));
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {}", e.code(), e);
            1
        }
    }
}
