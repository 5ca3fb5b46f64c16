//! JSON shapes shared by the CLI and the HTTP service.

use catmap_core::dataset::SubsetTable;
use catmap_core::distance::DistanceMeasure;
use catmap_core::fracturedness::{to_f64, FracturednessReport};
use catmap_core::geometry::Rect;
use catmap_core::pipeline::{DataMap, Tessellation};
use catmap_core::projection::{Layout, Method, Point, Viewport};
use catmap_core::quality::QualityReport;
use catmap_core::selection::SelectionResult;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeJson {
    pub name: String,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemaJson {
    pub attributes: Vec<AttributeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetJson {
    pub id: usize,
    pub values: Vec<usize>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetTableJson {
    pub schema: SchemaJson,
    pub subsets: Vec<SubsetJson>,
    pub total: usize,
}

impl From<&SubsetTable> for SubsetTableJson {
    fn from(t: &SubsetTable) -> Self {
        Self {
            schema: SchemaJson {
                attributes: t
                    .schema()
                    .attributes()
                    .iter()
                    .map(|a| AttributeJson {
                        name: a.name.clone(),
                        categories: a.categories.clone(),
                    })
                    .collect(),
            },
            subsets: t
                .subsets()
                .iter()
                .enumerate()
                .map(|(id, s)| SubsetJson {
                    id,
                    values: s.values.clone(),
                    count: s.count,
                })
                .collect(),
            total: t.total(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewportJson {
    pub width: f64,
    pub height: f64,
    pub padding: f64,
}

impl From<Viewport> for ViewportJson {
    fn from(v: Viewport) -> Self {
        Self {
            width: v.width,
            height: v.height,
            padding: v.padding,
        }
    }
}

impl From<ViewportJson> for Viewport {
    fn from(v: ViewportJson) -> Self {
        Viewport {
            width: v.width,
            height: v.height,
            padding: v.padding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Collision radius of the glyph.
    pub r: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionJson {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutJson {
    pub method: String,
    pub measure: Option<String>,
    pub stress: Option<f64>,
    #[serde(default)]
    pub iterations: usize,
    #[serde(default)]
    pub overlap_reduced: bool,
    /// Viewport the positions were fitted into; the default one when absent.
    #[serde(default)]
    pub viewport: Option<ViewportJson>,
    pub points: Vec<PointJson>,
    #[serde(default)]
    pub pre_overlap: Option<Vec<PositionJson>>,
}

impl LayoutJson {
    pub fn new(layout: &Layout, subsets: &SubsetTable, radii: &[f64], viewport: Viewport) -> Self {
        Self {
            method: layout.method.to_string(),
            measure: layout.measure.map(|m| m.to_string()),
            stress: layout.stress,
            iterations: layout.iterations_run,
            overlap_reduced: layout.overlap_reduced,
            viewport: Some(viewport.into()),
            points: layout
                .positions
                .iter()
                .enumerate()
                .map(|(id, p)| PointJson {
                    id,
                    x: p[0],
                    y: p[1],
                    r: radii[id],
                    count: subsets.subset(id).count,
                })
                .collect(),
            pre_overlap: layout.pre_overlap_positions.as_ref().map(|ps| {
                ps.iter()
                    .enumerate()
                    .map(|(id, p)| PositionJson { id, x: p[0], y: p[1] })
                    .collect()
            }),
        }
    }

    /// Positions indexed by point id.
    pub fn positions(&self) -> Result<Vec<Point>> {
        let mut out = vec![None; self.points.len()];
        for p in &self.points {
            match out.get_mut(p.id) {
                Some(slot @ None) => *slot = Some([p.x, p.y]),
                _ => {
                    return Err(catmap_core::Error::InvalidParameter(format!(
                        "point ids must be 0..{} without repeats",
                        self.points.len()
                    ))
                    .into())
                }
            }
        }
        Ok(out.into_iter().map(|p| p.expect("every slot filled")).collect())
    }

    pub fn viewport(&self) -> Viewport {
        self.viewport.map_or_else(Viewport::default, Into::into)
    }

    pub fn parsed_method(&self) -> Result<Method> {
        Ok(self.method.parse()?)
    }

    pub fn parsed_measure(&self) -> Result<Option<DistanceMeasure>> {
        Ok(self.measure.as_deref().map(str::parse).transpose()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectJson {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl From<Rect> for RectJson {
    fn from(r: Rect) -> Self {
        Self {
            x: r.x,
            y: r.y,
            w: r.w,
            h: r.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub id: usize,
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub bounds: RectJson,
    pub cells: Vec<CellJson>,
    pub edges: Vec<[usize; 2]>,
    pub hull: Vec<usize>,
    /// `[kept, moved]` pairs of coincident sites that were nudged apart.
    pub duplicates: Vec<[usize; 2]>,
}

impl From<&Tessellation> for PartitionJson {
    fn from(t: &Tessellation) -> Self {
        let graph = t.graph.as_ref();
        Self {
            bounds: t.partition.bounds.into(),
            cells: t
                .partition
                .cells
                .iter()
                .map(|c| CellJson {
                    id: c.site,
                    polygon: c.polygon.clone(),
                })
                .collect(),
            edges: t.edges().iter().map(|&(i, j)| [i, j]).collect(),
            hull: graph.map_or_else(|| vec![0], |g| g.hull.clone()),
            duplicates: graph.map_or_else(Vec::new, |g| g.duplicates.iter().map(|&(a, b)| [a, b]).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CategoryReportJson {
    pub name: String,
    pub f_comp: f64,
    /// Exact value as a reduced fraction.
    pub f_comp_exact: String,
    pub components: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AttributeReportJson {
    pub name: String,
    pub f_edge: f64,
    pub f_edge_exact: String,
    pub f_comp: f64,
    pub f_comp_exact: String,
    pub omega: u64,
    pub categories: Vec<CategoryReportJson>,
    /// Category names by ascending component fracturedness.
    pub category_ranking: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportJson {
    pub attributes: Vec<AttributeReportJson>,
    /// Attribute names by ascending edge fracturedness.
    pub ranking_edge: Vec<String>,
}

impl ReportJson {
    pub fn new(report: &FracturednessReport, ranking: &[usize]) -> Self {
        let attributes = report
            .attributes
            .iter()
            .map(|a| AttributeReportJson {
                name: a.name.clone(),
                f_edge: to_f64(a.f_edge),
                f_edge_exact: a.f_edge.to_string(),
                f_comp: to_f64(a.f_comp),
                f_comp_exact: a.f_comp.to_string(),
                omega: a.omega,
                categories: a
                    .categories
                    .iter()
                    .map(|c| CategoryReportJson {
                        name: c.name.clone(),
                        f_comp: to_f64(c.f_comp),
                        f_comp_exact: c.f_comp.to_string(),
                        components: c.components,
                    })
                    .collect(),
                category_ranking: a
                    .category_ranking()
                    .into_iter()
                    .map(|i| a.categories[i].name.clone())
                    .collect(),
            })
            .collect();
        Self {
            attributes,
            ranking_edge: ranking.iter().map(|&i| report.attribute(i).name.clone()).collect(),
        }
    }

    pub fn from_map(map: &DataMap) -> Self {
        Self::new(&map.fracturedness, &map.ranking)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QualityRowJson {
    pub method: String,
    pub measure: String,
    pub k: usize,
    pub tw: f64,
    pub ct: f64,
    pub sc: f64,
    pub ns: f64,
    pub nh_mean: f64,
    pub nh_median: f64,
    /// Neighborhood hit per attribute, in schema order.
    pub nh: Vec<AttributeHitJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeHitJson {
    pub attribute: String,
    pub hit: f64,
}

impl QualityRowJson {
    pub fn new(r: &QualityReport, subsets: &SubsetTable) -> Self {
        Self {
            method: r.method.to_string(),
            measure: r.measure.to_string(),
            k: r.k,
            tw: r.tw,
            ct: r.ct,
            sc: r.sc,
            ns: r.ns,
            nh_mean: r.nh_mean,
            nh_median: r.nh_median,
            nh: r
                .nh_per_attribute
                .iter()
                .enumerate()
                .map(|(a, &hit)| AttributeHitJson {
                    attribute: subsets.schema().attribute(a).name.clone(),
                    hit,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRequest {
    pub ids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonJson {
    pub attribute: String,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionJson {
    pub selected: Vec<usize>,
    /// In attribute display order.
    pub common: Vec<CommonJson>,
    pub distinct: Vec<String>,
    pub matching: Vec<usize>,
}

impl SelectionJson {
    pub fn new(r: &SelectionResult, subsets: &SubsetTable) -> Self {
        let schema = subsets.schema();
        Self {
            selected: r.selected.clone(),
            common: r
                .common
                .iter()
                .map(|&(a, c)| CommonJson {
                    attribute: schema.attribute(a).name.clone(),
                    category: schema.attribute(a).categories[c].clone(),
                })
                .collect(),
            distinct: r.distinct.iter().map(|&a| schema.attribute(a).name.clone()).collect(),
            matching: r.matching.clone(),
        }
    }
}
