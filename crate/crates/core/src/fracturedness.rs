//! How scattered each attribute's categories are over the map.
//!
//! Both measures work on an undirected graph over the subsets (the Delaunay
//! triangulation in practice) and one category label per vertex. Values are
//! exact rationals so the per-category contributions sum to the attribute value
//! without rounding.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::dataset::SubsetTable;
use crate::error::{Error, Result};

pub type Fraction = Ratio<u64>;

/// Lossy conversion for reporting.
pub fn to_f64(r: Fraction) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One category per vertex for a single attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub attribute: usize,
    labels: Vec<usize>,
    category_count: usize,
}

impl Labeling {
    pub fn new(attribute: usize, labels: Vec<usize>, category_count: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&c| c >= category_count) {
            return Err(Error::UnknownCategory {
                attribute,
                category: bad,
            });
        }
        Ok(Self {
            attribute,
            labels,
            category_count,
        })
    }

    pub fn from_subsets(subsets: &SubsetTable, attribute: usize) -> Result<Self> {
        if attribute >= subsets.schema().attribute_count() {
            return Err(Error::UnknownAttribute(alloc::format!("#{attribute}")));
        }
        Self::new(
            attribute,
            subsets.labels(attribute),
            subsets.schema().category_count(attribute),
        )
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, vertex: usize) -> usize {
        self.labels[vertex]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn category_count(&self) -> usize {
        self.category_count
    }

    pub fn is_observed(&self, category: usize) -> bool {
        self.labels.contains(&category)
    }
}

fn check_edges(edges: &[(usize, usize)], lab: &Labeling) -> Result<()> {
    match edges.iter().find(|(i, j)| *i >= lab.len() || *j >= lab.len()) {
        Some(&(i, j)) => Err(Error::LabelingMismatch {
            expected: i.max(j) + 1,
            found: lab.len(),
        }),
        None => Ok(()),
    }
}

/// Share of edges whose endpoints carry different categories.
pub fn edge_fracturedness(edges: &[(usize, usize)], lab: &Labeling) -> Result<Fraction> {
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    check_edges(edges, lab)?;
    let cut = edges
        .iter()
        .filter(|(i, j)| lab.label(*i) != lab.label(*j))
        .count();
    Ok(Ratio::new(cut as u64, edges.len() as u64))
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected components of every category's induced subgraph, indexed by category.
/// Unobserved categories have zero components.
pub fn all_category_components(edges: &[(usize, usize)], lab: &Labeling) -> Result<Vec<u64>> {
    check_edges(edges, lab)?;
    let mut sets = DisjointSets::new(lab.len());
    for &(i, j) in edges {
        if lab.label(i) == lab.label(j) {
            sets.union(i, j);
        }
    }
    let mut counts = vec![0u64; lab.category_count()];
    for v in 0..lab.len() {
        if sets.find(v) == v {
            counts[lab.label(v)] += 1;
        }
    }
    Ok(counts)
}

/// Components of the subgraph induced by the vertices labeled `category`.
pub fn category_components(edges: &[(usize, usize)], lab: &Labeling, category: usize) -> Result<u64> {
    if category >= lab.category_count() {
        return Err(Error::UnknownCategory {
            attribute: lab.attribute,
            category,
        });
    }
    Ok(all_category_components(edges, lab)?[category])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFracturedness {
    pub f_comp: Fraction,
    /// Total component count over all observed categories.
    pub omega: u64,
    /// `(components, contribution)` per category; unobserved ones are `(0, 0)`.
    pub per_category: Vec<(u64, Fraction)>,
}

/// Component-based fracturedness `1 - |C| / omega` and its split over categories
/// `(omega_c - 1) / omega`. Only observed categories count towards `|C|`.
pub fn component_fracturedness(edges: &[(usize, usize)], lab: &Labeling) -> Result<ComponentFracturedness> {
    let counts = all_category_components(edges, lab)?;
    let omega: u64 = counts.iter().sum();
    if omega == 0 {
        return Err(Error::EmptyGraph);
    }
    let observed = counts.iter().filter(|&&c| c > 0).count() as u64;
    let per_category = counts
        .iter()
        .map(|&c| (c, Ratio::new(c.saturating_sub(1), omega)))
        .collect();
    Ok(ComponentFracturedness {
        f_comp: Ratio::new(omega - observed, omega),
        omega,
        per_category,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryFracturedness {
    pub category: usize,
    pub name: String,
    pub components: u64,
    pub f_comp: Fraction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeFracturedness {
    pub attribute: usize,
    pub name: String,
    pub f_edge: Fraction,
    pub f_comp: Fraction,
    pub omega: u64,
    /// In schema order.
    pub categories: Vec<CategoryFracturedness>,
}

impl AttributeFracturedness {
    /// Category indices by ascending contribution, ties in schema order.
    pub fn category_ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.categories.len()).collect();
        order.sort_by(|&a, &b| self.categories[a].f_comp.cmp(&self.categories[b].f_comp).then(a.cmp(&b)));
        order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracturednessReport {
    /// In schema order.
    pub attributes: Vec<AttributeFracturedness>,
}

impl FracturednessReport {
    pub fn attribute(&self, index: usize) -> &AttributeFracturedness {
        &self.attributes[index]
    }
}

/// Both measures for every attribute of the subset table over one graph.
pub fn fracturedness_report(edges: &[(usize, usize)], subsets: &SubsetTable) -> Result<FracturednessReport> {
    let schema = subsets.schema();
    let attributes = (0..schema.attribute_count())
        .map(|a| {
            let lab = Labeling::from_subsets(subsets, a)?;
            let f_edge = edge_fracturedness(edges, &lab)?;
            let comp = component_fracturedness(edges, &lab)?;
            let attr = schema.attribute(a);
            let categories = comp
                .per_category
                .iter()
                .enumerate()
                .map(|(c, &(components, f_comp))| CategoryFracturedness {
                    category: c,
                    name: attr.categories[c].clone(),
                    components,
                    f_comp,
                })
                .collect();
            Ok(AttributeFracturedness {
                attribute: a,
                name: attr.name.clone(),
                f_edge,
                f_comp: comp.f_comp,
                omega: comp.omega,
                categories,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FracturednessReport { attributes })
}

/// Attribute indices by ascending edge fracturedness, ties in schema order.
pub fn rank_attributes(report: &FracturednessReport) -> Vec<usize> {
    let mut order: Vec<usize> = (0..report.attributes.len()).collect();
    order.sort_by(|&a, &b| {
        report.attributes[a]
            .f_edge
            .cmp(&report.attributes[b].f_edge)
            .then(a.cmp(&b))
    });
    order
}
