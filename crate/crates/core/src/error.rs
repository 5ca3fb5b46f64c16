use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("table has no data rows")]
    EmptyTable,
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("attribute `{0}` looks numeric; declare numeric columns as categorical to use them")]
    NumericColumn(String),
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("unknown category index {category} for attribute {attribute}")]
    UnknownCategory { attribute: usize, category: usize },
    #[error("item has {found} values but the schema has {expected} attributes")]
    SchemaMismatch { expected: usize, found: usize },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("need at least {needed} subsets, found {found}")]
    TooFewSubsets { needed: usize, found: usize },
    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("all pairwise distances are zero")]
    DegenerateDistances,
    #[error("distance vector is constant; rank correlation is undefined")]
    ConstantDistances,
    #[error("neighborhood size k={k} must be smaller than n={n}")]
    NeighborhoodTooLarge { k: usize, n: usize },
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("labeling covers {found} vertices, graph has {expected}")]
    LabelingMismatch { expected: usize, found: usize },
    #[error("bounds do not contain site {0}")]
    SiteOutsideBounds(usize),
    #[error("subset {0} has zero frequency")]
    ZeroFrequency(usize),
    #[error("selection is empty")]
    EmptySelection,
    #[error("unknown subset id {0}")]
    UnknownSubset(usize),
    #[error("no pipeline configurations given")]
    NoConfigs,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI and the HTTP service.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyTable => "empty-table",
            Error::RaggedRow { .. } => "ragged-row",
            Error::NumericColumn(_) => "numeric-column",
            Error::DuplicateAttribute(_) => "duplicate-attribute",
            Error::UnknownCategory { .. } => "unknown-category",
            Error::SchemaMismatch { .. } => "schema-mismatch",
            Error::UnknownAttribute(_) => "unknown-attribute",
            Error::TooFewSubsets { .. } => "too-few-subsets",
            Error::TooFewPoints { .. } => "too-few-points",
            Error::DegenerateDistances => "degenerate-distances",
            Error::ConstantDistances => "constant-distances",
            Error::NeighborhoodTooLarge { .. } => "k-too-large",
            Error::EmptyEdgeSet => "empty-edge-set",
            Error::EmptyGraph => "empty-graph",
            Error::LabelingMismatch { .. } => "labeling-mismatch",
            Error::SiteOutsideBounds(_) => "site-outside-bounds",
            Error::ZeroFrequency(_) => "zero-frequency",
            Error::EmptySelection => "empty-selection",
            Error::UnknownSubset(_) => "unknown-subset",
            Error::NoConfigs => "no-configs",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}
