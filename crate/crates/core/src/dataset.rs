//! Categorical tables, their schema, and aggregation into unique subsets.
//!
//! Every category gets a qualified descriptor `attribute=category` that is unique
//! across the whole schema. Descriptor ids are dense: the categories of the first
//! attribute come first, then those of the second, and so on, so the one-hot
//! dimension of a descriptor equals its id.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Category name used for cells equal to the configured missing-value token.
pub const MISSING_CATEGORY: &str = "<missing>";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
    offsets: Vec<usize>,
}

impl AttributeSchema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        for (i, a) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::DuplicateAttribute(a.name.clone()));
            }
            if a.categories.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "attribute `{}` has no categories",
                    a.name
                )));
            }
        }
        let mut offsets = Vec::with_capacity(attributes.len() + 1);
        let mut acc = 0;
        for a in &attributes {
            offsets.push(acc);
            acc += a.categories.len();
        }
        offsets.push(acc);
        Ok(Self {
            attributes,
            offsets,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn category_count(&self, attribute: usize) -> usize {
        self.attributes[attribute].categories.len()
    }

    /// Length of the one-hot encoding: the total number of categories.
    pub fn dimension(&self) -> usize {
        self.offsets[self.attributes.len()]
    }

    pub fn find_attribute(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn find_category(&self, attribute: usize, name: &str) -> Option<usize> {
        self.attributes[attribute]
            .categories
            .iter()
            .position(|c| c == name)
    }

    pub fn descriptor_id(&self, attribute: usize, category: usize) -> usize {
        debug_assert!(category < self.category_count(attribute));
        self.offsets[attribute] + category
    }

    /// Inverse of [`descriptor_id`](Self::descriptor_id).
    pub fn descriptor(&self, id: usize) -> Option<(usize, usize)> {
        if id >= self.dimension() {
            return None;
        }
        let attribute = self.offsets.partition_point(|&o| o <= id) - 1;
        Some((attribute, id - self.offsets[attribute]))
    }

    /// The qualified `attribute=category` descriptor for a descriptor id.
    pub fn qualified(&self, id: usize) -> Option<String> {
        let (a, c) = self.descriptor(id)?;
        let attr = &self.attributes[a];
        Some(format!("{}={}", attr.name, attr.categories[c]))
    }

    pub fn check_assignment(&self, values: &[usize]) -> Result<()> {
        if values.len() != self.attributes.len() {
            return Err(Error::SchemaMismatch {
                expected: self.attributes.len(),
                found: values.len(),
            });
        }
        for (attribute, &category) in values.iter().enumerate() {
            if category >= self.category_count(attribute) {
                return Err(Error::UnknownCategory {
                    attribute,
                    category,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TableOptions {
    /// Cells equal to this token become the attribute's missing category.
    pub missing_token: String,
    /// Accept columns whose values all parse as numbers.
    pub allow_numeric: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            missing_token: String::new(),
            allow_numeric: false,
        }
    }
}

/// Raw rows, one category index per attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalTable {
    schema: AttributeSchema,
    rows: Vec<Vec<usize>>,
}

impl CategoricalTable {
    pub fn new(schema: AttributeSchema, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        for row in &rows {
            schema.check_assignment(row)?;
        }
        Ok(Self { schema, rows })
    }

    /// Builds a table from a header and string records.
    ///
    /// Categories are numbered in order of first appearance. Each record carries
    /// the line number it came from so that ragged rows can be reported.
    pub fn from_records<H, R, F>(header: &[H], records: R, options: &TableOptions) -> Result<Self>
    where
        H: AsRef<str>,
        R: IntoIterator<Item = (usize, Vec<F>)>,
        F: AsRef<str>,
    {
        let width = header.len();
        let mut names: Vec<Vec<String>> = vec![Vec::new(); width];
        let mut lookup: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); width];
        let mut numeric = vec![true; width];
        let mut rows = Vec::new();

        for (line, record) in records {
            if record.len() != width {
                return Err(Error::RaggedRow {
                    line,
                    expected: width,
                    found: record.len(),
                });
            }
            let mut row = Vec::with_capacity(width);
            for (col, cell) in record.iter().enumerate() {
                let raw = cell.as_ref();
                let value = if raw == options.missing_token {
                    MISSING_CATEGORY
                } else {
                    if numeric[col] && raw.trim().parse::<f64>().is_err() {
                        numeric[col] = false;
                    }
                    raw
                };
                let next = names[col].len();
                let idx = *lookup[col].entry(value.to_string()).or_insert_with(|| {
                    names[col].push(value.to_string());
                    next
                });
                row.push(idx);
            }
            rows.push(row);
        }

        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        if !options.allow_numeric {
            for (col, is_numeric) in numeric.iter().enumerate() {
                // a column that is only missing values is not numeric
                let all_missing = names[col].iter().all(|n| n == MISSING_CATEGORY);
                if *is_numeric && !all_missing {
                    return Err(Error::NumericColumn(header[col].as_ref().to_string()));
                }
            }
        }

        let attributes = header
            .iter()
            .zip(names)
            .map(|(h, categories)| Attribute {
                name: h.as_ref().to_string(),
                categories,
            })
            .collect();
        Ok(Self {
            schema: AttributeSchema::new(attributes)?,
            rows,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    pub values: Vec<usize>,
    pub count: usize,
}

/// Unique category combinations with their frequencies. Subset ids are positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTable {
    schema: AttributeSchema,
    subsets: Vec<Subset>,
    total: usize,
}

impl SubsetTable {
    pub fn new(schema: AttributeSchema, subsets: Vec<Subset>) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::EmptyTable);
        }
        let mut seen = BTreeMap::new();
        for (id, s) in subsets.iter().enumerate() {
            schema.check_assignment(&s.values)?;
            if s.count == 0 {
                return Err(Error::ZeroFrequency(id));
            }
            if seen.insert(s.values.clone(), id).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "subset {id} repeats an earlier assignment"
                )));
            }
        }
        let total = subsets.iter().map(|s| s.count).sum();
        Ok(Self {
            schema,
            subsets,
            total,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    pub fn subset(&self, id: usize) -> &Subset {
        &self.subsets[id]
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Number of raw rows the subsets were aggregated from.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn relative_frequency(&self, id: usize) -> f64 {
        self.subsets[id].count as f64 / self.total as f64
    }

    pub fn max_relative_frequency(&self) -> f64 {
        let max = self.subsets.iter().map(|s| s.count).max().unwrap_or(0);
        max as f64 / self.total as f64
    }

    /// Category index of every subset for one attribute.
    pub fn labels(&self, attribute: usize) -> Vec<usize> {
        self.subsets.iter().map(|s| s.values[attribute]).collect()
    }

    /// Repeats every subset by its frequency.
    pub fn expand(&self) -> CategoricalTable {
        let rows = self
            .subsets
            .iter()
            .flat_map(|s| core::iter::repeat_n(s.values.clone(), s.count))
            .collect();
        CategoricalTable {
            schema: self.schema.clone(),
            rows,
        }
    }
}

/// Collapses identical rows into subsets, in order of first appearance.
pub fn deduplicate(table: &CategoricalTable) -> SubsetTable {
    let mut index: BTreeMap<&[usize], usize> = BTreeMap::new();
    let mut subsets: Vec<Subset> = Vec::new();
    for row in &table.rows {
        match index.get(row.as_slice()) {
            Some(&id) => subsets[id].count += 1,
            None => {
                index.insert(row.as_slice(), subsets.len());
                subsets.push(Subset {
                    values: row.clone(),
                    count: 1,
                });
            }
        }
    }
    SubsetTable {
        schema: table.schema.clone(),
        subsets,
        total: table.rows.len(),
    }
}

/// Set and one-hot forms of one assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedItem {
    /// Sorted descriptor ids.
    pub set_form: Vec<usize>,
    pub onehot_form: Vec<u8>,
}

pub fn encode(values: &[usize], schema: &AttributeSchema) -> Result<EncodedItem> {
    schema.check_assignment(values)?;
    let set_form: Vec<usize> = values
        .iter()
        .enumerate()
        .map(|(a, &c)| schema.descriptor_id(a, c))
        .collect();
    let mut onehot_form = vec![0u8; schema.dimension()];
    for &id in &set_form {
        onehot_form[id] = 1;
    }
    Ok(EncodedItem {
        set_form,
        onehot_form,
    })
}
