//! CSV input.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use catmap_core::dataset::{CategoricalTable, TableOptions};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    /// Cells equal to this become the attribute's missing category.
    pub missing_token: String,
    /// Treat all-numeric columns as categorical instead of rejecting them.
    pub allow_numeric: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            missing_token: String::new(),
            allow_numeric: false,
        }
    }
}

/// Reads a headed CSV into a categorical table. Rows with the wrong number of
/// fields are reported with their line number.
pub fn read_table<R: Read>(reader: R, options: &CsvOptions) -> Result<CategoricalTable> {
    let mut csv = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = csv.headers()?.iter().map(str::to_owned).collect();
    let mut records = Vec::new();
    for record in csv.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        records.push((line, record.iter().map(str::to_owned).collect::<Vec<_>>()));
    }
    let table_options = TableOptions {
        missing_token: options.missing_token.clone(),
        allow_numeric: options.allow_numeric,
    };
    Ok(CategoricalTable::from_records(&header, records, &table_options)?)
}

pub fn load_csv(path: &Path, options: &CsvOptions) -> Result<CategoricalTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_table(std::io::BufReader::new(file), options)
}
