//! CSV ingestion.
//!
//! Files have a header row. Feature columns are numeric; the label column
//! holds arbitrary class names, mapped to dense ids in sorted order.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use tsetlin_core::RawDataset;

use crate::error::{CliError, Result};

struct Table {
    path: PathBuf,
    headers: Vec<String>,
    records: Vec<csv::StringRecord>,
}

impl Table {
    fn read(path: &Path) -> Result<Table> {
        let file = std::fs::File::open(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let csv_err = |source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let headers = reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
        let records = reader.records().collect::<Result<Vec<_>, _>>().map_err(csv_err)?;
        if records.is_empty() {
            return Err(CliError::EmptyFile {
                path: path.to_path_buf(),
            });
        }
        Ok(Table {
            path: path.to_path_buf(),
            headers,
            records,
        })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::MissingColumn {
                path: self.path.clone(),
                column: name.to_owned(),
            })
    }

    /// Data rows are numbered from 1, the header being row 0.
    fn numeric(&self, columns: &[usize]) -> Result<Vec<Vec<f64>>> {
        self.records
            .iter()
            .enumerate()
            .map(|(r, rec)| {
                columns
                    .iter()
                    .map(|&c| {
                        let cell = rec.get(c).unwrap_or("");
                        cell.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| CliError::NotNumeric {
                                path: self.path.clone(),
                                row: r + 1,
                                column: self.headers[c].clone(),
                                value: cell.to_owned(),
                            })
                    })
                    .collect()
            })
            .collect()
    }

    fn strings(&self, column: usize) -> Vec<&str> {
        self.records.iter().map(|r| r.get(column).unwrap_or("")).collect()
    }
}

/// A training file with its label column name.
#[derive(Clone, Debug, PartialEq)]
pub struct Training {
    pub raw: RawDataset,
    pub label_column: String,
}

/// Loads a training file. The label is `label_column` if given, otherwise
/// the last column; every other column is a feature.
pub fn load_training(path: &Path, label_column: Option<&str>) -> Result<Training> {
    let table = Table::read(path)?;
    if table.headers.len() < 2 {
        return Err(CliError::MissingColumn {
            path: table.path.clone(),
            column: label_column.unwrap_or("<label>").to_owned(),
        });
    }
    let label = match label_column {
        Some(name) => table.column(name)?,
        None => table.headers.len() - 1,
    };
    let features: Vec<usize> = (0..table.headers.len()).filter(|&c| c != label).collect();
    let rows = table.numeric(&features)?;
    let names = table.strings(label);
    let class_names: Vec<String> = names
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_owned)
        .collect();
    let labels = names
        .iter()
        .map(|n| class_names.iter().position(|c| c == n).expect("collected above"))
        .collect();
    Ok(Training {
        raw: RawDataset {
            feature_names: features.iter().map(|&c| table.headers[c].clone()).collect(),
            class_names,
            rows,
            labels,
        },
        label_column: table.headers[label].clone(),
    })
}

/// Rows read against a known schema.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemaRows {
    pub rows: Vec<Vec<f64>>,
    /// Present when the file has the label column.
    pub labels: Option<Vec<usize>>,
}

/// Loads the named feature columns, in schema order, and `label_column` if
/// the file has it. Labels must be among `class_names`.
pub fn load_with_schema(
    path: &Path,
    feature_names: &[String],
    label_column: &str,
    class_names: &[String],
) -> Result<SchemaRows> {
    let table = Table::read(path)?;
    let columns = feature_names
        .iter()
        .map(|f| table.column(f))
        .collect::<Result<Vec<_>>>()?;
    let rows = table.numeric(&columns)?;
    let labels = table
        .headers
        .iter()
        .position(|h| h == label_column)
        .map(|c| {
            table
                .strings(c)
                .iter()
                .enumerate()
                .map(|(r, n)| {
                    class_names
                        .iter()
                        .position(|c| c == n)
                        .ok_or_else(|| CliError::UnknownClass {
                            path: table.path.clone(),
                            row: r + 1,
                            label: (*n).to_owned(),
                        })
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(SchemaRows { rows, labels })
}
