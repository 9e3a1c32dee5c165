use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: file has no data rows")]
    EmptyFile { path: PathBuf },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: row {row}, column `{column}`: `{value}` is not a number")]
    NotNumeric {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{path}: row {row}: unknown class `{label}`")]
    UnknownClass { path: PathBuf, row: usize, label: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid configuration: {0}")]
    Config(tsetlin_core::Error),
    #[error("{0}")]
    Data(tsetlin_core::Error),
    #[error("{path}: not a valid model file: {reason}")]
    Model { path: PathBuf, reason: String },
    #[error("{path}: model format version {found}, expected {expected}")]
    Version { path: PathBuf, found: u32, expected: u32 },
}

impl CliError {
    /// 2 for bad input data or arguments, 3 for unusable model files.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model { .. } | CliError::Version { .. } => 3,
            _ => 2,
        }
    }
}
