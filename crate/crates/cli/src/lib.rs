//! File formats, experiments and the command-line driver for
//! [`tsetlin_core`].

pub mod commands;
pub mod data;
pub mod error;
pub mod experiment;
pub mod model_file;

pub use error::{CliError, Result};
