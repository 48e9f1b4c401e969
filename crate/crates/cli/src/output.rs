use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hyperspec::Error;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// A command result in both output formats.
pub struct Rendered {
    pub json: Value,
    pub table: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    fn lib(&self) -> Option<&Error> {
        match self {
            CliError::Input { source, .. } | CliError::Lib(source) => Some(source),
            _ => None,
        }
    }

    /// 2 for bad input, 3 for caps, 4 for unmet mathematical preconditions.
    pub fn exit_code(&self) -> u8 {
        match self.lib() {
            None => 2,
            Some(Error::DegreeCapExceeded { .. } | Error::CapExceeded { .. }) => 3,
            Some(
                Error::ConditionAViolated { .. }
                | Error::ConditionBViolated { .. }
                | Error::DegenerateMinor
                | Error::TooManyDegeneratePoints { .. }
                | Error::ZeroVector
                | Error::DivisionByZero
                | Error::InsufficientModuli
                | Error::Inconsistent(_),
            ) => 4,
            Some(_) => 2,
        }
    }

    /// Variant name of the underlying error, for scripts grepping stderr.
    pub fn kind(&self) -> String {
        match self.lib() {
            Some(e) => format!("{e:?}").split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string(),
            None if matches!(self, CliError::Io { .. }) => "Io".into(),
            None => "Usage".into(),
        }
    }
}

pub fn emit(r: &Rendered, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = match format {
        Format::Json => serde_json::to_string_pretty(&r.json).expect("values serialize"),
        Format::Table => r.table.trim_end().to_string(),
    };
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
