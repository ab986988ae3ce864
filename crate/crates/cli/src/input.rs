//! Argument decoding: inline JSON or `@path`, scalars, operators.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use umbral_core::scalar::{self, Scalar};
use umbral_core::{DeltaOp, Error};

use crate::CliError;

/// Parses `text` as JSON, or the contents of the file when it starts with `@`.
pub fn json_arg<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    let body = match text.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?,
        None => text.to_string(),
    };
    serde_json::from_str(&body).map_err(|e| CliError::usage(format!("bad {what} JSON: {e}")))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn scalar_arg(text: &str) -> Result<Scalar, CliError> {
    scalar::parse(text).map_err(CliError::from)
}

pub fn scalar_list(items: &[String]) -> Result<Vec<Scalar>, CliError> {
    items.iter().map(|s| scalar_arg(s)).collect()
}

/// The operator named by `--op` at `--level`, or read from `--op-file` and
/// optionally re-levelled.
pub fn operator(op: Option<&str>, op_file: Option<&Path>, level: Option<usize>) -> Result<DeltaOp, CliError> {
    match (op, op_file) {
        (Some(name), None) => {
            let level = level.ok_or_else(|| CliError::usage("--op needs --level"))?;
            Ok(DeltaOp::parse_named(name, level)?)
        }
        (None, Some(path)) => {
            let d: DeltaOp = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::usage(format!("bad operator file {}: {e}", path.display())))?;
            match level {
                Some(level) if level != d.level() => Ok(d.with_level(level)?),
                _ => Ok(d),
            }
        }
        (None, None) => Err(CliError::usage("an operator is required: --op <name> or --op-file <path>")),
        (Some(_), Some(_)) => Err(CliError::usage("--op and --op-file are exclusive")),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Invalid(_) | Error::UnknownOperator(_) => 1,
            Error::IdentityViolation(_) => 3,
            _ => 2,
        };
        CliError { code: e.code().to_string(), detail: e.to_string(), exit }
    }
}
