//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug)]
pub enum Error {
    /// A model parameter violates its invariant. Carries the field name.
    InvalidParameter {
        field: &'static str,
        message: String,
    },
    /// A function argument is outside the mathematical domain of the operation.
    Domain { message: String },
    /// An integrand returned a non-finite value at a quadrature node.
    NonFiniteEvaluation { index: usize, node: f64 },
    /// A configuration file could not be parsed. `line` is 1-based.
    Config { line: usize, message: String },
    /// A comparison report was requested but a required column is absent.
    MissingColumn { name: String },
    /// The simulation window produced no base station after repeated resampling.
    EmptyWindow { attempts: u32 },
    /// Run-level statistics need at least two runs.
    InsufficientRuns { got: usize },
    /// File I/O failure, annotated with the path involved.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, message } => {
                write!(f, "invalid parameter `{field}`: {message}")
            }
            Error::Domain { message } => write!(f, "domain error: {message}"),
            Error::NonFiniteEvaluation { index, node } => {
                write!(
                    f,
                    "integrand returned a non-finite value at node {index} (x = {node})"
                )
            }
            Error::Config { line, message } => {
                write!(f, "config error at line {line}: {message}")
            }
            Error::MissingColumn { name } => {
                write!(f, "comparison needs column `{name}`, which was not produced")
            }
            Error::EmptyWindow { attempts } => {
                write!(
                    f,
                    "no base station fell inside the simulation window after {attempts} \
                     attempts; increase the window radius"
                )
            }
            Error::InsufficientRuns { got } => {
                write!(f, "run variance needs at least 2 runs, got {got}")
            }
            Error::Io { path, source } => {
                write!(f, "I/O error on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
