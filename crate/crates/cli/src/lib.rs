//! Command implementations behind the `eiscurve` binary.
//!
//! Each command returns the text it would print; [`CliError`] carries the
//! exit status and a short error code.

pub mod codec;
pub mod commands;

use eiscurve_core::btree::TreeError;
use eiscurve_core::dirichlet::DirichletError;
use eiscurve_core::modforms::ModformError;
use eiscurve_core::selmer::SelmerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable files or malformed JSON; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// A computation refused its input; exit status 1.
    #[error("{message}")]
    Domain { code: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Domain { code, .. } => code,
        }
    }
}

impl From<ModformError> for CliError {
    fn from(e: ModformError) -> Self {
        CliError::Domain {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl From<SelmerError> for CliError {
    fn from(e: SelmerError) -> Self {
        CliError::Domain {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        CliError::Domain {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

impl From<DirichletError> for CliError {
    fn from(e: DirichletError) -> Self {
        match e {
            DirichletError::IndexOutOfRange { .. } | DirichletError::ZeroModulus => CliError::Usage(e.to_string()),
            e => CliError::Domain {
                code: e.code(),
                message: e.to_string(),
            },
        }
    }
}
