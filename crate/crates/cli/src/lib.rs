//! Command-line front end for the qubit heat-transport models: single
//! points, parameter sweeps and figure presets, written as CSV.

pub mod config;
pub mod point;
pub mod presets;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] qheat_core::Error),
    #[error("{0}")]
    Io(String),
    /// A physics check failed under a strict flag.
    #[error("{0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Model(e) if is_input_error(e) => 1,
            CliError::Io(_) => 1,
            CliError::Model(_) | CliError::Check(_) => 2,
        }
    }
}

fn is_input_error(e: &qheat_core::Error) -> bool {
    use qheat_core::Error::*;
    matches!(
        e,
        Domain(_)
            | InvalidCoupling { .. }
            | MissingReservoir(_)
            | DimensionMismatch { .. }
            | NearDegenerate { .. }
            | NoDissipation
            | SpectralLookup { .. }
    )
}
