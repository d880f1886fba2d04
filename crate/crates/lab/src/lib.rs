//! Sweeps, exact-diagonalization validation, file formats and the
//! `dicke-lab` command line on top of [`dicke_core`].
//!
//! Output data is never rescaled for plotting; intensive quantities are
//! written as computed and `*_unscaled` columns carry the extensive forms.

pub mod cli;
pub mod config;
pub mod output;
pub mod quantity;
pub mod report;
pub mod sweep;
pub mod table;
pub mod validate;

pub use dicke_core;

pub use config::{parse_config, ConfigError, SweepSpec};
pub use output::{read_json, write_output, Format};
pub use quantity::Quantity;
pub use sweep::run_sweep;
pub use table::{Cell, Table};
pub use validate::{validate_quantum, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] dicke_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Format(e.to_string())
    }
}

impl LabError {
    /// 1 for bad input (arguments, configuration, parameters), 2 for
    /// failures while computing or writing.
    pub fn exit_code(&self) -> i32 {
        use dicke_core::Error as E;
        match self {
            LabError::Config(_) | LabError::Usage(_) => 1,
            LabError::Model(
                E::NonPositiveFrequency { .. }
                | E::NegativeCoupling(_)
                | E::InvalidSpin(_)
                | E::OutsideValidityRegion { .. }
                | E::DegenerateBoundary
                | E::InvalidArgument(_),
            ) => 1,
            _ => 2,
        }
    }
}
