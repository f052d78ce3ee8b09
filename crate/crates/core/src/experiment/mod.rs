//! Sweeps over drive frequency and time, reference data, comparison reports,
//! result files and the command-line front end.

pub mod cli;
pub mod config;
pub mod output;
pub mod reference;
pub mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use cli::{cli_main, run_cli, EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION};
pub use config::{parse_grid, resolve_config, ConfigError, ConfigFile, Mode, Overrides, RunConfig, TrotterSteps};
pub use output::{write_results, ResultFiles};
pub use reference::{load_reference_table, load_reference_table_by_name, ReferenceRow, ReferenceTable, TableId};
pub use sweep::{compare_to_reference, run_sweep, ComparisonSummary, PointReport, RunReport};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QHO_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qho-results";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown reference table `{0}` (expected one of single_w1, single_w2, two_w1, two_w5)")]
    UnknownTable(String),
    #[error("no simulated time matches a row of reference table {0}")]
    EmptyIntersection(TableId),
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
    #[error(transparent)]
    Simulator(#[from] crate::simulator::SimulatorError),
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    /// Input problems (exit code 1) as opposed to failures while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            ExperimentError::Config(_)
                | ExperimentError::UnknownTable(_)
                | ExperimentError::EmptyIntersection(_)
                | ExperimentError::Circuit(crate::circuit::CircuitError::ThetaOutOfBounds { .. })
        )
    }
}
