//! Experiment driver for the ADI-FDTD solver: configuration, the six
//! experiment kinds, and CSV output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

pub use config::{emit, parse_config, ConfigError, Experiment, Init, PartialConfig, RunConfig, SnapshotFormat};
pub use error::{HarnessError, HarnessResult};
pub use experiments::{
    converge_space, converge_time, divergence_audit, energy_audit, execute, run, stability, Convergence, ConvergenceRow,
    DivergenceAudit, EnergyAudit, Rates, RunOutcome, Stability, AUDIT_RATIO_NAMES, IDENTITY_NAMES,
};
pub use output::{Cell, OutputDir, Table};
