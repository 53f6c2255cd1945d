use adifdtd::AdiError;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("solver failed at step {step}: {source}")]
    Solver { step: usize, source: AdiError },

    #[error(transparent)]
    Core(#[from] AdiError),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;
