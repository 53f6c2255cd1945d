use thiserror::Error;

use crate::grid::{Axis, Component};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdiError {
    #[error("cell count along {axis:?} is {count}, at least 3 required")]
    TooFewCells { axis: Axis, count: usize },

    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),

    #[error("material constants must be positive and finite (eps = {eps}, mu = {mu})")]
    InvalidMedium { eps: f64, mu: f64 },

    #[error("index ({i}, {j}, {k}) outside the extent of {component:?}")]
    IndexOutOfExtent {
        component: Component,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("lattice extent {len} along {axis:?} too small for a difference (need >= 2)")]
    ExtentTooSmall { axis: Axis, len: usize },

    #[error("extent mismatch: {0}")]
    ExtentMismatch(String),

    #[error("states belong to different grids")]
    GridMismatch,

    #[error("non-finite value in {component:?} at storage index {index}")]
    NonFinite { component: Component, index: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("snapshot format: {0}")]
    Snapshot(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for AdiError {
    fn from(e: std::io::Error) -> Self {
        AdiError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, AdiError>;
