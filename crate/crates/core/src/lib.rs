//! ADI-FDTD time stepping for the 3D Maxwell equations on a staggered Yee
//! grid with perfectly conducting walls, plus the discrete norms, energy
//! functionals and manufactured solution used to verify it.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`). The
//! `*64` aliases below are what the harness and the verification suite use.

pub mod error;
pub mod grid;
pub mod lattice;
pub mod manufactured;
pub mod norms;
pub mod operators;
pub mod real;
pub mod snapshot;
pub mod stepper;
pub mod tridiag;

pub use error::{AdiError, Result};
pub use grid::{enforce_pec, location_of, make_grid, with_pec, zero_state, Axis, Component, FieldState, GridSpec, Medium, VectorField};
pub use lattice::{IndexBox, Lattice, Span};
pub use real::Real;
pub use manufactured::{error_state, metrics, observed_rate, sample_exact, AnalyticConstants, ErrorMetrics, ExactSolution};
pub use norms::{
    boundary_norm, composite_norms, composite_norms_dt, divergence, energy_report, functional_i, functional_ii, functional_iii,
    functional_iv, norm_e, norm_h, CompositeNorms, Divergence, DivergenceReport, EnergyReport,
};
pub use stepper::{advance, residual, stage1, stage2, step, Stage};
pub use tridiag::{solve_tridiagonal, ThomasFactor, TriDiagSystem};

pub type Grid64 = GridSpec<f64>;
pub type State64 = FieldState<f64>;
pub type Medium64 = Medium<f64>;
pub type Lattice64 = Lattice<f64>;
pub type Grid32 = GridSpec<f32>;
pub type State32 = FieldState<f32>;
