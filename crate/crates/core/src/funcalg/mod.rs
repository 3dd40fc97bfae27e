//! Exactly differentiable functions of one variable.
//!
//! [`QuasiPoly`] is a canonical sum of `c·tᵏ·e^{at}·{1, sin ωt, cos ωt}` terms,
//! closed under differentiation, products and integration. [`BiSeries`] lifts
//! it to truncated power series in a second variable. The RK4 integrator and
//! trajectory CSV format live in [`integrate`].

pub mod integrate;
pub mod quadrature;
mod quasipoly;
mod series;
mod vector;

use thiserror::Error;

pub use integrate::{exp_convolve, uniform_grid, Trajectory};
pub use quasipoly::{QuasiPoly, Term, Trig};
pub use series::BiSeries;
pub use vector::{matvec_apply, QuasiPolyVector};

#[derive(Debug, Error)]
pub enum FuncalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("step too large: ‖B⁻¹‖·h = {norm_h} exceeds {bound}")]
    StepTooLarge { norm_h: f64, bound: f64 },
    #[error("non-finite value")]
    NonFinite,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for FuncalgError {
    fn from(e: csv::Error) -> Self {
        FuncalgError::Csv(e.to_string())
    }
}
