//! Solvers for irregular partial differential and integro-differential systems.
//!
//! Every problem is split along the skeleton chain of its singular matrix into
//! a Cauchy–Kovalevskaya stage, solved as a truncated Taylor series by
//! [`cauchy::solve_kovalevskaya_series`], and a complement stage: a Dirichlet
//! heat problem ([`heat`]) or a two-point Green's function ([`integro`]).
//!
//! Solutions are exact symbolic objects ([`field::XtField`], [`integro::SeparableField`])
//! and each solver returns a [`PdeReport`] with residuals sampled on a grid.
//!
//! The split can be assembled in two ways, see [`Construction`].

pub mod cauchy;
pub mod field;
pub mod heat;
pub mod integro;
pub mod mixed;
pub mod operator;
pub mod parabolic;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::ChainError;
use crate::funcalg::FuncalgError;
use crate::linops::LinopsError;

#[derive(Debug, Error)]
pub enum PdeError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Linops(#[from] LinopsError),
    #[error(transparent)]
    Funcalg(#[from] FuncalgError),
    #[error("truncation order {truncation} too small for source degree {degree} and equation order {order}")]
    TruncationTooSmall { degree: usize, truncation: usize, order: usize },
    #[error("term of Cauchy order {term_order} is not below the equation order {order}")]
    NotKovalevskaya { order: usize, term_order: usize },
    #[error("leading matrix of the Cauchy stage is singular: {0}")]
    SingularTerminal(LinopsError),
    #[error("{requested} sine modes requested, at most {cap} allowed")]
    ModeOverflow { requested: usize, cap: usize },
    #[error("residual {residual:e} exceeds limit {limit:e}")]
    ResidualTooLarge { residual: f64, limit: f64 },
    #[error("coefficient {a} is within 1e-6 of the eigenvalue (kπ)² for k = {k}")]
    ResonantCoefficient { a: f64, k: usize },
    #[error("Gram matrix of the kernel is singular: {detail}")]
    GramSingular { detail: String },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("unsupported problem: {0}")]
    Unsupported(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// How the chain split is turned back into a solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// `u = A₁B₁⁻¹u₁ + w` with `w` solving the complement problem driven by `−(I−Q)f`,
    /// `Q = A₁B₁⁻¹A₂`. Satisfies the original equation for any source.
    #[default]
    Complement,
    /// `u = w` with `w` driven by `A₁∂ⁿu₁ − f`. Only consistent when `A₂w = u₁`
    /// happens to hold; otherwise the solver reports `ResidualTooLarge`.
    Literal,
}

/// Residuals and condition violations of a computed solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeReport {
    /// Sup-norm of the original equation's residual on the grid.
    pub residual_original: f64,
    /// Sup-norm residual of each split stage, in order.
    pub residual_stages: Vec<f64>,
    /// Boundary conditions the construction enforces.
    pub bc_violation: f64,
    /// Initial conditions the construction enforces.
    pub ic_violation: f64,
    /// Boundary and initial values of the full solution, for information.
    pub full_condition_violation: f64,
    /// Kernel constraint `sup|Pv|` on the projector path.
    pub constraint_violation: Option<f64>,
}

/// Tensor grid on which residuals are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub x: (f64, f64),
    pub t: (f64, f64),
    pub nx: usize,
    pub nt: usize,
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

impl ResidualGrid {
    pub fn new(x: (f64, f64), t: (f64, f64), nx: usize, nt: usize) -> Self {
        Self { x, t, nx, nt }
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x, self.nx)
    }

    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t, self.nt)
    }

    /// Largest absolute entry of `f(x, t)` over the grid.
    pub fn sup(&self, f: impl Fn(f64, f64) -> Vec<f64>) -> f64 {
        let ts = self.ts();
        let mut worst: f64 = 0.0;
        for x in self.xs() {
            for &t in &ts {
                for v in f(x, t) {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}
