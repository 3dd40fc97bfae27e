//! Skeleton-chain reduction of irregular linear systems `B·L u = L₁u + f`.
//!
//! A singular matrix (or finite-rank operator) `B` is factored as `B = A₁A₂`,
//! the factors are swapped to `B₁ = A₂A₁` and the process repeats until the
//! chain member is invertible (regular chain) or zero (singular chain). The
//! irregular equation then splits into regular equations for the projections
//! `uᵢ = A_{2i}⋯A₂u`, which standard methods solve.
//!
//! - [`linops`]: dense matrices, rank factorization, kernel bases, inversion.
//! - [`chain`]: chain construction and its identities.
//! - [`funcalg`]: exact quasi-polynomials, bivariate series, RK4 and trajectories.
//! - [`odesolve`]: `B·u′ = u + f` for regular and singular chains.
//! - [`pdesolve`]: the PDE and integro-differential solvers.
//! - [`problem`]: the tagged problem-file format; [`cli`] drives it from the command line.
//!
//! ```
//! use skeleton_solve::{chain, fixtures, odesolve, Tolerances};
//!
//! let tol = Tolerances::default();
//! let c = chain::build_chain(&fixtures::example_one_matrix(), tol.rank, &tol).unwrap();
//! assert_eq!((c.length, c.kind), (1, chain::ChainKind::Regular));
//!
//! let sol = odesolve::solve(&fixtures::example_one_problem(), &tol).unwrap();
//! assert!(sol.u.max_error(&fixtures::example_one_solution()) < 1e-7);
//! ```

pub mod chain;
pub mod cli;
pub mod fixtures;
pub mod funcalg;
pub mod generate;
pub mod linops;
pub mod odesolve;
pub mod pdesolve;
pub mod problem;
pub mod tolerance;

pub use tolerance::Tolerances;

use thiserror::Error;

/// Any error the library can return.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linops(#[from] linops::LinopsError),
    #[error(transparent)]
    Chain(#[from] chain::ChainError),
    #[error(transparent)]
    Funcalg(#[from] funcalg::FuncalgError),
    #[error(transparent)]
    Ode(#[from] odesolve::OdeError),
    #[error(transparent)]
    Pde(#[from] pdesolve::PdeError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
