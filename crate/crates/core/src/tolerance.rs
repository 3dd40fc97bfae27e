use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every stage of the pipeline.
///
/// All residual checks are in the max-norm. `rank` is relative to the
/// max-norm of the matrix being factored; the others are absolute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Pivots below `rank * ‖B‖_max` count as zero.
    pub rank: f64,
    /// Bound on `‖B − A₁A₂‖_max` for a rank factorization.
    pub fact: f64,
    /// Bound on `‖Bφ‖_∞` for kernel vectors.
    pub null: f64,
    /// Bound on `‖B − Bᵀ‖_max` for the symmetric-only paths.
    pub sym: f64,
    /// Bound on `‖B·B⁻¹ − I‖_max`.
    pub inv: f64,
    /// Largest accepted 1-norm condition estimate.
    pub kappa_max: f64,
    /// Chain identities and the zero-member test.
    pub chain: f64,
    /// Accepted residual of a reassembled solution, scaled by `1 + ‖f‖_∞`.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank: 1e-10, fact: 1e-10, null: 1e-10, sym: 1e-12, inv: 1e-10, kappa_max: 1e12, chain: 1e-9, residual: 1e-6 }
    }
}
