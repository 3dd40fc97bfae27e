use serde::{Deserialize, Serialize};

use super::PdeError;
use crate::funcalg::{BiSeries, QuasiPolyVector};
use crate::linops::{self, DenseMatrix};
use crate::tolerance::Tolerances;

/// One lower-order term `M·∂^σ_s ∂^τ_τ w` of a Cauchy problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyTerm {
    pub matrix: DenseMatrix,
    pub cauchy_order: usize,
    pub transverse_order: usize,
}

/// `lead·∂ⁿ_s w = Σ terms + g(s, τ)` with `∂ⁱ_s w|_{s=0} = 0`, `i < n`.
///
/// The Cauchy variable is `s`; every term must have `σ < n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyProblem {
    pub lead: DenseMatrix,
    pub order: usize,
    pub terms: Vec<CauchyTerm>,
    pub source: BiSeries,
}

fn falling(k: usize, n: usize) -> f64 {
    // (k+n)!/k!
    (k + 1..=k + n).map(|i| i as f64).product()
}

impl CauchyProblem {
    pub fn dim(&self) -> usize {
        self.lead.rows()
    }

    fn validate(&self) -> Result<(), PdeError> {
        let d = self.dim();
        if !self.lead.is_square() || self.source.dim() != d {
            return Err(PdeError::DimensionMismatch { expected: d, found: self.source.dim() });
        }
        if self.order == 0 {
            return Err(PdeError::InvalidProblem("Cauchy order must be positive".into()));
        }
        for t in &self.terms {
            if t.matrix.shape() != (d, d) {
                return Err(PdeError::DimensionMismatch { expected: d, found: t.matrix.rows() });
            }
            if t.cauchy_order >= self.order {
                return Err(PdeError::NotKovalevskaya { order: self.order, term_order: t.cauchy_order });
            }
        }
        Ok(())
    }

    /// Residual `lead·∂ⁿw − Σ terms − g` as a series (exact arithmetic).
    pub fn residual_series(&self, w: &BiSeries) -> BiSeries {
        let mut r = w.d_cauchy_n(self.order).apply(&self.lead).sub(&self.source);
        for t in &self.terms {
            r = r.sub(&w.derivative(t.cauchy_order, t.transverse_order).apply(&t.matrix));
        }
        r
    }

    /// `max ‖residual‖_∞` over a tensor grid in `(s, τ)`.
    pub fn residual_on(&self, w: &BiSeries, ss: &[f64], taus: &[f64]) -> f64 {
        let r = self.residual_series(w);
        let mut worst: f64 = 0.0;
        for &s in ss {
            for &tau in taus {
                for v in r.eval(s, tau) {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

/// Taylor recursion in the Cauchy direction with zero data, truncated at `s^K`.
///
/// The coefficient of `s^{k+n}` is
/// `k!/(k+n)!·lead⁻¹·(Σ M·(k+σ)!/k!·∂^τ w_{k+σ} + g_k)` for `k = 0…K−n`.
pub fn solve_kovalevskaya_series(problem: &CauchyProblem, truncation: usize, tolerances: &Tolerances) -> Result<BiSeries, PdeError> {
    problem.validate()?;
    let n = problem.order;
    let d = problem.dim();
    if truncation < n {
        return Err(PdeError::TruncationTooSmall { degree: 0, truncation, order: n });
    }
    if let Some(deg) = problem.source.degree() {
        if deg > truncation - n {
            return Err(PdeError::TruncationTooSmall { degree: deg, truncation, order: n });
        }
    }
    let lead_inv = linops::invert(&problem.lead, tolerances).map_err(PdeError::SingularTerminal)?;

    let mut w = vec![QuasiPolyVector::zeros(d); truncation + 1];
    for k in 0..=truncation - n {
        let mut rhs = if k <= problem.source.order() { problem.source.coeff(k).clone() } else { QuasiPolyVector::zeros(d) };
        for t in &problem.terms {
            let wk = &w[k + t.cauchy_order];
            if wk.is_zero() {
                continue;
            }
            let image = t.matrix.apply(&wk.nth_derivative(t.transverse_order));
            rhs = rhs.add(&image.scale(falling(k, t.cauchy_order)));
        }
        w[k + n] = lead_inv.apply(&rhs).scale(1.0 / falling(k, n));
    }
    Ok(BiSeries::new(d, w)?)
}
