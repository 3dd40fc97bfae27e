use serde::{Deserialize, Serialize};

use super::{FuncalgError, QuasiPoly, QuasiPolyVector};
use crate::linops::DenseMatrix;

/// Truncated series `u(s, τ) = Σ_{k=0}^{K} c_k(τ)·sᵏ` whose coefficients are
/// vector quasi-polynomials in the transverse variable `τ`.
///
/// `s` is the Cauchy direction of whichever problem owns the series (x for the
/// heat-type system, t for the integro-differential one).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct BiSeries {
    dim: usize,
    coeffs: Vec<QuasiPolyVector>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    dim: usize,
    coeffs: Vec<QuasiPolyVector>,
}

impl TryFrom<SeriesRepr> for BiSeries {
    type Error = FuncalgError;

    fn try_from(r: SeriesRepr) -> Result<Self, Self::Error> {
        BiSeries::new(r.dim, r.coeffs)
    }
}

impl From<BiSeries> for SeriesRepr {
    fn from(s: BiSeries) -> Self {
        SeriesRepr { dim: s.dim, coeffs: s.coeffs }
    }
}

impl BiSeries {
    /// Empty `coeffs` means the zero series of order 0.
    pub fn new(dim: usize, mut coeffs: Vec<QuasiPolyVector>) -> Result<Self, FuncalgError> {
        if let Some(bad) = coeffs.iter().find(|c| c.dim() != dim) {
            return Err(FuncalgError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if coeffs.is_empty() {
            coeffs.push(QuasiPolyVector::zeros(dim));
        }
        Ok(Self { dim, coeffs })
    }

    pub fn zeros(dim: usize, order: usize) -> Self {
        Self { dim, coeffs: vec![QuasiPolyVector::zeros(dim); order + 1] }
    }

    /// Series with a single coefficient `c(τ)·s⁰`.
    pub fn constant_in_s(c: QuasiPolyVector) -> Self {
        Self { dim: c.dim(), coeffs: vec![c] }
    }

    /// Builds a series from scalar monomials `(component, power of s, coefficient in τ)`.
    pub fn from_monomials(dim: usize, monomials: &[(usize, usize, QuasiPoly)]) -> Self {
        let order = monomials.iter().map(|m| m.1).max().unwrap_or(0);
        let mut rows = vec![vec![QuasiPoly::zero(); dim]; order + 1];
        for (i, k, q) in monomials {
            rows[*k][*i] = rows[*k][*i].add(q);
        }
        Self { dim, coeffs: rows.into_iter().map(QuasiPolyVector::new).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QuasiPolyVector] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &QuasiPolyVector {
        &self.coeffs[k]
    }

    /// Highest power of `s` with a non-zero coefficient; `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Pads with zeros or truncates to order `k`.
    pub fn with_order(&self, k: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(k + 1, QuasiPolyVector::zeros(self.dim));
        Self { dim: self.dim, coeffs }
    }

    pub fn map(&self, f: impl Fn(&QuasiPolyVector) -> QuasiPolyVector) -> Self {
        let coeffs: Vec<_> = self.coeffs.iter().map(f).collect();
        let dim = coeffs.first().map_or(self.dim, QuasiPolyVector::dim);
        Self { dim, coeffs }
    }

    pub fn apply(&self, m: &DenseMatrix) -> Self {
        self.map(|c| m.apply(c))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn pruned(&self, tol: f64) -> Self {
        self.map(|v| v.pruned(tol))
    }

    /// Sum; the order of the result is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "series dimension mismatch");
        let order = self.order().max(other.order());
        let a = self.with_order(order);
        let b = other.with_order(order);
        Self { dim: self.dim, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `∂/∂s`; the order drops by one (never below 0).
    pub fn d_cauchy(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zeros(self.dim, 0);
        }
        let coeffs = self.coeffs[1..].iter().enumerate().map(|(k, c)| c.scale((k + 1) as f64)).collect();
        Self { dim: self.dim, coeffs }
    }

    pub fn d_cauchy_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.d_cauchy())
    }

    /// `∂/∂τ`.
    pub fn d_transverse(&self) -> Self {
        self.map(QuasiPolyVector::derivative)
    }

    pub fn d_transverse_n(&self, n: usize) -> Self {
        self.map(|c| c.nth_derivative(n))
    }

    /// Mixed derivative `∂^{ds}_s ∂^{dt}_τ`.
    pub fn derivative(&self, ds: usize, dt: usize) -> Self {
        self.d_cauchy_n(ds).d_transverse_n(dt)
    }

    /// Horner evaluation in `s`.
    pub fn eval(&self, s: f64, tau: f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        for c in self.coeffs.iter().rev() {
            let v = c.eval(tau);
            for (a, vi) in acc.iter_mut().zip(v) {
                *a = *a * s + vi;
            }
        }
        acc
    }

    /// Component `i` as a scalar series.
    pub fn component(&self, i: usize) -> Self {
        self.map(|c| QuasiPolyVector::new(vec![c.component(i).clone()]))
    }

    /// The coefficients of `s` collected per power of `τ`, when every
    /// coefficient is a polynomial. Returns `None` otherwise.
    pub fn transpose(&self) -> Option<Self> {
        let mut table: Vec<Vec<Vec<f64>>> = Vec::with_capacity(self.coeffs.len());
        let mut tdeg = 0;
        for c in &self.coeffs {
            let mut row = Vec::with_capacity(self.dim);
            for q in c.components() {
                let p = q.polynomial_coeffs()?;
                tdeg = tdeg.max(p.len());
                row.push(p);
            }
            table.push(row);
        }
        let tdeg = tdeg.max(1);
        let coeffs = (0..tdeg)
            .map(|j| {
                QuasiPolyVector::new(
                    (0..self.dim)
                        .map(|i| {
                            let col: Vec<f64> = table.iter().map(|row| row[i].get(j).copied().unwrap_or(0.0)).collect();
                            QuasiPoly::polynomial(&col)
                        })
                        .collect(),
                )
            })
            .collect();
        Some(Self { dim: self.dim, coeffs })
    }
}
