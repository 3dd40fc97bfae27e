use serde::{Deserialize, Serialize};

use super::{FuncalgError, QuasiPoly};
use crate::linops::DenseMatrix;

/// Vector of quasi-polynomials with a fixed dimension.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuasiPolyVector {
    components: Vec<QuasiPoly>,
}

impl QuasiPolyVector {
    pub fn new(components: Vec<QuasiPoly>) -> Self {
        Self { components }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { components: vec![QuasiPoly::zero(); dim] }
    }

    /// `v · g(t)` for a constant vector `v`.
    pub fn from_direction(v: &[f64], g: &QuasiPoly) -> Self {
        Self { components: v.iter().map(|&c| g.scale(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[QuasiPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &QuasiPoly {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<QuasiPoly> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(QuasiPoly::is_zero)
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(t)).collect()
    }

    pub fn max_coeff(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_coeff()))
    }

    pub fn map(&self, f: impl Fn(&QuasiPoly) -> QuasiPoly) -> Self {
        Self { components: self.components.iter().map(f).collect() }
    }

    pub fn derivative(&self) -> Self {
        self.map(QuasiPoly::derivative)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        self.map(|c| c.nth_derivative(n))
    }

    pub fn pruned(&self, tol: f64) -> Self {
        self.map(|c| c.pruned(tol))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|q| q.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Componentwise product with one scalar function.
    pub fn mul_scalar(&self, g: &QuasiPoly) -> Self {
        self.map(|q| q.mul(g))
    }

    pub fn convolve_exp(&self, lambda: f64) -> Self {
        self.map(|q| q.convolve_exp(lambda))
    }

    /// `f^{(m)}(0)/m!` for every component.
    pub fn taylor_coeff(&self, m: usize) -> Vec<f64> {
        self.components.iter().map(|c| c.taylor_coeff(m)).collect()
    }

    /// Panics on dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "quasi-polynomial vector dimension mismatch");
        Self { components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Dot product with a constant vector.
    pub fn dot(&self, v: &[f64]) -> QuasiPoly {
        assert_eq!(self.dim(), v.len(), "quasi-polynomial vector dimension mismatch");
        let terms = self.components.iter().zip(v).filter(|(_, &c)| c != 0.0).flat_map(|(q, &c)| q.scale(c).terms().to_vec());
        QuasiPoly::from_terms(terms)
    }
}

/// `M · f` componentwise; exact.
pub fn matvec_apply(m: &DenseMatrix, f: &QuasiPolyVector) -> Result<QuasiPolyVector, FuncalgError> {
    if m.cols() != f.dim() {
        return Err(FuncalgError::DimensionMismatch { expected: m.cols(), found: f.dim() });
    }
    Ok(QuasiPolyVector::new((0..m.rows()).map(|i| f.dot(m.row(i))).collect()))
}

impl DenseMatrix {
    /// `self · f`; panics on dimension mismatch. See [`matvec_apply`].
    pub fn apply(&self, f: &QuasiPolyVector) -> QuasiPolyVector {
        matvec_apply(self, f).expect("matrix applied to vector function of wrong dimension")
    }
}
