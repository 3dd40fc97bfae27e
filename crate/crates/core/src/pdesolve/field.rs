use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::funcalg::quadrature::composite;
use crate::funcalg::{BiSeries, QuasiPolyVector};
use crate::linops::DenseMatrix;

/// One Dirichlet eigenmode `sin(kπx)·amp(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SineMode {
    pub k: usize,
    pub amp: QuasiPolyVector,
}

/// `u(x,t) = Σ_m x^m·P_m(t) + Σ_k sin(kπx)·S_k(t)` on `x ∈ [0,1]`.
///
/// Sources and solutions of the heat-type problems share this form. The
/// polynomial part is a [`BiSeries`] in `x`; the sine part holds one entry per
/// mode number with modes kept sorted and unique.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XtField {
    pub poly: BiSeries,
    #[serde(default)]
    pub sine: Vec<SineMode>,
}

fn sin_derivative(n: usize, w: f64, x: f64) -> f64 {
    let s = w.powi(n as i32);
    match n % 4 {
        0 => s * (w * x).sin(),
        1 => s * (w * x).cos(),
        2 => -s * (w * x).sin(),
        _ => -s * (w * x).cos(),
    }
}

impl XtField {
    pub fn zeros(dim: usize) -> Self {
        Self { poly: BiSeries::zeros(dim, 0), sine: Vec::new() }
    }

    pub fn from_poly(poly: BiSeries) -> Self {
        Self { poly, sine: Vec::new() }
    }

    pub fn from_modes(dim: usize, modes: Vec<SineMode>) -> Self {
        Self::zeros(dim).add(&Self { poly: BiSeries::zeros(dim, 0), sine: modes })
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.sine.iter().all(|m| m.amp.is_zero())
    }

    pub fn max_mode(&self) -> usize {
        self.sine.iter().map(|m| m.k).max().unwrap_or(0)
    }

    pub fn eval(&self, x: f64, t: f64) -> Vec<f64> {
        self.eval_derivative(0, 0, x, t)
    }

    /// `∂ˣ_x ∂ᵗ_t u` at `(x, t)`.
    pub fn eval_derivative(&self, dx: usize, dt: usize, x: f64, t: f64) -> Vec<f64> {
        let mut out = self.poly.derivative(dx, dt).eval(x, t);
        for m in &self.sine {
            let s = sin_derivative(dx, m.k as f64 * PI, x);
            if s == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(m.amp.nth_derivative(dt).eval(t)) {
                *o += s * v;
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&QuasiPolyVector) -> QuasiPolyVector) -> Self {
        Self { poly: self.poly.map(&f), sine: self.sine.iter().map(|m| SineMode { k: m.k, amp: f(&m.amp) }).collect() }
    }

    pub fn apply(&self, m: &DenseMatrix) -> Self {
        self.map(|v| m.apply(v))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let poly = self.poly.add(&other.poly);
        let mut sine: Vec<SineMode> = Vec::with_capacity(self.sine.len() + other.sine.len());
        for m in self.sine.iter().chain(&other.sine) {
            match sine.iter_mut().find(|s| s.k == m.k) {
                Some(s) => s.amp = s.amp.add(&m.amp),
                None => sine.push(m.clone()),
            }
        }
        sine.retain(|m| !m.amp.is_zero());
        sine.sort_by_key(|m| m.k);
        Self { poly, sine }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `∂_t`, exact.
    pub fn d_t(&self) -> Self {
        self.map(QuasiPolyVector::derivative)
    }

    /// The heat operator image `∂_t u − a²·∂_xx u`, exact.
    pub fn heat_image(&self, a: f64) -> Self {
        let a2 = a * a;
        let poly = self.poly.d_transverse().sub(&self.poly.d_cauchy_n(2).scale(a2));
        let sine = self
            .sine
            .iter()
            .map(|m| {
                let lam = a2 * (m.k as f64 * PI).powi(2);
                SineMode { k: m.k, amp: m.amp.derivative().add(&m.amp.scale(lam)) }
            })
            .collect();
        Self { poly, sine }.add(&Self::zeros(self.dim()))
    }

    /// Polynomial part plus the sine part expanded in Taylor series up to `x^degree`.
    pub fn taylor_in_x(&self, degree: usize) -> BiSeries {
        let mut acc = self.poly.clone();
        for m in &self.sine {
            let w = m.k as f64 * PI;
            let mut coeffs = vec![QuasiPolyVector::zeros(self.dim()); degree + 1];
            let mut c = w;
            let mut j = 1;
            while j <= degree {
                coeffs[j] = m.amp.scale(c);
                c *= -w * w / ((j + 1) * (j + 2)) as f64;
                j += 2;
            }
            acc = acc.add(&BiSeries::new(self.dim(), coeffs).expect("uniform dimension"));
        }
        acc
    }

    /// Largest absolute value on a tensor grid.
    pub fn sup_on(&self, xs: &[f64], ts: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for &x in xs {
            for &t in ts {
                for v in self.eval(x, t) {
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }
}

/// `∫₀¹ xʲ sin(ωx) dx`.
///
/// Closed form by integration by parts where the upward recursion is stable
/// (`j ≤ ω`); Gauss–Legendre otherwise.
pub fn sine_moment(j: usize, w: f64) -> f64 {
    if (j as f64) <= w {
        sine_cosine_moments(j, w).0
    } else {
        let panels = 4 + (w / PI).ceil() as usize;
        composite(|x| x.powi(j as i32) * (w * x).sin(), 0.0, 1.0, panels, 24)
    }
}

/// `(∫₀¹ xʲ sin ωx, ∫₀¹ xʲ cos ωx)` by the integration-by-parts recursion.
fn sine_cosine_moments(j: usize, w: f64) -> (f64, f64) {
    let (sw, cw) = w.sin_cos();
    let mut s = (1.0 - cw) / w;
    let mut c = sw / w;
    for i in 1..=j {
        let ns = -cw / w + (i as f64 / w) * c;
        let nc = sw / w - (i as f64 / w) * s;
        s = ns;
        c = nc;
    }
    (s, c)
}

/// Sine coefficient `2∫₀¹ p(x) sin(kπx) dx` of a polynomial given by coefficients in `x`.
pub fn poly_sine_coefficient(coeffs: &[f64], k: usize) -> f64 {
    let w = k as f64 * PI;
    2.0 * coeffs.iter().enumerate().map(|(j, &c)| if c == 0.0 { 0.0 } else { c * sine_moment(j, w) }).sum::<f64>()
}

/// Sine coefficient of a polynomial-in-`x` series with vector coefficients: `2∫₀¹ u(x,·) sin(kπx) dx`.
pub fn series_sine_coefficient(p: &BiSeries, k: usize) -> QuasiPolyVector {
    let w = k as f64 * PI;
    let mut acc = QuasiPolyVector::zeros(p.dim());
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&c.scale(2.0 * sine_moment(j, w)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::QuasiPoly;

    #[test]
    fn moments_match_quadrature() {
        for k in [1usize, 2, 5, 17, 64] {
            let w = k as f64 * PI;
            for j in 0..20 {
                let q = composite(|x| x.powi(j as i32) * (w * x).sin(), 0.0, 1.0, 8 + k, 24);
                assert!((sine_moment(j, w) - q).abs() < 1e-13, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn moment_closed_forms() {
        // ∫₀¹ x sin(πx) = 1/π, ∫₀¹ sin(2πx) = 0
        assert!((sine_moment(1, PI) - 1.0 / PI).abs() < 1e-15);
        assert!(sine_moment(0, 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn heat_image_of_mode() {
        let f = XtField::from_modes(1, vec![SineMode { k: 1, amp: QuasiPolyVector::new(vec![QuasiPoly::exp(1.0, -PI * PI)]) }]);
        assert!(f.heat_image(1.0).is_zero());
    }

    #[test]
    fn derivative_of_sine_part() {
        let f = XtField::from_modes(1, vec![SineMode { k: 2, amp: QuasiPolyVector::new(vec![QuasiPoly::monomial(1.0, 1)]) }]);
        let (x, t) = (0.3, 0.5);
        let w = 2.0 * PI;
        assert!((f.eval_derivative(1, 1, x, t)[0] - w * (w * x).cos()).abs() < 1e-14);
        assert!((f.eval_derivative(2, 0, x, t)[0] + w * w * (w * x).sin() * t).abs() < 1e-12);
    }

    #[test]
    fn taylor_of_sine() {
        let f = XtField::from_modes(1, vec![SineMode { k: 1, amp: QuasiPolyVector::new(vec![QuasiPoly::constant(1.0)]) }]);
        let s = f.taylor_in_x(25);
        assert!((s.eval(0.4, 0.0)[0] - (0.4 * PI).sin()).abs() < 1e-14);
    }
}
