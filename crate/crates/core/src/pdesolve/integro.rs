//! First-kind integro-differential equation with a degenerate kernel,
//! `∫_a^b K(x,s)·∂³_t u(s,y,t) ds = ∂²_y u + a·u + f`, `K(x,s) = Σ a_j(x)b_j(s)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::cauchy::{solve_kovalevskaya_series, CauchyProblem, CauchyTerm};
use super::{Construction, PdeError, PdeReport};
use crate::funcalg::quadrature::{composite, gauss_legendre};
use crate::funcalg::{BiSeries, QuasiPoly, QuasiPolyVector};
use crate::linops::{self, DenseMatrix, LinopsError};
use crate::tolerance::Tolerances;

/// Distance from a Dirichlet eigenvalue `(kπ)²` below which `a` is rejected.
pub const RESONANCE_GAP: f64 = 1e-6;

/// `X(x)·Y(y)·T(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableTerm {
    pub x: QuasiPoly,
    pub y: QuasiPoly,
    pub t: QuasiPoly,
}

/// A finite sum of separable terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeparableField {
    pub terms: Vec<SeparableTerm>,
}

impl SeparableField {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(terms: Vec<SeparableTerm>) -> Self {
        let mut f = Self { terms };
        f.terms.retain(|t| !(t.x.is_zero() || t.y.is_zero() || t.t.is_zero()));
        f
    }

    pub fn single(x: QuasiPoly, y: QuasiPoly, t: QuasiPoly) -> Self {
        Self::new(vec![SeparableTerm { x, y, t }])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.terms.iter().map(|s| s.x.eval(x) * s.y.eval(y) * s.t.eval(t)).sum()
    }

    /// `∂ʸ_y ∂ᵗ_t u`.
    pub fn derivative(&self, dy: usize, dt: usize) -> Self {
        self.map(|s| SeparableTerm { x: s.x.clone(), y: s.y.nth_derivative(dy), t: s.t.nth_derivative(dt) })
    }

    pub fn map(&self, f: impl Fn(&SeparableTerm) -> SeparableTerm) -> Self {
        Self::new(self.terms.iter().map(f).collect())
    }

    pub fn map_x(&self, f: impl Fn(&QuasiPoly) -> QuasiPoly) -> Self {
        self.map(|s| SeparableTerm { x: f(&s.x), y: s.y.clone(), t: s.t.clone() })
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|s| SeparableTerm { x: s.x.scale(c), y: s.y.clone(), t: s.t.clone() })
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).cloned().collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// One rank-one piece `a_j(x)·b_j(s)` of the kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelPair {
    pub a: QuasiPoly,
    pub b: QuasiPoly,
}

/// JSON: `{"kernel": [{"a": qp, "b": qp}, …], "interval": [lo, hi], "a": 1.0, "f": [{"x","y","t"}, …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegroProblem {
    pub kernel: Vec<KernelPair>,
    #[serde(default = "unit_interval")]
    pub interval: (f64, f64),
    pub a: f64,
    pub f: SeparableField,
}

fn unit_interval() -> (f64, f64) {
    (0.0, 1.0)
}

/// Sample grid in `(x, y, t)`; `x` spans the kernel interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegroGrid {
    pub nx: usize,
    pub ny: usize,
    pub t: (f64, f64),
    pub nt: usize,
}

impl Default for IntegroGrid {
    fn default() -> Self {
        Self { nx: 9, ny: 11, t: (0.0, 0.5), nt: 6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegroOptions {
    pub truncation: usize,
    pub construction: Construction,
    pub grid: IntegroGrid,
    pub residual_limit: f64,
}

impl Default for IntegroOptions {
    fn default() -> Self {
        Self { truncation: 24, construction: Construction::Complement, grid: IntegroGrid::default(), residual_limit: 1e-4 }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `B₁[i][j] = ∫ a_j b_i`, exact.
pub fn gram_matrix(kernel: &[KernelPair], (lo, hi): (f64, f64)) -> DenseMatrix {
    let n = kernel.len();
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = kernel[j].a.mul(&kernel[i].b).integrate(lo, hi);
        }
    }
    g
}

/// Same matrix by composite Gauss–Legendre (order 10, `panels` panels).
pub fn gram_matrix_quadrature(kernel: &[KernelPair], (lo, hi): (f64, f64), panels: usize) -> DenseMatrix {
    let n = kernel.len();
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = composite(|s| kernel[j].a.eval(s) * kernel[i].b.eval(s), lo, hi, panels, 10);
        }
    }
    g
}

/// Rejects `a` within [`RESONANCE_GAP`] of `(kπ)²`.
pub fn check_resonance(a: f64) -> Result<(), PdeError> {
    if !a.is_finite() {
        return Err(PdeError::InvalidProblem(format!("coefficient a must be finite, got {a}")));
    }
    if a <= 0.0 {
        return Ok(());
    }
    let k0 = (a.sqrt() / PI).round() as usize;
    for k in k0.saturating_sub(1).max(1)..=k0 + 1 {
        if (a - (k as f64 * PI).powi(2)).abs() < RESONANCE_GAP {
            return Err(PdeError::ResonantCoefficient { a, k });
        }
    }
    Ok(())
}

/// `∫₀^y g`.
fn integral_from_zero(g: &QuasiPoly) -> QuasiPoly {
    let f = g.antiderivative();
    let c = f.eval(0.0);
    f.sub(&QuasiPoly::constant(c))
}

/// `v` with `v″ + a·v = h`, `v(0) = v(1) = 0`, in closed form.
///
/// Equivalent to `v(y) = ∫₀¹ G(y,η)h(η)dη` with
/// `G(y,η) = −sin(μy<)·sin(μ(1−y>))/(μ sin μ)`, `μ = √a`; hyperbolic for `a < 0`
/// and `−y<(1−y>)` for `a = 0`.
pub fn dirichlet_resolvent(a: f64, h: &QuasiPoly) -> Result<QuasiPoly, PdeError> {
    check_resonance(a)?;
    if h.is_zero() {
        return Ok(QuasiPoly::zero());
    }
    let (particular, shape) = if a > 0.0 {
        let mu = a.sqrt();
        let ic = integral_from_zero(&QuasiPoly::cos(1.0, mu).mul(h));
        let is = integral_from_zero(&QuasiPoly::sin(1.0, mu).mul(h));
        let vp = QuasiPoly::sin(1.0, mu).mul(&ic).sub(&QuasiPoly::cos(1.0, mu).mul(&is)).scale(1.0 / mu);
        (vp, QuasiPoly::sin(1.0, mu))
    } else if a < 0.0 {
        let mu = (-a).sqrt();
        let im = integral_from_zero(&QuasiPoly::exp(1.0, -mu).mul(h));
        let ip = integral_from_zero(&QuasiPoly::exp(1.0, mu).mul(h));
        let vp = QuasiPoly::exp(1.0, mu).mul(&im).sub(&QuasiPoly::exp(1.0, -mu).mul(&ip)).scale(0.5 / mu);
        (vp, QuasiPoly::exp(0.5, mu).sub(&QuasiPoly::exp(0.5, -mu)))
    } else {
        let y = QuasiPoly::monomial(1.0, 1);
        let vp = y.mul(&integral_from_zero(h)).sub(&integral_from_zero(&y.mul(h)));
        (vp, y)
    };
    let v = particular.sub(&shape.scale(particular.eval(1.0) / shape.eval(1.0)));
    Ok(v.pruned(1e-15 * v.max_coeff().max(1.0)))
}

/// Dirichlet Green's function of `d²/dy² + a` on `[0,1]`.
pub fn green_function(a: f64, y: f64, eta: f64) -> f64 {
    let (lo, hi) = if y < eta { (y, eta) } else { (eta, y) };
    if a > 0.0 {
        let mu = a.sqrt();
        -(mu * lo).sin() * (mu * (1.0 - hi)).sin() / (mu * mu.sin())
    } else if a < 0.0 {
        let mu = (-a).sqrt();
        -(mu * lo).sinh() * (mu * (1.0 - hi)).sinh() / (mu * mu.sinh())
    } else {
        -lo * (1.0 - hi)
    }
}

/// `∫₀¹ G(y,η)h(η)dη` by Gauss–Legendre on both sides of the kink at `η = y`.
pub fn green_apply_numeric(a: f64, h: impl Fn(f64) -> f64, y: f64, points: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(points);
    let mut total = 0.0;
    for (lo, hi) in [(0.0, y), (y, 1.0)] {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in nodes.iter().zip(&weights) {
            let eta = mid + half * x;
            total += w * half * green_function(a, y, eta) * h(eta);
        }
    }
    total
}

/// Solution of the integro-differential problem.
#[derive(Clone, Debug)]
pub struct IntegroSolution {
    /// `B₁`
    pub gram: DenseMatrix,
    /// `u₁ = (∫b_j u ds)_j` as a series in `t` with `y`-coefficients.
    pub u1: BiSeries,
    pub u: SeparableField,
    pub report: PdeReport,
}

struct Kernel<'a> {
    pairs: &'a [KernelPair],
    interval: (f64, f64),
}

impl Kernel<'_> {
    /// `(∫b_j X)_j`
    fn moments(&self, x: &QuasiPoly) -> Vec<f64> {
        let (lo, hi) = self.interval;
        self.pairs.iter().map(|p| p.b.mul(x).integrate(lo, hi)).collect()
    }

    /// `Σ a_j(x) c_j`
    fn combine(&self, c: &[f64]) -> QuasiPoly {
        self.pairs.iter().zip(c).fold(QuasiPoly::zero(), |acc, (p, &cj)| acc.add(&p.a.scale(cj)))
    }

    /// The integral operator with kernel `K`, applied in `x`.
    fn apply(&self, u: &SeparableField) -> SeparableField {
        u.map_x(|x| self.combine(&self.moments(x)))
    }

    /// `Σ_k Σ_j a_j(x)·c_{k,j}(y)·t^k` for a series with vector coefficients.
    fn lift(&self, s: &BiSeries) -> SeparableField {
        let mut terms = Vec::new();
        for (k, c) in s.coeffs().iter().enumerate() {
            for (p, cj) in self.pairs.iter().zip(c.components()) {
                terms.push(SeparableTerm { x: p.a.clone(), y: cj.clone(), t: QuasiPoly::monomial(1.0, k as u32) });
            }
        }
        SeparableField::new(terms)
    }

    /// `(∫b_j u ds)_j` at `(y, t)` after `∂ⁱ_t`.
    fn trace(&self, u: &SeparableField, i: usize, y: f64, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.pairs.len()];
        for s in &u.terms {
            let f = s.y.eval(y) * s.t.nth_derivative(i).eval(t);
            for (o, m) in out.iter_mut().zip(self.moments(&s.x)) {
                *o += m * f;
            }
        }
        out
    }
}

impl IntegroProblem {
    fn validate(&self) -> Result<(), PdeError> {
        if self.kernel.is_empty() {
            return Err(PdeError::InvalidProblem("kernel needs at least one pair".into()));
        }
        let (lo, hi) = self.interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(PdeError::InvalidProblem(format!("invalid interval [{lo}, {hi}]")));
        }
        check_resonance(self.a)
    }

    /// `∫K ∂³_t u ds − ∂²_y u − a·u − f`, exact.
    pub fn residual_field(&self, u: &SeparableField) -> SeparableField {
        let k = Kernel { pairs: &self.kernel, interval: self.interval };
        k.apply(&u.derivative(0, 3)).sub(&u.derivative(2, 0)).sub(&u.scale(self.a)).sub(&self.f)
    }
}

fn sup3(xs: &[f64], ys: &[f64], ts: &[f64], f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for &x in xs {
        for &y in ys {
            for &t in ts {
                worst = worst.max(f(x, y, t).abs());
            }
        }
    }
    worst
}

fn resolve_dirichlet(a: f64, source: &SeparableField) -> Result<SeparableField, PdeError> {
    let terms = source
        .terms
        .iter()
        .map(|s| Ok(SeparableTerm { x: s.x.clone(), y: dirichlet_resolvent(a, &s.y)?, t: s.t.clone() }))
        .collect::<Result<Vec<_>, PdeError>>()?;
    Ok(SeparableField::new(terms))
}

/// Solves with the degenerate-kernel chain of length one.
///
/// Stage 1 is the Cauchy problem `B₁∂³_t u₁ = (∂²_y + a)u₁ + β` with zero
/// data at `t = 0`, solved as a series in `t`; `y`-dependence stays exact.
/// Stage 2 inverts `∂²_y + a` with Dirichlet data by [`dirichlet_resolvent`].
pub fn solve_integro(problem: &IntegroProblem, options: &IntegroOptions, tolerances: &Tolerances) -> Result<IntegroSolution, PdeError> {
    problem.validate()?;
    let kernel = Kernel { pairs: &problem.kernel, interval: problem.interval };
    let n = problem.kernel.len();
    let order = 3;
    let trunc = options.truncation;
    if trunc < order {
        return Err(PdeError::TruncationTooSmall { degree: 0, truncation: trunc, order });
    }
    let gram = gram_matrix(&problem.kernel, problem.interval);
    let gram_inv = linops::invert(&gram, tolerances).map_err(|e| match e {
        LinopsError::Singular { .. } | LinopsError::IllConditioned { .. } | LinopsError::NonFinite => {
            PdeError::GramSingular { detail: e.to_string() }
        }
        other => PdeError::Linops(other),
    })?;

    let max_deg = trunc - order;
    let mut beta = vec![QuasiPolyVector::zeros(n); max_deg + 1];
    for s in &problem.f.terms {
        if let Some(c) = s.t.polynomial_coeffs() {
            if c.len() > max_deg + 1 {
                return Err(PdeError::TruncationTooSmall { degree: c.len() - 1, truncation: trunc, order });
            }
        }
        let m = kernel.moments(&s.x);
        for (k, b) in beta.iter_mut().enumerate() {
            let tk = s.t.taylor_coeff(k);
            if tk != 0.0 {
                let v: Vec<f64> = m.iter().map(|mj| mj * tk).collect();
                *b = b.add(&QuasiPolyVector::from_direction(&v, &s.y));
            }
        }
    }
    let series = CauchyProblem {
        lead: gram.clone(),
        order,
        terms: vec![
            CauchyTerm { matrix: DenseMatrix::identity(n), cauchy_order: 0, transverse_order: 2 },
            CauchyTerm { matrix: DenseMatrix::identity(n).scale(problem.a), cauchy_order: 0, transverse_order: 0 },
        ],
        source: BiSeries::new(n, beta)?,
    };
    let u1 = solve_kovalevskaya_series(&series, trunc, tolerances)?;

    let complement = |x: &QuasiPoly| {
        let c = gram_inv.matvec(&kernel.moments(x));
        x.sub(&kernel.combine(&c))
    };
    let (stage2_source, range_part) = match options.construction {
        Construction::Complement => (problem.f.map_x(complement).neg(), kernel.lift(&u1.apply(&gram_inv))),
        Construction::Literal => (kernel.lift(&u1.d_cauchy_n(order)).sub(&problem.f), SeparableField::zero()),
    };
    let w = resolve_dirichlet(problem.a, &stage2_source)?;
    let u = range_part.add(&w);

    let (lo, hi) = problem.interval;
    let g = options.grid;
    let xs = linspace(lo, hi, g.nx);
    let ys = linspace(0.0, 1.0, g.ny);
    let ts = linspace(g.t.0, g.t.1, g.nt);

    let residual = problem.residual_field(&u);
    let residual_original = sup3(&xs, &ys, &ts, |x, y, t| residual.eval(x, y, t));

    let u1_rhs = u1.d_cauchy_n(order).apply(&gram).sub(&u1.d_transverse_n(2)).sub(&u1.scale(problem.a));
    let mut stage1: f64 = 0.0;
    for &y in &ys {
        for &t in &ts {
            let lhs = u1_rhs.eval(t, y);
            let mut src = vec![0.0; n];
            for s in &problem.f.terms {
                let f = s.y.eval(y) * s.t.eval(t);
                for (o, m) in src.iter_mut().zip(kernel.moments(&s.x)) {
                    *o += m * f;
                }
            }
            for (l, s) in lhs.iter().zip(src) {
                stage1 = stage1.max((l - s).abs());
            }
        }
    }
    let w_residual = w.derivative(2, 0).add(&w.scale(problem.a)).sub(&stage2_source);
    let stage2 = sup3(&xs, &ys, &ts, |x, y, t| w_residual.eval(x, y, t));

    let projected = u.map_x(complement);
    let bc_violation = sup3(&xs, &[0.0, 1.0], &ts, |x, y, t| projected.eval(x, y, t));
    let mut ic_violation: f64 = 0.0;
    for i in 0..order {
        for &y in &ys {
            for v in kernel.trace(&u, i, y, 0.0) {
                ic_violation = ic_violation.max(v.abs());
            }
        }
    }
    let full_condition_violation = sup3(&xs, &[0.0, 1.0], &ts, |x, y, t| u.eval(x, y, t));
    let report = PdeReport {
        residual_original,
        residual_stages: vec![stage1, stage2],
        bc_violation,
        ic_violation,
        full_condition_violation,
        constraint_violation: None,
    };
    log::info!("integro solve: residual {:.3e}, stages {:?}", residual_original, report.residual_stages);
    if residual_original > options.residual_limit {
        return Err(PdeError::ResidualTooLarge { residual: residual_original, limit: options.residual_limit });
    }
    Ok(IntegroSolution { gram, u1, u, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_kernel() -> Vec<KernelPair> {
        vec![KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::constant(1.0) }]
    }

    fn single_mode_problem() -> IntegroProblem {
        IntegroProblem {
            kernel: unit_kernel(),
            interval: (0.0, 1.0),
            a: 1.0,
            f: SeparableField::single(QuasiPoly::monomial(1.0, 1), QuasiPoly::sin(-1.0, PI), QuasiPoly::constant(1.0)),
        }
    }

    /// `u = sin(πy)·(X − F(t)·∫X)/κ`, `κ = 1 − π²`, `F = Σ κᵐt^{3m}/(3m)!`.
    fn single_mode_oracle(x: f64, y: f64, t: f64) -> f64 {
        let kappa = 1.0 - PI * PI;
        let mut f = 0.0;
        let mut term = 1.0;
        for m in 0..30 {
            f += term;
            let j = 3 * m;
            term *= kappa * t.powi(3) / ((j + 1) * (j + 2) * (j + 3)) as f64;
        }
        (PI * y).sin() * (x - 0.5 * f) / kappa
    }

    #[test]
    fn gram_exact_matches_quadrature() {
        let kernel = vec![
            KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::exp(1.0, 0.5) },
            KernelPair { a: QuasiPoly::sin(1.0, 2.0), b: QuasiPoly::monomial(1.0, 2) },
        ];
        let exact = gram_matrix(&kernel, (-1.0, 2.0));
        let quad = gram_matrix_quadrature(&kernel, (-1.0, 2.0), 64);
        assert!(exact.max_diff(&quad) < 1e-12);
    }

    #[test]
    fn unit_load_green_closed_form() {
        let v = dirichlet_resolvent(1.0, &QuasiPoly::constant(1.0)).unwrap();
        for i in 0..=20 {
            let y = i as f64 / 20.0;
            let exact = 1.0 - (y - 0.5).cos() / 0.5f64.cos();
            assert!((v.eval(y) - exact).abs() < 1e-10, "{y}");
            assert!((green_apply_numeric(1.0, |_| 1.0, y, 20) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn resolvent_other_signs() {
        let h = QuasiPoly::polynomial(&[1.0, -2.0, 3.0]);
        for a in [-4.0, 0.0, 3.0, 30.0] {
            let v = dirichlet_resolvent(a, &h).unwrap();
            assert!(v.eval(0.0).abs() < 1e-12 && v.eval(1.0).abs() < 1e-12, "a={a}");
            let r = v.nth_derivative(2).add(&v.scale(a)).sub(&h);
            for i in 0..=10 {
                let y = i as f64 / 10.0;
                assert!(r.eval(y).abs() < 1e-10, "a={a} y={y}");
                let numeric = green_apply_numeric(a, |e| h.eval(e), y, 20);
                assert!((numeric - v.eval(y)).abs() < 1e-11, "a={a} y={y}");
            }
        }
        let v = dirichlet_resolvent(0.0, &QuasiPoly::constant(1.0)).unwrap();
        assert!((v.eval(0.3) - 0.5 * (0.09 - 0.3)).abs() < 1e-15);
    }

    #[test]
    fn resonant_coefficient_rejected() {
        let mut p = single_mode_problem();
        p.a = PI * PI;
        assert!(matches!(
            solve_integro(&p, &IntegroOptions::default(), &Tolerances::default()),
            Err(PdeError::ResonantCoefficient { k: 1, .. })
        ));
        assert!(check_resonance(4.0 * PI * PI + 1e-3).is_ok());
        assert!(check_resonance(9.0 * PI * PI + 1e-7).is_err());
    }

    #[test]
    fn zero_source() {
        let p = IntegroProblem { f: SeparableField::zero(), ..single_mode_problem() };
        let sol = solve_integro(&p, &IntegroOptions::default(), &Tolerances::default()).unwrap();
        assert!(sol.u.is_zero());
    }

    #[test]
    fn single_mode_oracle_both_constructions() {
        let p = single_mode_problem();
        for construction in [Construction::Complement, Construction::Literal] {
            let opts = IntegroOptions { construction, ..IntegroOptions::default() };
            let sol = solve_integro(&p, &opts, &Tolerances::default()).unwrap();
            for &(x, y, t) in &[(0.2, 0.5, 0.0), (0.7, 0.3, 0.4), (1.0, 0.9, 1.0)] {
                let err = (sol.u.eval(x, y, t) - single_mode_oracle(x, y, t)).abs();
                assert!(err < 1e-8, "{construction:?} {x} {y} {t}: {err}");
            }
            assert!(sol.report.ic_violation < 1e-12);
            assert!(sol.report.full_condition_violation < 1e-12);
        }
    }

    #[test]
    fn generic_source_needs_the_complement() {
        let kernel = vec![
            KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::monomial(1.0, 1) },
            KernelPair { a: QuasiPoly::monomial(1.0, 1), b: QuasiPoly::constant(1.0) },
        ];
        let f = SeparableField::new(vec![
            SeparableTerm { x: QuasiPoly::monomial(1.0, 2), y: QuasiPoly::polynomial(&[1.0, 1.0]), t: QuasiPoly::monomial(1.0, 1) },
            SeparableTerm { x: QuasiPoly::exp(1.0, 1.0), y: QuasiPoly::constant(1.0), t: QuasiPoly::constant(2.0) },
        ]);
        let p = IntegroProblem { kernel, interval: (0.0, 1.0), a: 2.0, f };
        let t = Tolerances::default();
        let sol = solve_integro(&p, &IntegroOptions::default(), &t).unwrap();
        assert!(sol.report.residual_original < 1e-9, "{:?}", sol.report);
        assert!(sol.report.residual_stages.iter().all(|&r| r < 1e-9));
        assert!(sol.report.bc_violation < 1e-10 && sol.report.ic_violation < 1e-10, "{:?}", sol.report);
        let literal = IntegroOptions { construction: Construction::Literal, ..IntegroOptions::default() };
        assert!(matches!(solve_integro(&p, &literal, &t), Err(PdeError::ResidualTooLarge { .. })));
    }

    #[test]
    fn singular_gram_rejected() {
        let kernel = vec![KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::polynomial(&[-0.5, 1.0]) }];
        let p = IntegroProblem { kernel, ..single_mode_problem() };
        assert!(matches!(solve_integro(&p, &IntegroOptions::default(), &Tolerances::default()), Err(PdeError::GramSingular { .. })));
    }

    #[test]
    fn json_round_trip() {
        let p = single_mode_problem();
        let s = serde_json::to_string(&p).unwrap();
        let back: IntegroProblem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
