use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Trigonometric factor of a term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trig {
    None,
    Sin(f64),
    Cos(f64),
}

impl Trig {
    fn rank(&self) -> u8 {
        match self {
            Trig::None => 0,
            Trig::Sin(_) => 1,
            Trig::Cos(_) => 2,
        }
    }

    fn omega(&self) -> f64 {
        match *self {
            Trig::None => 0.0,
            Trig::Sin(w) | Trig::Cos(w) => w,
        }
    }
}

/// `coeff · t^power · e^{rate·t} · trig(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: u32,
    pub rate: f64,
    pub trig: Trig,
}

impl Term {
    pub fn new(coeff: f64, power: u32, rate: f64, trig: Trig) -> Self {
        Self { coeff, power, rate, trig }
    }

    /// Folds negative frequencies and zero frequencies into the canonical shape.
    /// Returns `None` when the term vanishes identically.
    fn normalized(self) -> Option<Self> {
        let rate = if self.rate == 0.0 { 0.0 } else { self.rate };
        let (coeff, trig) = match self.trig {
            Trig::None => (self.coeff, Trig::None),
            Trig::Sin(0.0) => return None,
            Trig::Sin(w) if w < 0.0 => (-self.coeff, Trig::Sin(-w)),
            Trig::Sin(w) => (self.coeff, Trig::Sin(w)),
            Trig::Cos(0.0) => (self.coeff, Trig::None),
            Trig::Cos(w) => (self.coeff, Trig::Cos(w.abs())),
        };
        (coeff != 0.0).then_some(Self { coeff, power: self.power, rate, trig })
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.power
            .cmp(&other.power)
            .then(self.rate.total_cmp(&other.rate))
            .then(self.trig.rank().cmp(&other.trig.rank()))
            .then(self.trig.omega().total_cmp(&other.trig.omega()))
    }

    fn same_key(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }

    pub fn eval(&self, t: f64) -> f64 {
        let base = self.coeff * t.powi(self.power as i32) * (self.rate * t).exp();
        match self.trig {
            Trig::None => base,
            Trig::Sin(w) => base * (w * t).sin(),
            Trig::Cos(w) => base * (w * t).cos(),
        }
    }

    /// Complex form: the term equals `Re(c · t^k · e^{z t})`.
    fn to_complex(self) -> (Complex64, u32, Complex64) {
        match self.trig {
            Trig::None => (Complex64::new(self.coeff, 0.0), self.power, Complex64::new(self.rate, 0.0)),
            Trig::Sin(w) => (Complex64::new(0.0, -self.coeff), self.power, Complex64::new(self.rate, w)),
            Trig::Cos(w) => (Complex64::new(self.coeff, 0.0), self.power, Complex64::new(self.rate, w)),
        }
    }
}

/// Real part of `c · t^k · e^{z t}` as real terms.
fn from_complex(out: &mut Vec<Term>, c: Complex64, k: u32, z: Complex64) {
    if z.im == 0.0 {
        out.push(Term::new(c.re, k, z.re, Trig::None));
    } else {
        out.push(Term::new(c.re, k, z.re, Trig::Cos(z.im)));
        out.push(Term::new(-c.im, k, z.re, Trig::Sin(z.im)));
    }
}

/// Finite sum of terms `c·tᵏ·e^{at}·{1, sin ωt, cos ωt}`, kept in canonical form:
/// sorted, no two terms share `(k, a, trig)`, no zero coefficients,
/// frequencies non-negative.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuasiPoly {
    terms: Vec<Term>,
}

impl QuasiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut q = Self { terms: terms.into_iter().collect() };
        q.canonicalize();
        q
    }

    pub fn term(coeff: f64, power: u32, rate: f64, trig: Trig) -> Self {
        Self::from_terms([Term::new(coeff, power, rate, trig)])
    }

    pub fn constant(c: f64) -> Self {
        Self::term(c, 0, 0.0, Trig::None)
    }

    /// `c·tᵏ`.
    pub fn monomial(c: f64, k: u32) -> Self {
        Self::term(c, k, 0.0, Trig::None)
    }

    /// `c·e^{a t}`.
    pub fn exp(c: f64, a: f64) -> Self {
        Self::term(c, 0, a, Trig::None)
    }

    /// `c·sin(ω t)`.
    pub fn sin(c: f64, w: f64) -> Self {
        Self::term(c, 0, 0.0, Trig::Sin(w))
    }

    /// `c·cos(ω t)`.
    pub fn cos(c: f64, w: f64) -> Self {
        Self::term(c, 0, 0.0, Trig::Cos(w))
    }

    /// Polynomial `Σ coeffs[k]·tᵏ`.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, &c)| Term::new(c, k as u32, 0.0, Trig::None)))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term is a plain monomial `c·tᵏ`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.rate == 0.0 && t.trig == Trig::None)
    }

    /// Coefficient of `tᵏ` if the function is a polynomial.
    pub fn polynomial_coeffs(&self) -> Option<Vec<f64>> {
        if !self.is_polynomial() {
            return None;
        }
        let deg = self.terms.iter().map(|t| t.power).max().map_or(0, |d| d as usize + 1);
        let mut c = vec![0.0; deg];
        for t in &self.terms {
            c[t.power as usize] += t.coeff;
        }
        Some(c)
    }

    fn canonicalize(&mut self) {
        let mut ts: Vec<Term> = self.terms.drain(..).filter_map(Term::normalized).collect();
        ts.sort_by(Term::key_cmp);
        let mut merged: Vec<Term> = Vec::with_capacity(ts.len());
        for t in ts {
            match merged.last_mut() {
                Some(last) if last.same_key(&t) => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        self.terms = merged;
    }

    /// Re-runs canonicalization; a no-op on values built through the public API.
    pub fn canonicalized(&self) -> Self {
        let mut q = self.clone();
        q.canonicalize();
        q
    }

    /// Drops terms with `|coeff| ≤ tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self { terms: self.terms.iter().copied().filter(|t| t.coeff.abs() > tol).collect() }
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|t| Term { coeff: t.coeff * c, ..*t }).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Exact derivative.
    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * 3);
        for t in &self.terms {
            if t.power > 0 {
                out.push(Term::new(t.coeff * t.power as f64, t.power - 1, t.rate, t.trig));
            }
            if t.rate != 0.0 {
                out.push(Term::new(t.coeff * t.rate, t.power, t.rate, t.trig));
            }
            match t.trig {
                Trig::None => {}
                Trig::Sin(w) => out.push(Term::new(t.coeff * w, t.power, t.rate, Trig::Cos(w))),
                Trig::Cos(w) => out.push(Term::new(-t.coeff * w, t.power, t.rate, Trig::Sin(w))),
            }
        }
        Self::from_terms(out)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }

    /// `f^{(m)}(0) / m!`.
    pub fn taylor_coeff(&self, m: usize) -> f64 {
        let fact: f64 = (1..=m).map(|i| i as f64).product();
        self.nth_derivative(m).eval(0.0) / fact
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len() * 2);
        for a in &self.terms {
            for b in &other.terms {
                let c = a.coeff * b.coeff;
                let k = a.power + b.power;
                let r = a.rate + b.rate;
                match (a.trig, b.trig) {
                    (Trig::None, t) | (t, Trig::None) => out.push(Term::new(c, k, r, t)),
                    (Trig::Sin(w1), Trig::Sin(w2)) => {
                        out.push(Term::new(0.5 * c, k, r, Trig::Cos(w1 - w2)));
                        out.push(Term::new(-0.5 * c, k, r, Trig::Cos(w1 + w2)));
                    }
                    (Trig::Cos(w1), Trig::Cos(w2)) => {
                        out.push(Term::new(0.5 * c, k, r, Trig::Cos(w1 - w2)));
                        out.push(Term::new(0.5 * c, k, r, Trig::Cos(w1 + w2)));
                    }
                    (Trig::Sin(ws), Trig::Cos(wc)) | (Trig::Cos(wc), Trig::Sin(ws)) => {
                        out.push(Term::new(0.5 * c, k, r, Trig::Sin(ws + wc)));
                        out.push(Term::new(0.5 * c, k, r, Trig::Sin(ws - wc)));
                    }
                }
            }
        }
        Self::from_terms(out)
    }

    /// Multiplies by `e^{λ t}`.
    pub fn mul_exp(&self, lambda: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term { rate: t.rate + lambda, ..*t }))
    }

    /// An antiderivative (constant of integration chosen by the closed form,
    /// not normalized to vanish at 0).
    ///
    /// Coefficients grow like `k!/|z|^{k+1}`, so terms with a small nonzero
    /// complex rate `z` lose relative accuracy to cancellation.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let (c, k, z) = t.to_complex();
            if z == Complex64::new(0.0, 0.0) {
                out.push(Term::new(c.re / (k as f64 + 1.0), k + 1, 0.0, Trig::None));
                continue;
            }
            // ∫ tᵏ e^{zt} = e^{zt} Σ_j (−1)^j k!/(k−j)! t^{k−j} / z^{j+1}
            let mut falling = 1.0;
            let mut zpow = z;
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                from_complex(&mut out, c * (sign * falling) / zpow, k - j, z);
                falling *= (k - j) as f64;
                zpow *= z;
            }
        }
        Self::from_terms(out)
    }

    /// `∫_lo^hi f(t) dt` by the closed-form antiderivative.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        let f = self.antiderivative();
        f.eval(hi) - f.eval(lo)
    }

    /// `∫₀ᵗ e^{−λ(t−s)} f(s) ds` as a quasi-polynomial in `t`.
    ///
    /// Every exponential rate of `f` is kept bit-for-bit; the only new rate is `−λ`.
    pub fn convolve_exp(&self, lambda: f64) -> Self {
        let mut out = Vec::new();
        let decay = Complex64::new(-lambda, 0.0);
        for t in &self.terms {
            let (c, k, z) = t.to_complex();
            let w = z + lambda;
            if w == Complex64::new(0.0, 0.0) {
                from_complex(&mut out, c / (k as f64 + 1.0), k + 1, z);
                continue;
            }
            let mut falling = 1.0;
            let mut wpow = w;
            for j in 0..=k {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let d = c * (sign * falling) / wpow;
                from_complex(&mut out, d, k - j, z);
                if j == k {
                    from_complex(&mut out, -d, 0, decay);
                }
                falling *= (k - j) as f64;
                wpow *= w;
            }
        }
        Self::from_terms(out)
    }
}

impl fmt::Display for QuasiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            if t.power > 0 {
                write!(f, "·t^{}", t.power)?;
            }
            if t.rate != 0.0 {
                write!(f, "·e^({}t)", t.rate)?;
            }
            match t.trig {
                Trig::None => {}
                Trig::Sin(w) => write!(f, "·sin({w}t)")?,
                Trig::Cos(w) => write!(f, "·cos({w}t)")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: f64,
    #[serde(default)]
    k: u32,
    #[serde(default)]
    a: f64,
    #[serde(default = "default_trig")]
    trig: String,
    #[serde(default)]
    w: f64,
}

fn default_trig() -> String {
    "none".to_string()
}

#[derive(Serialize, Deserialize)]
struct QuasiPolyRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for QuasiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (trig, w) = match t.trig {
                    Trig::None => ("none", 0.0),
                    Trig::Sin(w) => ("sin", w),
                    Trig::Cos(w) => ("cos", w),
                };
                TermRepr { c: t.coeff, k: t.power, a: t.rate, trig: trig.to_string(), w }
            })
            .collect();
        QuasiPolyRepr { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuasiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = QuasiPolyRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            if !(t.c.is_finite() && t.a.is_finite() && t.w.is_finite()) {
                return Err(D::Error::custom("non-finite quasi-polynomial parameter"));
            }
            let trig = match t.trig.as_str() {
                "none" => Trig::None,
                "sin" => Trig::Sin(t.w),
                "cos" => Trig::Cos(t.w),
                other => return Err(D::Error::custom(format!("unknown trig kind {other:?}"))),
            };
            terms.push(Term::new(t.c, t.k, t.a, trig));
        }
        Ok(QuasiPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn central_diff(f: &QuasiPoly, t: f64, h: f64) -> f64 {
        (f.eval(t + h) - f.eval(t - h)) / (2.0 * h)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(QuasiPoly::monomial(1.0, 2).derivative(), QuasiPoly::monomial(2.0, 1));
        assert_eq!(QuasiPoly::exp(1.0, 1.0).derivative(), QuasiPoly::exp(1.0, 1.0));
        let f = QuasiPoly::term(1.0, 1, 0.0, Trig::Sin(2.0));
        let expected = QuasiPoly::sin(1.0, 2.0).add(&QuasiPoly::term(2.0, 1, 0.0, Trig::Cos(2.0)));
        assert_eq!(f.derivative(), expected);
        for t in [0.3, 0.7] {
            let fd = central_diff(&f, t, 1e-5);
            assert!((fd - expected.eval(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn arithmetic_examples() {
        let t = QuasiPoly::monomial(1.0, 1);
        assert!(t.add(&t.neg()).is_zero());
        assert_eq!(QuasiPoly::sin(1.0, 1.0).scale(2.0), QuasiPoly::sin(2.0, 1.0));
        let lhs = QuasiPoly::polynomial(&[1.0, 0.0, 1.0]).sub(&QuasiPoly::monomial(1.0, 2));
        assert_eq!(lhs, QuasiPoly::constant(1.0));
    }

    #[test]
    fn eval_examples() {
        let f = QuasiPoly::exp(1.0, 1.0).sub(&QuasiPoly::polynomial(&[1.0, 1.0]));
        assert!((f.eval(1.0) - (E - 2.0)).abs() < 1e-15);
        assert_eq!(QuasiPoly::zero().eval(3.7), 0.0);
        let g = QuasiPoly::term(1.0, 1, 0.0, Trig::Cos(PI));
        assert!((g.eval(1.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_folding() {
        assert_eq!(QuasiPoly::sin(1.0, -2.0), QuasiPoly::sin(-1.0, 2.0));
        assert_eq!(QuasiPoly::cos(3.0, 0.0), QuasiPoly::constant(3.0));
        assert!(QuasiPoly::sin(3.0, 0.0).is_zero());
        assert_eq!(QuasiPoly::cos(1.0, -2.0), QuasiPoly::cos(1.0, 2.0));
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let q: QuasiPoly = serde_json::from_str(r#"{"terms":[{"c":2.0,"k":1,"trig":"sin","w":3.0},{"c":1.0}]}"#).unwrap();
        assert_eq!(q, QuasiPoly::term(2.0, 1, 0.0, Trig::Sin(3.0)).add(&QuasiPoly::constant(1.0)));
        let back: QuasiPoly = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<QuasiPoly>(r#"{"terms":[{"c":1.0,"trig":"tan"}]}"#).is_err());
    }

    #[test]
    fn product_of_sines() {
        let p = QuasiPoly::sin(1.0, 2.0).mul(&QuasiPoly::sin(1.0, 3.0));
        for t in [0.1, 0.9, 2.3] {
            assert!((p.eval(t) - (2.0 * t).sin() * (3.0 * t).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn definite_integrals() {
        // ∫₀¹ x sin(πx) dx = 1/π
        let f = QuasiPoly::term(1.0, 1, 0.0, Trig::Sin(PI));
        assert!((f.integrate(0.0, 1.0) - 1.0 / PI).abs() < 1e-15);
        // ∫₀¹ t² e^t dt = e − 2
        let g = QuasiPoly::term(1.0, 2, 1.0, Trig::None);
        assert!((g.integrate(0.0, 1.0) - (E - 2.0)).abs() < 1e-14);
        assert!((QuasiPoly::monomial(3.0, 2).integrate(0.0, 2.0) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn convolution_matches_closed_forms() {
        // ∫₀ᵗ e^{−λ(t−s)} ds = (1 − e^{−λt})/λ
        let lam = PI * PI;
        let c = QuasiPoly::constant(1.0).convolve_exp(lam);
        for t in [0.0, 0.1, 0.5] {
            assert!((c.eval(t) - (1.0 - (-lam * t).exp()) / lam).abs() < 1e-16);
        }
        // ∫₀ᵗ e^{(t−s)} s ds = eᵗ − 1 − t  (λ = −1)
        let c = QuasiPoly::monomial(1.0, 1).convolve_exp(-1.0);
        for t in [0.0, 0.4, 1.0] {
            assert!((c.eval(t) - (t.exp() - 1.0 - t)).abs() < 1e-14);
        }
        // resonant rate: ∫₀ᵗ e^{−(t−s)} e^{−s} ds = t e^{−t}
        let c = QuasiPoly::exp(1.0, -1.0).convolve_exp(1.0);
        assert_eq!(c, QuasiPoly::term(1.0, 1, -1.0, Trig::None));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        (-2.0..2.0f64, 0u32..=4, -3.0..3.0f64, 0u8..3, 0.1..3.0f64).prop_map(|(c, k, a, kind, w)| {
            let trig = match kind {
                0 => Trig::None,
                1 => Trig::Sin(w),
                _ => Trig::Cos(w),
            };
            Term::new(c, k, a, trig)
        })
    }

    fn arb_conditioned_term() -> impl Strategy<Value = Term> {
        (arb_term(), prop_oneof![Just(0.0), 0.1..3.0f64, -3.0..-0.1f64]).prop_map(|(t, a)| Term { rate: a, ..t })
    }

    fn arb_qp() -> impl Strategy<Value = QuasiPoly> {
        proptest::collection::vec(arb_term(), 0..6).prop_map(QuasiPoly::from_terms)
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(f in arb_qp()) {
            prop_assert_eq!(f.canonicalized(), f.clone());
        }

        #[test]
        fn eval_is_linear(f in arb_qp(), g in arb_qp(), t in -1.0..1.0f64) {
            let lhs = f.add(&g).eval(t);
            let rhs = f.eval(t) + g.eval(t);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn derivative_matches_central_differences(f in arb_qp(), ts in proptest::collection::vec(-1.0..1.0f64, 10)) {
            let df = f.derivative();
            for t in ts {
                let exact = df.eval(t);
                let fd = central_diff(&f, t, 1e-5);
                prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
            }
        }

        #[test]
        fn antiderivative_differentiates_back(
            f in proptest::collection::vec(arb_conditioned_term(), 0..6).prop_map(QuasiPoly::from_terms),
            t in -1.0..1.0f64,
        ) {
            let back = f.antiderivative().derivative();
            prop_assert!((back.eval(t) - f.eval(t)).abs() <= 1e-9 * (1.0 + f.eval(t).abs()));
        }
    }
}
