//! Reference problems shared by the demos, examples and tests.

use std::f64::consts::PI;

use crate::funcalg::{BiSeries, QuasiPoly, QuasiPolyVector};
use crate::linops::DenseMatrix;
use crate::odesolve::IrregularOdeProblem;
use crate::pdesolve::field::{SineMode, XtField};
use crate::pdesolve::integro::{IntegroProblem, KernelPair, SeparableField, SeparableTerm};
use crate::pdesolve::mixed::MixedProblem;
use crate::pdesolve::operator::{DiffTerm, PolyDiffOp};
use crate::pdesolve::parabolic::ParabolicProblem;

/// Rank one, regular chain of length one with `B₁ = [[1]]`.
pub fn example_one_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[[0.0, 2.0, 2.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
}

/// Nilpotent of index 2.
pub fn example_two_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[[0.0, 2.0, -2.0], [0.0, 1.0, -1.0], [0.0, 1.0, -1.0]])
}

/// Single 4×4 Jordan block with eigenvalue zero (index 4).
pub fn jordan_four() -> DenseMatrix {
    let mut b = DenseMatrix::zeros(4, 4);
    for i in 0..3 {
        b[(i, i + 1)] = 1.0;
    }
    b
}

/// `diag(1) ⊕ J₂(0)`: regular chain of length two with ranks 3, 2, 1.
pub fn index_two_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
}

/// `f = (0, t, 0)`.
pub fn example_one_problem() -> IrregularOdeProblem {
    let f = QuasiPolyVector::new(vec![QuasiPoly::zero(), QuasiPoly::monomial(1.0, 1), QuasiPoly::zero()]);
    IrregularOdeProblem::new(example_one_matrix(), f)
}

/// `(2(eᵗ−1), eᵗ−1−t, 0)`.
pub fn example_one_solution() -> QuasiPolyVector {
    let em1 = QuasiPoly::exp(1.0, 1.0).sub(&QuasiPoly::constant(1.0));
    QuasiPolyVector::new(vec![em1.scale(2.0), em1.sub(&QuasiPoly::monomial(1.0, 1)), QuasiPoly::zero()])
}

/// `f = (0, sin t, 0)`, so `f₂ + f₃ = sin t`.
pub fn example_two_problem() -> IrregularOdeProblem {
    let f = QuasiPolyVector::new(vec![QuasiPoly::zero(), QuasiPoly::sin(1.0, 1.0), QuasiPoly::zero()]);
    IrregularOdeProblem::new(example_two_matrix(), f)
}

/// `−f − (2cos t, cos t, cos t)`.
pub fn example_two_solution() -> QuasiPolyVector {
    let f = example_two_problem().f;
    let bf = QuasiPolyVector::new(vec![QuasiPoly::cos(2.0, 1.0), QuasiPoly::cos(1.0, 1.0), QuasiPoly::cos(1.0, 1.0)]);
    f.neg().sub(&bf)
}

/// `f = (0, sin πx, −sin πx)`: `A₂f = 0`, so the series stage vanishes.
pub fn parabolic_killed_problem() -> ParabolicProblem {
    let amp = QuasiPolyVector::new(vec![QuasiPoly::zero(), QuasiPoly::constant(1.0), QuasiPoly::constant(-1.0)]);
    ParabolicProblem { b: example_one_matrix(), n: 3, a: 1.0, f: XtField::from_modes(3, vec![SineMode { k: 1, amp }]) }
}

/// `sin(πx)(1 − e^{−π²t})/π²`, the heat response to `sin πx`.
pub fn heat_mode_one(x: f64, t: f64) -> f64 {
    let p2 = PI * PI;
    (PI * x).sin() * (1.0 - (-p2 * t).exp()) / p2
}

/// Degree-2 polynomial source `(1 + xt, x², t − x)`.
pub fn parabolic_generic_source() -> XtField {
    XtField::from_poly(BiSeries::from_monomials(
        3,
        &[
            (0, 0, QuasiPoly::constant(1.0)),
            (0, 1, QuasiPoly::monomial(1.0, 1)),
            (1, 2, QuasiPoly::constant(1.0)),
            (2, 0, QuasiPoly::monomial(1.0, 1)),
            (2, 1, QuasiPoly::constant(-1.0)),
        ],
    ))
}

pub fn parabolic_generic_problem() -> ParabolicProblem {
    ParabolicProblem { b: example_one_matrix(), n: 3, a: 1.0, f: parabolic_generic_source() }
}

/// Symmetric `B = diag(1, 1, 0)` with the generic source.
pub fn parabolic_symmetric_problem() -> ParabolicProblem {
    ParabolicProblem { b: DenseMatrix::diag(&[1.0, 1.0, 0.0]), n: 3, a: 1.0, f: parabolic_generic_source() }
}

/// `K = 1` on `[0,1]`, `a = 1`, `f = −x·sin(πy)`.
pub fn integro_single_mode_problem() -> IntegroProblem {
    IntegroProblem {
        kernel: vec![KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::constant(1.0) }],
        interval: (0.0, 1.0),
        a: 1.0,
        f: SeparableField::single(QuasiPoly::monomial(1.0, 1), QuasiPoly::sin(-1.0, PI), QuasiPoly::constant(1.0)),
    }
}

/// `sin(πy)(x − F(t)/2)/κ` with `κ = 1 − π²`, `F(t) = Σ κᵐt^{3m}/(3m)!`.
pub fn integro_single_mode_solution(x: f64, y: f64, t: f64) -> f64 {
    let kappa = 1.0 - PI * PI;
    let mut f = 0.0;
    let mut term = 1.0;
    for m in 0..40 {
        f += term;
        let j = 3 * m;
        term *= kappa * t.powi(3) / ((j + 1) * (j + 2) * (j + 3)) as f64;
    }
    (PI * y).sin() * (x - 0.5 * f) / kappa
}

/// Rank-two kernel `1·s + x·1` with a mixed source.
pub fn integro_generic_problem() -> IntegroProblem {
    IntegroProblem {
        kernel: vec![
            KernelPair { a: QuasiPoly::constant(1.0), b: QuasiPoly::monomial(1.0, 1) },
            KernelPair { a: QuasiPoly::monomial(1.0, 1), b: QuasiPoly::constant(1.0) },
        ],
        interval: (0.0, 1.0),
        a: 2.0,
        f: SeparableField::new(vec![
            SeparableTerm { x: QuasiPoly::monomial(1.0, 2), y: QuasiPoly::polynomial(&[1.0, 1.0]), t: QuasiPoly::monomial(1.0, 1) },
            SeparableTerm { x: QuasiPoly::exp(1.0, 1.0), y: QuasiPoly::constant(1.0), t: QuasiPoly::constant(2.0) },
        ]),
    }
}

/// `L = ∂³_t + ½∂_t∂_x`, `L₁ = ∂²_x − 1`.
pub fn mixed_operators() -> (PolyDiffOp, PolyDiffOp) {
    let l = PolyDiffOp::from_terms([DiffTerm { t: 3, x: 0, c: 1.0 }, DiffTerm { t: 1, x: 1, c: 0.5 }]);
    let l1 = PolyDiffOp::from_terms([DiffTerm { t: 0, x: 2, c: 1.0 }, DiffTerm { t: 0, x: 0, c: -1.0 }]);
    (l, l1)
}

/// `f = (1 + xt, x², t)`.
pub fn mixed_problem() -> MixedProblem {
    let (l, l1) = mixed_operators();
    let f = BiSeries::from_monomials(
        3,
        &[
            (0, 0, QuasiPoly::constant(1.0)),
            (0, 1, QuasiPoly::monomial(1.0, 1)),
            (1, 2, QuasiPoly::constant(1.0)),
            (2, 0, QuasiPoly::monomial(1.0, 1)),
        ],
    );
    MixedProblem { b: example_one_matrix(), l, l1, f }
}
