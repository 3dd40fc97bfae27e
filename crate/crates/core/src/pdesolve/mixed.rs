//! `B·L u = L₁u + f` with constant-coefficient operators in `(x, t)` and polynomial data.

use serde::{Deserialize, Serialize};

use super::cauchy::{solve_kovalevskaya_series, CauchyProblem, CauchyTerm};
use super::operator::{reduce_split_system, PolyDiffOp, SplitSystem};
use super::{Construction, PdeError, PdeReport, ResidualGrid};
use crate::chain::ChainKind;
use crate::funcalg::BiSeries;
use crate::linops::{self, DenseMatrix};
use crate::tolerance::Tolerances;

/// `B·L u = L₁u + f` with `L = Σ a_{k₁k₂}∂^{k₁}_t∂^{k₂}_x` of order `n` and `L₁` of order `m < n`.
///
/// `f` is a polynomial series in `x` with polynomial `t`-coefficients.
/// JSON: `{"B": matrix, "L": [{"t","x","c"}…], "L1": […], "f": series}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedProblem {
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    #[serde(rename = "L")]
    pub l: PolyDiffOp,
    #[serde(rename = "L1")]
    pub l1: PolyDiffOp,
    pub f: BiSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixedOptions {
    pub truncation: usize,
    pub construction: Construction,
    pub grid: ResidualGrid,
    pub residual_limit: f64,
}

impl Default for MixedOptions {
    fn default() -> Self {
        Self {
            truncation: 16,
            construction: Construction::Complement,
            grid: ResidualGrid::new((0.0, 0.5), (0.0, 0.5), 11, 11),
            residual_limit: 1e-4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MixedSolution {
    pub split: SplitSystem,
    /// `u₁ = A₂u` as a series in `t` with `x`-coefficients.
    pub u1: BiSeries,
    /// `u` as a series in `x` with `t`-coefficients.
    pub u: BiSeries,
    pub report: PdeReport,
}

impl MixedProblem {
    pub fn orders(&self) -> (usize, usize) {
        (self.l.order(), self.l1.order())
    }

    fn validate(&self) -> Result<(usize, usize), PdeError> {
        let nn = self.b.rows();
        if !self.b.is_square() || self.f.dim() != nn {
            return Err(PdeError::DimensionMismatch { expected: nn, found: self.f.dim() });
        }
        let (n, m) = self.orders();
        if m >= n {
            return Err(PdeError::InvalidProblem(format!("order of L1 ({m}) must be below the order of L ({n})")));
        }
        if self.l.coeff(n, 0) == 0.0 || self.l.coeff(0, n) != 0.0 {
            return Err(PdeError::Unsupported("needs a_{n0} ≠ 0 and a_{0n} = 0".into()));
        }
        if self.l1.coeff(0, m) == 0.0 || (m > 0 && self.l1.coeff(m, 0) != 0.0) {
            return Err(PdeError::Unsupported("needs c_{0m} ≠ 0 and c_{m0} = 0".into()));
        }
        if m == 0 {
            return Err(PdeError::Unsupported("L1 of order 0 leaves no Cauchy problem in x".into()));
        }
        if !self.f.coeffs().iter().all(|c| c.components().iter().all(|q| q.is_polynomial())) {
            return Err(PdeError::Unsupported("source must be polynomial in x and t".into()));
        }
        Ok((n, m))
    }

    /// `B·L u − L₁u − f`, exact on series in `x`.
    pub fn residual_series(&self, u: &BiSeries) -> BiSeries {
        self.l.apply_series(u).apply(&self.b).sub(&self.l1.apply_series(u)).sub(&self.f)
    }
}

fn transposed(s: &BiSeries) -> Result<BiSeries, PdeError> {
    s.transpose().ok_or_else(|| PdeError::Unsupported("series coefficients are not polynomial".into()))
}

/// Series solution with zero data `∂ⁱ_x u|_{x=0} = 0` (`i < m`) and `A₂∂ⁱ_t u|_{t=0} = 0` (`i < n`).
///
/// Stage 1 is a Cauchy problem in `t` for `u₁ = A₂u` with leading matrix
/// `a_{n0}B₁`; stage 2 is a Cauchy problem in `x` with leading coefficient `c_{0m}`.
pub fn solve_mixed(problem: &MixedProblem, options: &MixedOptions, tolerances: &Tolerances) -> Result<MixedSolution, PdeError> {
    let (n, m) = problem.validate()?;
    let split = reduce_split_system(&problem.b, &problem.l, &problem.l1, tolerances)?;
    let chain = &split.chain;
    if chain.kind != ChainKind::Regular || chain.length != 1 {
        return Err(PdeError::Unsupported(format!(
            "needs a regular chain of length 1, found {:?} chain of length {}",
            chain.kind, chain.length
        )));
    }
    let (a1, a2, b1) = (chain.factor(1), chain.factor(2), chain.member(1));
    let r = b1.rows();
    let nn = problem.b.rows();
    let k = options.truncation;

    // stage 1: Cauchy variable t, transverse x
    let mut terms = Vec::new();
    for d in problem.l.terms() {
        if (d.t, d.x) != (n, 0) {
            terms.push(CauchyTerm { matrix: b1.scale(-d.c), cauchy_order: d.t, transverse_order: d.x });
        }
    }
    for d in problem.l1.terms() {
        terms.push(CauchyTerm { matrix: DenseMatrix::identity(r).scale(d.c), cauchy_order: d.t, transverse_order: d.x });
    }
    let stage1 = CauchyProblem { lead: b1.scale(problem.l.coeff(n, 0)), order: n, terms, source: transposed(&problem.f.apply(a2))? };
    let u1 = solve_kovalevskaya_series(&stage1, k, tolerances)?;

    let lift = a1.matmul(&linops::invert(b1, tolerances).map_err(PdeError::SingularTerminal)?);
    let complement = DenseMatrix::identity(nn).sub(&lift.matmul(a2));
    let (source, range_part) = match options.construction {
        Construction::Complement => (problem.f.apply(&complement).neg(), transposed(&u1.apply(&lift))?),
        Construction::Literal => {
            let mut lu1 = BiSeries::zeros(r, 0);
            for d in problem.l.terms() {
                lu1 = lu1.add(&u1.derivative(d.t, d.x).scale(d.c));
            }
            (transposed(&lu1.apply(a1))?.sub(&problem.f), BiSeries::zeros(nn, 0))
        }
    };

    // stage 2: Cauchy variable x, transverse t
    let stage2 = CauchyProblem {
        lead: DenseMatrix::identity(nn).scale(problem.l1.coeff(0, m)),
        order: m,
        terms: problem
            .l1
            .terms()
            .filter(|d| (d.t, d.x) != (0, m))
            .map(|d| CauchyTerm { matrix: DenseMatrix::identity(nn).scale(-d.c), cauchy_order: d.x, transverse_order: d.t })
            .collect(),
        source,
    };
    let w = solve_kovalevskaya_series(&stage2, k, tolerances)?;
    let u = range_part.add(&w);

    let grid = &options.grid;
    let (xs, ts) = (grid.xs(), grid.ts());
    let residual = problem.residual_series(&u);
    let residual_original = grid.sup(|x, t| residual.eval(x, t));
    let stage_residuals = vec![stage1.residual_on(&u1, &ts, &xs), stage2.residual_on(&w, &xs, &ts)];

    let mut bc: f64 = 0.0;
    let mut full: f64 = 0.0;
    for i in 0..m {
        let d = u.d_cauchy_n(i);
        for &t in &ts {
            let v = d.eval(0.0, t);
            bc = bc.max(complement.matvec(&v).iter().fold(0.0, |a: f64, x| a.max(x.abs())));
            full = full.max(v.iter().fold(0.0, |a: f64, x| a.max(x.abs())));
        }
    }
    let mut ic: f64 = 0.0;
    for i in 0..n {
        let d = u.d_transverse_n(i).apply(a2);
        for &x in &xs {
            ic = ic.max(d.eval(x, 0.0).iter().fold(0.0, |a: f64, v| a.max(v.abs())));
        }
    }
    let report = PdeReport {
        residual_original,
        residual_stages: stage_residuals,
        bc_violation: bc,
        ic_violation: ic,
        full_condition_violation: full,
        constraint_violation: None,
    };
    log::info!("system (n={n}, m={m}): residual {:.3e}, stages {:?}", residual_original, report.residual_stages);
    if residual_original > options.residual_limit {
        return Err(PdeError::ResidualTooLarge { residual: residual_original, limit: options.residual_limit });
    }
    Ok(MixedSolution { split, u1, u, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::QuasiPoly;
    use crate::pdesolve::operator::DiffTerm;

    fn example_one() -> DenseMatrix {
        DenseMatrix::from_rows(&[[0.0, 2.0, 2.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
    }

    fn ops() -> (PolyDiffOp, PolyDiffOp) {
        let l = PolyDiffOp::from_terms([DiffTerm { t: 3, x: 0, c: 1.0 }, DiffTerm { t: 1, x: 1, c: 0.5 }]);
        let l1 = PolyDiffOp::from_terms([DiffTerm { t: 0, x: 2, c: 1.0 }, DiffTerm { t: 0, x: 0, c: -1.0 }]);
        (l, l1)
    }

    /// `u = x²t³·(1, 2, −1)` meets every condition, so the solver must return it.
    fn exact_problem() -> (MixedProblem, BiSeries) {
        let (l, l1) = ops();
        let v = [1.0, 2.0, -1.0];
        let u = BiSeries::from_monomials(
            3,
            &[(0, 2, QuasiPoly::monomial(v[0], 3)), (1, 2, QuasiPoly::monomial(v[1], 3)), (2, 2, QuasiPoly::monomial(v[2], 3))],
        );
        let b = example_one();
        let f = l.apply_series(&u).apply(&b).sub(&l1.apply_series(&u));
        (MixedProblem { b, l, l1, f }, u)
    }

    #[test]
    fn zero_source() {
        let (l, l1) = ops();
        let p = MixedProblem { b: example_one(), l, l1, f: BiSeries::zeros(3, 0) };
        let sol = solve_mixed(&p, &MixedOptions::default(), &Tolerances::default()).unwrap();
        assert!(sol.u.is_zero());
    }

    #[test]
    fn recovers_polynomial_solution() {
        let (p, exact) = exact_problem();
        for construction in [Construction::Complement, Construction::Literal] {
            let opts = MixedOptions { construction, ..MixedOptions::default() };
            let sol = solve_mixed(&p, &opts, &Tolerances::default()).unwrap();
            let err = opts.grid.sup(|x, t| sol.u.eval(x, t).iter().zip(exact.eval(x, t)).map(|(a, b)| a - b).collect());
            assert!(err < 1e-12, "{construction:?}: {err}");
            assert!(sol.report.full_condition_violation < 1e-12);
        }
    }

    #[test]
    fn generic_source() {
        let (l, l1) = ops();
        let f = BiSeries::from_monomials(
            3,
            &[
                (0, 0, QuasiPoly::constant(1.0)),
                (0, 1, QuasiPoly::monomial(1.0, 1)),
                (1, 2, QuasiPoly::constant(1.0)),
                (2, 0, QuasiPoly::monomial(1.0, 1)),
            ],
        );
        let p = MixedProblem { b: example_one(), l, l1, f };
        let t = Tolerances::default();
        let sol = solve_mixed(&p, &MixedOptions::default(), &t).unwrap();
        assert!(sol.report.residual_original < 1e-6, "{:?}", sol.report);
        assert!(sol.report.residual_stages.iter().all(|&r| r < 1e-6), "{:?}", sol.report);
        assert!(sol.report.bc_violation < 1e-12 && sol.report.ic_violation < 1e-12, "{:?}", sol.report);
        let literal = MixedOptions { construction: Construction::Literal, ..MixedOptions::default() };
        assert!(matches!(solve_mixed(&p, &literal, &t), Err(PdeError::ResidualTooLarge { .. })));
    }

    #[test]
    fn unsupported_cases() {
        let (l, l1) = ops();
        let t = Tolerances::default();
        let opts = MixedOptions::default();
        let no_lead = PolyDiffOp::from_terms([DiffTerm { t: 2, x: 1, c: 1.0 }]);
        let p = MixedProblem { b: example_one(), l: no_lead, l1: l1.clone(), f: BiSeries::zeros(3, 0) };
        assert!(matches!(solve_mixed(&p, &opts, &t), Err(PdeError::Unsupported(_))));
        let f = BiSeries::from_monomials(3, &[(0, 0, QuasiPoly::exp(1.0, 1.0))]);
        let p = MixedProblem { b: example_one(), l: l.clone(), l1: l1.clone(), f };
        assert!(matches!(solve_mixed(&p, &opts, &t), Err(PdeError::Unsupported(_))));
        let mut nil = DenseMatrix::zeros(3, 3);
        nil[(0, 1)] = 1.0;
        nil[(1, 2)] = 1.0;
        let p = MixedProblem { b: nil, l, l1, f: BiSeries::zeros(3, 0) };
        assert!(matches!(solve_mixed(&p, &opts, &t), Err(PdeError::Unsupported(_))));
    }

    #[test]
    fn json_round_trip() {
        let (p, _) = exact_problem();
        let back: MixedProblem = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
