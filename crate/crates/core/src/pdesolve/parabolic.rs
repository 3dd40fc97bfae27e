//! `B ∂ⁿ_t u = a² ∂²_x u + f` on `0 < x < 1` with homogeneous boundary and initial data.
//! The chain path handles any singular `B` with a regular chain of length one; the
//! projector path handles symmetric `B`.

use serde::{Deserialize, Serialize};

use super::cauchy::{solve_kovalevskaya_series, CauchyProblem, CauchyTerm};
use super::field::XtField;
use super::heat::{solve_heat_source, HeatOptions, HeatSolution};
use super::{Construction, PdeError, PdeReport, ResidualGrid};
use crate::chain::{build_chain, ChainKind, SkeletonChain};
use crate::funcalg::BiSeries;
use crate::linops::{self, DenseMatrix, LinopsError};
use crate::tolerance::Tolerances;

/// `B·∂ⁿ_x u = (∂_t − a²∂²_x)u + f(x,t)` on `x ∈ [0,1]`, `t ≥ 0`, `n ≥ 3`.
///
/// JSON: `{"B": matrix, "n": 3, "a": 1.0, "f": field}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParabolicProblem {
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    pub n: usize,
    pub a: f64,
    pub f: XtField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParabolicOptions {
    pub truncation: usize,
    pub heat: HeatOptions,
    pub construction: Construction,
    pub grid: ResidualGrid,
    pub residual_limit: f64,
}

impl Default for ParabolicOptions {
    fn default() -> Self {
        Self {
            truncation: 12,
            heat: HeatOptions::default(),
            construction: Construction::Complement,
            grid: ResidualGrid::new((0.1, 0.9), (0.0, 0.2), 17, 11),
            residual_limit: 1e-4,
        }
    }
}

impl ParabolicProblem {
    fn validate(&self) -> Result<(), PdeError> {
        if !self.b.is_square() {
            return Err(PdeError::DimensionMismatch { expected: self.b.rows(), found: self.b.cols() });
        }
        if self.f.dim() != self.b.rows() {
            return Err(PdeError::DimensionMismatch { expected: self.b.rows(), found: self.f.dim() });
        }
        if self.n < 3 {
            return Err(PdeError::InvalidProblem(format!("derivative order n must be at least 3, got {}", self.n)));
        }
        if !(self.a.is_finite() && self.a != 0.0) {
            return Err(PdeError::InvalidProblem(format!("diffusivity a must be non-zero, got {}", self.a)));
        }
        Ok(())
    }

    /// `B·∂ⁿ_x u − (∂_t − a²∂²_x)u − f` at one point.
    pub fn residual_at(&self, u: &XtField, x: f64, t: f64) -> Vec<f64> {
        let dn = self.b.matvec(&u.eval_derivative(self.n, 0, x, t));
        let ut = u.eval_derivative(0, 1, x, t);
        let uxx = u.eval_derivative(2, 0, x, t);
        let f = self.f.eval(x, t);
        (0..dn.len()).map(|i| dn[i] - ut[i] + self.a * self.a * uxx[i] - f[i]).collect()
    }

    pub fn residual_on(&self, u: &XtField, grid: &ResidualGrid) -> f64 {
        grid.sup(|x, t| self.residual_at(u, x, t))
    }
}

fn heat_type_terms(dim: usize, a: f64, lower: &DenseMatrix) -> Vec<CauchyTerm> {
    debug_assert_eq!(lower.rows(), dim);
    vec![
        CauchyTerm { matrix: lower.clone(), cauchy_order: 0, transverse_order: 1 },
        CauchyTerm { matrix: lower.scale(-a * a), cauchy_order: 2, transverse_order: 0 },
    ]
}

/// Chain-path solution.
#[derive(Clone, Debug)]
pub struct ParabolicSolution {
    pub chain: SkeletonChain,
    /// `u₁ = A₂u` as a series in `x`.
    pub u1: BiSeries,
    /// The heat stage.
    pub heat: HeatSolution,
    /// Reassembled `u`.
    pub u: XtField,
    pub report: PdeReport,
}

fn regular_chain_of_length_one(b: &DenseMatrix, tolerances: &Tolerances) -> Result<SkeletonChain, PdeError> {
    let chain = build_chain(b, tolerances.rank, tolerances)?;
    if chain.kind != ChainKind::Regular || chain.length != 1 {
        return Err(PdeError::Unsupported(format!(
            "needs a regular chain of length 1 (invertible B₁), found {:?} chain of length {}",
            chain.kind, chain.length
        )));
    }
    Ok(chain)
}

/// Solves by the skeleton chain: a Cauchy series in `x` for `u₁ = A₂u`, then a heat problem.
pub fn solve_parabolic(
    problem: &ParabolicProblem,
    options: &ParabolicOptions,
    tolerances: &Tolerances,
) -> Result<ParabolicSolution, PdeError> {
    problem.validate()?;
    let chain = regular_chain_of_length_one(&problem.b, tolerances)?;
    let (a1, a2, b1) = (chain.factor(1), chain.factor(2), chain.member(1));
    let r = b1.rows();
    let n = problem.n;
    let k = options.truncation;
    if k < n {
        return Err(PdeError::TruncationTooSmall { degree: 0, truncation: k, order: n });
    }

    let a2f = problem.f.apply(a2);
    let series = CauchyProblem {
        lead: b1.clone(),
        order: n,
        terms: heat_type_terms(r, problem.a, &DenseMatrix::identity(r)),
        source: a2f.taylor_in_x(k - n),
    };
    let u1 = solve_kovalevskaya_series(&series, k, tolerances)?;
    let lift = a1.matmul(&linops::invert(b1, tolerances).map_err(PdeError::SingularTerminal)?);
    let q = lift.matmul(a2);
    let complement = DenseMatrix::identity(q.rows()).sub(&q);

    let heat_source = match options.construction {
        Construction::Complement => problem.f.apply(&complement).neg(),
        Construction::Literal => XtField::from_poly(u1.d_cauchy_n(n).apply(a1)).sub(&problem.f),
    };
    let heat = solve_heat_source(&heat_source, problem.a, &options.heat)?;
    let u = match options.construction {
        Construction::Complement => XtField::from_poly(u1.apply(&lift)).add(&heat.field),
        Construction::Literal => heat.field.clone(),
    };

    let grid = &options.grid;
    let u1_field = XtField::from_poly(u1.clone());
    let a = problem.a;
    let stage1 = grid.sup(|x, t| {
        let lhs = b1.matvec(&u1_field.eval_derivative(n, 0, x, t));
        let ut = u1_field.eval_derivative(0, 1, x, t);
        let uxx = u1_field.eval_derivative(2, 0, x, t);
        let g = a2f.eval(x, t);
        (0..r).map(|i| lhs[i] - ut[i] + a * a * uxx[i] - g[i]).collect()
    });
    let heat_residual = heat.field.heat_image(a).sub(&heat_source);
    let stage2 = grid.sup(|x, t| heat_residual.eval(x, t));
    let residual_original = problem.residual_on(&u, grid);

    let report = PdeReport {
        residual_original,
        residual_stages: vec![stage1, stage2],
        bc_violation: condition_violation(&u, a2, &complement, n, grid),
        ic_violation: complement_initial_violation(&u, &complement),
        full_condition_violation: full_condition_violation(&u, grid),
        constraint_violation: None,
    };
    log::info!(
        "chain path: residual {:.3e}, stages {:?}, bc {:.3e}",
        report.residual_original,
        report.residual_stages,
        report.bc_violation
    );
    if report.residual_original > options.residual_limit {
        return Err(PdeError::ResidualTooLarge { residual: report.residual_original, limit: options.residual_limit });
    }
    Ok(ParabolicSolution { chain, u1, heat, u, report })
}

/// `sup_t` of `|A₂∂ⁱ_x u(0,t)|` for `i < n` and of `|(I−Q)u|` at `x = 0, 1`.
fn condition_violation(u: &XtField, a2: &DenseMatrix, complement: &DenseMatrix, n: usize, grid: &ResidualGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for t in grid.ts() {
        for i in 0..n {
            for v in a2.matvec(&u.eval_derivative(i, 0, 0.0, t)) {
                worst = worst.max(v.abs());
            }
        }
        for x in [0.0, 1.0] {
            for v in complement.matvec(&u.eval(x, t)) {
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

fn complement_initial_violation(u: &XtField, complement: &DenseMatrix) -> f64 {
    (0..=100).flat_map(|i| complement.matvec(&u.eval(i as f64 / 100.0, 0.0))).fold(0.0, |m, v| m.max(v.abs()))
}

/// Dirichlet and initial values of the full `u`.
fn full_condition_violation(u: &XtField, grid: &ResidualGrid) -> f64 {
    let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    u.sup_on(&[0.0, 1.0], &grid.ts()).max(u.sup_on(&xs, &[0.0]))
}

/// `P` onto `ker B`, `Γ = (B + P)⁻¹` and the kernel basis, for symmetric `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorSplit {
    pub p: DenseMatrix,
    pub gamma: DenseMatrix,
    pub kernel_basis: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorIdentities {
    /// `‖P² − P‖_max`
    pub idempotent: f64,
    /// `‖BΓ − (I − P)‖_max`
    pub complement: f64,
    /// `‖PΓ − ΓP‖_max`
    pub commute: f64,
}

impl ProjectorIdentities {
    pub fn max(&self) -> f64 {
        self.idempotent.max(self.complement).max(self.commute)
    }
}

impl ProjectorSplit {
    pub fn identities(&self, b: &DenseMatrix) -> ProjectorIdentities {
        let n = self.p.rows();
        let i = DenseMatrix::identity(n);
        ProjectorIdentities {
            idempotent: self.p.matmul(&self.p).max_diff(&self.p),
            complement: b.matmul(&self.gamma).max_diff(&i.sub(&self.p)),
            commute: self.p.matmul(&self.gamma).max_diff(&self.gamma.matmul(&self.p)),
        }
    }
}

pub fn projector_split(b: &DenseMatrix, tolerances: &Tolerances) -> Result<ProjectorSplit, PdeError> {
    let basis = linops::null_space_orthonormal(b, tolerances.rank, tolerances).map_err(|e| match e {
        LinopsError::NotSymmetric { asymmetry } => PdeError::NotSymmetric { asymmetry },
        other => PdeError::Linops(other),
    })?;
    let n = b.rows();
    let mut p = DenseMatrix::zeros(n, n);
    for phi in &basis {
        p = p.add(&DenseMatrix::outer(phi, phi));
    }
    let gamma = linops::invert(&b.add(&p), tolerances)?;
    Ok(ProjectorSplit { p, gamma, kernel_basis: basis })
}

/// Projector-path solution `u = Γv + Σcᵢφᵢ`.
#[derive(Clone, Debug)]
pub struct ProjectorSolution {
    pub split: ProjectorSplit,
    pub v: BiSeries,
    /// Heat solution for the kernel part `Σcᵢφᵢ`.
    pub kernel_part: HeatSolution,
    pub u: XtField,
    pub report: PdeReport,
}

/// Solves with the orthogonal kernel projector instead of the chain; symmetric `B` only.
pub fn solve_parabolic_projector(
    problem: &ParabolicProblem,
    options: &ParabolicOptions,
    tolerances: &Tolerances,
) -> Result<ProjectorSolution, PdeError> {
    problem.validate()?;
    let split = projector_split(&problem.b, tolerances)?;
    let nn = problem.b.rows();
    let n = problem.n;
    let k = options.truncation;
    if k < n {
        return Err(PdeError::TruncationTooSmall { degree: 0, truncation: k, order: n });
    }
    let complement = DenseMatrix::identity(nn).sub(&split.p);
    let range_source = problem.f.apply(&complement);
    let series = CauchyProblem {
        lead: DenseMatrix::identity(nn),
        order: n,
        terms: heat_type_terms(nn, problem.a, &split.gamma),
        source: range_source.taylor_in_x(k - n),
    };
    let v = solve_kovalevskaya_series(&series, k, tolerances)?;
    let kernel_source = problem.f.apply(&split.p).neg();
    let kernel_part = solve_heat_source(&kernel_source, problem.a, &options.heat)?;
    let u = XtField::from_poly(v.apply(&split.gamma)).add(&kernel_part.field);

    let grid = &options.grid;
    let a = problem.a;
    let v_field = XtField::from_poly(v.clone());
    let gv = XtField::from_poly(v.apply(&split.gamma));
    let stage1 = grid.sup(|x, t| {
        let dn = v_field.eval_derivative(n, 0, x, t);
        let gt = gv.eval_derivative(0, 1, x, t);
        let gxx = gv.eval_derivative(2, 0, x, t);
        let g = range_source.eval(x, t);
        (0..nn).map(|i| dn[i] - gt[i] + a * a * gxx[i] - g[i]).collect()
    });
    let heat_residual = kernel_part.field.heat_image(a).sub(&kernel_source);
    let stage2 = grid.sup(|x, t| heat_residual.eval(x, t));
    let constraint = grid.sup(|x, t| {
        let vx = v_field.eval(x, t);
        split.kernel_basis.iter().map(|phi| linops::dot(phi, &vx)).collect()
    });
    let report = PdeReport {
        residual_original: problem.residual_on(&u, grid),
        residual_stages: vec![stage1, stage2],
        bc_violation: kernel_part.field.sup_on(&[0.0, 1.0], &grid.ts()),
        ic_violation: kernel_part.ic_error,
        full_condition_violation: full_condition_violation(&u, grid),
        constraint_violation: Some(constraint),
    };
    log::info!("projector path: residual {:.3e}, constraint {:.3e}", report.residual_original, constraint);
    if report.residual_original > options.residual_limit {
        return Err(PdeError::ResidualTooLarge { residual: report.residual_original, limit: options.residual_limit });
    }
    Ok(ProjectorSolution { split, v, kernel_part, u, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::{QuasiPoly, QuasiPolyVector};
    use crate::generate::random_symmetric_singular;
    use crate::pdesolve::field::SineMode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn example_one() -> DenseMatrix {
        DenseMatrix::from_rows(&[[0.0, 2.0, 2.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
    }

    fn generic_source() -> XtField {
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

    #[test]
    fn zero_source_zero_solution() {
        let p = ParabolicProblem { b: example_one(), n: 3, a: 1.0, f: XtField::zeros(3) };
        let sol = solve_parabolic(&p, &ParabolicOptions::default(), &Tolerances::default()).unwrap();
        assert!(sol.u.is_zero());
        assert_eq!(sol.report.residual_original, 0.0);
    }

    #[test]
    fn killed_series_stage_is_pure_heat() {
        let one = QuasiPolyVector::new(vec![QuasiPoly::zero(), QuasiPoly::constant(1.0), QuasiPoly::constant(-1.0)]);
        let f = XtField::from_modes(3, vec![SineMode { k: 1, amp: one }]);
        let p = ParabolicProblem { b: example_one(), n: 3, a: 1.0, f };
        let sol = solve_parabolic(&p, &ParabolicOptions::default(), &Tolerances::default()).unwrap();
        assert!(sol.u1.is_zero());
        let p2 = PI * PI;
        let grid = ResidualGrid::new((0.1, 0.9), (0.0, 0.2), 9, 5);
        let err = grid.sup(|x, t| {
            let oracle = (PI * x).sin() * (1.0 - (-p2 * t).exp()) / p2;
            let u = sol.u.eval(x, t);
            vec![u[0], u[1] + oracle, u[2] - oracle]
        });
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn generic_polynomial_residual() {
        let p = ParabolicProblem { b: example_one(), n: 3, a: 1.0, f: generic_source() };
        let sol = solve_parabolic(&p, &ParabolicOptions::default(), &Tolerances::default()).unwrap();
        assert!(sol.report.residual_original <= 1e-4, "{:?}", sol.report);
        assert!(sol.report.residual_stages.iter().all(|&r| r <= 1e-6), "{:?}", sol.report);
        assert!(sol.report.bc_violation <= 1e-8, "{:?}", sol.report);
    }

    #[test]
    fn literal_construction_misses_the_equation() {
        let p = ParabolicProblem { b: example_one(), n: 3, a: 1.0, f: generic_source() };
        let opts = ParabolicOptions { construction: Construction::Literal, ..ParabolicOptions::default() };
        assert!(matches!(solve_parabolic(&p, &opts, &Tolerances::default()), Err(PdeError::ResidualTooLarge { .. })));
    }

    #[test]
    fn rejects_longer_chains_and_low_order() {
        let mut j = DenseMatrix::zeros(3, 3);
        j[(0, 1)] = 1.0;
        j[(1, 2)] = 1.0;
        let p = ParabolicProblem { b: j, n: 3, a: 1.0, f: XtField::zeros(3) };
        assert!(matches!(solve_parabolic(&p, &ParabolicOptions::default(), &Tolerances::default()), Err(PdeError::Unsupported(_))));
        let p = ParabolicProblem { b: example_one(), n: 2, a: 1.0, f: XtField::zeros(3) };
        assert!(solve_parabolic(&p, &ParabolicOptions::default(), &Tolerances::default()).is_err());
    }

    #[test]
    fn projector_identities_small_cases() {
        let t = Tolerances::default();
        let s = projector_split(&DenseMatrix::diag(&[1.0, 0.0]), &t).unwrap();
        assert_eq!(s.p, DenseMatrix::diag(&[0.0, 1.0]));
        assert!(s.gamma.max_diff(&DenseMatrix::identity(2)) < 1e-15);
        let b = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let s = projector_split(&b, &t).unwrap();
        assert!(s.identities(&b).max() < 1e-10);
        let ns = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(projector_split(&ns, &t), Err(PdeError::NotSymmetric { .. })));
    }

    #[test]
    fn projector_identities_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = Tolerances::default();
        for _ in 0..100 {
            let b = random_symmetric_singular(&mut rng, 6, 3);
            let s = projector_split(&b, &t).unwrap();
            assert!(s.identities(&b).max() < 1e-10);
        }
    }

    #[test]
    fn projector_path_agrees_with_chain_path() {
        let p = ParabolicProblem { b: DenseMatrix::diag(&[1.0, 1.0, 0.0]), n: 3, a: 1.0, f: generic_source() };
        let opts = ParabolicOptions::default();
        let t = Tolerances::default();
        let chain = solve_parabolic(&p, &opts, &t).unwrap();
        let proj = solve_parabolic_projector(&p, &opts, &t).unwrap();
        let diff = opts.grid.sup(|x, tt| chain.u.eval(x, tt).iter().zip(proj.u.eval(x, tt)).map(|(a, b)| a - b).collect());
        assert!(diff < 1e-4, "{diff}");
        assert!(proj.report.constraint_violation.unwrap() < 1e-8);
    }
}
