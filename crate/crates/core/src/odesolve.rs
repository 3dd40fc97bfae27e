//! Irregular ODE systems `B·u′ = u + f(t)` with singular `B`.
//!
//! A regular chain reduces the system to the terminal Cauchy problem
//! `B_p u_p′ = u_p + A_{2p}…A₂ f`, `u_p(0) = c₀`, solved by RK4. Each earlier
//! stage is `u_i = A_{2i+1}u_{i+1}′ − A_{2i}…A₂ f` and finally
//! `u = A₁u₁′ − f`. Stage derivatives are taken through the terminal equation
//! itself, `u_p′ = B_p⁻¹(u_p + f_p)`, so every stage is an affine image
//! `M_i·u_p(t) + q_i(t)` with exact quasi-polynomial `q_i` (see [`StageMap`]).
//!
//! A singular chain means `B` is nilpotent; the recursion
//! `u_n = −f + B·u_{n−1}′` reaches a fixed point after at most `p+1` steps and
//! is carried out exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{build_chain, ChainError, ChainKind, SkeletonChain};
use crate::funcalg::{exp_convolve, uniform_grid, FuncalgError, QuasiPolyVector, Trajectory};
use crate::linops::{self, DenseMatrix, LinopsError};
use crate::tolerance::Tolerances;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Linops(#[from] LinopsError),
    #[error(transparent)]
    Funcalg(#[from] FuncalgError),
    #[error("chain mismatch: expected a {expected:?} chain, found {found:?}")]
    ChainMismatch { expected: ChainKind, found: ChainKind },
    #[error("singular chains determine the solution uniquely; initial conditions are not accepted")]
    InitialConditionRejected,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("residual {residual:e} exceeds limit {limit:e}")]
    ResidualTooLarge { residual: f64, limit: f64 },
    #[error("nilpotent recursion did not reach a fixed point after {iterations} steps (change {change:e})")]
    RecursionDidNotTerminate { iterations: usize, change: f64 },
}

fn default_horizon() -> f64 {
    1.0
}

fn default_step() -> f64 {
    1e-3
}

/// `B·u′ = u + f(t)` on `[0, T]` with step `h`.
///
/// JSON: `{"B": matrix, "f": [quasipoly…], "c0": [reals]|null, "T": real, "h": real}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrregularOdeProblem {
    #[serde(rename = "B")]
    pub b: DenseMatrix,
    pub f: QuasiPolyVector,
    #[serde(default)]
    pub c0: Option<Vec<f64>>,
    #[serde(rename = "T", default = "default_horizon")]
    pub horizon: f64,
    #[serde(rename = "h", default = "default_step")]
    pub step: f64,
}

impl IrregularOdeProblem {
    pub fn new(b: DenseMatrix, f: QuasiPolyVector) -> Self {
        Self { b, f, c0: None, horizon: default_horizon(), step: default_step() }
    }

    pub fn with_c0(mut self, c0: Vec<f64>) -> Self {
        self.c0 = Some(c0);
        self
    }

    pub fn with_horizon(mut self, t: f64, h: f64) -> Self {
        self.horizon = t;
        self.step = h;
        self
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        if !self.b.is_square() {
            return Err(ChainError::NotSquare { rows: self.b.rows(), cols: self.b.cols() }.into());
        }
        if self.f.dim() != self.b.rows() {
            return Err(OdeError::DimensionMismatch { expected: self.b.rows(), found: self.f.dim() });
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(OdeError::InvalidProblem(format!("horizon T must be positive, got {}", self.horizon)));
        }
        if !(self.step > 0.0 && self.step <= self.horizon) {
            return Err(OdeError::InvalidProblem(format!("step h must lie in (0, T], got {}", self.step)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Vec<f64>, OdeError> {
        Ok(uniform_grid(self.horizon, self.step)?)
    }
}

/// Stage `u_i(t) = m·u_p(t) + q(t)` in terms of the terminal solution `u_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct StageMap {
    pub m: DenseMatrix,
    pub q: QuasiPolyVector,
}

impl StageMap {
    /// Derivative through `u_p′ = E·(u_p + f_p)`, `E = B_p⁻¹`.
    fn derivative(&self, e: &DenseMatrix, fp: &QuasiPolyVector) -> Self {
        let me = self.m.matmul(e);
        Self { q: me.apply(fp).add(&self.q.derivative()), m: me }
    }

    pub fn eval(&self, up: &[f64], t: f64) -> Vec<f64> {
        self.m.matvec(up).into_iter().zip(self.q.eval(t)).map(|(a, b)| a + b).collect()
    }

    pub fn sample(&self, up: &Trajectory) -> Trajectory {
        let values = up.times().iter().zip(up.values()).map(|(&t, v)| self.eval(v, t)).collect();
        Trajectory::new(up.times().to_vec(), values).expect("affine image of a valid trajectory")
    }
}

/// Stage maps `[u, u₁, …, u_p]` for a regular chain (index `i` is `u_i`, index 0 is `u`).
pub fn regular_stage_maps(chain: &SkeletonChain, f: &QuasiPolyVector, tolerances: &Tolerances) -> Result<Vec<StageMap>, OdeError> {
    if chain.kind != ChainKind::Regular {
        return Err(OdeError::ChainMismatch { expected: ChainKind::Regular, found: chain.kind });
    }
    let p = chain.length;
    let terminal = chain.terminal().expect("regular chains have a terminal member");
    let e = linops::invert(terminal, tolerances)?;
    let fp = chain.projection(p).apply(f);
    let rp = terminal.rows();
    let mut maps = vec![StageMap { m: DenseMatrix::identity(rp), q: QuasiPolyVector::zeros(rp) }; p + 1];
    for i in (0..p).rev() {
        let d = maps[i + 1].derivative(&e, &fp);
        let a = chain.factor(2 * i + 1);
        let fi = chain.projection(i).apply(f);
        maps[i] = StageMap { m: a.matmul(&d.m), q: a.apply(&d.q).sub(&fi) };
    }
    Ok(maps)
}

/// Result of either solution path.
#[derive(Clone, Debug)]
pub struct ChainSolution {
    pub chain: SkeletonChain,
    /// Stages `[u_p, u_{p−1}, …, u₁]` on the grid. For singular chains these are
    /// the projections `A_{2i}…A₂·u` of the exact solution.
    pub stages: Vec<Trajectory>,
    /// Final solution on the grid.
    pub u: Trajectory,
    /// Closed form of `u` on the singular path.
    pub exact: Option<QuasiPolyVector>,
    /// Affine stage maps on the regular path, `[u, u₁, …, u_p]`.
    pub stage_maps: Vec<StageMap>,
    /// Number of recursion steps on the singular path.
    pub iterations: usize,
    /// `max_t ‖B u′ − u − f‖_∞` on the grid.
    pub residual: f64,
    /// The accepted bound `τ_res·(1 + ‖f‖_∞)`.
    pub residual_limit: f64,
}

impl ChainSolution {
    /// `max_{i,t} ‖A_{2i}…A₂·u(t) − u_i(t)‖_∞`.
    pub fn stage_consistency(&self) -> f64 {
        let p = self.chain.length;
        let mut worst: f64 = 0.0;
        for (k, stage) in self.stages.iter().enumerate() {
            let proj = self.chain.projection(p - k);
            for (u, s) in self.u.values().iter().zip(stage.values()) {
                for (a, b) in proj.matvec(u).iter().zip(s) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        worst
    }
}

fn sup_on_grid(f: &QuasiPolyVector, grid: &[f64]) -> f64 {
    grid.iter().flat_map(|&t| f.eval(t)).fold(0.0, |m, x| m.max(x.abs()))
}

pub fn residual_limit(f: &QuasiPolyVector, grid: &[f64], tolerances: &Tolerances) -> f64 {
    tolerances.residual * (1.0 + sup_on_grid(f, grid))
}

/// Builds the chain of `B` and dispatches on its kind.
pub fn solve(problem: &IrregularOdeProblem, tolerances: &Tolerances) -> Result<ChainSolution, OdeError> {
    problem.validate()?;
    let chain = build_chain(&problem.b, tolerances.rank, tolerances)?;
    match chain.kind {
        ChainKind::Regular => regular_with_chain(problem, chain, tolerances),
        ChainKind::Singular => singular_with_chain(problem, chain, tolerances),
    }
}

pub fn solve_regular(problem: &IrregularOdeProblem, tolerances: &Tolerances) -> Result<ChainSolution, OdeError> {
    problem.validate()?;
    let chain = build_chain(&problem.b, tolerances.rank, tolerances)?;
    regular_with_chain(problem, chain, tolerances)
}

pub fn solve_singular(problem: &IrregularOdeProblem, tolerances: &Tolerances) -> Result<ChainSolution, OdeError> {
    problem.validate()?;
    let chain = build_chain(&problem.b, tolerances.rank, tolerances)?;
    singular_with_chain(problem, chain, tolerances)
}

fn regular_with_chain(problem: &IrregularOdeProblem, chain: SkeletonChain, tolerances: &Tolerances) -> Result<ChainSolution, OdeError> {
    let maps = regular_stage_maps(&chain, &problem.f, tolerances)?;
    let p = chain.length;
    let terminal = chain.terminal().expect("regular chain");
    let rp = terminal.rows();
    let c0 = match &problem.c0 {
        None => vec![0.0; rp],
        Some(c) if c.len() == rp => c.clone(),
        Some(c) => return Err(OdeError::DimensionMismatch { expected: rp, found: c.len() }),
    };
    let grid = problem.grid()?;
    let e = linops::invert(terminal, tolerances)?;
    let fp = chain.projection(p).apply(&problem.f);
    let up = exp_convolve(&e, &fp, &grid, &c0)?;
    log::info!("regular chain, p = {p}, terminal dimension {rp}, {} grid points", grid.len());

    let stages: Vec<Trajectory> = (1..=p).rev().map(|i| maps[i].sample(&up)).collect();
    let u = maps[0].sample(&up);
    let residual = verify_residual(&problem.b, &problem.f, &u)?;
    let limit = residual_limit(&problem.f, &grid, tolerances);
    log::debug!("regular residual {residual:e} (limit {limit:e})");
    if residual > limit {
        return Err(OdeError::ResidualTooLarge { residual, limit });
    }
    Ok(ChainSolution { chain, stages, u, exact: None, stage_maps: maps, iterations: 0, residual, residual_limit: limit })
}

/// Runs `u₀ = −f`, `u_n = −f + B·u_{n−1}′` until a fixed point; returns it and the step count.
pub fn nilpotent_recursion(b: &DenseMatrix, f: &QuasiPolyVector, max_steps: usize) -> Result<(QuasiPolyVector, usize), OdeError> {
    let mf = f.neg();
    let mut current = mf.clone();
    let mut change = f64::INFINITY;
    for step in 1..=max_steps {
        let next = mf.add(&b.apply(&current.derivative()));
        let next = next.pruned(1e-14 * next.max_coeff().max(1.0));
        change = next.sub(&current).max_coeff();
        if change <= 1e-12 * next.max_coeff().max(1.0) {
            return Ok((next, step));
        }
        current = next;
    }
    Err(OdeError::RecursionDidNotTerminate { iterations: max_steps, change })
}

fn singular_with_chain(problem: &IrregularOdeProblem, chain: SkeletonChain, tolerances: &Tolerances) -> Result<ChainSolution, OdeError> {
    if chain.kind != ChainKind::Singular {
        return Err(OdeError::ChainMismatch { expected: ChainKind::Singular, found: chain.kind });
    }
    if problem.c0.as_ref().is_some_and(|c| !c.is_empty()) {
        return Err(OdeError::InitialConditionRejected);
    }
    let p = chain.length;
    let (u_exact, iterations) = nilpotent_recursion(&problem.b, &problem.f, p + 1)?;
    log::info!("singular chain, p = {p}, fixed point after {iterations} steps");
    let grid = problem.grid()?;
    let residual = verify_residual_exact(&problem.b, &problem.f, &u_exact, &grid)?;
    let limit = residual_limit(&problem.f, &grid, tolerances);
    if residual > limit {
        return Err(OdeError::ResidualTooLarge { residual, limit });
    }
    let stages = (1..=p).rev().map(|i| Trajectory::sample(&chain.projection(i).apply(&u_exact), &grid)).collect();
    Ok(ChainSolution {
        u: Trajectory::sample(&u_exact, &grid),
        chain,
        stages,
        exact: Some(u_exact),
        stage_maps: Vec::new(),
        iterations,
        residual,
        residual_limit: limit,
    })
}

/// `max_t ‖B·u′(t) − u(t) − f(t)‖_∞` for a sampled `u`, with `u′` from the
/// 5-point stencil (one-sided at the ends).
pub fn verify_residual(b: &DenseMatrix, f: &QuasiPolyVector, u: &Trajectory) -> Result<f64, OdeError> {
    if f.dim() != b.rows() || u.dim() != b.cols() {
        return Err(OdeError::DimensionMismatch { expected: b.rows(), found: u.dim().min(f.dim()) });
    }
    let du = u.derivative()?;
    let mut worst: f64 = 0.0;
    for (i, &t) in u.times().iter().enumerate() {
        let bdu = b.matvec(du.value(i));
        for ((x, ui), fi) in bdu.iter().zip(u.value(i)).zip(f.eval(t)) {
            worst = worst.max((x - ui - fi).abs());
        }
    }
    Ok(worst)
}

/// As [`verify_residual`] with the exact derivative of a closed-form `u`.
pub fn verify_residual_exact(b: &DenseMatrix, f: &QuasiPolyVector, u: &QuasiPolyVector, grid: &[f64]) -> Result<f64, OdeError> {
    if f.dim() != b.rows() || u.dim() != b.cols() {
        return Err(OdeError::DimensionMismatch { expected: b.rows(), found: u.dim().min(f.dim()) });
    }
    let r = b.apply(&u.derivative()).sub(u).sub(f);
    Ok(sup_on_grid(&r, grid))
}
