//! Command-line front end: `chain`, `solve`, `verify` and `demo`.
//!
//! Exit codes: 0 success, 2 parse error or invertible input, 3 failed
//! verification, 4 unsupported problem parameters, 5 unknown demo.
//! Logging goes to stderr at the level named by `SKELETON_SOLVE_LOG`.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::chain::{build_chain, nilpotency_check, verify_power_identity, ChainError, ChainKind, Nilpotency};
use crate::fixtures;
use crate::funcalg::integrate::{format_sig15, round_sig15};
use crate::funcalg::{BiSeries, FuncalgError, QuasiPoly, Trajectory};
use crate::generate;
use crate::linops::DenseMatrix;
use crate::odesolve::{self, residual_limit, verify_residual, IrregularOdeProblem, OdeError};
use crate::pdesolve::field::XtField;
use crate::pdesolve::integro::{self, SeparableField, SeparableTerm};
use crate::pdesolve::mixed::solve_mixed;
use crate::pdesolve::parabolic::{projector_split, solve_parabolic, solve_parabolic_projector};
use crate::pdesolve::{PdeError, PdeReport};
use crate::problem::{IrregularProblem, ParabolicPath};
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_UNKNOWN_DEMO: i32 = 5;

pub const DEMOS: [&str; 5] = ["example1", "example2", "pde24", "integro30", "projector"];

#[derive(Debug, Parser)]
#[command(name = "skeleton-solve", version, about = "Skeleton-chain solvers for irregular linear systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Residual tolerance (ODE τ_res, PDE residual limit).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// ODE step size h.
    #[arg(long, global = true)]
    pub step: Option<f64>,
    /// Series truncation order K.
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Number of sine modes M.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Seed for generated test matrices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    /// Tolerance override `key=value` (rank, fact, null, sym, inv, kappa_max, chain, residual).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Corrupt the result before verification.
    #[arg(long, global = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify the skeleton chain of a matrix.
    Chain {
        /// JSON matrix, or any problem file with a "B" entry.
        input: Option<PathBuf>,
        /// Use a seeded random singular N×N matrix instead of a file.
        #[arg(long, value_name = "N", conflicts_with = "input")]
        random: Option<usize>,
    },
    /// Solve a problem file; writes solution.csv and solution.json.
    Solve { input: PathBuf },
    /// Re-check a written solution against its problem file.
    Verify {
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Run a bundled fixture end to end.
    Demo { name: String },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown demo {0:?}; expected one of {list}", list = DEMOS.join(", "))]
    UnknownDemo(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => EXIT_PARSE,
            Self::Verification(_) => EXIT_VERIFICATION,
            Self::Unsupported(_) => EXIT_UNSUPPORTED,
            Self::UnknownDemo(_) => EXIT_UNKNOWN_DEMO,
            Self::Io(_) => EXIT_FAILURE,
        }
    }
}

fn classify_chain(e: ChainError) -> CliError {
    match e {
        ChainError::InvertibleInput | ChainError::NotSquare { .. } | ChainError::NonFinite | ChainError::DimensionMismatch { .. } => {
            CliError::Parse(e.to_string())
        }
        ChainError::VerificationFailed { .. } => CliError::Verification(e.to_string()),
        _ => CliError::Unsupported(e.to_string()),
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::Chain(c) => classify_chain(c),
            OdeError::ResidualTooLarge { .. } | OdeError::RecursionDidNotTerminate { .. } => Self::Verification(e.to_string()),
            OdeError::InvalidProblem(_) | OdeError::DimensionMismatch { .. } => Self::Parse(e.to_string()),
            OdeError::Funcalg(FuncalgError::InvalidGrid(_)) => Self::Parse(e.to_string()),
            _ => Self::Unsupported(e.to_string()),
        }
    }
}

impl From<PdeError> for CliError {
    fn from(e: PdeError) -> Self {
        match e {
            PdeError::Chain(c) => classify_chain(c),
            PdeError::ResidualTooLarge { .. } => Self::Verification(e.to_string()),
            PdeError::InvalidProblem(_) | PdeError::DimensionMismatch { .. } => Self::Parse(e.to_string()),
            _ => Self::Unsupported(e.to_string()),
        }
    }
}

impl From<FuncalgError> for CliError {
    fn from(e: FuncalgError) -> Self {
        match e {
            FuncalgError::Csv(_) | FuncalgError::InvalidGrid(_) | FuncalgError::DimensionMismatch { .. } => Self::Parse(e.to_string()),
            _ => Self::Unsupported(e.to_string()),
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub tol: Option<f64>,
    pub step: Option<f64>,
    pub truncation: Option<usize>,
    pub modes: Option<usize>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut tolerances = Tolerances::default();
        if !cli.overrides.is_empty() {
            let mut map = serde_json::to_value(tolerances).expect("tolerances serialize");
            for kv in &cli.overrides {
                let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Parse(format!("override {kv:?} is not KEY=VALUE")))?;
                let v: f64 = v.trim().parse().map_err(|_| CliError::Parse(format!("override {kv:?}: value is not a number")))?;
                let slot = map.get_mut(k.trim()).ok_or_else(|| CliError::Parse(format!("unknown tolerance key {k:?}")))?;
                *slot = json!(v);
            }
            tolerances = serde_json::from_value(map).map_err(|e| CliError::Parse(e.to_string()))?;
        }
        if let Some(t) = cli.tol {
            tolerances.residual = t;
        }
        Ok(Self {
            tolerances,
            tol: cli.tol,
            step: cli.step,
            truncation: cli.truncation,
            modes: cli.modes,
            seed: cli.seed,
            output_dir: cli.output_dir.clone(),
            inject_fault: cli.inject_fault,
        })
    }

    /// Applies `--step`, `--truncation`, `--modes` and `--tol` to a problem's own settings.
    pub fn apply(&self, problem: &mut IrregularProblem) {
        match problem {
            IrregularProblem::Ode(p) => {
                if let Some(h) = self.step {
                    p.step = h;
                }
            }
            IrregularProblem::Mixed { options, .. } => {
                if let Some(k) = self.truncation {
                    options.truncation = k;
                }
                if let Some(t) = self.tol {
                    options.residual_limit = t;
                }
            }
            IrregularProblem::Parabolic { options, .. } => {
                if let Some(k) = self.truncation {
                    options.truncation = k;
                }
                if let Some(m) = self.modes {
                    options.heat.modes = m;
                }
                if let Some(t) = self.tol {
                    options.residual_limit = t;
                }
            }
            IrregularProblem::Integro { options, .. } => {
                if let Some(k) = self.truncation {
                    options.truncation = k;
                }
                if let Some(t) = self.tol {
                    options.residual_limit = t;
                }
            }
        }
    }
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("SKELETON_SOLVE_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let result = RunConfig::from_cli(cli).and_then(|cfg| match &cli.command {
        Command::Chain { input, random } => cmd_chain(&cfg, input.as_deref(), *random, out),
        Command::Solve { input } => cmd_solve(&cfg, input, out),
        Command::Verify { input, solution } => cmd_verify(&cfg, input, solution, out),
        Command::Demo { name } => cmd_demo(&cfg, name, out),
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            log::error!("{e}");
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let v = read_json(path)?;
    let m = v.get("B").cloned().unwrap_or(v);
    serde_json::from_value(m).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_problem(path: &Path) -> Result<IrregularProblem, CliError> {
    serde_json::from_value(read_json(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(cfg: &RunConfig, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.output_dir)?;
    let path = cfg.output_dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Builds the chain, checks its identities and writes `chain.json`.
pub fn cmd_chain(cfg: &RunConfig, input: Option<&Path>, random: Option<usize>, out: &mut dyn Write) -> Result<bool, CliError> {
    let tol = &cfg.tolerances;
    let b = match (input, random) {
        (Some(p), _) => read_matrix(p)?,
        (None, Some(n)) => generate::random_singular(&mut ChaCha8Rng::seed_from_u64(cfg.seed), n),
        (None, None) => return Err(CliError::Parse("chain needs an input file or --random N".into())),
    };
    let mut chain = build_chain(&b, tol.rank, tol).map_err(classify_chain)?;
    if cfg.inject_fault {
        match chain.factors.first_mut() {
            Some(a) => a[(0, 0)] += 1e-3,
            None => chain.original[(0, 0)] += 1e-3,
        }
    }
    let residuals = chain.identity_residuals();
    let power: Vec<f64> =
        (1..=chain.length + 1).map(|n| verify_power_identity(&chain, n)).collect::<Result<_, _>>().map_err(classify_chain)?;
    let power_max = power.iter().fold(0.0f64, |m, &x| m.max(x));
    let (nilpotency_index, nilpotency_ok) = match nilpotency_check(&chain, tol) {
        Ok(Nilpotency::Nilpotent { index }) => (Some(index), true),
        Ok(Nilpotency::NotNilpotent) => (None, true),
        Err(ChainError::VerificationFailed { .. }) => (None, false),
        Err(e) => return Err(classify_chain(e)),
    };
    let passed = residuals.max() <= tol.chain && power_max <= tol.chain && nilpotency_ok;

    let report = json!({
        "length": chain.length,
        "kind": chain.kind,
        "dimensions": chain.dimensions(),
        "residuals": {
            "decomposition": residuals.decomposition,
            "consistency": residuals.consistency,
            "members": residuals.members,
        },
        "power_identity": power,
        "nilpotency_index": nilpotency_index,
        "passed": passed,
        "factors": chain.factors,
        "members": chain.members,
    });
    let path = write_output(cfg, "chain.json", serde_json::to_string_pretty(&report).expect("json").as_bytes())?;
    let kind = match chain.kind {
        ChainKind::Regular => "regular",
        ChainKind::Singular => "singular",
    };
    writeln!(out, "chain: length {}, {kind}, dimensions {:?}", chain.length, chain.dimensions())?;
    writeln!(
        out,
        "identities: decomposition {:.3e}, consistency {:.3e}, members {:.3e}, power {:.3e} (limit {:.1e})",
        residuals.decomposition, residuals.consistency, residuals.members, power_max, tol.chain
    )?;
    if let Some(i) = nilpotency_index {
        writeln!(out, "nilpotency index: {i}")?;
    }
    writeln!(out, "status: {} ({})", status(passed), path.display())?;
    Ok(passed)
}

/// A written solution: CSV text, JSON report and pass flag.
pub struct SolveOutput {
    pub csv: String,
    pub report: Value,
    pub passed: bool,
}

fn ode_output(p: &IrregularOdeProblem, cfg: &RunConfig) -> Result<SolveOutput, CliError> {
    let tol = &cfg.tolerances;
    let sol = odesolve::solve(p, tol)?;
    let times: Vec<f64> = sol.u.times().iter().map(|&t| round_sig15(t)).collect();
    let values: Vec<Vec<f64>> = sol
        .u
        .values()
        .iter()
        .zip(&times)
        .map(|(v, &t)| {
            v.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let bump = if cfg.inject_fault && j == 0 { 0.1 * (PI * t).sin() } else { 0.0 };
                    round_sig15(x + bump)
                })
                .collect()
        })
        .collect();
    let traj = Trajectory::new(times, values)?;
    // computed on the rounded values so that re-reading the CSV reproduces it
    let residual = verify_residual(&p.b, &p.f, &traj)?;
    let limit = residual_limit(&p.f, traj.times(), tol);
    let mut csv = Vec::new();
    traj.write_csv(&mut csv)?;
    let passed = residual <= limit;
    Ok(SolveOutput {
        csv: String::from_utf8(csv).expect("csv is utf-8"),
        report: json!({
            "class": "ode",
            "residual": residual,
            "residual_limit": limit,
            "chain_length": sol.chain.length,
            "kind": sol.chain.kind,
            "iterations": sol.iterations,
            "passed": passed,
        }),
        passed,
    })
}

/// A symbolic PDE solution.
pub enum PdeField {
    Xt(XtField),
    Series(BiSeries),
    Separable(SeparableField),
}

impl PdeField {
    /// Evaluates at `(x, t)` or `(x, y, t)`.
    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        match self {
            Self::Xt(u) => u.eval(p[0], p[1]),
            Self::Series(u) => u.eval(p[0], p[1]),
            Self::Separable(u) => vec![u.eval(p[0], p[1], p[2])],
        }
    }
}

pub struct PdeOutcome {
    pub field: PdeField,
    pub report: PdeReport,
    pub limit: f64,
    pub header: Vec<String>,
    pub points: Vec<Vec<f64>>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn grid2(xs: &[f64], ts: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().flat_map(|&x| ts.iter().map(move |&t| vec![x, t])).collect()
}

fn header_xt(dim: usize) -> Vec<String> {
    let mut h = vec!["x".to_string(), "t".to_string()];
    h.extend((1..=dim).map(|j| format!("u{j}")));
    h
}

/// Solves a PDE-class problem; with `corrupt` the solution is perturbed and its residual recomputed.
pub fn solve_pde(problem: &IrregularProblem, cfg: &RunConfig, corrupt: bool) -> Result<PdeOutcome, CliError> {
    let tol = &cfg.tolerances;
    match problem {
        IrregularProblem::Ode(_) => Err(CliError::Unsupported("not a PDE problem".into())),
        IrregularProblem::Parabolic { problem: p, options, path } => {
            let (mut u, mut report) = match path {
                ParabolicPath::Chain => {
                    let s = solve_parabolic(p, options, tol)?;
                    (s.u, s.report)
                }
                ParabolicPath::Projector => {
                    let s = solve_parabolic_projector(p, options, tol)?;
                    (s.u, s.report)
                }
            };
            if corrupt {
                let bump = BiSeries::from_monomials(p.b.rows(), &[(0, 1, QuasiPoly::constant(0.1)), (0, 2, QuasiPoly::constant(-0.1))]);
                u = u.add(&XtField::from_poly(bump));
                report.residual_original = p.residual_on(&u, &options.grid);
            }
            let points = grid2(&linspace(0.0, 1.0, 21), &options.grid.ts());
            Ok(PdeOutcome { field: PdeField::Xt(u), report, limit: options.residual_limit, header: header_xt(p.b.rows()), points })
        }
        IrregularProblem::Mixed { problem: p, options } => {
            let s = solve_mixed(p, options, tol)?;
            let (mut u, mut report) = (s.u, s.report);
            if corrupt {
                u = u.add(&BiSeries::from_monomials(p.b.rows(), &[(0, 2, QuasiPoly::constant(0.1))]));
                let r = p.residual_series(&u);
                report.residual_original = options.grid.sup(|x, t| r.eval(x, t));
            }
            let points = grid2(&options.grid.xs(), &options.grid.ts());
            Ok(PdeOutcome { field: PdeField::Series(u), report, limit: options.residual_limit, header: header_xt(p.b.rows()), points })
        }
        IrregularProblem::Integro { problem: p, options } => {
            let s = integro::solve_integro(p, options, tol)?;
            let (mut u, mut report) = (s.u, s.report);
            let g = options.grid;
            let xs = linspace(p.interval.0, p.interval.1, g.nx);
            let ys = linspace(0.0, 1.0, g.ny);
            let ts = linspace(g.t.0, g.t.1, g.nt);
            if corrupt {
                u = u.add(&SeparableField::new(vec![SeparableTerm {
                    x: QuasiPoly::constant(0.1),
                    y: QuasiPoly::monomial(1.0, 2),
                    t: QuasiPoly::constant(1.0),
                }]));
                let r = p.residual_field(&u);
                report.residual_original = xs
                    .iter()
                    .flat_map(|&x| ys.iter().flat_map(|&y| ts.iter().map(move |&t| (x, y, t))).collect::<Vec<_>>())
                    .fold(0.0, |m: f64, (x, y, t)| m.max(r.eval(x, y, t).abs()));
            }
            let points =
                xs.iter().flat_map(|&x| ys.iter().flat_map(|&y| ts.iter().map(move |&t| vec![x, y, t])).collect::<Vec<_>>()).collect();
            let header = ["x", "y", "t", "u"].iter().map(|s| s.to_string()).collect();
            Ok(PdeOutcome { field: PdeField::Separable(u), report, limit: options.residual_limit, header, points })
        }
    }
}

fn pde_output(problem: &IrregularProblem, cfg: &RunConfig) -> Result<SolveOutput, CliError> {
    let o = solve_pde(problem, cfg, cfg.inject_fault)?;
    let mut wr = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    wr.write_record(&o.header).map_err(csv_err)?;
    for p in &o.points {
        let mut rec: Vec<String> = p.iter().map(|&x| format_sig15(x)).collect();
        rec.extend(o.field.eval(p).into_iter().map(format_sig15));
        wr.write_record(&rec).map_err(csv_err)?;
    }
    let csv = String::from_utf8(wr.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?).expect("utf-8");
    let passed = o.report.residual_original <= o.limit;
    let mut report = serde_json::to_value(&o.report).expect("report serializes");
    report["class"] = json!(problem.class());
    report["residual_limit"] = json!(o.limit);
    report["passed"] = json!(passed);
    Ok(SolveOutput { csv, report, passed })
}

/// Solves a problem file and writes `solution.csv` plus the `solution.json` report.
pub fn cmd_solve(cfg: &RunConfig, input: &Path, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut problem = read_problem(input)?;
    cfg.apply(&mut problem);
    let output = match &problem {
        IrregularProblem::Ode(p) => ode_output(p, cfg)?,
        other => pde_output(other, cfg)?,
    };
    let csv_path = write_output(cfg, "solution.csv", output.csv.as_bytes())?;
    write_output(cfg, "solution.json", serde_json::to_string_pretty(&output.report).expect("json").as_bytes())?;
    writeln!(out, "class: {}", problem.class())?;
    for key in ["residual", "residual_original", "residual_stages", "bc_violation", "ic_violation", "residual_limit"] {
        if let Some(v) = output.report.get(key) {
            writeln!(out, "{key}: {v}")?;
        }
    }
    writeln!(out, "status: {} ({})", status(output.passed), csv_path.display())?;
    Ok(output.passed)
}

fn read_csv_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Re-verifies a solution CSV: the ODE residual is recomputed from the samples;
/// PDE samples are compared with a fresh solve.
pub fn cmd_verify(cfg: &RunConfig, input: &Path, solution: &Path, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut problem = read_problem(input)?;
    cfg.apply(&mut problem);
    let sidecar = solution.with_extension("json");
    let reported = if sidecar.exists() { Some(read_json(&sidecar)?) } else { None };
    match &problem {
        IrregularProblem::Ode(p) => {
            let file = fs::File::open(solution).map_err(|e| CliError::Parse(format!("{}: {e}", solution.display())))?;
            let traj = Trajectory::read_csv(file)?;
            if traj.dim() != p.b.rows() {
                return Err(CliError::Parse(format!("solution has {} components, problem has {}", traj.dim(), p.b.rows())));
            }
            let residual = verify_residual(&p.b, &p.f, &traj)?;
            let limit = residual_limit(&p.f, traj.times(), &cfg.tolerances);
            let mut passed = residual <= limit;
            writeln!(out, "residual: {residual:e} (limit {limit:e})")?;
            if let Some(r) = reported.as_ref().and_then(|v| v.get("residual")).and_then(Value::as_f64) {
                let diff = (r - residual).abs();
                writeln!(out, "reported residual: {r:e} (difference {diff:e})")?;
                passed &= diff <= 1e-12;
            }
            writeln!(out, "status: {}", status(passed))?;
            Ok(passed)
        }
        other => {
            let o = solve_pde(other, cfg, false)?;
            let coords = if matches!(other, IrregularProblem::Integro { .. }) { 3 } else { 2 };
            let rows = read_csv_rows(solution)?;
            let mut deviation: f64 = 0.0;
            for row in &rows {
                if row.len() < coords + 1 {
                    return Err(CliError::Parse("solution row too short".into()));
                }
                let (p, vals) = row.split_at(coords);
                for (a, b) in vals.iter().zip(o.field.eval(p)) {
                    deviation = deviation.max((a - b).abs() / (1.0 + b.abs()));
                }
            }
            let passed = !rows.is_empty() && deviation <= 1e-10 && o.report.residual_original <= o.limit;
            writeln!(out, "samples: {}, max relative deviation {deviation:e}", rows.len())?;
            writeln!(out, "residual_original: {:e} (limit {:e})", o.report.residual_original, o.limit)?;
            writeln!(out, "status: {}", status(passed))?;
            Ok(passed)
        }
    }
}

/// One line of a demo summary.
pub struct DemoRow {
    pub label: String,
    pub value: f64,
    pub limit: f64,
}

impl DemoRow {
    fn new(label: &str, value: f64, limit: f64) -> Self {
        Self { label: label.to_string(), value, limit }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.limit
    }
}

fn sup_xt(f: impl Fn(f64, f64) -> f64, xs: &[f64], ts: &[f64]) -> f64 {
    xs.iter().flat_map(|&x| ts.iter().map(move |&t| (x, t))).fold(0.0, |m: f64, (x, t)| m.max(f(x, t).abs()))
}

/// Runs a bundled fixture and returns its summary rows.
pub fn demo_rows(name: &str, cfg: &RunConfig) -> Result<Vec<DemoRow>, CliError> {
    let tol = &cfg.tolerances;
    match name {
        "example1" => {
            let mut p = fixtures::example_one_problem();
            if let Some(h) = cfg.step {
                p.step = h;
            }
            let sol = odesolve::solve(&p, tol)?;
            Ok(vec![
                DemoRow::new("closed-form deviation", sol.u.max_error(&fixtures::example_one_solution()), 1e-7),
                DemoRow::new("residual |Bu' - u - f|", sol.residual, sol.residual_limit),
                DemoRow::new("stage consistency", sol.stage_consistency(), 1e-6),
            ])
        }
        "example2" => {
            let sol = odesolve::solve(&fixtures::example_two_problem(), tol)?;
            let exact = fixtures::example_two_solution();
            let computed = sol.exact.as_ref().ok_or_else(|| CliError::Verification("no symbolic solution".into()))?;
            let ts: Vec<f64> = linspace(0.0, 1.0, 101);
            let dev = ts.iter().fold(0.0f64, |m, &t| computed.eval(t).iter().zip(exact.eval(t)).fold(m, |m, (a, b)| m.max((a - b).abs())));
            Ok(vec![DemoRow::new("closed-form vs computed", dev, 1e-10), DemoRow::new("residual |Bu' - u - f|", sol.residual, 1e-10)])
        }
        "pde24" => {
            let mut opts = Default::default();
            apply_parabolic(cfg, &mut opts);
            let s = solve_parabolic(&fixtures::parabolic_generic_problem(), &opts, tol)?;
            let k = solve_parabolic(&fixtures::parabolic_killed_problem(), &opts, tol)?;
            let heat = sup_xt(
                |x, t| {
                    let u = k.u.eval(x, t);
                    u[0].abs().max((u[1] + fixtures::heat_mode_one(x, t)).abs()).max((u[2] - fixtures::heat_mode_one(x, t)).abs())
                },
                &opts.grid.xs(),
                &opts.grid.ts(),
            );
            Ok(vec![
                DemoRow::new("residual of the original system", s.report.residual_original, opts.residual_limit),
                DemoRow::new("series stage residual", s.report.residual_stages[0], 1e-6),
                DemoRow::new("heat stage residual", s.report.residual_stages[1], 1e-6),
                DemoRow::new("boundary conditions", s.report.bc_violation, 1e-8),
                DemoRow::new("A2 f = 0 fixture vs heat oracle", heat, 1e-6),
            ])
        }
        "integro30" => {
            let mut opts = integro::IntegroOptions::default();
            if let Some(k) = cfg.truncation {
                opts.truncation = k;
            }
            let s = integro::solve_integro(&fixtures::integro_single_mode_problem(), &opts, tol)?;
            let mut oracle: f64 = 0.0;
            for x in linspace(0.0, 1.0, 5) {
                for y in linspace(0.0, 1.0, 11) {
                    for t in linspace(0.0, 1.0, 6) {
                        oracle = oracle.max((s.u.eval(x, y, t) - fixtures::integro_single_mode_solution(x, y, t)).abs());
                    }
                }
            }
            let v = integro::dirichlet_resolvent(1.0, &QuasiPoly::constant(1.0))?;
            let unit =
                linspace(0.0, 1.0, 101).iter().fold(0.0f64, |m, &y| m.max((v.eval(y) - (1.0 - (y - 0.5).cos() / 0.5f64.cos())).abs()));
            let g = integro::solve_integro(&fixtures::integro_generic_problem(), &opts, tol)?;
            let resonant = integro::check_resonance(PI * PI).is_err();
            Ok(vec![
                DemoRow::new("unit-load Green's function", unit, 1e-10),
                DemoRow::new("single-mode oracle deviation", oracle, 1e-8),
                DemoRow::new("generic fixture residual", g.report.residual_original, opts.residual_limit),
                DemoRow::new("trace conditions", g.report.ic_violation, 1e-8),
                DemoRow::new("a = pi^2 accepted (0 = rejected)", if resonant { 0.0 } else { 1.0 }, 0.0),
            ])
        }
        "projector" => {
            let mut opts = Default::default();
            apply_parabolic(cfg, &mut opts);
            let p = fixtures::parabolic_symmetric_problem();
            let chain = solve_parabolic(&p, &opts, tol)?;
            let proj = solve_parabolic_projector(&p, &opts, tol)?;
            let agreement = opts.grid.sup(|x, t| chain.u.eval(x, t).iter().zip(proj.u.eval(x, t)).map(|(a, b)| a - b).collect());
            let split = projector_split(&p.b, tol)?;
            Ok(vec![
                DemoRow::new("chain vs projector path", agreement, 1e-4),
                DemoRow::new("constraint max|(v, phi)|", proj.report.constraint_violation.unwrap_or(f64::NAN), 1e-8),
                DemoRow::new("projector identities", split.identities(&p.b).max(), 1e-10),
                DemoRow::new("projector path residual", proj.report.residual_original, opts.residual_limit),
            ])
        }
        other => Err(CliError::UnknownDemo(other.to_string())),
    }
}

fn apply_parabolic(cfg: &RunConfig, opts: &mut crate::pdesolve::parabolic::ParabolicOptions) {
    if let Some(k) = cfg.truncation {
        opts.truncation = k;
    }
    if let Some(m) = cfg.modes {
        opts.heat.modes = m;
    }
}

pub fn cmd_demo(cfg: &RunConfig, name: &str, out: &mut dyn Write) -> Result<bool, CliError> {
    let rows = demo_rows(name, cfg)?;
    writeln!(out, "demo {name}")?;
    writeln!(out, "{:<36} {:>12} {:>10}  status", "quantity", "value", "limit")?;
    for r in &rows {
        writeln!(out, "{:<36} {:>12.3e} {:>10.1e}  {}", r.label, r.value, r.limit, status(r.passed()))?;
    }
    Ok(rows.iter().all(DemoRow::passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = main_with(std::iter::once("skeleton-solve").chain(args.iter().copied()), &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn unknown_demo_exit_five() {
        assert_eq!(run_args(&["demo", "wave"]).0, EXIT_UNKNOWN_DEMO);
    }

    #[test]
    fn bad_flag_exit_two() {
        assert_eq!(run_args(&["solve"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["demo", "example1", "--set", "bogus=1"]).0, EXIT_PARSE);
    }

    #[test]
    fn overrides_reach_tolerances() {
        let cli = Cli::try_parse_from(["s", "--set", "rank=1e-8", "--tol", "1e-5", "demo", "example1"]).unwrap();
        let cfg = RunConfig::from_cli(&cli).unwrap();
        assert_eq!(cfg.tolerances.rank, 1e-8);
        assert_eq!(cfg.tolerances.residual, 1e-5);
    }

    #[test]
    fn demo_example_two_passes() {
        let (code, text) = run_args(&["demo", "example2"]);
        assert_eq!(code, EXIT_OK, "{text}");
        assert!(text.contains("closed-form vs computed"));
    }
}
