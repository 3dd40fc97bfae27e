use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PdeError;
use crate::chain::{build_chain, SkeletonChain};
use crate::funcalg::{BiSeries, QuasiPolyVector};
use crate::linops::DenseMatrix;
use crate::tolerance::Tolerances;

/// One term `c·∂^{t}_t ∂^{x}_x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffTerm {
    pub t: usize,
    pub x: usize,
    pub c: f64,
}

/// Constant-coefficient operator `Σ c_{k₁k₂} ∂^{k₁}_t ∂^{k₂}_x`; JSON is a list of `{"t","x","c"}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyDiffOp {
    coeffs: BTreeMap<(usize, usize), f64>,
}

impl Serialize for PolyDiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms().collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyDiffOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::from_terms(Vec::<DiffTerm>::deserialize(d)?))
    }
}

impl PolyDiffOp {
    pub fn from_terms(terms: impl IntoIterator<Item = DiffTerm>) -> Self {
        let mut coeffs = BTreeMap::new();
        for t in terms {
            *coeffs.entry((t.t, t.x)).or_insert(0.0) += t.c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        Self { coeffs }
    }

    pub fn identity() -> Self {
        Self::from_terms([DiffTerm { t: 0, x: 0, c: 1.0 }])
    }

    /// `d/dt`
    pub fn d_t() -> Self {
        Self::from_terms([DiffTerm { t: 1, x: 0, c: 1.0 }])
    }

    pub fn terms(&self) -> impl Iterator<Item = DiffTerm> + '_ {
        self.coeffs.iter().map(|(&(t, x), &c)| DiffTerm { t, x, c })
    }

    /// `c_{k₁k₂}`, zero when absent.
    pub fn coeff(&self, t: usize, x: usize) -> f64 {
        self.coeffs.get(&(t, x)).copied().unwrap_or(0.0)
    }

    /// Total order `max(k₁ + k₂)`.
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(|(t, x)| t + x).max().unwrap_or(0)
    }

    pub fn is_time_only(&self) -> bool {
        self.coeffs.keys().all(|&(_, x)| x == 0)
    }

    /// Applies to a function of `t` alone; `x`-derivatives must be absent.
    pub fn apply_t(&self, u: &QuasiPolyVector) -> Result<QuasiPolyVector, PdeError> {
        if !self.is_time_only() {
            return Err(PdeError::InvalidProblem("operator has x-derivatives but acts on a function of t".into()));
        }
        Ok(self.terms().fold(QuasiPolyVector::zeros(u.dim()), |acc, d| acc.add(&u.nth_derivative(d.t).scale(d.c))))
    }

    /// Applies to a series in `x` with `t`-coefficients.
    pub fn apply_series(&self, u: &BiSeries) -> BiSeries {
        self.terms().fold(BiSeries::zeros(u.dim(), 0), |acc, d| acc.add(&u.derivative(d.x, d.t).scale(d.c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquationRole {
    /// `B_p·L u_p = L₁u_p + ∏A_{2j} f`
    Terminal,
    /// `L₁u_i = −∏_{j≤i}A_{2j} f + A_{2i+1}·L u_{i+1}`
    Intermediate,
    /// `L₁u = −f + A₁·L u₁`
    Final,
}

/// One equation of the split system for the unknown `u_index` (`u₀ = u`) of size `dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitEquation {
    pub role: EquationRole,
    pub index: usize,
    pub dim: usize,
    /// `B_p` on the terminal equation.
    pub lead: Option<DenseMatrix>,
    /// `A_{2i+1}` in front of `L u_{i+1}`.
    pub coupling: Option<DenseMatrix>,
    /// Matrix applied to `f`: `+∏A_{2j}` on the terminal equation, `−∏A_{2j}` elsewhere.
    pub source: DenseMatrix,
}

/// `B·L u = L₁u + f` split along the skeleton chain of `B`; ordered from `u_p` to `u`.
#[derive(Clone, Debug)]
pub struct SplitSystem {
    pub chain: SkeletonChain,
    pub l: PolyDiffOp,
    pub l1: PolyDiffOp,
    pub equations: Vec<SplitEquation>,
}

pub fn reduce_split_system(b: &DenseMatrix, l: &PolyDiffOp, l1: &PolyDiffOp, tolerances: &Tolerances) -> Result<SplitSystem, PdeError> {
    let chain = build_chain(b, tolerances.rank, tolerances)?;
    let p = chain.length;
    let dims = chain.dimensions();
    let mut equations = Vec::with_capacity(p + 1);
    if p > 0 {
        equations.push(SplitEquation {
            role: EquationRole::Terminal,
            index: p,
            dim: dims[p],
            lead: Some(chain.member(p).clone()),
            coupling: None,
            source: chain.projection(p),
        });
    }
    for i in (0..p).rev() {
        equations.push(SplitEquation {
            role: if i == 0 { EquationRole::Final } else { EquationRole::Intermediate },
            index: i,
            dim: dims[i],
            lead: None,
            coupling: Some(chain.factor(2 * i + 1).clone()),
            source: chain.projection(i).scale(-1.0),
        });
    }
    if p == 0 {
        equations.push(SplitEquation {
            role: EquationRole::Final,
            index: 0,
            dim: dims[0],
            lead: None,
            coupling: None,
            source: DenseMatrix::identity(dims[0]).scale(-1.0),
        });
    }
    Ok(SplitSystem { chain, l: l.clone(), l1: l1.clone(), equations })
}

impl SplitSystem {
    pub fn dimensions(&self) -> Vec<usize> {
        self.equations.iter().map(|e| e.dim).collect()
    }

    /// Residuals of every equation for time-only operators; `stages[i]` is `u_i`, `stages[0] = u`.
    pub fn residuals_t(&self, stages: &[QuasiPolyVector], f: &QuasiPolyVector, ts: &[f64]) -> Result<Vec<f64>, PdeError> {
        let p = self.chain.length;
        if stages.len() != p + 1 {
            return Err(PdeError::DimensionMismatch { expected: p + 1, found: stages.len() });
        }
        let mut out = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            let u = &stages[eq.index];
            // terminal: B_p·L u − L₁u − S f; otherwise L₁u − S f − C·L u_{i+1}
            let mut r = self.l1.apply_t(u)?.sub(&eq.source.apply(f));
            if let Some(lead) = &eq.lead {
                r = lead.apply(&self.l.apply_t(u)?).sub(&self.l1.apply_t(u)?).sub(&eq.source.apply(f));
            }
            if let Some(c) = &eq.coupling {
                r = r.sub(&c.apply(&self.l.apply_t(&stages[eq.index + 1])?));
            }
            let worst = ts.iter().flat_map(|&t| r.eval(t)).fold(0.0, |m: f64, v| m.max(v.abs()));
            out.push(worst);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::QuasiPoly;

    fn example_one() -> DenseMatrix {
        DenseMatrix::from_rows(&[[0.0, 2.0, 2.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])
    }

    fn index_two() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    }

    #[test]
    fn json_list_form() {
        let op: PolyDiffOp = serde_json::from_str(r#"[{"t":1,"x":0,"c":2.0},{"t":0,"x":2,"c":-1.0},{"t":1,"x":0,"c":1.0}]"#).unwrap();
        assert_eq!(op.coeff(1, 0), 3.0);
        assert_eq!(op.order(), 2);
        let back: PolyDiffOp = serde_json::from_str(&serde_json::to_string(&op).unwrap()).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn length_one_split() {
        let s = reduce_split_system(&example_one(), &PolyDiffOp::d_t(), &PolyDiffOp::identity(), &Tolerances::default()).unwrap();
        let roles: Vec<_> = s.equations.iter().map(|e| e.role).collect();
        assert_eq!(roles, vec![EquationRole::Terminal, EquationRole::Final]);
        assert_eq!(s.dimensions(), vec![1, 3]);
        assert_eq!(s.equations[1].coupling.as_ref().unwrap(), s.chain.factor(1));
    }

    #[test]
    fn length_two_split_dimensions() {
        let s = reduce_split_system(&index_two(), &PolyDiffOp::d_t(), &PolyDiffOp::identity(), &Tolerances::default()).unwrap();
        assert_eq!(s.chain.length, 2);
        assert_eq!(s.dimensions(), vec![1, 2, 3]);
        let roles: Vec<_> = s.equations.iter().map(|e| e.role).collect();
        assert_eq!(roles, vec![EquationRole::Terminal, EquationRole::Intermediate, EquationRole::Final]);
    }

    #[test]
    fn projections_of_a_solution_satisfy_every_equation() {
        let t = Tolerances::default();
        for b in [example_one(), index_two()] {
            let s = reduce_split_system(&b, &PolyDiffOp::d_t(), &PolyDiffOp::identity(), &t).unwrap();
            let u =
                QuasiPolyVector::new(vec![QuasiPoly::sin(1.0, 2.0), QuasiPoly::polynomial(&[1.0, 0.0, 3.0]), QuasiPoly::exp(-1.0, 0.5)]);
            let f = b.apply(&u.derivative()).sub(&u);
            let stages: Vec<_> = (0..=s.chain.length).map(|i| s.chain.projection(i).apply(&u)).collect();
            let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            let r = s.residuals_t(&stages, &f, &ts).unwrap();
            assert!(r.iter().all(|&x| x < 1e-12), "{r:?}");
        }
    }

    #[test]
    fn system_nineteen_shape() {
        let l = PolyDiffOp::from_terms([DiffTerm { t: 3, x: 0, c: 1.0 }, DiffTerm { t: 1, x: 1, c: 0.5 }]);
        let l1 = PolyDiffOp::from_terms([DiffTerm { t: 0, x: 2, c: 1.0 }, DiffTerm { t: 0, x: 0, c: -1.0 }]);
        let s = reduce_split_system(&example_one(), &l, &l1, &Tolerances::default()).unwrap();
        assert_eq!(s.equations[0].lead.as_ref().unwrap().shape(), (1, 1));
        assert_eq!(s.equations[0].source, *s.chain.factor(2));
        assert!(l.apply_t(&QuasiPolyVector::zeros(1)).is_err());
    }
}
