//! Skeleton chains of a singular square matrix.
//!
//! Starting from `B = A₁A₂`, each member `Bᵢ = A_{2i}A_{2i−1}` is factored
//! again until a member is invertible (regular chain) or zero (singular
//! chain). Dimensions strictly decrease, so the chain has length `p ≤ N`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linops::{self, DenseMatrix, LinopsError};
use crate::tolerance::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is invertible; the equation is regular and needs no chain")]
    InvertibleInput,
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("chain member {index} has full rank but condition estimate {condition:e}")]
    IllConditionedChainMember { index: usize, condition: f64 },
    #[error("power index {n} outside [1, {max}]")]
    OutOfRange { n: usize, max: usize },
    #[error("vector has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain verification failed: {what} = {norm:e}")]
    VerificationFailed { what: String, norm: f64 },
    #[error(transparent)]
    Linops(#[from] LinopsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainKind {
    Regular,
    Singular,
}

/// The chain `{B₁, …, B_p}` together with its factors `A₁, …, A_{2p}`.
///
/// `factors[2i−2]` is `A_{2i−1}` (shape `r_{i−1} × r_i`) and `factors[2i−1]`
/// is `A_{2i}` (shape `r_i × r_{i−1}`), with `r₀ = N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonChain {
    pub original: DenseMatrix,
    pub length: usize,
    pub kind: ChainKind,
    pub factors: Vec<DenseMatrix>,
    pub members: Vec<DenseMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent { index: usize },
    NotNilpotent,
}

/// Builds the skeleton chain of a singular matrix.
///
/// `tol` is the relative rank threshold; `tolerances.chain` decides when a
/// member counts as zero and `tolerances.kappa_max` when a full-rank member
/// is too ill-conditioned to terminate a regular chain.
pub fn build_chain(b: &DenseMatrix, tol: f64, tolerances: &Tolerances) -> Result<SkeletonChain, ChainError> {
    if !b.is_square() {
        return Err(ChainError::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    if b.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(ChainError::NonFinite);
    }
    let n = b.rows();
    if b.max_norm() <= tolerances.chain {
        return Ok(SkeletonChain { original: b.clone(), length: 0, kind: ChainKind::Singular, factors: Vec::new(), members: Vec::new() });
    }
    let first = linops::rank_factorize(b, tol)?;
    if first.rank == n {
        return Err(ChainError::InvertibleInput);
    }

    let mut factors = Vec::new();
    let mut members = Vec::new();
    let mut fact = first;
    let kind = loop {
        let member = fact.right.matmul(&fact.left);
        factors.push(fact.left);
        factors.push(fact.right);
        members.push(member);
        let member = members.last().expect("just pushed");
        let index = members.len();
        log::debug!("chain member {index}: {}x{}", member.rows(), member.cols());

        if member.max_norm() <= tolerances.chain {
            break ChainKind::Singular;
        }
        let next = linops::rank_factorize(member, tol)?;
        if next.rank == member.rows() {
            match linops::invert(member, tolerances) {
                Ok(_) => break ChainKind::Regular,
                Err(LinopsError::IllConditioned { condition }) => return Err(ChainError::IllConditionedChainMember { index, condition }),
                Err(LinopsError::Inaccurate { residual, .. }) => {
                    return Err(ChainError::IllConditionedChainMember { index, condition: residual })
                }
                Err(e) => return Err(e.into()),
            }
        }
        fact = next;
    };

    Ok(SkeletonChain { original: b.clone(), length: members.len(), kind, factors, members })
}

impl SkeletonChain {
    pub fn dimension(&self) -> usize {
        self.original.rows()
    }

    /// `A_k` for `1 ≤ k ≤ 2p`.
    pub fn factor(&self, k: usize) -> &DenseMatrix {
        &self.factors[k - 1]
    }

    /// `B_i` for `1 ≤ i ≤ p`; `B₀` is the original matrix.
    pub fn member(&self, i: usize) -> &DenseMatrix {
        if i == 0 {
            &self.original
        } else {
            &self.members[i - 1]
        }
    }

    /// Ranks `[r₀ = N, r₁, …, r_p]`.
    pub fn dimensions(&self) -> Vec<usize> {
        std::iter::once(self.dimension()).chain(self.members.iter().map(DenseMatrix::rows)).collect()
    }

    /// The terminal member `B_p`, or `None` for the empty chain of a zero matrix.
    pub fn terminal(&self) -> Option<&DenseMatrix> {
        self.members.last()
    }

    /// `∏_{j=1}^{i} A_{2j}` applied in order, i.e. `A_{2i} ⋯ A₄ A₂` (`r_i × N`).
    pub fn projection(&self, i: usize) -> DenseMatrix {
        let mut acc = DenseMatrix::identity(self.dimension());
        for j in 1..=i {
            acc = self.factor(2 * j).matmul(&acc);
        }
        acc
    }

    /// `A₁A₂` (or the zero matrix for an empty chain).
    pub fn skeleton_product(&self) -> DenseMatrix {
        if self.factors.is_empty() {
            DenseMatrix::zeros(self.dimension(), self.dimension())
        } else {
            self.factor(1).matmul(self.factor(2))
        }
    }

    /// Residuals of the structural identities `B = A₁A₂`,
    /// `A_{2i}A_{2i−1} = A_{2i+1}A_{2i+2}` and `Bᵢ = A_{2i}A_{2i−1}`.
    pub fn identity_residuals(&self) -> ChainResiduals {
        let decomposition = self.original.max_diff(&self.skeleton_product());
        let mut consistency: f64 = 0.0;
        for i in 1..self.length {
            let lhs = self.factor(2 * i).matmul(self.factor(2 * i - 1));
            let rhs = self.factor(2 * i + 1).matmul(self.factor(2 * i + 2));
            consistency = consistency.max(lhs.max_diff(&rhs));
        }
        let mut members: f64 = 0.0;
        for i in 1..=self.length {
            let prod = self.factor(2 * i).matmul(self.factor(2 * i - 1));
            members = members.max(prod.max_diff(self.member(i)));
        }
        ChainResiduals { decomposition, consistency, members }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainResiduals {
    pub decomposition: f64,
    pub consistency: f64,
    pub members: f64,
}

impl ChainResiduals {
    pub fn max(&self) -> f64 {
        self.decomposition.max(self.consistency).max(self.members)
    }
}

/// `‖Bⁿ − A₁A₃⋯A_{2n−3} · B_{n−1} · A_{2n−2}⋯A₄A₂‖_max` for `1 ≤ n ≤ p+1`.
///
/// For `n = 1` both factor products are empty and the identity reduces to the
/// skeleton decomposition `B = A₁A₂`.
pub fn verify_power_identity(chain: &SkeletonChain, n: usize) -> Result<f64, ChainError> {
    let max = chain.length + 1;
    if n == 0 || n > max {
        return Err(ChainError::OutOfRange { n, max });
    }
    let power = chain.original.power(n);
    if n == 1 {
        return Ok(power.max_diff(&chain.skeleton_product()));
    }
    let mut left = chain.factor(1).clone();
    for j in 2..n {
        left = left.matmul(chain.factor(2 * j - 1));
    }
    let mut right = chain.factor(2).clone();
    for j in 2..n {
        right = chain.factor(2 * j).matmul(&right);
    }
    let rebuilt = left.matmul(chain.member(n - 1)).matmul(&right);
    Ok(power.max_diff(&rebuilt))
}

/// For singular chains: checks `B^{p+1} = 0` and `B^p ≠ 0` by brute-force powers.
pub fn nilpotency_check(chain: &SkeletonChain, tolerances: &Tolerances) -> Result<Nilpotency, ChainError> {
    if chain.kind == ChainKind::Regular {
        return Ok(Nilpotency::NotNilpotent);
    }
    let p = chain.length;
    let below = chain.original.power(p);
    let top = below.matmul(&chain.original);
    let top_norm = top.max_norm();
    if top_norm > tolerances.chain {
        return Err(ChainError::VerificationFailed { what: format!("‖B^{}‖_max", p + 1), norm: top_norm });
    }
    let below_norm = below.max_norm();
    if below_norm <= tolerances.chain {
        return Err(ChainError::VerificationFailed { what: format!("‖B^{p}‖_max"), norm: below_norm });
    }
    Ok(Nilpotency::Nilpotent { index: p + 1 })
}

/// `[u₁, …, u_p]` with `uᵢ = A_{2i} u_{i−1}` and `u₀ = u`.
pub fn chain_projections(chain: &SkeletonChain, u: &[f64]) -> Result<Vec<Vec<f64>>, ChainError> {
    if u.len() != chain.dimension() {
        return Err(ChainError::DimensionMismatch { expected: chain.dimension(), found: u.len() });
    }
    let mut out = Vec::with_capacity(chain.length);
    let mut current = u.to_vec();
    for i in 1..=chain.length {
        current = chain.factor(2 * i).matvec(&current);
        out.push(current.clone());
    }
    Ok(out)
}
