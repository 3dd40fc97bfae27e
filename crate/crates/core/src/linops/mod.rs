//! Dense real linear algebra: rank (skeleton) factorization, kernel bases,
//! inversion and norms.
//!
//! Rank decisions all go through one complete-pivoting elimination so that
//! [`rank_factorize`] and [`null_space_orthonormal`] agree on the numerical
//! rank of the same matrix at the same tolerance.

mod matrix;

pub use matrix::DenseMatrix;

use thiserror::Error;

use crate::tolerance::Tolerances;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinopsError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix data of length {len} does not fit shape {rows}x{cols}")]
    InvalidShape { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric: ‖B − Bᵀ‖_max = {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is singular (pivot {pivot:e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("matrix is ill-conditioned (estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("{what} residual {residual:e} exceeds tolerance {tolerance:e}")]
    Inaccurate { what: &'static str, residual: f64, tolerance: f64 },
}

/// `B = left · right` with `left` of full column rank and `right` of full row rank.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFactorization {
    pub left: DenseMatrix,
    pub right: DenseMatrix,
    pub rank: usize,
}

impl RankFactorization {
    pub fn product(&self) -> DenseMatrix {
        self.left.matmul(&self.right)
    }
}

/// Pivot rows and columns chosen by complete-pivoting elimination, sorted ascending.
#[derive(Clone, Debug)]
struct Pivots {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn check_finite(b: &DenseMatrix) -> Result<(), LinopsError> {
    if b.as_slice().iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(LinopsError::NonFinite)
    }
}

/// Gaussian elimination with complete pivoting; stops once the largest
/// remaining entry drops below `tol · ‖B‖_max`.
fn complete_pivots(b: &DenseMatrix, tol: f64) -> Pivots {
    let (m, n) = b.shape();
    let scale = b.max_norm();
    let mut w = b.clone();
    let mut prow: Vec<usize> = (0..m).collect();
    let mut pcol: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    if scale > 0.0 {
        let threshold = tol * scale;
        for k in 0..m.min(n) {
            let (mut bi, mut bj, mut best) = (k, k, 0.0);
            for i in k..m {
                for j in k..n {
                    let v = w[(prow[i], pcol[j])].abs();
                    if v > best {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            }
            if best <= threshold {
                break;
            }
            prow.swap(k, bi);
            pcol.swap(k, bj);
            let (pr, pc) = (prow[k], pcol[k]);
            let pivot = w[(pr, pc)];
            for &ri in &prow[k + 1..] {
                let l = w[(ri, pc)] / pivot;
                if l == 0.0 {
                    continue;
                }
                for &cj in &pcol[k..] {
                    let v = w[(pr, cj)];
                    w[(ri, cj)] -= l * v;
                }
            }
            rank += 1;
        }
    }
    let mut rows = prow[..rank].to_vec();
    let mut cols = pcol[..rank].to_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    Pivots { rows, cols }
}

/// Numerical rank at relative threshold `tol`.
pub fn numerical_rank(b: &DenseMatrix, tol: f64) -> usize {
    complete_pivots(b, tol).rows.len()
}

/// Skeleton decomposition `B = B[:, J] · (B[I, J]⁻¹ B[I, :])`.
///
/// `I`, `J` are the pivot rows/columns of a complete-pivoting elimination,
/// so `left` consists of actual columns of `B`. For the matrix
/// `[[0,2,2],[0,1,1],[0,0,0]]` this gives `left = (2,1,0)ᵀ`, `right = (0,1,1)`.
/// A zero matrix yields an empty factorization (rank 0).
pub fn rank_factorize(b: &DenseMatrix, tol: f64) -> Result<RankFactorization, LinopsError> {
    check_finite(b)?;
    let piv = complete_pivots(b, tol);
    let rank = piv.rows.len();
    if rank == 0 {
        return Ok(RankFactorization { left: DenseMatrix::zeros(b.rows(), 0), right: DenseMatrix::zeros(0, b.cols()), rank });
    }
    let left = b.select_columns(&piv.cols);
    let core = b.select_rows(&piv.rows).select_columns(&piv.cols);
    let right = Lu::factor(&core)?.solve_matrix(&b.select_rows(&piv.rows));
    Ok(RankFactorization { left, right, rank })
}

/// Orthonormal basis of `ker B` for symmetric `B`.
pub fn null_space_orthonormal(b: &DenseMatrix, tol: f64, tolerances: &Tolerances) -> Result<Vec<Vec<f64>>, LinopsError> {
    check_finite(b)?;
    let asymmetry = b.asymmetry().ok_or(LinopsError::NotSquare { rows: b.rows(), cols: b.cols() })?;
    if asymmetry > tolerances.sym {
        return Err(LinopsError::NotSymmetric { asymmetry });
    }
    let n = b.cols();
    let piv = complete_pivots(b, tol);
    let free: Vec<usize> = (0..n).filter(|j| !piv.cols.contains(j)).collect();
    if free.is_empty() {
        return Ok(Vec::new());
    }
    let core_lu = if piv.rows.is_empty() { None } else { Some(Lu::factor(&b.select_rows(&piv.rows).select_columns(&piv.cols))?) };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![0.0; n];
        x[f] = 1.0;
        if let Some(lu) = &core_lu {
            let rhs: Vec<f64> = piv.rows.iter().map(|&i| -b[(i, f)]).collect();
            for (&j, v) in piv.cols.iter().zip(lu.solve(&rhs)) {
                x[j] = v;
            }
        }
        basis.push(x);
    }
    orthonormalize(&mut basis);
    let residual = basis.iter().map(|phi| b.matvec(phi).iter().fold(0.0_f64, |m, v| m.max(v.abs()))).fold(0.0, f64::max);
    if residual > tolerances.null {
        return Err(LinopsError::Inaccurate { what: "kernel basis", residual, tolerance: tolerances.null });
    }
    Ok(basis)
}

/// Modified Gram–Schmidt, two passes.
fn orthonormalize(vs: &mut [Vec<f64>]) {
    for i in 0..vs.len() {
        for _ in 0..2 {
            for j in 0..i {
                let d = dot(&vs[i], &vs[j]);
                let (head, tail) = vs.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= d * y;
                }
            }
        }
        let norm = dot(&vs[i], &vs[i]).sqrt();
        for x in vs[i].iter_mut() {
            *x /= norm;
        }
    }
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `B⁻¹`, rejecting singular and ill-conditioned input.
pub fn invert(b: &DenseMatrix, tolerances: &Tolerances) -> Result<DenseMatrix, LinopsError> {
    check_finite(b)?;
    if !b.is_square() {
        return Err(LinopsError::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let inv = Lu::factor(b)?.inverse();
    let condition = b.norm_one() * inv.norm_one();
    if condition > tolerances.kappa_max {
        return Err(LinopsError::IllConditioned { condition });
    }
    let residual = b.matmul(&inv).max_diff(&DenseMatrix::identity(b.rows()));
    if residual > tolerances.inv {
        return Err(LinopsError::Inaccurate { what: "inverse", residual, tolerance: tolerances.inv });
    }
    Ok(inv)
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Self, LinopsError> {
        if !a.is_square() {
            return Err(LinopsError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let threshold = f64::EPSILON * (n.max(1) as f64) * a.max_norm();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs())).unwrap_or(k);
            let pivot = lu[(p, k)];
            if pivot.abs() <= threshold || pivot == 0.0 {
                return Err(LinopsError::Singular { step: k, pivot: pivot.abs() });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= l * v;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(rhs.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, rhs: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            for (i, v) in self.solve(&rhs.col(j)).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> DenseMatrix {
        self.solve_matrix(&DenseMatrix::identity(self.lu.rows()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DenseMatrix {
        let data = (0..r * c).map(|_| rng.gen_range(-1.0..1.0)).collect();
        DenseMatrix::new(r, c, data).unwrap()
    }

    /// Exact rank by fraction-free (Bareiss) elimination over i128.
    fn exact_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let (nr, nc) = (m.len(), m[0].len());
        let mut rank = 0;
        let mut prev = 1i128;
        for c in 0..nc {
            let Some(p) = (rank..nr).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rank, p);
            for i in rank + 1..nr {
                for j in c + 1..nc {
                    m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
                }
                m[i][c] = 0;
            }
            prev = m[rank][c];
            rank += 1;
            if rank == nr {
                break;
            }
        }
        rank
    }

    #[test]
    fn example_one_factorization() {
        let b = DenseMatrix::from_rows(&[[0.0, 2.0, 2.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]]);
        let f = rank_factorize(&b, 1e-10).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.left, DenseMatrix::column(&[2.0, 1.0, 0.0]));
        assert_eq!(f.right, DenseMatrix::row_vector(&[0.0, 1.0, 1.0]));
        assert_eq!(f.product(), b);
    }

    #[test]
    fn identity_is_full_rank() {
        let f = rank_factorize(&DenseMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(f.rank, 3);
        assert!(f.product().max_diff(&DenseMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn zero_matrix_gives_empty_factors() {
        let f = rank_factorize(&DenseMatrix::zeros(4, 4), 1e-10).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!(f.left.shape(), (4, 0));
        assert_eq!(f.right.shape(), (0, 4));
        assert_eq!(f.product(), DenseMatrix::zeros(4, 4));
    }

    #[test]
    fn product_of_known_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random(&mut rng, 8, 3);
        let q = random(&mut rng, 3, 8);
        let b = p.matmul(&q);
        let f = rank_factorize(&b, 1e-10).unwrap();
        assert_eq!(f.rank, 3);
        assert!(f.product().max_diff(&b) < 1e-10);
    }

    #[test]
    fn rejects_non_finite_through_json() {
        let b: Result<DenseMatrix, _> = DenseMatrix::new(1, 1, vec![f64::INFINITY]);
        assert_eq!(b.unwrap_err(), LinopsError::NonFinite);
    }

    #[test]
    fn factorization_residual_on_many_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=20);
            let r = rng.gen_range(0..n);
            let b = random(&mut rng, n, r).matmul(&random(&mut rng, r, n));
            let f = rank_factorize(&b, 1e-10).unwrap();
            assert_eq!(f.rank, r);
            assert!(f.product().max_diff(&b) <= 1e-10);
        }
    }

    #[test]
    fn rank_matches_exact_oracle_on_integer_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let r = rng.gen_range(0..=n);
            let p: Vec<Vec<i64>> = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let q: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let b: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (0..r).map(|k| p[i][k] * q[k][j]).sum()).collect()).collect();
            let m = DenseMatrix::from_rows(&b.iter().map(|row| row.iter().map(|&x| x as f64).collect::<Vec<_>>()).collect::<Vec<_>>());
            let f = rank_factorize(&m, 1e-10).unwrap();
            assert_eq!(f.rank, exact_rank(&b), "{b:?}");
            assert!(f.product().max_diff(&m) <= 1e-10);
        }
    }

    #[test]
    fn kernel_of_diagonal() {
        let tol = Tolerances::default();
        let k = null_space_orthonormal(&DenseMatrix::diag(&[1.0, 0.0]), 1e-10, &tol).unwrap();
        assert_eq!(k.len(), 1);
        assert!((k[0][0]).abs() < 1e-15 && (k[0][1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_of_all_ones() {
        let tol = Tolerances::default();
        let b = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let k = null_space_orthonormal(&b, 1e-10, &tol).unwrap();
        assert_eq!(k.len(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = k[0][0].signum();
        assert!((k[0][0] - sign * s).abs() < 1e-15);
        assert!((k[0][1] + sign * s).abs() < 1e-15);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let tol = Tolerances::default();
        assert!(null_space_orthonormal(&DenseMatrix::identity(3), 1e-10, &tol).unwrap().is_empty());
    }

    #[test]
    fn kernel_rejects_asymmetric() {
        let tol = Tolerances::default();
        let b = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(null_space_orthonormal(&b, 1e-10, &tol), Err(LinopsError::NotSymmetric { .. })));
    }

    #[test]
    fn kernel_is_orthonormal_for_random_symmetric() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(2..=9);
            let r = rng.gen_range(0..n);
            let p = random(&mut rng, n, r);
            let b = p.matmul(&p.transpose());
            let b = b.add(&b.transpose()).scale(0.5);
            let k = null_space_orthonormal(&b, 1e-10, &tol).unwrap();
            assert_eq!(k.len(), n - r);
            for (i, x) in k.iter().enumerate() {
                for (j, y) in k.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(x, y) - expected).abs() < 1e-12);
                }
                assert!(b.matvec(x).iter().all(|v| v.abs() <= 1e-10));
            }
        }
    }

    #[test]
    fn invert_small_cases() {
        let tol = Tolerances::default();
        let inv = invert(&DenseMatrix::from_rows(&[[2.0]]), &tol).unwrap();
        assert_eq!(inv, DenseMatrix::from_rows(&[[0.5]]));
        let inv = invert(&DenseMatrix::diag(&[1.0, 2.0, 4.0]), &tol).unwrap();
        assert_eq!(inv, DenseMatrix::diag(&[1.0, 0.5, 0.25]));
    }

    #[test]
    fn invert_random_well_conditioned() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random(&mut rng, 6, 6).add(&DenseMatrix::identity(6).scale(4.0));
        let inv = invert(&a, &tol).unwrap();
        assert!(a.matmul(&inv).max_diff(&DenseMatrix::identity(6)) < 1e-10);
    }

    #[test]
    fn invert_errors() {
        let tol = Tolerances::default();
        let singular = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(invert(&singular, &tol), Err(LinopsError::Singular { .. })));
        let ill = DenseMatrix::diag(&[1.0, 1e-13]);
        assert!(matches!(invert(&ill, &tol), Err(LinopsError::IllConditioned { .. })));
        assert!(matches!(invert(&DenseMatrix::zeros(2, 3), &tol), Err(LinopsError::NotSquare { .. })));
    }
}
