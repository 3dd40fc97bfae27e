//! Seeded random matrix generators for property tests, the acceptance suite
//! and `skeleton-solve chain --random`.

use rand::Rng;

use crate::linops::DenseMatrix;

fn uniform_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::new(rows, cols, data).expect("finite entries")
}

/// Random orthogonal matrix from Gram–Schmidt on uniform columns.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    loop {
        let m = uniform_matrix(rng, n, n);
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = m.col(j);
            for _ in 0..2 {
                for u in &q {
                    let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            q.push(v.into_iter().map(|x| x / norm).collect());
        }
        if ok {
            return DenseMatrix::from_rows(&q).transpose();
        }
    }
}

/// `P·Q` with `P` of shape `n×r`, `Q` of shape `r×n`, uniform entries.
pub fn random_low_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> DenseMatrix {
    uniform_matrix(rng, n, r).matmul(&uniform_matrix(rng, r, n))
}

/// Block-diagonal nilpotent Jordan blocks of the given sizes, with
/// superdiagonal entries in `[0.5, 2]`.
pub fn jordan_nilpotent<R: Rng + ?Sized>(rng: &mut R, blocks: &[usize]) -> DenseMatrix {
    let n: usize = blocks.iter().sum();
    let mut m = DenseMatrix::zeros(n, n);
    let mut start = 0;
    for &size in blocks {
        for i in start..start + size.saturating_sub(1) {
            m[(i, i + 1)] = rng.gen_range(0.5..2.0);
        }
        start += size;
    }
    m
}

/// `S·J·Sᵀ` for random Jordan blocks `J` and orthogonal `S`; nilpotent with
/// index equal to the largest block.
pub fn random_nilpotent<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let blocks = random_partition(rng, n);
    let s = random_orthogonal(rng, n);
    s.matmul(&jordan_nilpotent(rng, &blocks)).matmul(&s.transpose())
}

fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut blocks = Vec::new();
    while left > 0 {
        let b = rng.gen_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    blocks
}

/// A singular `n×n` matrix with a random chain shape: either a plain
/// low-rank product, or `S(J ⊕ D)Sᵀ` with a nilpotent part `J` and an
/// invertible diagonal part `D`.
pub fn random_singular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(0..n);
        return random_low_rank(rng, n, r);
    }
    let m = rng.gen_range(1..=n);
    let mut blocks = random_partition(rng, m);
    if blocks.iter().all(|&b| b == 1) && m == n && n > 1 {
        blocks = vec![n];
    }
    let mut core = DenseMatrix::zeros(n, n);
    let j = jordan_nilpotent(rng, &blocks);
    for r in 0..m {
        for c in 0..m {
            core[(r, c)] = j[(r, c)];
        }
    }
    for i in m..n {
        let mag = rng.gen_range(0.5..2.0);
        core[(i, i)] = if rng.gen_bool(0.5) { mag } else { -mag };
    }
    let s = random_orthogonal(rng, n);
    s.matmul(&core).matmul(&s.transpose())
}

/// `S·diag(d₁…d_r, 0…0)·Sᵀ` with `|dᵢ| ∈ [0.5, 2]`.
pub fn random_symmetric_singular<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> DenseMatrix {
    assert!(r < n, "rank must be deficient");
    let d: Vec<f64> = (0..n)
        .map(|i| {
            if i < r {
                let mag = rng.gen_range(0.5..2.0);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            } else {
                0.0
            }
        })
        .collect();
    let s = random_orthogonal(rng, n);
    let b = s.matmul(&DenseMatrix::diag(&d)).matmul(&s.transpose());
    b.add(&b.transpose()).scale(0.5)
}
