use std::fmt;

use serde::{Deserialize, Serialize};

use super::LinopsError;

/// Dense real matrix stored row by row.
///
/// Every entry is finite; constructors reject NaN and infinities so that
/// downstream norms and pivots are always meaningful.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// JSON layout: `{"rows": n, "cols": m, "data": [[row], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for DenseMatrix {
    type Error = LinopsError;

    fn try_from(repr: MatrixRepr) -> Result<Self, Self::Error> {
        if repr.data.len() != repr.rows || repr.data.iter().any(|r| r.len() != repr.cols) {
            return Err(LinopsError::InvalidShape { rows: repr.rows, cols: repr.cols, len: repr.data.iter().map(Vec::len).sum() });
        }
        DenseMatrix::new(repr.rows, repr.cols, repr.data.into_iter().flatten().collect())
    }
}

impl From<DenseMatrix> for MatrixRepr {
    fn from(m: DenseMatrix) -> Self {
        let data = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
        MatrixRepr { rows: m.rows, cols: m.cols, data }
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinopsError> {
        if data.len() != rows * cols {
            return Err(LinopsError::InvalidShape { rows, cols, len: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(LinopsError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input or non-finite entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        Self::new(rows.len(), cols, data).expect("finite entries")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Column vector `n × 1`.
    pub fn column(values: &[f64]) -> Self {
        Self::new(values.len(), 1, values.to_vec()).expect("finite entries")
    }

    /// Row vector `1 × n`.
    pub fn row_vector(values: &[f64]) -> Self {
        Self::new(1, values.len(), values.to_vec()).expect("finite entries")
    }

    /// Outer product `x yᵀ`.
    pub fn outer(x: &[f64], y: &[f64]) -> Self {
        let mut m = Self::zeros(x.len(), y.len());
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                m[(i, j)] = xi * yj;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product. Panics if the inner dimensions differ; use
    /// [`DenseMatrix::checked_mul`] for untrusted shapes.
    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        self.checked_mul(rhs).expect("matmul shape mismatch")
    }

    pub fn checked_mul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, LinopsError> {
        if self.cols != rhs.rows {
            return Err(LinopsError::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec shape mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: f64) -> DenseMatrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// `max |b_ij|`, zero for empty matrices.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Induced ∞-norm (max row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`; panics on shape mismatch.
    pub fn max_diff(&self, other: &DenseMatrix) -> f64 {
        self.sub(other).max_norm()
    }

    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: rows.len(), cols: self.cols, data }
    }

    /// `Bⁿ` by repeated multiplication; `B⁰ = I`.
    pub fn power(&self, n: usize) -> DenseMatrix {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.matmul(self);
        }
        acc
    }

    /// `‖B − Bᵀ‖_max`, or `None` for non-square input.
    pub fn asymmetry(&self) -> Option<f64> {
        self.is_square().then(|| self.max_diff(&self.transpose()))
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.5]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"data":[[1.0,2.0],[3.0,4.5]]}"#);
        let back: DenseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_rejects_ragged() {
        let bad = r#"{"rows":2,"cols":2,"data":[[1.0,2.0],[3.0]]}"#;
        assert!(serde_json::from_str::<DenseMatrix>(bad).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(DenseMatrix::new(1, 2, vec![1.0, f64::NAN]), Err(LinopsError::NonFinite)));
    }

    #[test]
    fn empty_shapes_multiply() {
        let left = DenseMatrix::zeros(3, 0);
        let right = DenseMatrix::zeros(0, 3);
        assert_eq!(left.matmul(&right), DenseMatrix::zeros(3, 3));
    }

    #[test]
    fn norms() {
        let m = DenseMatrix::from_rows(&[[1.0, -2.0], [3.0, 4.0]]);
        assert_eq!(m.max_norm(), 4.0);
        assert_eq!(m.norm_one(), 6.0);
        assert_eq!(m.norm_inf(), 7.0);
    }
}
