use std::io::{Read, Write};

use super::{FuncalgError, QuasiPolyVector};
use crate::linops::DenseMatrix;

/// Largest accepted `‖B_p⁻¹‖_∞ · h` for the RK4 terminal solve.
pub const RK4_STABILITY_BOUND: f64 = 2.5;

/// Vector samples on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, FuncalgError> {
        if times.len() != values.len() {
            return Err(FuncalgError::DimensionMismatch { expected: times.len(), found: values.len() });
        }
        let dim = values.first().map_or(0, Vec::len);
        if let Some(bad) = values.iter().find(|v| v.len() != dim) {
            return Err(FuncalgError::DimensionMismatch { expected: dim, found: bad.len() });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FuncalgError::InvalidGrid("times must be strictly increasing".into()));
        }
        if times.iter().chain(values.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(FuncalgError::NonFinite);
        }
        Ok(Self { times, values })
    }

    /// Samples a vector function on `grid`.
    pub fn sample(f: &QuasiPolyVector, grid: &[f64]) -> Self {
        Self { times: grid.to_vec(), values: grid.iter().map(|&t| f.eval(t)).collect() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn component(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[j]).collect()
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.values.last().map(Vec::as_slice)
    }

    /// Sup-norm distance to a vector function on the trajectory's grid.
    pub fn max_error(&self, exact: &QuasiPolyVector) -> f64 {
        self.times
            .iter()
            .zip(&self.values)
            .flat_map(|(&t, v)| exact.eval(t).into_iter().zip(v).map(|(e, x)| (e - x).abs()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }

    /// 5-point derivative stencil; one-sided 5-point formulas at the two
    /// ends. Requires a uniform grid with at least 5 points.
    pub fn derivative(&self) -> Result<Self, FuncalgError> {
        let n = self.len();
        if n < 5 {
            return Err(FuncalgError::InvalidGrid("at least 5 samples needed for a 4th-order derivative".into()));
        }
        let h = (self.times[n - 1] - self.times[0]) / (n - 1) as f64;
        let uniform = self.times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.max(1.0));
        if !uniform {
            return Err(FuncalgError::InvalidGrid("derivative requires a uniform grid".into()));
        }
        let d = self.dim();
        let y = &self.values;
        let mut out = vec![vec![0.0; d]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, o) in row.iter_mut().enumerate() {
                let f = |k: usize| y[k][j];
                *o = match i {
                    0 => (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h),
                    1 => (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * h),
                    _ if i == n - 2 => (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) / (12.0 * h),
                    _ if i == n - 1 => {
                        (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5)) / (12.0 * h)
                    }
                    _ => (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) / (12.0 * h),
                };
            }
        }
        Ok(Self { times: self.times.clone(), values: out })
    }

    /// Writes `t,v1,…,vd` with 15 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), FuncalgError> {
        let mut wr = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend((1..=self.dim()).map(|j| format!("v{j}")));
        wr.write_record(&header)?;
        for (t, v) in self.times.iter().zip(&self.values) {
            let mut rec = vec![format_sig15(*t)];
            rec.extend(v.iter().map(|x| format_sig15(*x)));
            wr.write_record(&rec)?;
        }
        wr.flush().map_err(|e| FuncalgError::Csv(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, FuncalgError> {
        let mut rd = csv::Reader::from_reader(r);
        let mut times = Vec::new();
        let mut values = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let nums: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|e| FuncalgError::Csv(format!("{s:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            let (t, v) = nums.split_first().ok_or_else(|| FuncalgError::Csv("empty record".into()))?;
            times.push(*t);
            values.push(v.to_vec());
        }
        Self::new(times, values)
    }
}

/// Decimal rendering with 15 significant digits.
pub fn format_sig15(x: f64) -> String {
    // folds −0 into 0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

/// Rounds to the value that [`format_sig15`] writes.
pub fn round_sig15(x: f64) -> f64 {
    format_sig15(x).parse().expect("formatted float parses")
}

/// `n+1` equally spaced points on `[0, T]` with `n = round(T/h)`.
pub fn uniform_grid(t_end: f64, h: f64) -> Result<Vec<f64>, FuncalgError> {
    if !(t_end > 0.0 && h > 0.0 && t_end.is_finite() && h.is_finite()) {
        return Err(FuncalgError::InvalidGrid(format!("need T > 0 and h > 0, got T={t_end}, h={h}")));
    }
    let n = ((t_end / h).round() as usize).max(1);
    Ok((0..=n).map(|i| t_end * i as f64 / n as f64).collect())
}

/// Classical RK4 for `y′ = rhs(t, y)` from `grid[0]`, one step per grid interval.
pub fn rk4<F>(rhs: F, y0: &[f64], grid: &[f64]) -> Trajectory
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let mut values = Vec::with_capacity(grid.len());
    let mut y = y0.to_vec();
    values.push(y.clone());
    let axpy = |y: &[f64], k: &[f64], c: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + c * b).collect() };
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(t + h, &axpy(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        values.push(y.clone());
    }
    Trajectory { times: grid.to_vec(), values }
}

/// Solves `v′ = B_p⁻¹(v + g(t))`, `v(grid[0]) = c₀` by RK4 on `grid`.
///
/// Fails with `StepTooLarge` when `‖B_p⁻¹‖_∞·h` exceeds [`RK4_STABILITY_BOUND`]
/// for the widest grid step `h`.
pub fn exp_convolve(b_inv: &DenseMatrix, g: &QuasiPolyVector, grid: &[f64], c0: &[f64]) -> Result<Trajectory, FuncalgError> {
    let d = b_inv.rows();
    if !b_inv.is_square() || g.dim() != d {
        return Err(FuncalgError::DimensionMismatch { expected: d, found: g.dim() });
    }
    if c0.len() != d {
        return Err(FuncalgError::DimensionMismatch { expected: d, found: c0.len() });
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FuncalgError::InvalidGrid("grid must be non-empty and strictly increasing".into()));
    }
    let h = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let norm_h = b_inv.norm_inf() * h;
    if norm_h > RK4_STABILITY_BOUND {
        return Err(FuncalgError::StepTooLarge { norm_h, bound: RK4_STABILITY_BOUND });
    }
    let rhs = |t: f64, v: &[f64]| {
        let w: Vec<f64> = v.iter().zip(g.eval(t)).map(|(a, b)| a + b).collect();
        b_inv.matvec(&w)
    };
    Ok(rk4(rhs, c0, grid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::QuasiPoly;
    use std::f64::consts::E;

    fn scalar(q: QuasiPoly) -> QuasiPolyVector {
        QuasiPolyVector::new(vec![q])
    }

    #[test]
    fn ramp_forcing_matches_analytic() {
        let grid = uniform_grid(1.0, 1e-3).unwrap();
        let tr = exp_convolve(&DenseMatrix::identity(1), &scalar(QuasiPoly::monomial(1.0, 1)), &grid, &[0.0]).unwrap();
        assert!((tr.last().unwrap()[0] - (E - 2.0)).abs() < 1e-8);
    }

    #[test]
    fn sine_forcing_matches_analytic() {
        let grid = uniform_grid(1.0, 1e-3).unwrap();
        let tr = exp_convolve(&DenseMatrix::identity(1), &scalar(QuasiPoly::sin(1.0, 1.0)), &grid, &[0.0]).unwrap();
        let exact = (E - 1f64.sin() - 1f64.cos()) / 2.0;
        assert!((tr.last().unwrap()[0] - exact).abs() < 1e-8);
    }

    #[test]
    fn zero_forcing_stays_zero() {
        let grid = uniform_grid(1.0, 1e-2).unwrap();
        let tr = exp_convolve(&DenseMatrix::identity(2), &QuasiPolyVector::zeros(2), &grid, &[0.0, 0.0]).unwrap();
        assert!(tr.values().iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn halving_step_is_fourth_order() {
        let g = scalar(QuasiPoly::monomial(1.0, 1));
        let exact = scalar(QuasiPoly::exp(1.0, 1.0).sub(&QuasiPoly::polynomial(&[1.0, 1.0])));
        let err = |h: f64| {
            let grid = uniform_grid(1.0, h).unwrap();
            exp_convolve(&DenseMatrix::identity(1), &g, &grid, &[0.0]).unwrap().max_error(&exact)
        };
        assert!(err(0.1) / err(0.05) >= 14.0);
    }

    #[test]
    fn step_too_large() {
        let grid = uniform_grid(1.0, 0.5).unwrap();
        let r = exp_convolve(&DenseMatrix::diag(&[10.0]), &QuasiPolyVector::zeros(1), &grid, &[0.0]);
        assert!(matches!(r, Err(FuncalgError::StepTooLarge { .. })));
    }

    #[test]
    fn five_point_derivative() {
        let f = scalar(QuasiPoly::sin(1.0, 2.0));
        let grid = uniform_grid(1.0, 1e-2).unwrap();
        let d = Trajectory::sample(&f, &grid).derivative().unwrap();
        assert!(d.max_error(&f.derivative()) < 1e-6);
    }

    #[test]
    fn csv_roundtrip() {
        let f = QuasiPolyVector::new(vec![QuasiPoly::exp(1.0, 1.0), QuasiPoly::cos(1.0, 3.0)]);
        let grid = uniform_grid(1.0, 0.1).unwrap();
        let tr = Trajectory::sample(&f, &grid);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,v1,v2\n"));
        let back = Trajectory::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), tr.len());
        for (a, b) in back.values().iter().flatten().zip(tr.values().iter().flatten()) {
            assert_eq!(*a, round_sig15(*b));
        }
    }
}
