use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::field::{series_sine_coefficient, SineMode, XtField};
use super::PdeError;
use crate::funcalg::integrate::{rk4, uniform_grid};
use crate::funcalg::{BiSeries, QuasiPoly, QuasiPolyVector};

/// Largest accepted number of sine modes.
pub const MODE_CAP: usize = 1024;

/// How the polynomial part of a source is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatMethod {
    /// A polynomial particular solution plus decaying modes that cancel its initial value.
    Lifted,
    /// Plain sine-mode expansion of the source.
    Projection,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeatOptions {
    pub modes: usize,
    pub method: HeatMethod,
    /// Maximum number of polynomial lifting steps before the rest is projected.
    pub lift_depth: usize,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self { modes: 64, method: HeatMethod::Lifted, lift_depth: 12 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatSolution {
    pub field: XtField,
    /// `sup_x |u(x,0)|` on 101 points; the initial condition error of the truncated expansion.
    pub ic_error: f64,
    /// Largest coefficient of the source part left to the sine projection.
    pub projected_remainder: f64,
}

/// Eigenvalue `a²(kπ)²` of the Dirichlet mode `k`.
pub fn mode_rate(a: f64, k: usize) -> f64 {
    a * a * (k as f64 * PI).powi(2)
}

/// `q` with `q″ = p`, `q(0) = q(1) = 0`, for `p` polynomial in `x`.
pub fn inverse_dirichlet_laplacian(p: &BiSeries) -> BiSeries {
    let d = p.dim();
    let mut coeffs = vec![QuasiPolyVector::zeros(d); p.order() + 3];
    let mut linear = QuasiPolyVector::zeros(d);
    for (m, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let q = c.scale(1.0 / ((m + 1) * (m + 2)) as f64);
        linear = linear.sub(&q);
        coeffs[m + 2] = q;
    }
    coeffs[1] = linear;
    BiSeries::new(d, coeffs).expect("uniform dimension")
}

/// Solves `u_t − a²u_xx = g` on `(0,1)×(0,T]` with `u(x,0) = 0`, `u(0,t) = u(1,t) = 0`.
///
/// Sine parts of `g` are solved exactly per mode,
/// `y_k(t) = ∫₀ᵗ e^{−a²(kπ)²(t−s)} g_k(s) ds`. The polynomial part either gets
/// a polynomial particular solution (lifting) or is projected onto the first
/// `M` modes.
pub fn solve_heat_source(g: &XtField, a: f64, options: &HeatOptions) -> Result<HeatSolution, PdeError> {
    if options.modes > MODE_CAP {
        return Err(PdeError::ModeOverflow { requested: options.modes, cap: MODE_CAP });
    }
    if options.modes == 0 {
        return Err(PdeError::InvalidProblem("at least one sine mode is required".into()));
    }
    if !(a.is_finite() && a != 0.0) {
        return Err(PdeError::InvalidProblem(format!("diffusivity must be non-zero, got {a}")));
    }
    let d = g.dim();
    let a2 = a * a;

    let mut modes: Vec<SineMode> = g.sine.iter().map(|m| SineMode { k: m.k, amp: m.amp.convolve_exp(mode_rate(a, m.k)) }).collect();

    let mut lifted = BiSeries::zeros(d, 0);
    let mut rest = g.poly.clone();
    if options.method == HeatMethod::Lifted {
        for _ in 0..options.lift_depth {
            if rest.is_zero() {
                break;
            }
            let v = inverse_dirichlet_laplacian(&rest).scale(-1.0 / a2);
            rest = v.d_transverse().neg();
            lifted = lifted.add(&v);
        }
    }
    let projected_remainder = rest.coeffs().iter().fold(0.0, |m: f64, c| m.max(c.max_coeff()));

    let initial = lifted.map(|c| QuasiPolyVector::new(c.eval(0.0).into_iter().map(QuasiPoly::constant).collect()));
    for k in 1..=options.modes {
        let lam = mode_rate(a, k);
        let mut amp = QuasiPolyVector::zeros(d);
        if !rest.is_zero() {
            amp = amp.add(&series_sine_coefficient(&rest, k).convolve_exp(lam));
        }
        if !lifted.is_zero() {
            let c0 = series_sine_coefficient(&initial, k).eval(0.0);
            amp = amp.sub(&QuasiPolyVector::from_direction(&c0, &QuasiPoly::exp(1.0, -lam)));
        }
        if !amp.is_zero() {
            modes.push(SineMode { k, amp });
        }
    }

    let field = XtField::from_poly(lifted).add(&XtField::from_modes(d, modes));
    let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let ic_error = field.sup_on(&xs, &[0.0]);
    log::debug!("heat solve: {} modes, ic error {ic_error:e}, projected remainder {projected_remainder:e}", options.modes);
    Ok(HeatSolution { field, ic_error, projected_remainder })
}

/// `y(T)` for `y′ = −λy + g(t)`, `y(0) = 0` by RK4 with `steps` steps; an
/// independent check on the closed-form mode integrals.
pub fn mode_amplitude_rk4(g: &QuasiPoly, lambda: f64, t_end: f64, steps: usize) -> f64 {
    let grid = uniform_grid(t_end, t_end / steps as f64).expect("positive horizon");
    let tr = rk4(|t, y| vec![-lambda * y[0] + g.eval(t)], &[0.0], &grid);
    tr.last().expect("non-empty grid")[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_mode(k: usize, q: QuasiPoly) -> XtField {
        XtField::from_modes(1, vec![SineMode { k, amp: QuasiPolyVector::new(vec![q]) }])
    }

    #[test]
    fn zero_source() {
        let sol = solve_heat_source(&XtField::zeros(2), 1.0, &HeatOptions::default()).unwrap();
        assert!(sol.field.is_zero());
    }

    #[test]
    fn single_mode_closed_form() {
        let g = scalar_mode(1, QuasiPoly::constant(1.0));
        let sol = solve_heat_source(&g, 1.0, &HeatOptions { modes: 1, ..HeatOptions::default() }).unwrap();
        let p2 = PI * PI;
        for &(x, t) in &[(0.5, 0.1), (0.25, 0.7), (0.9, 0.02)] {
            let exact = (PI * x).sin() * (1.0 - (-p2 * t).exp()) / p2;
            assert!((sol.field.eval(x, t)[0] - exact).abs() < 1e-14);
        }
        assert!((sol.field.eval(0.5, 0.1)[0] - 0.063557984).abs() < 1e-8);
    }

    #[test]
    fn mode_two_ramp() {
        let g = scalar_mode(2, QuasiPoly::monomial(1.0, 1));
        let sol = solve_heat_source(&g, 1.0, &HeatOptions::default()).unwrap();
        let lam = 4.0 * PI * PI;
        let (x, t) = (0.3, 0.4);
        let y = t / lam - (1.0 - (-lam * t).exp()) / (lam * lam);
        assert!((sol.field.eval(x, t)[0] - (2.0 * PI * x).sin() * y).abs() < 1e-8);
        assert!((mode_amplitude_rk4(&QuasiPoly::monomial(1.0, 1), lam, t, 4000) - y).abs() < 1e-10);
    }

    #[test]
    fn mode_overflow() {
        let opts = HeatOptions { modes: MODE_CAP + 1, ..HeatOptions::default() };
        assert!(matches!(solve_heat_source(&XtField::zeros(1), 1.0, &opts), Err(PdeError::ModeOverflow { .. })));
    }

    #[test]
    fn lifting_solves_polynomial_sources_exactly() {
        let poly = BiSeries::from_monomials(
            1,
            &[(0, 0, QuasiPoly::monomial(1.0, 1)), (0, 2, QuasiPoly::constant(3.0)), (0, 1, QuasiPoly::exp(1.0, 0.5))],
        );
        let g = XtField::from_poly(poly);
        let sol = solve_heat_source(&g, 1.0, &HeatOptions { modes: 256, ..HeatOptions::default() }).unwrap();
        let r = sol.field.heat_image(1.0).sub(&g);
        let xs: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let ts = [0.0, 0.05, 0.1, 0.2];
        assert!(r.sup_on(&xs, &ts) < 1e-9);
        assert!(sol.field.sup_on(&[0.0, 1.0], &ts) < 1e-12);
        assert!(sol.ic_error < 1e-5);
    }

    #[test]
    fn projection_converges_monotonically() {
        let poly = BiSeries::from_monomials(1, &[(0, 0, QuasiPoly::constant(1.0)), (0, 2, QuasiPoly::monomial(1.0, 1))]);
        let g = XtField::from_poly(poly);
        let reference = solve_heat_source(&g, 1.0, &HeatOptions { modes: 1024, ..HeatOptions::default() }).unwrap();
        let xs: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        let ts = [0.05, 0.1, 0.2];
        let errs: Vec<f64> = [16, 64, 256]
            .iter()
            .map(|&m| {
                let opts = HeatOptions { modes: m, method: HeatMethod::Projection, ..HeatOptions::default() };
                solve_heat_source(&g, 1.0, &opts).unwrap().field.sub(&reference.field).sup_on(&xs, &ts)
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }
}
