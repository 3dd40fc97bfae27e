// `w_t = a² w_xx + g` with Dirichlet data, by closed-form sine-mode integrals.

use skeleton_solve::fixtures;
use skeleton_solve::funcalg::{BiSeries, QuasiPoly, QuasiPolyVector};
use skeleton_solve::pdesolve::field::{SineMode, XtField};
use skeleton_solve::pdesolve::heat::{mode_amplitude_rk4, mode_rate, solve_heat_source, HeatMethod, HeatOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let single = XtField::from_modes(1, vec![SineMode { k: 1, amp: QuasiPolyVector::new(vec![QuasiPoly::constant(1.0)]) }]);
    let w = solve_heat_source(&single, 1.0, &HeatOptions { modes: 1, ..Default::default() })?.field;
    let err = (0..=10).map(|i| i as f64 / 10.0).fold(0.0f64, |m, x| m.max((w.eval(x, 0.3)[0] - fixtures::heat_mode_one(x, 0.3)).abs()));
    println!("single mode vs closed form: {err:.2e}");
    assert!(err <= 1e-8);

    let rk = mode_amplitude_rk4(&QuasiPoly::constant(1.0), mode_rate(1.0, 1), 0.3, 300);
    println!("RK4 mode amplitude {rk:.10}, closed form {:.10}", fixtures::heat_mode_one(0.5, 0.3));

    // polynomial source g = x²: the lifted solution is exact, the plain projection converges in M
    let g = XtField::from_poly(BiSeries::from_monomials(1, &[(0, 2, QuasiPoly::constant(1.0))]));
    let exact = solve_heat_source(&g, 1.0, &HeatOptions::default())?.field;
    for m in [16, 64, 256] {
        let w = solve_heat_source(&g, 1.0, &HeatOptions { modes: m, method: HeatMethod::Projection, ..Default::default() })?.field;
        println!("M = {m:4}: |w_M - w| at (0.5, 0.1) = {:.2e}", (w.eval(0.5, 0.1)[0] - exact.eval(0.5, 0.1)[0]).abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
