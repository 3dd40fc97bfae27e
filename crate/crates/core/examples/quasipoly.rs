// Exact arithmetic on sums of `c tᵏ e^{αt} {1, sin ωt, cos ωt}`.

use skeleton_solve::funcalg::QuasiPoly;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = QuasiPoly::monomial(1.0, 2).mul(&QuasiPoly::exp(1.0, -1.0)).add(&QuasiPoly::sin(3.0, 2.0));
    println!("f = {f}");
    println!("f' = {}", f.derivative());
    println!("int_0^1 f = {:.12}", f.integrate(0.0, 1.0));
    println!("int_0^t e^(-2(t-s)) f(s) ds at t = 1: {:.12}", f.convolve_exp(2.0).eval(1.0));
    let h = 1e-5;
    let fd = (f.eval(0.5 + h) - f.eval(0.5 - h)) / (2.0 * h);
    println!("f'(0.5) = {:.10}, central difference {fd:.10}", f.derivative().eval(0.5));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
