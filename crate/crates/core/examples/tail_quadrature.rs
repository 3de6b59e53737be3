//! Integrals of `exp(h(x))` over a half line, computed in `t = ln x`.

use mdet::quadrature::LogQuadrature;
use statrs::function::gamma::ln_gamma;

fn main() {
    let q = LogQuadrature::default();
    // ∫_0^∞ x^40 e^{-x} dx = 40!
    let r = q.integrate_tail(&|x: f64| 40.0 * x.ln() - x, 0.0).unwrap();
    println!("ln 40! = {} (ln Γ(41) = {}), {} evaluations", r.ln_value, ln_gamma(41.0), r.evaluations);

    // Gaussian tail beyond 10.
    let r = q.integrate_tail(&|x: f64| -0.5 * x * x, 10.0).unwrap();
    println!("ln ∫_10^∞ e^(-x²/2) dx = {}", r.ln_value);

    // A Cauchy-like tail has no first moment.
    let err = q.integrate_tail(&|x: f64| x.ln() - (1.0 + x * x).ln(), 0.0).unwrap_err();
    println!("x/(1+x²): {err}");
}
