//! Shift functions `φ`, the inverse of `x + φ(x)`, and the certificate of
//! the regularity conditions on `ϕ(y) = φ(x(y))`.

use mdet::phi::{default_y_star_hint, make_phi, PhiFamily};

fn main() {
    for (family, a, alpha) in [
        (PhiFamily::LogPow, 1.0, 1.0),
        (PhiFamily::LogPow, 2.0, 0.5),
        (PhiFamily::LogPowPlusLogLog, 1.0, 0.5),
        (PhiFamily::LogPowTimesLogLog, 0.5, 0.0),
    ] {
        let phi = make_phi(family, a, alpha).unwrap();
        let y = 100.0;
        let x = phi.inverse(y).unwrap();
        let cert = phi.certify_conditions(default_y_star_hint(&phi), 1e8);
        println!(
            "{:<32} x(100) = {:.10}  C+ = {:.4}  y* = {:.4}  valid = {}",
            phi.label(),
            x,
            cert.c_plus,
            cert.y_star,
            cert.valid
        );
    }

    // α = 1 is outside the admissible range of the log-log families.
    println!("\n{}", make_phi(PhiFamily::LogPowPlusLogLog, 1.0, 1.0).unwrap_err());
}
