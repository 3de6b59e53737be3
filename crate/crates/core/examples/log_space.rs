//! Log-space arithmetic for quantities far outside the `f64` range.

use mdet::logspace::{log_add_exp, log_sum_exp, SignedLog};

fn main() {
    // e^800 + e^799 would overflow; its logarithm does not.
    println!("ln(e^800 + e^799) = {}", log_add_exp(800.0, 799.0));
    println!("ln(sum of e^k, k = 0..1000) = {}", log_sum_exp(&(0..1000).map(f64::from).collect::<Vec<_>>()));

    // e^899 - (1/2) e^900 is negative; the sign survives.
    let a = SignedLog::from_ln(899.0);
    let b = SignedLog::from_ln(900.0 - 2f64.ln());
    let d = a.sub(b);
    println!("e^899 - (1/2) e^900 = sign {} * e^{}", d.sign, d.ln_abs);
}
