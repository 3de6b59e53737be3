//! Moment tables by quadrature, cross-checked against closed forms.

use mdet::density::catalog_density;
use mdet::moments::{moment_table, moment_table_for_entry};

fn main() {
    let normal = catalog_density("normal", &[]).unwrap();
    let quad = moment_table(&normal.density, 30).unwrap();
    let exact = moment_table_for_entry(&normal, 30).unwrap();
    println!("normal, ln E[X^n]:");
    for n in [2u32, 10, 20, 30] {
        println!("  n = {n:<2} quadrature {:.12}  closed form {:.12}", quad.log_mu(n), exact.log_mu(n));
    }

    let lognormal = catalog_density("lognormal", &[0.0, 1.0]).unwrap();
    let t = moment_table_for_entry(&lognormal, 40).unwrap();
    println!("\nlognormal ln E[Y^40] = {} (= 40²/2)", t.log_mu(40));
    println!("log-convexity defect {:.3e}", t.lyapunov_defect());
}
