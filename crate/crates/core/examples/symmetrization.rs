//! Half-line densities as symmetric line densities `|x| g(x²)`.

use mdet::density::catalog_density;
use mdet::proofs::{check_moment_identity, symmetrize};

fn main() {
    let chi = catalog_density("chi_squared", &[1.0]).unwrap().density;
    let f = symmetrize(&chi).unwrap();
    let normal = catalog_density("normal", &[]).unwrap().density;
    for x in [0.5, 1.0, 3.0, -7.0] {
        println!("x = {x:>4}: {} {:.15}  normal {:.15}", f.label(), f.ln_pdf(x), normal.ln_pdf(x));
    }

    let exp = catalog_density("exponential", &[1.0]).unwrap().density;
    let id = check_moment_identity(&exp, 8).unwrap();
    println!("\n n  E[X^2n]        E[Y^n]");
    for (n, a, b) in &id.rows {
        println!("{n:>2}  {:<14.6} {:<14.6}", a.exp(), b.exp());
    }
    println!("max relative error {:.3e}", id.max_rel_err);
}
