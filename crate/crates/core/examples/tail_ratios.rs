//! Windowed estimates of the tail ratios and their verdicts.

use mdet::density::catalog_density;
use mdet::phi::{make_phi, PhiFamily};
use mdet::tail::{gamma1, gamma2, gamma3, GridSpec};

fn main() {
    let phi = make_phi(PhiFamily::LogPow, 1.0, 1.0).unwrap();
    let grid = GridSpec::default();

    let normal = catalog_density("normal", &[]).unwrap().density;
    let g = gamma1(&normal, &phi, &grid).unwrap();
    println!("normal      gamma1 {} ({:e})", g.verdict, g.extrapolated);

    let chi = catalog_density("chi_squared", &[1.0]).unwrap().density;
    let g = gamma2(&chi, &phi, &grid).unwrap();
    println!("chi²(1)     gamma2 {} ({:e})", g.verdict, g.extrapolated);

    let exp = catalog_density("exponential", &[1.0]).unwrap().density;
    let g = gamma3(&exp, &phi, &grid).unwrap();
    println!("exponential gamma3 {} ({:e})", g.verdict, g.extrapolated);
    for w in &g.window_sups {
        println!("  [{:>8e}, {:>8e}] sup {:.3e}", w.start, w.end, w.sup);
    }

    let ln = catalog_density("lognormal", &[0.0, 1.0]).unwrap().density;
    let g = gamma3(&ln, &phi, &grid).unwrap();
    println!("lognormal   gamma3 {} ({:.6})", g.verdict, g.extrapolated);
}
