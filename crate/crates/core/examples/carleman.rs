//! Carleman sums and the growth-exponent diagnosis.

use mdet::carleman::{carleman_terms, bound_implies_divergence};
use mdet::density::catalog_density;
use mdet::moments::moment_table_for_entry;

fn main() {
    for (name, p) in [("normal", vec![]), ("exponential", vec![1.0]), ("lognormal", vec![0.0, 1.0])] {
        let e = catalog_density(name, &p).unwrap();
        let t = moment_table_for_entry(&e, 40).unwrap();
        let c = carleman_terms(&t, e.density.support()).unwrap();
        println!(
            "{:<12} {:<12} exponent {:.4}  slope {:.4}  partial sum {:.4}",
            name,
            c.diagnosis.to_string(),
            c.growth_exponent,
            c.geometric_slope,
            c.partial_sums.last().unwrap()
        );
    }

    // A bound μ_n <= d0 c^n (n log n)^n forces the series to diverge.
    let (half, line) = bound_implies_divergence(5.0, 2.0, 100_000);
    println!("\nlower-bound series at N = 1e5: half line {:.3}, line {:.3}", half.last().unwrap(), line.last().unwrap());
}
