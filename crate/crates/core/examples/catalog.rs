//! The catalog of reference densities with known classifications.

use mdet::density::{catalog_fixtures, parse_dist_spec};

fn main() {
    for e in catalog_fixtures() {
        println!(
            "{:<28} {:<3} {:<6} {}",
            e.density.label(),
            e.density.support().to_string(),
            e.classification,
            e.classification_source
        );
    }

    let g = parse_dist_spec("gamma:3,2").unwrap();
    println!("\n{} at x = 5: ln f = {}", g.density.label(), g.density.ln_pdf(5.0));
    let m = g.closed_form_log_moment.as_ref().unwrap();
    println!("ln E[X^10] = {}", m(10));
}
