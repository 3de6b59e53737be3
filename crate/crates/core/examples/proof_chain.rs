//! The inequality chain behind the tail-ratio criterion, checked for one
//! density: constants, integral bounds, moment recursion and the resulting
//! Carleman lower bound.

use mdet::density::catalog_density;
use mdet::phi::{make_phi, PhiFamily};
use mdet::report::render_proofs;
use mdet::proofs::verify_proofs;
use mdet::tail::GridSpec;

fn main() {
    let phi = make_phi(PhiFamily::LogPow, 1.0, 1.0).unwrap();
    let d = catalog_density("exponential", &[1.0]).unwrap().density;
    let report = verify_proofs(&d, &phi, 40, &GridSpec::default()).unwrap();
    let text = render_proofs(&report);
    // Per-order rows are long; show the summary rows only.
    for line in text.lines().filter(|l| !l.contains(" n=")) {
        println!("{line}");
    }
    println!("({} rows in total)", report.rows.len());
}
