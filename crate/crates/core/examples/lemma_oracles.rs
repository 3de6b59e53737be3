//! The two auxiliary lemmas checked numerically.

use mdet::density::catalog_density;
use mdet::proofs::{lemma1_integral_bound, lemma1_sup, lemma2_bound_check, lemma2_bound_check_scaled};

fn main() {
    let r = lemma1_sup(10, 0.1);
    println!(
        "sup (10 log y - 0.1 y) = {} (formula {}, bound {})",
        r.numeric_max, r.formula_value, r.upper_bound
    );

    let exp = catalog_density("exponential", &[1.0]).unwrap().density;
    let i = lemma1_integral_bound(&exp, 5, 0.2, 1.0).unwrap();
    println!("integrated form, exponential, n = 5: ln lhs {:.6} <= ln rhs {:.6}: {}", i.ln_lhs, i.ln_rhs, i.holds);

    let c = lemma2_bound_check(2.0, 0.5, 3.0, 100);
    println!("\nrecursion bound c=2 b=0.5 a1=3: worst log slack {:.4} at n = {}", c.worst_slack, c.worst_n);
    let c = lemma2_bound_check_scaled(1.0, 1.0, 1.0, 100, 0.1);
    println!("with d0/10: worst log slack {:.4} at n = {} (violated)", c.worst_slack, c.worst_n);
}
