//! Densities given as expressions: parsing, canonical printing and
//! overflow-free evaluation of the log-density.

use mdet::density::SupportKind;
use mdet::expr::{eval_log, expr_density, parse_density_expr};
use mdet::quadrature::LogQuadrature;

fn main() {
    for src in ["exp(-x^2/2)", "x^3*exp(-x)", "1/(1+x^2)^3", "exp(-abs(x)^0.5)*(2+x^2)"] {
        let e = parse_density_expr(src).unwrap();
        println!("{src:<28} -> {e}");
    }

    let gauss = parse_density_expr("exp(-x^2/2)").unwrap();
    println!("\nln exp(-x^2/2) at x = 40: {}", eval_log(&gauss, 40.0).unwrap());
    println!("at x = 1e10: {}", eval_log(&gauss, 1e10).unwrap());

    let d = expr_density("x^2*exp(-x)", SupportKind::Stieltjes, 1.0)
        .unwrap()
        .normalize(&LogQuadrature::default())
        .unwrap();
    println!("\nnormalized {}: ln f(2) = {}", d.label(), d.ln_pdf(2.0));

    match parse_density_expr("exp(-x^2/2") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nexp(-x^2/2 : {e}"),
    }
}
