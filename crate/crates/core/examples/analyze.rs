//! The full pipeline, rendered as text and JSON.

use mdet::report::{analyze, render, AnalyzeConfig, ReportFormat};

fn main() {
    let report = analyze(&AnalyzeConfig::catalog("normal")).unwrap();
    print!("{}", render(&report, ReportFormat::Text));

    let report = analyze(&AnalyzeConfig::catalog("lognormal:0,1")).unwrap();
    let json = render(&report, ReportFormat::Json);
    println!("\nlognormal JSON report: {} bytes, conclusion \"{}\"", json.len(), report.conclusion);
}
