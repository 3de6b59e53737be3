use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdet::density::{catalog_fixtures, SupportKind};
use mdet::phi::PhiFamily;
use mdet::proofs::{selftest, verify_proofs};
use mdet::report::{analyze, build_density, render, render_proofs, AnalyzeConfig, DensitySource, ReportFormat};
use mdet::tail::{GammaKind, GridSpec};

#[derive(Parser)]
#[command(name = "mdet", version, about = "Tail-ratio diagnostics for moment determinacy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis for one density.
    Analyze(AnalyzeArgs),
    /// Check the inequality chain of the determinacy argument numerically.
    VerifyProofs(CommonArgs),
    /// List the catalog fixtures and their known classification.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
    },
    /// Run the lemma oracles and negative controls.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Catalog density, `name` or `name:p1,p2`.
    #[arg(long, conflicts_with = "density_expr", required_unless_present = "density_expr")]
    dist: Option<String>,
    /// Log-density kernel as an expression in `x`.
    #[arg(long)]
    density_expr: Option<String>,
    /// Support of an expression density: R or R+.
    #[arg(long, default_value = "R", value_parser = parse_support)]
    support: SupportKind,
    /// Tail threshold of an expression density.
    #[arg(long, default_value_t = 1.0)]
    x0: f64,
    /// Normalize an expression density by quadrature.
    #[arg(long)]
    normalize: bool,
    /// Shift family: logpow, logpow+loglog, logpow*loglog.
    #[arg(long, default_value = "logpow", value_parser = parse_phi)]
    phi: PhiFamily,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Highest moment order.
    #[arg(long, default_value_t = 40)]
    nmax: u32,
    #[arg(long, env = "MDET_GRID_END", default_value_t = 1e8)]
    grid_end: f64,
    #[arg(long, default_value_t = 5)]
    windows: usize,
    #[arg(long, default_value_t = 200)]
    points_per_window: usize,
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    report: Format,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Ratios to estimate: auto, or a comma list of g1, g2, g3.
    #[arg(long, default_value = "auto")]
    gamma: String,
    /// Append the proof-check table.
    #[arg(long)]
    proofs: bool,
}

fn parse_support(s: &str) -> Result<SupportKind, String> {
    match s {
        "R" | "r" => Ok(SupportKind::Hamburger),
        "R+" | "r+" => Ok(SupportKind::Stieltjes),
        _ => Err(format!("unknown support '{s}' (expected R or R+)")),
    }
}

fn parse_phi(s: &str) -> Result<PhiFamily, String> {
    PhiFamily::parse(s).map_err(|e| e.to_string())
}

fn parse_kinds(s: &str) -> Result<Option<Vec<GammaKind>>, String> {
    if s == "auto" {
        return Ok(None);
    }
    s.split(',')
        .map(|k| match k.trim() {
            "g1" => Ok(GammaKind::G1),
            "g2" => Ok(GammaKind::G2),
            "g3" => Ok(GammaKind::G3),
            other => Err(format!("unknown ratio '{other}' (expected g1, g2, g3 or auto)")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn config(c: &CommonArgs) -> AnalyzeConfig {
    let source = match (&c.dist, &c.density_expr) {
        (Some(d), _) => DensitySource::Catalog(d.clone()),
        (None, Some(e)) => DensitySource::Expr {
            src: e.clone(),
            support: c.support,
            x0: c.x0,
            normalize: c.normalize,
        },
        (None, None) => unreachable!("clap requires one source"),
    };
    AnalyzeConfig {
        source,
        phi_family: c.phi,
        a: c.a,
        alpha: c.alpha,
        n_max: c.nmax,
        grid: GridSpec {
            x_end: c.grid_end,
            windows: c.windows,
            points_per_window: c.points_per_window,
            margin: c.margin,
        },
        kinds: None,
        with_proofs: false,
    }
}

fn fmt(f: Format) -> ReportFormat {
    match f {
        Format::Text => ReportFormat::Text,
        Format::Json => ReportFormat::Json,
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Analyze(a) => {
            let mut cfg = config(&a.common);
            cfg.kinds = parse_kinds(&a.gamma)?;
            cfg.with_proofs = a.proofs;
            let r = analyze(&cfg).map_err(|e| e.to_string())?;
            print!("{}", render(&r, fmt(a.common.report)));
            Ok(if r.any_theorem_applies() { 0 } else { 2 })
        }
        Command::VerifyProofs(c) => {
            let cfg = config(&c);
            let (d, _) = build_density(&cfg.source).map_err(|e| e.to_string())?;
            let phi = mdet::phi::make_phi(cfg.phi_family, cfg.a, cfg.alpha).map_err(|e| e.to_string())?;
            let p = verify_proofs(&d, &phi, cfg.n_max, &cfg.grid).map_err(|e| e.to_string())?;
            match c.report {
                Format::Text => print!("{}", render_proofs(&p)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&p).map_err(|e| e.to_string())?),
            }
            Ok(if p.all_passed() { 0 } else { 3 })
        }
        Command::Catalog { report } => {
            let rows: Vec<_> = catalog_fixtures()
                .into_iter()
                .map(|e| {
                    serde_json::json!({
                        "name": e.name,
                        "params": e.params,
                        "support": e.density.support(),
                        "label": e.density.label(),
                        "classification": e.classification,
                        "source": e.classification_source,
                    })
                })
                .collect();
            match report {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?),
                Format::Text => {
                    for r in &rows {
                        println!(
                            "{:<40} {:<3} {:<8} {}",
                            r["label"].as_str().unwrap_or(""),
                            if r["support"] == "HAMBURGER" { "R" } else { "R+" },
                            r["classification"].as_str().unwrap_or(""),
                            r["source"].as_str().unwrap_or("")
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Selftest => {
            let lines = selftest();
            for l in &lines {
                println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
            }
            Ok(if lines.iter().all(|l| l.passed) { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for "no theorem applies".
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
