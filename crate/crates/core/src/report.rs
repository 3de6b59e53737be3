//! The analysis pipeline and its text and JSON renderings.
//!
//! `analyze` runs density construction, the shift certificate, the tail
//! ratio estimates, the moment table, the Carleman diagnosis and the
//! theorem decision table, in that order. Everything is deterministic for a
//! given configuration.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::carleman::{carleman_terms, CarlemanDiagnosis};
use crate::density::{parse_dist_spec, Classification, SupportKind, TailDensity};
use crate::expr::expr_density;
use crate::moments::{moment_table, moment_table_for_entry, MomentTable};
use crate::phi::{default_y_star_hint, make_phi, ConditionCertificate, PhiFamily};
use crate::proofs::{verify_proofs, ProofReport};
use crate::quadrature::LogQuadrature;
use crate::tail::{auto_kinds, estimate, GammaEstimate, GammaKind, GridSpec, Verdict};

/// Version of the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{module} failed during {stage}: {message}")]
pub struct ReportError {
    pub module: &'static str,
    pub stage: &'static str,
    pub message: String,
}

fn err(module: &'static str, stage: &'static str, e: impl ToString) -> ReportError {
    ReportError {
        module,
        stage,
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensitySource {
    /// `name` or `name:p1,p2,...`.
    Catalog(String),
    Expr {
        src: String,
        support: SupportKind,
        x0: f64,
        normalize: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub source: DensitySource,
    pub phi_family: PhiFamily,
    pub a: f64,
    pub alpha: f64,
    pub n_max: u32,
    pub grid: GridSpec,
    /// Ratios to estimate; `None` picks them from the support.
    pub kinds: Option<Vec<GammaKind>>,
    pub with_proofs: bool,
}

impl AnalyzeConfig {
    pub fn catalog(spec: &str) -> Self {
        AnalyzeConfig {
            source: DensitySource::Catalog(spec.to_string()),
            phi_family: PhiFamily::LogPow,
            a: 1.0,
            alpha: 1.0,
            n_max: 40,
            grid: GridSpec::default(),
            kinds: None,
            with_proofs: false,
        }
    }

    fn echo(&self) -> String {
        let src = match &self.source {
            DensitySource::Catalog(s) => format!("dist={s}"),
            DensitySource::Expr {
                src,
                support,
                x0,
                normalize,
            } => format!("density-expr=\"{src}\" support={support} x0={x0} normalize={normalize}"),
        };
        let kinds = match &self.kinds {
            None => "auto".to_string(),
            Some(k) => k.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
        };
        format!(
            "{src} phi={} a={} alpha={} nmax={} gamma={kinds} grid-end={:e} windows={} points-per-window={} margin={}",
            self.phi_family.cli_name(),
            self.a,
            self.alpha,
            self.n_max,
            self.grid.x_end,
            self.grid.windows,
            self.grid.points_per_window,
            self.grid.margin
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MomentSource {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSummary {
    pub n_max: u32,
    pub source: MomentSource,
    /// `ln E|X|^n` for `n = 1..=n_max`.
    pub log_abs_moments: Vec<f64>,
    /// Largest violation of log-convexity in `n`; nonpositive for a valid table.
    pub lyapunov_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: u8,
    pub applies: bool,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationEcho {
    pub classification: Classification,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminacyReport {
    pub schema: u32,
    pub input_echo: String,
    pub density: String,
    pub support: SupportKind,
    pub x0: f64,
    pub phi: String,
    pub phi_certificate: ConditionCertificate,
    pub gammas: Vec<GammaEstimate>,
    pub moments: Option<MomentSummary>,
    pub carleman: Vec<CarlemanDiagnosis>,
    pub theorem_verdicts: Vec<TheoremVerdict>,
    pub conclusion: String,
    pub known_classification: Option<ClassificationEcho>,
    pub notes: Vec<String>,
    pub proof_checks: Option<ProofReport>,
}

impl DeterminacyReport {
    pub fn any_theorem_applies(&self) -> bool {
        self.theorem_verdicts.iter().any(|t| t.applies)
    }

    pub fn gamma(&self, kind: GammaKind) -> Option<&GammaEstimate> {
        self.gammas.iter().find(|g| g.kind == kind)
    }
}

pub const NO_CONDITION: &str = "no sufficient condition certified";

/// Builds the density named by the configuration, with its catalog entry
/// when there is one.
pub fn build_density(
    source: &DensitySource,
) -> Result<(TailDensity, Option<crate::density::CatalogEntry>), ReportError> {
    match source {
        DensitySource::Catalog(spec) => {
            let e = parse_dist_spec(spec).map_err(|e| err("density-model", "catalog lookup", e))?;
            Ok((e.density.clone(), Some(e)))
        }
        DensitySource::Expr {
            src,
            support,
            x0,
            normalize,
        } => {
            let d = expr_density(src, *support, *x0)
                .map_err(|e| err("density-expr", "parse and validate", e))?;
            let d = if *normalize {
                d.normalize(&LogQuadrature::default())
                    .map_err(|e| err("density-model", "normalization", e))?
            } else {
                d
            };
            Ok((d, None))
        }
    }
}

/// Runs the whole pipeline.
pub fn analyze(cfg: &AnalyzeConfig) -> Result<DeterminacyReport, ReportError> {
    let (d, entry) = build_density(&cfg.source)?;
    let phi = make_phi(cfg.phi_family, cfg.a, cfg.alpha).map_err(|e| err("phi-machinery", "construction", e))?;
    let cert = phi.certify_conditions(default_y_star_hint(&phi), cfg.grid.x_end);
    let mut notes = Vec::new();

    let kinds: Vec<GammaKind> = match &cfg.kinds {
        Some(k) => k.clone(),
        None => auto_kinds(d.support()).to_vec(),
    };
    let mut gammas = Vec::new();
    for &k in &kinds {
        match estimate(k, &d, &phi, &cfg.grid) {
            Ok(g) => gammas.push(g),
            Err(e) => notes.push(format!("{k} not estimated: {e}")),
        }
    }

    let table: Option<MomentTable> = if !d.is_normalized() {
        notes.push("density is not normalized; moments and Carleman sums skipped (use --normalize)".into());
        None
    } else {
        let t = match &entry {
            Some(e) => moment_table_for_entry(e, cfg.n_max),
            None => moment_table(&d, cfg.n_max),
        };
        match t {
            Ok(t) => Some(t),
            Err(e) => {
                notes.push(format!("moment table unavailable: {e}"));
                None
            }
        }
    };
    let mut carleman = Vec::new();
    if let Some(t) = &table {
        match carleman_terms(t, d.support()) {
            Ok(c) => carleman.push(c),
            Err(e) => notes.push(format!("Carleman diagnosis unavailable: {e}")),
        }
    }
    let moments = table.as_ref().map(|t| MomentSummary {
        n_max: t.n_max,
        source: if t.closed_form {
            MomentSource::ClosedForm
        } else {
            MomentSource::Quadrature
        },
        log_abs_moments: t.log_mu.clone(),
        lyapunov_defect: t.lyapunov_defect(),
    });

    let theorem_verdicts = decide(d.support(), &cert, &gammas);
    let applied: Vec<String> = theorem_verdicts
        .iter()
        .filter(|t| t.applies)
        .map(|t| format!("Theorem {}", t.theorem))
        .collect();
    let conclusion = if applied.is_empty() {
        NO_CONDITION.to_string()
    } else {
        format!("M-det by {}", applied.join(", "))
    };

    let proof_checks = if cfg.with_proofs {
        Some(verify_proofs(&d, &phi, cfg.n_max, &cfg.grid).map_err(|e| err("proof-oracles", "verification", e))?)
    } else {
        None
    };

    Ok(DeterminacyReport {
        schema: SCHEMA_VERSION,
        input_echo: cfg.echo(),
        density: d.label().to_string(),
        support: d.support(),
        x0: d.x0(),
        phi: phi.label().to_string(),
        phi_certificate: cert,
        gammas,
        moments,
        carleman,
        theorem_verdicts,
        conclusion,
        known_classification: entry.map(|e| ClassificationEcho {
            classification: e.classification,
            source: e.classification_source.clone(),
        }),
        notes,
        proof_checks,
    })
}

/// The theorem decision table. No outcome ever asserts indeterminacy.
pub fn decide(
    support: SupportKind,
    cert: &ConditionCertificate,
    gammas: &[GammaEstimate],
) -> Vec<TheoremVerdict> {
    let find = |k: GammaKind| gammas.iter().find(|g| g.kind == k);
    let check = |need: SupportKind, kind: GammaKind, ok: &str| -> (bool, String) {
        if support != need {
            return (false, format!("not applicable: requires support {need}"));
        }
        if !cert.valid {
            return (false, "not applicable: shift conditions not certified".into());
        }
        match find(kind) {
            None => (false, format!("not applicable: {kind} not evaluated")),
            Some(g) if g.side_condition_failed => {
                (false, format!("not applicable: {kind} side condition fails"))
            }
            Some(g) if g.verdict == Verdict::Satisfied => (true, ok.to_string()),
            Some(g) => (false, format!("not applicable: {kind} is {}", g.verdict)),
        }
    };
    let rows = [
        (1, check(SupportKind::Hamburger, GammaKind::G1, "X, X², |X| M-det")),
        (2, check(SupportKind::Stieltjes, GammaKind::G2, "Y M-det on ℝ+")),
        (3, check(SupportKind::Stieltjes, GammaKind::G3, "Y and Y² M-det on ℝ+")),
    ];
    rows.into_iter()
        .map(|(theorem, (applies, conclusion))| TheoremVerdict {
            theorem,
            applies,
            conclusion,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

pub fn render(report: &DeterminacyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(report),
        ReportFormat::Text => render_text(report),
    }
}

pub fn render_json(report: &DeterminacyReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}

pub fn render_text(r: &DeterminacyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mdet report (schema {})", r.schema);
    let _ = writeln!(s, "input: {}", r.input_echo);
    let _ = writeln!(s, "density: {} on {}, tail from x0 = {}", r.density, r.support, r.x0);
    if let Some(k) = &r.known_classification {
        let _ = writeln!(s, "known classification: {} ({})", k.classification, k.source);
    }
    let c = &r.phi_certificate;
    let _ = writeln!(s, "\nshift {}", r.phi);
    let _ = writeln!(
        s,
        "  certificate: {} (C+ = {:.6}, y* = {:.6}, grid [{:.6}, {:e}], {} points)",
        if c.valid { "VALID" } else { "INVALID" },
        c.c_plus,
        c.y_star,
        c.grid_min,
        c.grid_max,
        c.grid_points
    );
    let _ = writeln!(s, "  sup ϕ/log y = {:.6}, sup yϕ' = {:.6}", c.sup_b, c.sup_c);
    for f in &c.failed {
        let _ = writeln!(s, "  failed: {f}");
    }
    for n in &c.notes {
        let _ = writeln!(s, "  note: {n}");
    }

    for g in &r.gammas {
        let _ = writeln!(
            s,
            "\n{}: {} (extrapolated {:.6e}, margin {})",
            g.kind, g.verdict, g.extrapolated, g.margin
        );
        if let (Some(p), Some(m)) = (g.extrapolated_plus, g.extrapolated_minus) {
            let _ = writeln!(s, "  one-sided: plus {p:.6e}, minus {m:.6e}");
        }
        if let Some(sr) = g.side_ratio {
            let _ = writeln!(
                s,
                "  side condition φ(x)/x at grid end: {sr:.6e} ({})",
                if g.side_condition_failed { "fails" } else { "holds" }
            );
        }
        let _ = writeln!(s, "  {:>14} {:>14} {:>14} {:>14} {:>14}", "window start", "window end", "sup", "sup plus", "sup minus");
        for w in &g.window_sups {
            let _ = writeln!(
                s,
                "  {:>14.6e} {:>14.6e} {:>14.6e} {:>14} {:>14}",
                w.start,
                w.end,
                w.sup,
                fmt_opt(w.sup_plus),
                fmt_opt(w.sup_minus)
            );
        }
    }

    if let Some(m) = &r.moments {
        let src = match m.source {
            MomentSource::ClosedForm => "closed form",
            MomentSource::Quadrature => "quadrature",
        };
        let _ = writeln!(s, "\nmoments ({src}, n <= {}):", m.n_max);
        let shown: Vec<usize> = (0..m.log_abs_moments.len())
            .filter(|&i| i < 5 || i + 1 == m.log_abs_moments.len() || (i + 1) % 10 == 0)
            .collect();
        for i in shown {
            let _ = writeln!(s, "  ln E|X|^{:<3} = {:.10e}", i + 1, m.log_abs_moments[i]);
        }
        let _ = writeln!(s, "  log-convexity defect {:.3e} (nonpositive when log-convex)", m.lyapunov_defect);
    }
    for cd in &r.carleman {
        let _ = writeln!(
            s,
            "\nCarleman ({}): {} (fitted exponent {:.4}, geometric slope {:.4}, fit on terms {}..{}, partial sum {:.6})",
            cd.kind,
            cd.diagnosis,
            cd.growth_exponent,
            cd.geometric_slope,
            cd.fit_window.0,
            cd.fit_window.1,
            cd.partial_sums.last().copied().unwrap_or(0.0)
        );
    }

    let _ = writeln!(s);
    for t in &r.theorem_verdicts {
        if t.applies {
            let _ = writeln!(s, "Theorem {}: APPLIES ({})", t.theorem, t.conclusion);
        } else {
            let _ = writeln!(s, "Theorem {}: does not apply ({})", t.theorem, t.conclusion.trim_start_matches("not applicable: "));
        }
    }
    let _ = writeln!(s, "conclusion: {}", r.conclusion);
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    if let Some(p) = &r.proof_checks {
        s.push('\n');
        s.push_str(&render_proofs(p));
    }
    s
}

/// Pass/fail table of a proof verification.
pub fn render_proofs(p: &ProofReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "proof checks for {} with {} (route: {})", p.density, p.phi, p.route);
    for r in &p.rows {
        let status = match (r.control, r.passed) {
            (false, true) => "PASS",
            (false, false) => "FAIL",
            (true, true) => "CONTROL-TRIGGERED",
            (true, false) => "CONTROL-SILENT",
        };
        let n = r.n.map_or_else(String::new, |n| format!(" n={n}"));
        let _ = writeln!(s, "  {status:<17} {}{n}: {}", r.check, r.detail);
    }
    for n in &p.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    let failures = p.failures().count();
    let _ = writeln!(
        s,
        "{}",
        if failures == 0 {
            "all checks passed".to_string()
        } else {
            format!("{failures} check(s) failed")
        }
    );
    s
}
