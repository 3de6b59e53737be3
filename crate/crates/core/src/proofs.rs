//! Numerical checks of the determinacy argument: the two auxiliary lemmas,
//! the recursion constants, the bounds on the proof integral
//! `I(x̂0) = ∫_{x̂0}^∞ x^n (f(x) - f(x + φ(x))) dx`, the moment recursion
//! `μ_n^+ <= c (n log n) μ_{n-1}^+ + b^n`, and the symmetrization
//! `f(x) = |x| g(x²)` that turns half-line moments into even moments.
//!
//! Everything large is carried in log-space; the one subtraction of large
//! quantities, `(1 - β) μ_n^+ - x̂0^n`, uses [`SignedLog`].

use std::f64::consts::E;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::carleman::bound_implies_divergence;
use crate::density::{SupportKind, TailDensity};
use crate::logspace::{log1m_exp, log_add_exp, log_sum_exp, SignedLog};
use crate::moments::{log_abs_moment, log_abs_moment_with, MomentError, MomentTable, Side};
use crate::phi::{ConditionCertificate, PhiError, PhiSpec};
use crate::quadrature::{LogQuadrature, QuadError};
use crate::tail::{gamma1, gamma2, gamma3, GridSpec, TailError, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProofError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tail ratio estimate {0} is not below one; constants undefined")]
    GammaTooLarge(f64),
    #[error("condition certificate is not valid")]
    InvalidCertificate,
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Tail(#[from] TailError),
}

// ---------------------------------------------------------------------------
// First lemma

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Sup {
    pub n: u32,
    pub eps: f64,
    pub numeric_max: f64,
    pub maximizer: f64,
    /// `n log n - n log(ε e)`.
    pub formula_value: f64,
    /// `2 n log n`.
    pub upper_bound: f64,
    /// Whether `n >= 1/(ε e)`, where the upper bound is claimed.
    pub bound_applies: bool,
}

impl Lemma1Sup {
    pub fn identity_error(&self) -> f64 {
        (self.numeric_max - self.formula_value).abs() / self.formula_value.abs().max(1.0)
    }

    pub fn bound_holds(&self) -> bool {
        !self.bound_applies
            || self.numeric_max <= self.upper_bound + 1e-10 * self.upper_bound.abs().max(1.0)
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximizes `n log y - ε y` over `(0, 10 n / ε]` by golden-section search
/// in `t = log y`, and compares with the closed form.
pub fn lemma1_sup(n: u32, eps: f64) -> Lemma1Sup {
    let nf = f64::from(n);
    let g = |t: f64| nf * t - eps * t.exp();
    let hi = (10.0 * nf / eps).ln();
    let (mut a, mut b) = (hi - 60.0, hi);
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + b.abs()) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - GOLDEN * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + GOLDEN * (b - a);
            gd = g(d);
        }
    }
    let t = 0.5 * (a + b);
    Lemma1Sup {
        n,
        eps,
        numeric_max: g(t),
        maximizer: t.exp(),
        formula_value: nf * nf.ln() - nf * (eps * E).ln(),
        upper_bound: 2.0 * nf * nf.ln(),
        bound_applies: nf >= 1.0 / (eps * E),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Integral {
    pub n: u32,
    pub eps: f64,
    pub y_plus: f64,
    /// `ln(n ∫_{y+}^∞ y^{n-1} log y dF)`.
    pub ln_lhs: f64,
    /// `ln(2 n log n ∫ y^{n-1} dF + ε ∫ y^n dF)`.
    pub ln_rhs: f64,
    pub holds: bool,
}

/// Both sides of the integrated form of the first lemma on `[y+, ∞)`.
/// `y+ >= 1` keeps `log y` nonnegative.
pub fn lemma1_integral_bound(
    d: &TailDensity,
    n: u32,
    eps: f64,
    y_plus: f64,
) -> Result<Lemma1Integral, ProofError> {
    let nf = f64::from(n);
    if n == 0 || !(nf >= 1.0 / (eps * E) - 1e-12) {
        return Err(ProofError::Precondition(format!(
            "need n >= 1/(eps e) = {}, got n = {n}",
            1.0 / (eps * E)
        )));
    }
    if !(y_plus >= 1.0) {
        return Err(ProofError::Precondition(format!("need y+ >= 1, got {y_plus}")));
    }
    let q = LogQuadrature::default();
    let lhs = q
        .integrate_tail(
            &|y| (nf - 1.0) * y.ln() + y.ln().ln() + d.ln_pdf(y),
            y_plus,
        )?
        .ln_value
        + nf.ln();
    let a = q
        .integrate_tail(&|y| (nf - 1.0) * y.ln() + d.ln_pdf(y), y_plus)?
        .ln_value;
    let b = q.integrate_tail(&|y| nf * y.ln() + d.ln_pdf(y), y_plus)?.ln_value;
    let first = if n == 1 {
        f64::NEG_INFINITY
    } else {
        (2.0 * nf * nf.ln()).ln() + a
    };
    let rhs = log_add_exp(first, eps.ln() + b);
    Ok(Lemma1Integral {
        n,
        eps,
        y_plus,
        ln_lhs: lhs,
        ln_rhs: rhs,
        holds: lhs <= rhs + 1e-9 * rhs.abs().max(1.0),
    })
}

// ---------------------------------------------------------------------------
// Second lemma

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma2Check {
    pub c: f64,
    pub b: f64,
    pub a1: f64,
    pub n_max: u32,
    /// `ln d0`, `d0 = a1/c + exp(b/c)` (times the control scale, if any).
    pub ln_d0: f64,
    /// `ln(d0 c^n (n log n)^n) - ln a_n` for `n = 2..=n_max`.
    pub slacks: Vec<f64>,
    pub worst_slack: f64,
    pub worst_n: u32,
}

impl Lemma2Check {
    pub fn holds(&self) -> bool {
        self.worst_slack >= 0.0
    }
}

/// `ln a_n` of the extremal sequence `a_n = c (n log n) a_{n-1} + b^n`.
pub fn lemma2_extremal(c: f64, b: f64, a1: f64, n_max: u32) -> Vec<f64> {
    let mut out = vec![a1.ln()];
    for n in 2..=n_max {
        let nf = f64::from(n);
        let prev = *out.last().expect("nonempty");
        out.push(log_add_exp(c.ln() + (nf * nf.ln()).ln() + prev, nf * b.ln()));
    }
    out
}

/// Slack of `a_n <= d0 c^n (n log n)^n` along the extremal sequence.
pub fn lemma2_bound_check(c: f64, b: f64, a1: f64, n_max: u32) -> Lemma2Check {
    lemma2_bound_check_scaled(c, b, a1, n_max, 1.0)
}

/// As [`lemma2_bound_check`] with `d0` multiplied by `scale` (a scale
/// below one is a negative control).
pub fn lemma2_bound_check_scaled(c: f64, b: f64, a1: f64, n_max: u32, scale: f64) -> Lemma2Check {
    let ln_d0 = log_add_exp(a1.ln() - c.ln(), b / c) + scale.ln();
    let a = lemma2_extremal(c, b, a1, n_max);
    let slacks: Vec<f64> = (2..=n_max)
        .map(|n| {
            let nf = f64::from(n);
            ln_d0 + nf * c.ln() + nf * (nf * nf.ln()).ln() - a[(n - 1) as usize]
        })
        .collect();
    let (worst_i, worst) = slacks
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
    Lemma2Check {
        c,
        b,
        a1,
        n_max,
        ln_d0,
        slacks,
        worst_slack: worst,
        worst_n: worst_i as u32 + 2,
    }
}

// ---------------------------------------------------------------------------
// Recursion constants

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecursionConstants {
    pub gamma_plus: f64,
    pub beta: f64,
    pub eps: f64,
    pub c_plus: f64,
    pub x_hat0: f64,
    pub y_hat0: f64,
    pub c_bar: f64,
    pub b_bar: f64,
    pub n0: u32,
}

impl RecursionConstants {
    /// `1 - β - C+ ε`.
    pub fn denominator(&self) -> f64 {
        1.0 - self.beta - self.c_plus * self.eps
    }

    /// The same constants with `c̄` divided by `factor` (negative control).
    pub fn with_c_scaled(&self, factor: f64) -> Self {
        RecursionConstants {
            c_bar: self.c_bar / factor,
            ..*self
        }
    }
}

/// Smallest integer `>= max(2, 1/(ε e))`, ignoring rounding noise in the
/// quotient.
pub fn n0_for(eps: f64) -> u32 {
    let q = 1.0 / (eps * E);
    let q = if (q - q.round()).abs() < 1e-9 * q.max(1.0) {
        q.round()
    } else {
        q
    };
    q.max(2.0).ceil() as u32
}

/// Constants of the recursion from the tail-ratio estimate and the
/// certificate: `β = (1 + γ)/2`, `ε` half its admissible supremum
/// `min((1 - β)/C+, 1/(2e))`, `c̄ = 3 C+/(1 - β - C+ ε)` and
/// `b̄ = (x̂0 + ŷ0)/(1 - β - C+ ε)`.
pub fn recursion_constants(
    gamma_plus: f64,
    cert: &ConditionCertificate,
    x_hat0: f64,
    phi: &PhiSpec,
) -> Result<RecursionConstants, ProofError> {
    if !(gamma_plus < 1.0) || gamma_plus < 0.0 {
        return Err(ProofError::GammaTooLarge(gamma_plus));
    }
    if !cert.valid {
        return Err(ProofError::InvalidCertificate);
    }
    let y_hat0 = phi.forward(x_hat0)?;
    if y_hat0 < cert.y_star {
        return Err(ProofError::Precondition(format!(
            "x̂0 + φ(x̂0) = {y_hat0} is below y* = {}",
            cert.y_star
        )));
    }
    constants_from(gamma_plus, cert.c_plus, x_hat0, y_hat0)
}

/// The arithmetic part of [`recursion_constants`].
pub fn constants_from(
    gamma_plus: f64,
    c_plus: f64,
    x_hat0: f64,
    y_hat0: f64,
) -> Result<RecursionConstants, ProofError> {
    if !(gamma_plus < 1.0) || gamma_plus < 0.0 {
        return Err(ProofError::GammaTooLarge(gamma_plus));
    }
    if !(c_plus > 0.0 && c_plus.is_finite()) {
        return Err(ProofError::Precondition(format!("C+ = {c_plus}")));
    }
    let beta = 0.5 * (1.0 + gamma_plus);
    let eps = 0.5 * ((1.0 - beta) / c_plus).min(1.0 / (2.0 * E));
    let denom = 1.0 - beta - c_plus * eps;
    Ok(RecursionConstants {
        gamma_plus,
        beta,
        eps,
        c_plus,
        x_hat0,
        y_hat0,
        c_bar: 3.0 * c_plus / denom,
        b_bar: (x_hat0 + y_hat0) / denom,
        n0: n0_for(eps),
    })
}

/// Smallest grid point `x̂0 >= max(x0, x_min)` with `f(x + φ(x))/f(x) <= β`
/// at every grid point from `x̂0` on and `x̂0 + φ(x̂0) >= y*`.
pub fn select_x_hat0(
    d: &TailDensity,
    phi: &PhiSpec,
    beta: f64,
    y_star: f64,
    grid: &GridSpec,
) -> Option<f64> {
    let start = d.x0().max(phi.x_min());
    let windows = grid.windows_from(start).ok()?;
    let mut pts: Vec<f64> = Vec::new();
    for (lo, hi) in windows {
        let (ll, lh) = (lo.ln(), hi.ln());
        let m = grid.points_per_window;
        for i in 0..m {
            pts.push((ll + (lh - ll) * i as f64 / m as f64).exp());
        }
    }
    pts.push(grid.x_end);
    let lb = beta.ln();
    let mut best = None;
    for &x in pts.iter().rev() {
        let r = d.log_kernel(x + phi.phi(x)) - d.log_kernel(x);
        if !(r <= lb) {
            break;
        }
        if x + phi.phi(x) >= y_star {
            best = Some(x);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Proof integral

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofIntegral {
    pub n: u32,
    /// `ln I(x̂0)`.
    pub ln_i: f64,
    /// `(1 - β) μ_n^+ - x̂0^n`.
    pub lower: SignedLog,
    /// `ln(3 C+ (n log n) μ_{n-1}^+ + C+ ε μ_n^+ + ŷ0^n)`.
    pub ln_upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl ProofIntegral {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `I(x̂0)` by quadrature together with its lower and upper bounds.
pub fn proof_integral_bounds(
    d: &TailDensity,
    phi: &PhiSpec,
    rc: &RecursionConstants,
    n: u32,
) -> Result<ProofIntegral, ProofError> {
    if n < rc.n0 {
        return Err(ProofError::Precondition(format!(
            "order {n} is below n0 = {}",
            rc.n0
        )));
    }
    let nf = f64::from(n);
    let q = LogQuadrature::default();
    let x_hat0 = rc.x_hat0;
    let direct = q.integrate_tail(
        &|x| {
            let lf = d.ln_pdf(x);
            let r = d.ln_pdf(x + phi.phi(x)) - lf;
            if r > 0.0 {
                return f64::NAN;
            }
            nf * x.ln() + lf + log1m_exp(r)
        },
        x_hat0,
    );
    let ln_i = match direct {
        Ok(v) => SignedLog::from_ln(v.ln_value),
        Err(QuadError::NonFinite { .. }) => {
            // The ratio exceeds one somewhere; fall back to a difference.
            let a = q.integrate_tail(&|x| nf * x.ln() + d.ln_pdf(x), x_hat0)?.ln_value;
            let b = q
                .integrate_tail(&|x| nf * x.ln() + d.ln_pdf(x + phi.phi(x)), x_hat0)?
                .ln_value;
            SignedLog::from_ln(a).sub(SignedLog::from_ln(b))
        }
        Err(e) => return Err(e.into()),
    };
    let mu_n = log_abs_moment(d, n, Side::Plus)?;
    let mu_prev = log_abs_moment(d, n - 1, Side::Plus)?;
    let lower = SignedLog::from_ln((1.0 - rc.beta).ln() + mu_n)
        .sub(SignedLog::from_ln(nf * x_hat0.ln()));
    let ln_upper = log_sum_exp(&[
        (3.0 * rc.c_plus * nf * nf.ln()).ln() + mu_prev,
        (rc.c_plus * rc.eps).ln() + mu_n,
        nf * rc.y_hat0.ln(),
    ]);
    let tol = 1e-9;
    let lower_holds = match (lower.sign, ln_i.sign) {
        (s, _) if s <= 0 => true,
        (_, 1) => lower.ln_abs <= ln_i.ln_abs + tol,
        _ => false,
    };
    let upper_holds = ln_i.sign <= 0 || ln_i.ln_abs <= ln_upper + tol;
    Ok(ProofIntegral {
        n,
        ln_i: if ln_i.sign == 1 { ln_i.ln_abs } else { f64::NAN },
        lower,
        ln_upper,
        lower_holds,
        upper_holds,
    })
}

// ---------------------------------------------------------------------------
// Moment recursion

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionCheck {
    /// `(n, slack)` with slack `ln(c (n log n) μ_{n-1}^+ + b^n) - ln μ_n^+`.
    pub slacks: Vec<(u32, f64)>,
    pub worst_slack: f64,
    pub worst_n: u32,
}

impl RecursionCheck {
    pub fn holds(&self) -> bool {
        self.worst_slack >= 0.0
    }
}

/// Checks `μ_n^+ <= c̄ (n log n) μ_{n-1}^+ + b̄^n` for `n` in `n_lo..=n_hi`.
pub fn empirical_recursion_check(
    table: &MomentTable,
    rc: &RecursionConstants,
    n_lo: u32,
    n_hi: u32,
) -> RecursionCheck {
    recursion_slacks(&table.log_mu_plus, rc.c_bar, rc.b_bar, n_lo.max(2), n_hi.min(table.n_max))
}

/// Same check on a plain sequence of `ln μ_n`, index `n - 1`.
pub fn recursion_slacks(log_mu: &[f64], c: f64, b: f64, n_lo: u32, n_hi: u32) -> RecursionCheck {
    let slacks: Vec<(u32, f64)> = (n_lo..=n_hi)
        .map(|n| {
            let nf = f64::from(n);
            let prev = log_mu[(n - 2) as usize];
            let rhs = log_add_exp(c.ln() + (nf * nf.ln()).ln() + prev, nf * b.ln());
            (n, rhs - log_mu[(n - 1) as usize])
        })
        .collect();
    let (worst_n, worst_slack) = slacks
        .iter()
        .copied()
        .fold((0, f64::INFINITY), |acc, (n, s)| if s < acc.1 { (n, s) } else { acc });
    RecursionCheck {
        slacks,
        worst_slack,
        worst_n,
    }
}

/// Enlarges `b` so that the recursion with `c` holds for every `n >= 2` of
/// the given sequence: below `n0` by `μ_n <= b^n`, from `n0` on as given.
pub fn extend_constants(log_mu: &[f64], c: f64, b: f64, n0: u32) -> (f64, f64) {
    let mut lb = b.ln();
    for n in 2..n0.min(log_mu.len() as u32 + 1) {
        lb = lb.max(log_mu[(n - 1) as usize] / f64::from(n));
    }
    (c, lb.exp())
}

// ---------------------------------------------------------------------------
// Symmetrization

/// `f(x) = |x| g(x²)` on the line, with threshold `sqrt(x0)`.
pub fn symmetrize(g: &TailDensity) -> Result<TailDensity, ProofError> {
    if g.support() != SupportKind::Stieltjes {
        return Err(ProofError::Precondition(
            "symmetrization needs a half-line density".into(),
        ));
    }
    let inner = g.clone();
    // Positivity and monotonicity of the tail carry over from `g`.
    Ok(TailDensity::trusted(
        SupportKind::Hamburger,
        g.x0().sqrt(),
        format!("sym({})", g.label()),
        Arc::new(move |x: f64| x.abs().ln() + inner.ln_pdf((x * x).max(f64::MIN_POSITIVE))),
        g.is_normalized(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentIdentity {
    /// `(n, ln E[X^{2n}], ln E[Y^n])`.
    pub rows: Vec<(u32, f64, f64)>,
    pub max_rel_err: f64,
    /// Largest `|ln μ_k^+ - ln μ_k^-|` of the symmetrized density.
    pub max_asymmetry: f64,
}

/// Compares `E[X^{2n}]` of the symmetrized density with `E[Y^n]`, both by
/// quadrature, for `0 <= n <= n_max`.
pub fn check_moment_identity(g: &TailDensity, n_max: u32) -> Result<MomentIdentity, ProofError> {
    let f = symmetrize(g)?;
    let q = LogQuadrature::default();
    let mut rows = Vec::new();
    let mut max_rel = 0.0f64;
    let mut asym = 0.0f64;
    for n in 0..=n_max {
        let p = log_abs_moment_with(&f, 2 * n, Side::Plus, &q)?;
        let m = log_abs_moment_with(&f, 2 * n, Side::Minus, &q)?;
        asym = asym.max((p - m).abs());
        let x2n = log_add_exp(p, m);
        let yn = log_abs_moment_with(g, n, Side::Plus, &q)?;
        max_rel = max_rel.max((x2n - yn).exp_m1().abs());
        rows.push((n, x2n, yn));
    }
    Ok(MomentIdentity {
        rows,
        max_rel_err: max_rel,
        max_asymmetry: asym,
    })
}

// ---------------------------------------------------------------------------
// Full verification

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofRow {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub passed: bool,
    /// Negative controls are expected to fail; they never count as failures.
    pub control: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofReport {
    pub density: String,
    pub phi: String,
    pub route: String,
    pub constants: Vec<RecursionConstants>,
    pub rows: Vec<ProofRow>,
    pub notes: Vec<String>,
}

impl ProofReport {
    /// True when every non-control row passed.
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.control || r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ProofRow> {
        self.rows.iter().filter(|r| !r.control && !r.passed)
    }
}

fn row(check: impl Into<String>, n: Option<u32>, passed: bool, detail: String) -> ProofRow {
    ProofRow {
        check: check.into(),
        n,
        passed,
        control: false,
        detail,
    }
}

/// Runs the inequality chain on one tail (the right tail of `d`).
fn chain_one_side(
    side: &str,
    d: &TailDensity,
    phi: &PhiSpec,
    gamma: f64,
    cert: &ConditionCertificate,
    grid: &GridSpec,
    n_max: u32,
    report: &mut ProofReport,
) -> Result<Option<(f64, f64, MomentTable)>, ProofError> {
    let beta = 0.5 * (1.0 + gamma);
    let Some(x_hat0) = select_x_hat0(d, phi, beta, cert.y_star, grid) else {
        report.notes.push(format!(
            "{side}: no grid point where the ratio stays below β = {beta}; integral bounds skipped"
        ));
        return Ok(None);
    };
    let rc = recursion_constants(gamma, cert, x_hat0, phi)?;
    report.constants.push(rc);
    report.rows.push(row(
        format!("{side} constants"),
        None,
        rc.denominator() > 0.0 && rc.n0 >= 2,
        format!(
            "β={:.6} ε={:.6} c̄={:.6} b̄={:.6} x̂0={:.6} ŷ0={:.6} n0={}",
            rc.beta, rc.eps, rc.c_bar, rc.b_bar, rc.x_hat0, rc.y_hat0, rc.n0
        ),
    ));
    if rc.n0 > n_max {
        report.notes.push(format!(
            "{side}: n0 = {} exceeds n_max = {n_max}; order-wise checks skipped",
            rc.n0
        ));
        return Ok(None);
    }
    for n in rc.n0..=n_max {
        let l1 = lemma1_integral_bound(d, n, rc.eps, rc.y_hat0)?;
        report.rows.push(row(
            format!("{side} log-moment bound on [ŷ0, ∞)"),
            Some(n),
            l1.holds,
            format!("ln lhs={:.6} ln rhs={:.6}", l1.ln_lhs, l1.ln_rhs),
        ));
        let pi = proof_integral_bounds(d, phi, &rc, n)?;
        report.rows.push(row(
            format!("{side} integral lower ≤ I ≤ upper"),
            Some(n),
            pi.holds(),
            format!("lower={} ln I={:.6} ln upper={:.6}", pi.lower, pi.ln_i, pi.ln_upper),
        ));
    }
    let table = crate::moments::moment_table(d, n_max)?;
    let rec = empirical_recursion_check(&table, &rc, rc.n0, n_max);
    report.rows.push(row(
        format!("{side} recursion μ_n ≤ c̄ (n log n) μ_(n-1) + b̄^n"),
        None,
        rec.holds(),
        format!("worst slack {:.6} at n={} over [{}, {n_max}]", rec.worst_slack, rec.worst_n, rc.n0),
    ));
    let ctrl = empirical_recursion_check(&table, &rc.with_c_scaled(100.0), rc.n0, n_max);
    report.rows.push(ProofRow {
        check: format!("{side} control: recursion with c̄/100"),
        n: None,
        passed: !ctrl.holds(),
        control: true,
        detail: if ctrl.holds() {
            format!(
                "not violated (worst slack {:.3} at n={}; b̄^n dominates)",
                ctrl.worst_slack, ctrl.worst_n
            )
        } else {
            format!("violated as expected at n={} (slack {:.3})", ctrl.worst_n, ctrl.worst_slack)
        },
    });
    let (c, b) = extend_constants(&table.log_mu_plus, rc.c_bar, rc.b_bar, rc.n0);
    Ok(Some((c, b, table)))
}

/// Checks the whole argument for a density and shift. Line densities use
/// both tails; half-line densities use the shifted-argument route when its
/// estimate is satisfied, else the squared-argument route through the
/// symmetrized density.
pub fn verify_proofs(
    d: &TailDensity,
    phi: &PhiSpec,
    n_max: u32,
    grid: &GridSpec,
) -> Result<ProofReport, ProofError> {
    if n_max < 2 {
        return Err(ProofError::Precondition("n_max must be at least 2".into()));
    }
    if !d.is_normalized() {
        return Err(ProofError::Moment(MomentError::NotNormalized(d.label().into())));
    }
    let cert = phi.certify_conditions(crate::phi::default_y_star_hint(phi), grid.x_end);
    let mut report = ProofReport {
        density: d.label().to_string(),
        phi: phi.label().to_string(),
        route: String::new(),
        constants: Vec::new(),
        rows: Vec::new(),
        notes: Vec::new(),
    };
    report.rows.push(row(
        "conditions (a)-(c) certificate",
        None,
        cert.valid,
        format!("C+={:.6} y*={:.6} on [{}, {:e}]", cert.c_plus, cert.y_star, cert.grid_min, cert.grid_max),
    ));
    if !cert.valid {
        report.route = "none".into();
        return Ok(report);
    }

    let mut sides: Vec<(String, TailDensity, f64)> = Vec::new();
    let mu_1: f64;
    match d.support() {
        SupportKind::Hamburger => {
            let g1 = gamma1(d, phi, grid)?;
            report.route = "two-sided ratio".into();
            if g1.verdict != Verdict::Satisfied {
                report.notes.push(format!("two-sided ratio estimate is {}; chain not applicable", g1.verdict));
                return Ok(report);
            }
            sides.push(("plus".into(), d.clone(), g1.extrapolated_plus.unwrap_or(g1.extrapolated)));
            sides.push(("minus".into(), d.mirrored(), g1.extrapolated_minus.unwrap_or(g1.extrapolated)));
            mu_1 = log_abs_moment(d, 1, Side::Plus)?.exp() + log_abs_moment(d, 1, Side::Minus)?.exp();
        }
        SupportKind::Stieltjes => {
            let g3 = gamma3(d, phi, grid)?;
            if g3.verdict == Verdict::Satisfied {
                report.route = "shifted-argument ratio".into();
                sides.push(("plus".into(), d.clone(), g3.extrapolated));
                mu_1 = log_abs_moment(d, 1, Side::Plus)?.exp();
            } else {
                let g2 = gamma2(d, phi, grid)?;
                if g2.verdict != Verdict::Satisfied {
                    report.route = "none".into();
                    report.notes.push("neither half-line ratio estimate is satisfied; chain not applicable".into());
                    return Ok(report);
                }
                report.route = "squared-argument ratio via symmetrization".into();
                let f = symmetrize(d)?;
                let g1 = gamma1(&f, phi, grid)?;
                sides.push(("plus".into(), f.clone(), g1.extrapolated_plus.unwrap_or(g1.extrapolated)));
                sides.push(("minus".into(), f.mirrored(), g1.extrapolated_minus.unwrap_or(g1.extrapolated)));
                mu_1 = 2.0 * log_abs_moment(&f, 1, Side::Plus)?.exp();
            }
            let id = check_moment_identity(d, n_max.min(15))?;
            report.rows.push(row(
                "symmetrization E[X^2n] = E[Y^n]",
                None,
                id.max_rel_err <= 1e-6 && id.max_asymmetry <= 1e-9,
                format!("max rel err {:.3e}, asymmetry {:.3e}", id.max_rel_err, id.max_asymmetry),
            ));
        }
    }

    let mut combined: Vec<(f64, f64, MomentTable)> = Vec::new();
    for (name, ds, gamma) in &sides {
        if let Some(t) = chain_one_side(name, ds, phi, *gamma, &cert, grid, n_max, &mut report)? {
            combined.push(t);
        }
    }
    if combined.len() == sides.len() && !combined.is_empty() {
        let c = combined.iter().map(|t| t.0).fold(0.0, f64::max);
        let b: f64 = combined.iter().map(|t| t.1).sum();
        let log_mu: Vec<f64> = (0..n_max as usize)
            .map(|i| {
                combined
                    .iter()
                    .map(|t| t.2.log_mu_plus[i])
                    .fold(f64::NEG_INFINITY, log_add_exp)
            })
            .collect();
        let rec = recursion_slacks(&log_mu, c, b, 2, n_max);
        report.rows.push(row(
            "combined recursion for all n ≥ 2",
            None,
            rec.holds(),
            format!("c={c:.6} b={b:.6}; worst slack {:.6} at n={}", rec.worst_slack, rec.worst_n),
        ));
        let d0 = mu_1 / c + (b / c).exp();
        let worst = (2..=n_max)
            .map(|n| {
                let nf = f64::from(n);
                d0.ln() + nf * c.ln() + nf * (nf * nf.ln()).ln() - log_mu[(n - 1) as usize]
            })
            .fold(f64::INFINITY, f64::min);
        report.rows.push(row(
            "moment bound μ_n ≤ d0 c^n (n log n)^n",
            None,
            worst >= 0.0,
            format!("d0={d0:.6e}; worst log slack {worst:.6}"),
        ));
        let (half, line) = bound_implies_divergence(d0, c, n_max as usize);
        let ok = half.windows(2).all(|w| w[1] > w[0]) && line.windows(2).all(|w| w[1] > w[0]);
        report.rows.push(row(
            "lower-bound Carleman series increasing",
            None,
            ok,
            format!(
                "half-line sum {:.6}, line sum {:.6} at N={n_max}",
                half.last().copied().unwrap_or(0.0),
                line.last().copied().unwrap_or(0.0)
            ),
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Self-test grids

/// Orders `1..=100` sampled at 20 points.
pub fn lemma1_grid() -> Vec<(u32, f64)> {
    let ns: Vec<u32> = (0..20)
        .map(|i| (1.0 + 99.0 * f64::from(i) / 19.0).round() as u32)
        .collect();
    let eps: Vec<f64> = (0..20).map(|j| 0.01 + 1.99 * f64::from(j) / 19.0).collect();
    ns.iter()
        .flat_map(|&n| eps.iter().map(move |&e| (n, e)))
        .collect()
}

/// `{0.1, 1, 10}^3`.
pub fn lemma2_grid() -> Vec<(f64, f64, f64)> {
    let v = [0.1, 1.0, 10.0];
    let mut out = Vec::new();
    for &c in &v {
        for &b in &v {
            for &a1 in &v {
                out.push((c, b, a1));
            }
        }
    }
    out
}

/// One line of [`selftest`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTestLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Runs the lemma oracles, the constants example, the symmetrization
/// identities and the negative controls.
pub fn selftest() -> Vec<SelfTestLine> {
    let mut out = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        out.push(SelfTestLine {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    let grid = lemma1_grid();
    let (mut worst, mut bound_ok) = (0.0f64, true);
    for &(n, e) in &grid {
        let r = lemma1_sup(n, e);
        worst = worst.max(r.identity_error());
        bound_ok &= r.bound_holds();
    }
    push(
        "first lemma: supremum identity",
        worst <= 1e-10,
        format!("{} points, worst relative error {worst:.3e}", grid.len()),
    );
    push("first lemma: sup <= 2 n log n", bound_ok, format!("{} points", grid.len()));

    let l2 = lemma2_grid();
    let worst = l2
        .iter()
        .map(|&(c, b, a1)| lemma2_bound_check(c, b, a1, 100).worst_slack)
        .fold(f64::INFINITY, f64::min);
    push(
        "second lemma: extremal sequence bound",
        worst >= 0.0,
        format!("{} parameter triples, worst log slack {worst:.6}", l2.len()),
    );
    let tripped = l2
        .iter()
        .filter(|&&(c, b, a1)| !lemma2_bound_check_scaled(c, b, a1, 100, 0.1).holds())
        .count();
    push(
        "second lemma: control with d0/10 fails",
        tripped > 0,
        format!("{tripped} of {} triples violated", l2.len()),
    );

    match constants_from(0.0, 1.0, 2.0, 3.0) {
        Ok(rc) => push(
            "recursion constants",
            (rc.eps - 1.0 / (4.0 * E)).abs() < 1e-15
                && (rc.c_bar - 7.352_398_041_363_384).abs() < 1e-12
                && rc.n0 == 4,
            format!("ε={} c̄={} n0={}", rc.eps, rc.c_bar, rc.n0),
        ),
        Err(e) => push("recursion constants", false, e.to_string()),
    }

    let sym = (|| -> Result<(f64, f64), String> {
        let g = crate::density::catalog_density("chi_squared", &[1.0]).map_err(|e| e.to_string())?;
        let n = crate::density::catalog_density("normal", &[]).map_err(|e| e.to_string())?;
        let f = symmetrize(&g.density).map_err(|e| e.to_string())?;
        let dev = (0..1000)
            .map(|i| {
                let x = -50.0 + 100.0 * (f64::from(i) + 0.5) / 1000.0;
                (f.ln_pdf(x) - n.density.ln_pdf(x)).abs()
            })
            .fold(0.0, f64::max);
        let e = crate::density::catalog_density("exponential", &[1.0]).map_err(|e| e.to_string())?;
        let id = check_moment_identity(&e.density, 15).map_err(|e| e.to_string())?;
        Ok((dev, id.max_rel_err))
    })();
    match sym {
        Ok((dev, rel)) => {
            push(
                "symmetrization: chi-squared(1) to normal",
                dev <= 1e-12,
                format!("max log-density deviation {dev:.3e}"),
            );
            push(
                "symmetrization: moment identity",
                rel <= 1e-6,
                format!("max relative error {rel:.3e} for n <= 15"),
            );
        }
        Err(e) => push("symmetrization", false, e),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::catalog_density;
    use crate::moments::moment_table;
    use crate::phi::{default_y_star_hint, make_phi, PhiFamily};

    fn dens(name: &str, p: &[f64]) -> TailDensity {
        catalog_density(name, p).unwrap().density
    }

    #[test]
    fn lemma1_examples() {
        let r = lemma1_sup(1, 1.0);
        assert!((r.numeric_max + 1.0).abs() < 1e-12);
        assert!((r.maximizer - 1.0).abs() < 1e-6);
        let r = lemma1_sup(2, 0.5);
        assert!((r.numeric_max - 0.772_588_722_239_781_2).abs() < 1e-12);
        let r = lemma1_sup(10, 0.1);
        assert!((r.formula_value - 36.051_701_859_880_91).abs() < 1e-10);
        assert!((r.upper_bound - 46.051_701_859_880_91).abs() < 1e-10);
        assert!(r.bound_applies && r.bound_holds());
    }

    #[test]
    fn lemma1_grid_identity() {
        let g = lemma1_grid();
        assert_eq!(g.len(), 400);
        for (n, e) in g {
            let r = lemma1_sup(n, e);
            assert!(r.identity_error() <= 1e-10, "n={n} eps={e}: {}", r.identity_error());
            assert!(r.bound_holds());
        }
    }

    #[test]
    fn lemma1_integral_examples() {
        let r = lemma1_integral_bound(&dens("exponential", &[1.0]), 5, 0.2, 1.0).unwrap();
        assert!(r.holds);
        let r = lemma1_integral_bound(&dens("normal", &[]), 4, 0.25, 1.0).unwrap();
        assert!(r.holds);
        assert!(matches!(
            lemma1_integral_bound(&dens("exponential", &[1.0]), 1, 0.2, 1.0),
            Err(ProofError::Precondition(_))
        ));
    }

    #[test]
    fn lemma2_examples() {
        let a = lemma2_extremal(1.0, 1.0, 1.0, 2);
        assert!((a[1].exp() - 2.386_294_361_119_891).abs() < 1e-12);
        let chk = lemma2_bound_check(1.0, 1.0, 1.0, 2);
        // (1 + e)(2 log 2)^2
        assert!((chk.slacks[0] - (7.145_838_844_321_716f64.ln() - a[1])).abs() < 1e-12);
        assert!(chk.holds());
        assert!(lemma2_bound_check(2.0, 0.5, 3.0, 100).holds());
        assert!(lemma2_bound_check(1.0, 1.0, 1e-300, 100).holds());
        for (c, b, a1) in lemma2_grid() {
            assert!(lemma2_bound_check(c, b, a1, 100).holds(), "{c} {b} {a1}");
        }
        assert!(!lemma2_bound_check_scaled(1.0, 1.0, 1.0, 100, 0.1).holds());
    }

    #[test]
    fn lemma2_extremal_dominates_random_sequences() {
        let mut s: u64 = 99;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for (c, b, a1) in lemma2_grid() {
            let ext = lemma2_extremal(c, b, a1, 60);
            let mut la = a1.ln();
            for n in 2..=60u32 {
                let nf = f64::from(n);
                let cap = log_add_exp(c.ln() + (nf * nf.ln()).ln() + la, nf * b.ln());
                la = cap + next().max(1e-300).ln() * 0.5;
                assert!(la <= ext[(n - 1) as usize] + 1e-9);
            }
        }
    }

    #[test]
    fn constants_examples() {
        let rc = constants_from(0.0, 1.0, 2.0, 3.0).unwrap();
        assert_eq!(rc.beta, 0.5);
        assert!((rc.eps - 0.091_969_860_292_860_58).abs() < 1e-15);
        assert!((rc.c_bar - 7.352_398_041_363_384).abs() < 1e-12);
        assert_eq!(rc.n0, 4);
        assert_eq!(constants_from(0.5, 1.0, 2.0, 3.0).unwrap().beta, 0.75);
        let rc = constants_from(0.99, 10.0, 2.0, 3.0).unwrap();
        assert!(rc.eps <= 0.005 / 10.0 / 2.0 + 1e-18);
        assert!(rc.n0 > 100 && rc.c_bar.is_finite() && rc.b_bar > 0.0);
        assert!(rc.denominator() > 0.0);
        assert!(matches!(constants_from(1.0, 1.0, 2.0, 3.0), Err(ProofError::GammaTooLarge(_))));
    }

    #[test]
    fn chain_for_exponential() {
        let d = dens("exponential", &[1.0]);
        let phi = make_phi(PhiFamily::LogPow, 1.0, 1.0).unwrap();
        let grid = GridSpec::default();
        let cert = phi.certify_conditions(default_y_star_hint(&phi), grid.x_end);
        let g = gamma3(&d, &phi, &grid).unwrap().extrapolated;
        let beta = 0.5 * (1.0 + g);
        let x_hat0 = select_x_hat0(&d, &phi, beta, cert.y_star, &grid).unwrap();
        let rc = recursion_constants(g, &cert, x_hat0, &phi).unwrap();
        for n in rc.n0..=40 {
            assert!(proof_integral_bounds(&d, &phi, &rc, n).unwrap().holds(), "n={n}");
        }
        assert!(proof_integral_bounds(&d, &phi, &rc, rc.n0 - 1).is_err());
        let t = moment_table(&d, 40).unwrap();
        assert!(empirical_recursion_check(&t, &rc, rc.n0, 40).holds());
        assert!(!empirical_recursion_check(&t, &rc.with_c_scaled(100.0), rc.n0, 40).holds());
    }

    #[test]
    fn full_reports() {
        let phi = make_phi(PhiFamily::LogPow, 1.0, 1.0).unwrap();
        let grid = GridSpec::default();
        for (name, p) in [("normal", vec![]), ("exponential", vec![1.0]), ("chi_squared", vec![1.0])] {
            let r = verify_proofs(&dens(name, &p), &phi, 40, &grid).unwrap();
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{name}: {bad:?}");
            assert!(r.rows.len() > 10);
        }
    }

    #[test]
    fn symmetrize_examples() {
        let f = symmetrize(&dens("chi_squared", &[1.0])).unwrap();
        let n = dens("normal", &[]);
        for i in 0..1000 {
            let x = -50.0 + 100.0 * (i as f64 + 0.5) / 1000.0;
            assert!((f.ln_pdf(x) - n.ln_pdf(x)).abs() <= 1e-12, "x={x}");
        }
        let f = symmetrize(&dens("exponential", &[1.0])).unwrap();
        assert!((f.ln_pdf(1.0) + 1.0).abs() < 1e-15);
        assert!((f.ln_pdf(-1.0) + 1.0).abs() < 1e-15);
        assert!(f.log_mass(&LogQuadrature::default()).unwrap().abs() < 1e-9);
        assert!(symmetrize(&n).is_err());
    }

    #[test]
    fn selftest_passes() {
        for l in selftest() {
            assert!(l.passed, "{}: {}", l.name, l.detail);
        }
    }

    #[test]
    fn moment_identity() {
        let r = check_moment_identity(&dens("exponential", &[1.0]), 15).unwrap();
        assert!(r.max_rel_err <= 1e-6);
        assert!(r.rows[0].1.abs() < 1e-9 && r.rows[0].2.abs() < 1e-9);
        assert!((r.rows[2].1 - 2f64.ln()).abs() < 1e-9);
        assert!((r.rows[3].1 - 6f64.ln()).abs() < 1e-9);
        let r = check_moment_identity(&dens("chi_squared", &[1.0]), 10).unwrap();
        assert!((r.rows[3].1 - 15f64.ln()).abs() < 1e-9);
    }
}
