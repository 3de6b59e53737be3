//! Windowed-supremum estimates of the tail-ratio limsups
//!
//! * `γ1 = limsup_{|x|→∞} f(x + sign(x) φ(|x|)) / f(x)` (two-sided),
//! * `γ2 = limsup g((x + φ(x))²) / g(x²)` with the side condition `φ(x)/x → 0`,
//! * `γ3 = limsup g(x + φ(x)) / g(x)`,
//!
//! plus a three-way verdict on whether the estimate is below one.
//!
//! The limsup is replaced by the maximum over the last `K` decade windows
//! ending at `x_end`. All ratios are differences of the log-kernel, so they
//! do not depend on the normalization of the density.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::density::{SupportKind, TailDensity};
use crate::phi::PhiSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TailError {
    #[error("{kind} needs a {expected:?} density, got {found:?}")]
    WrongSupport {
        kind: GammaKind,
        expected: SupportKind,
        found: SupportKind,
    },
    #[error("density is not finite at x = {x} (tail positivity violated)")]
    NonFinite { x: f64 },
    #[error("empty grid: start {start} >= end {end}")]
    EmptyGrid { start: f64, end: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GammaKind {
    G1,
    G2,
    G3,
}

impl fmt::Display for GammaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaKind::G1 => "gamma1",
            GammaKind::G2 => "gamma2",
            GammaKind::G3 => "gamma3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Satisfied,
    Failed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "SATISFIED",
            Verdict::Failed => "FAILED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Geometric grid of decade windows ending at `x_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_end: f64,
    /// Number of trailing windows `K` entering the limsup estimate.
    pub windows: usize,
    /// Grid intervals per decade window.
    pub points_per_window: usize,
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_end: 1e8,
            windows: 5,
            points_per_window: 200,
            margin: 0.05,
        }
    }
}

impl GridSpec {
    /// Same windows with twice as many points; every old point is kept.
    pub fn refined(&self) -> Self {
        GridSpec {
            points_per_window: self.points_per_window * 2,
            ..*self
        }
    }

    fn validate(&self) -> Result<(), TailError> {
        if !(self.x_end.is_finite() && self.x_end > 1.0) {
            return Err(TailError::InvalidGrid(format!("x_end = {}", self.x_end)));
        }
        if self.windows == 0 || self.points_per_window == 0 {
            return Err(TailError::InvalidGrid("windows and points must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.margin) {
            return Err(TailError::InvalidGrid(format!("margin = {}", self.margin)));
        }
        Ok(())
    }

    /// Decade windows `[start, end]` covering `[x_start, x_end]`, in
    /// increasing order; the first may be shorter than a decade.
    pub fn windows_from(&self, x_start: f64) -> Result<Vec<(f64, f64)>, TailError> {
        self.validate()?;
        if !(x_start < self.x_end) {
            return Err(TailError::EmptyGrid {
                start: x_start,
                end: self.x_end,
            });
        }
        let mut out = Vec::new();
        let mut hi = self.x_end;
        loop {
            let lo = hi / 10.0;
            if lo <= x_start * (1.0 + 1e-12) {
                out.push((x_start, hi));
                break;
            }
            out.push((lo, hi));
            hi = lo;
        }
        out.reverse();
        Ok(out)
    }

    fn points(&self, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
        let (ll, lh) = (lo.ln(), hi.ln());
        let m = self.points_per_window;
        let d = lh - ll;
        (0..=m).map(move |i| {
            if i == 0 {
                lo
            } else if i == m {
                hi
            } else {
                (ll + d * i as f64 / m as f64).exp()
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSup {
    pub start: f64,
    pub end: f64,
    pub sup: f64,
    /// One-sided sups for the two-sided estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_minus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaEstimate {
    pub kind: GammaKind,
    pub phi: String,
    pub window_sups: Vec<WindowSup>,
    pub extrapolated: f64,
    /// `γ_{1,+}` and `γ_{1,-}` for the two-sided estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolated_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extrapolated_minus: Option<f64>,
    pub margin: f64,
    pub verdict: Verdict,
    pub side_condition_failed: bool,
    /// `φ(x_end)/x_end` for the squared-argument estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_ratio: Option<f64>,
}

/// Three-way verdict from the trailing window sups.
pub fn verdict_from(sups: &[f64], margin: f64) -> Verdict {
    let ext = sups.iter().copied().fold(0.0f64, f64::max);
    if ext <= 1.0 - margin {
        return Verdict::Satisfied;
    }
    let high = sups.iter().all(|&s| s >= 1.0 - margin / 2.0);
    let nondecreasing = sups.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    if high && nondecreasing {
        Verdict::Failed
    } else {
        Verdict::Inconclusive
    }
}

type LogRatio<'a> = dyn Fn(f64) -> f64 + 'a;

fn window_sups(
    grid: &GridSpec,
    x_start: f64,
    ratio: &LogRatio<'_>,
) -> Result<Vec<(f64, f64, f64)>, TailError> {
    let mut out = Vec::new();
    for (lo, hi) in grid.windows_from(x_start)? {
        let mut best = f64::NEG_INFINITY;
        for x in grid.points(lo, hi) {
            let lr = ratio(x);
            if lr.is_nan() || lr == f64::INFINITY {
                return Err(TailError::NonFinite { x });
            }
            best = best.max(lr);
        }
        out.push((lo, hi, best.exp()));
    }
    Ok(out)
}

fn trailing(sups: &[f64], k: usize) -> &[f64] {
    &sups[sups.len().saturating_sub(k)..]
}

fn check_support(kind: GammaKind, d: &TailDensity, expected: SupportKind) -> Result<(), TailError> {
    if d.support() != expected {
        return Err(TailError::WrongSupport {
            kind,
            expected,
            found: d.support(),
        });
    }
    Ok(())
}

/// `ln f(x) - ln f(y)` for positive-tail arguments, failing on non-finite
/// kernel values.
fn log_diff(d: &TailDensity, num: f64, den: f64) -> f64 {
    let a = d.log_kernel(num);
    let b = d.log_kernel(den);
    if !b.is_finite() || a.is_nan() || a == f64::INFINITY {
        return f64::NAN;
    }
    a - b
}

fn start(d: &TailDensity, phi: &PhiSpec) -> f64 {
    d.x0().max(phi.x_min())
}

/// Two-sided estimate on a full-line density.
pub fn gamma1(d: &TailDensity, phi: &PhiSpec, grid: &GridSpec) -> Result<GammaEstimate, TailError> {
    check_support(GammaKind::G1, d, SupportKind::Hamburger)?;
    let x0 = start(d, phi);
    let plus = window_sups(grid, x0, &|x| log_diff(d, x + phi.phi(x), x))?;
    let minus = window_sups(grid, x0, &|x| log_diff(d, -x - phi.phi(x), -x))?;
    let windows: Vec<WindowSup> = plus
        .iter()
        .zip(&minus)
        .map(|(&(s, e, p), &(_, _, m))| WindowSup {
            start: s,
            end: e,
            sup: p.max(m),
            sup_plus: Some(p),
            sup_minus: Some(m),
        })
        .collect();
    let k = grid.windows;
    let sups: Vec<f64> = windows.iter().map(|w| w.sup).collect();
    let p: Vec<f64> = plus.iter().map(|w| w.2).collect();
    let m: Vec<f64> = minus.iter().map(|w| w.2).collect();
    let tail = trailing(&sups, k);
    Ok(GammaEstimate {
        kind: GammaKind::G1,
        phi: phi.label().to_string(),
        extrapolated: tail.iter().copied().fold(0.0, f64::max),
        extrapolated_plus: Some(trailing(&p, k).iter().copied().fold(0.0, f64::max)),
        extrapolated_minus: Some(trailing(&m, k).iter().copied().fold(0.0, f64::max)),
        margin: grid.margin,
        verdict: verdict_from(tail, grid.margin),
        window_sups: windows,
        side_condition_failed: false,
        side_ratio: None,
    })
}

fn one_sided(
    kind: GammaKind,
    d: &TailDensity,
    phi: &PhiSpec,
    grid: &GridSpec,
    ratio: &LogRatio<'_>,
) -> Result<GammaEstimate, TailError> {
    check_support(kind, d, SupportKind::Stieltjes)?;
    let ws = window_sups(grid, start(d, phi), ratio)?;
    let sups: Vec<f64> = ws.iter().map(|w| w.2).collect();
    let tail = trailing(&sups, grid.windows);
    Ok(GammaEstimate {
        kind,
        phi: phi.label().to_string(),
        window_sups: ws
            .iter()
            .map(|&(s, e, v)| WindowSup {
                start: s,
                end: e,
                sup: v,
                sup_plus: None,
                sup_minus: None,
            })
            .collect(),
        extrapolated: tail.iter().copied().fold(0.0, f64::max),
        extrapolated_plus: None,
        extrapolated_minus: None,
        margin: grid.margin,
        verdict: verdict_from(tail, grid.margin),
        side_condition_failed: false,
        side_ratio: None,
    })
}

/// Largest `φ(x_end)/x_end` accepted as evidence for `φ(x)/x → 0`.
pub const SIDE_CONDITION_LIMIT: f64 = 1e-3;

/// Squared-argument estimate on a half-line density, including the side
/// condition `φ(x)/x → 0`; a failed side condition forces INCONCLUSIVE.
pub fn gamma2(d: &TailDensity, phi: &PhiSpec, grid: &GridSpec) -> Result<GammaEstimate, TailError> {
    let mut est = one_sided(GammaKind::G2, d, phi, grid, &|x| {
        let y = x + phi.phi(x);
        log_diff(d, y * y, x * x)
    })?;
    let x_end = grid.x_end;
    let side = phi.phi(x_end) / x_end;
    let mut decreasing = true;
    let mut prev = f64::INFINITY;
    for x in grid.points(x_end / 10.0, x_end) {
        let r = phi.phi(x) / x;
        if r > prev * (1.0 + 1e-12) {
            decreasing = false;
        }
        prev = r;
    }
    est.side_ratio = Some(side);
    if !(side <= SIDE_CONDITION_LIMIT && decreasing) {
        est.side_condition_failed = true;
        est.verdict = Verdict::Inconclusive;
    }
    Ok(est)
}

/// Shifted-argument estimate on a half-line density.
pub fn gamma3(d: &TailDensity, phi: &PhiSpec, grid: &GridSpec) -> Result<GammaEstimate, TailError> {
    one_sided(GammaKind::G3, d, phi, grid, &|x| log_diff(d, x + phi.phi(x), x))
}

pub fn estimate(
    kind: GammaKind,
    d: &TailDensity,
    phi: &PhiSpec,
    grid: &GridSpec,
) -> Result<GammaEstimate, TailError> {
    match kind {
        GammaKind::G1 => gamma1(d, phi, grid),
        GammaKind::G2 => gamma2(d, phi, grid),
        GammaKind::G3 => gamma3(d, phi, grid),
    }
}

/// Estimates appropriate for the support: `γ1` on the line, `γ2` and `γ3`
/// on the half line.
pub fn auto_kinds(support: SupportKind) -> &'static [GammaKind] {
    match support {
        SupportKind::Hamburger => &[GammaKind::G1],
        SupportKind::Stieltjes => &[GammaKind::G2, GammaKind::G3],
    }
}
