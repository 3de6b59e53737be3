//! Tail shifts `φ`, the map `y = x + φ(x)`, its inverse, the induced shift
//! `ϕ(y) = y - x(y)` in `y`-coordinates, and a finite-grid certificate for
//! the regularity conditions on `ϕ`:
//!
//! * (a) `0 <= ϕ'(y) <= 1`,
//! * (b) `ϕ(y) <= C+ log y`,
//! * (c) `y ϕ'(y) <= C+`,
//!
//! each for `y >= y*`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::density::LogFn;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhiError {
    #[error("scale a must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("alpha must lie in {range}, got {alpha}")]
    InvalidAlpha { alpha: f64, range: &'static str },
    #[error("{0}")]
    InvalidCustom(String),
    #[error("x = {x} is below the domain start {x_min}")]
    BelowDomain { x: f64, x_min: f64 },
    #[error("y = {y} is below the range start {y_min}")]
    BelowRange { y: f64, y_min: f64 },
    #[error("inverse did not converge at y = {y} (residual {residual:e})")]
    NotConverged { y: f64, residual: f64 },
    #[error("unknown φ family `{0}` (expected logpow, logpow+loglog, logpow*loglog)")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PhiFamily {
    /// `a (log x)^α`, `α ∈ [0, 1]`, `x >= 1`.
    LogPow,
    /// `a [(log x)^α + log log x]`, `α ∈ [0, 1)`, `x >= e`.
    LogPowPlusLogLog,
    /// `a (log x)^α log log x`, `α ∈ [0, 1)`, `x >= e`.
    LogPowTimesLogLog,
    Custom,
}

impl PhiFamily {
    /// CLI spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            PhiFamily::LogPow => "logpow",
            PhiFamily::LogPowPlusLogLog => "logpow+loglog",
            PhiFamily::LogPowTimesLogLog => "logpow*loglog",
            PhiFamily::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self, PhiError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "logpow" => Ok(PhiFamily::LogPow),
            "logpow+loglog" => Ok(PhiFamily::LogPowPlusLogLog),
            "logpow*loglog" => Ok(PhiFamily::LogPowTimesLogLog),
            other => Err(PhiError::UnknownFamily(other.to_string())),
        }
    }

    /// The three closed-form families.
    pub const BUILT_IN: [PhiFamily; 3] = [
        PhiFamily::LogPow,
        PhiFamily::LogPowPlusLogLog,
        PhiFamily::LogPowTimesLogLog,
    ];

    /// Whether `alpha = 1` is admissible.
    pub fn admits_alpha_one(self) -> bool {
        self == PhiFamily::LogPow
    }
}

#[derive(Clone)]
pub struct PhiSpec {
    family: PhiFamily,
    a: f64,
    alpha: f64,
    x_min: f64,
    label: String,
    custom: Option<(LogFn, LogFn)>,
}

impl fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiSpec")
            .field("family", &self.family)
            .field("a", &self.a)
            .field("alpha", &self.alpha)
            .field("x_min", &self.x_min)
            .field("label", &self.label)
            .finish()
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Builds one of the closed-form families.
pub fn make_phi(family: PhiFamily, a: f64, alpha: f64) -> Result<PhiSpec, PhiError> {
    if !(a.is_finite() && a > 0.0) {
        return Err(PhiError::InvalidScale(a));
    }
    let x_min = match family {
        PhiFamily::LogPow => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(PhiError::InvalidAlpha {
                    alpha,
                    range: "[0, 1]",
                });
            }
            1.0
        }
        PhiFamily::LogPowPlusLogLog | PhiFamily::LogPowTimesLogLog => {
            if !(0.0..1.0).contains(&alpha) {
                return Err(PhiError::InvalidAlpha {
                    alpha,
                    range: "[0, 1) for the log-log families",
                });
            }
            std::f64::consts::E
        }
        PhiFamily::Custom => {
            return Err(PhiError::InvalidCustom(
                "custom φ needs closures; use custom_phi".into(),
            ))
        }
    };
    Ok(PhiSpec {
        family,
        a,
        alpha,
        x_min,
        label: format!("{}(a={a}, alpha={alpha})", family.cli_name()),
        custom: None,
    })
}

/// A user-supplied `φ` with its derivative in closed form. Checked on a grid
/// over `[x_min, 1e8]` for `φ >= 0` and `1 + φ' > 0`.
pub fn custom_phi<F, G>(
    label: impl Into<String>,
    x_min: f64,
    phi: F,
    phi_prime: G,
) -> Result<PhiSpec, PhiError>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    if !(x_min.is_finite() && x_min > 0.0) {
        return Err(PhiError::InvalidCustom(format!(
            "domain start must be positive, got {x_min}"
        )));
    }
    let spec = PhiSpec {
        family: PhiFamily::Custom,
        a: f64::NAN,
        alpha: f64::NAN,
        x_min,
        label: label.into(),
        custom: Some((Arc::new(phi), Arc::new(phi_prime))),
    };
    for x in geometric_grid(x_min, x_min.max(1.0) * 1e8, 2000) {
        let (p, dp) = (spec.phi(x), spec.phi_prime(x));
        if !(p.is_finite() && p >= 0.0) {
            return Err(PhiError::InvalidCustom(format!(
                "φ({x}) = {p} is not finite and nonnegative"
            )));
        }
        if !(1.0 + dp > 0.0) {
            return Err(PhiError::InvalidCustom(format!(
                "x + φ(x) is not increasing at x = {x} (φ' = {dp})"
            )));
        }
    }
    Ok(spec)
}

impl PhiSpec {
    pub fn family(&self) -> PhiFamily {
        self.family
    }

    /// `NaN` for a custom φ.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `NaN` for a custom φ.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `φ(x)` without domain check.
    pub fn phi(&self, x: f64) -> f64 {
        let (a, al) = (self.a, self.alpha);
        match self.family {
            PhiFamily::LogPow => a * x.ln().powf(al),
            PhiFamily::LogPowPlusLogLog => {
                let l = x.ln();
                a * (l.powf(al) + l.ln())
            }
            PhiFamily::LogPowTimesLogLog => {
                let l = x.ln();
                a * l.powf(al) * l.ln()
            }
            PhiFamily::Custom => (self.custom.as_ref().expect("custom closures").0)(x),
        }
    }

    /// `φ'(x)` without domain check; `+inf` where the closed form blows up.
    pub fn phi_prime(&self, x: f64) -> f64 {
        let (a, al) = (self.a, self.alpha);
        match self.family {
            PhiFamily::LogPow => {
                if al == 0.0 {
                    0.0
                } else {
                    a * al * x.ln().powf(al - 1.0) / x
                }
            }
            PhiFamily::LogPowPlusLogLog => {
                let l = x.ln();
                let pow_part = if al == 0.0 { 0.0 } else { al * l.powf(al - 1.0) };
                a * (pow_part + 1.0 / l) / x
            }
            PhiFamily::LogPowTimesLogLog => {
                let l = x.ln();
                a * l.powf(al - 1.0) * (al * l.ln() + 1.0) / x
            }
            PhiFamily::Custom => (self.custom.as_ref().expect("custom closures").1)(x),
        }
    }

    /// `y(x) = x + φ(x)`.
    pub fn forward(&self, x: f64) -> Result<f64, PhiError> {
        if !(x >= self.x_min) {
            return Err(PhiError::BelowDomain {
                x,
                x_min: self.x_min,
            });
        }
        Ok(x + self.phi(x))
    }

    /// Start of the range of `y`.
    pub fn y_min(&self) -> f64 {
        self.x_min + self.phi(self.x_min)
    }

    /// `x(y)` by safeguarded Newton on the bracket `[x_min, y]`.
    pub fn inverse(&self, y: f64) -> Result<f64, PhiError> {
        let y_min = self.y_min();
        if !(y >= y_min) || !y.is_finite() {
            return Err(PhiError::BelowRange { y, y_min });
        }
        let tol = 1e-12 * y.max(1.0);
        let resid = |x: f64| x + self.phi(x) - y;
        let (mut lo, mut hi) = (self.x_min, y);
        if resid(lo).abs() <= tol {
            return Ok(lo);
        }
        let mut x = (y - self.phi(y)).clamp(lo, hi);
        for _ in 0..200 {
            let r = resid(x);
            if r.abs() <= tol {
                return Ok(x);
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = 1.0 + self.phi_prime(x);
            let mut next = x - r / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if next == x {
                break;
            }
            x = next;
        }
        let r = resid(x);
        if r.abs() <= tol {
            Ok(x)
        } else {
            Err(PhiError::NotConverged { y, residual: r })
        }
    }

    /// `(ϕ(y), ϕ'(y))` with `ϕ(y) = φ(x(y))` and `ϕ' = φ'/(1 + φ')`.
    pub fn varphi_and_prime(&self, y: f64) -> Result<(f64, f64), PhiError> {
        let x = self.inverse(y)?;
        let dp = self.phi_prime(x);
        Ok((self.phi(x), 1.0 / (1.0 + 1.0 / dp)))
    }

    /// Finite-grid certificate for conditions (a)-(c).
    pub fn certify_conditions(&self, y_star_hint: f64, grid_max: f64) -> ConditionCertificate {
        certify_conditions(self, y_star_hint, grid_max)
    }
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else if i == 0 {
                lo
            } else {
                (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// One of the regularity conditions on `ϕ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "(a) 0 <= ϕ' <= 1",
            Condition::B => "(b) ϕ(y) <= C+ log y",
            Condition::C => "(c) y ϕ'(y) <= C+",
        })
    }
}

/// Constants under which the regularity conditions hold on a finite grid.
/// This certifies a finite-range check of an asymptotic hypothesis only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCertificate {
    pub c_plus: f64,
    pub y_star: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    /// Observed slack in (a), (b), (c).
    pub margins: [f64; 3],
    /// Sup of `ϕ/log y` and of `y ϕ'` over `[y*, grid_max]`.
    pub sup_b: f64,
    pub sup_c: f64,
    /// Local power-law exponents of `ϕ/log y` and `y ϕ'` over the last decade;
    /// a clearly positive exponent means the ratio is unbounded.
    pub growth_b: f64,
    pub growth_c: f64,
    pub valid: bool,
    pub failed: Vec<Condition>,
    pub notes: Vec<String>,
}

/// Default number of grid points.
pub const CERT_GRID_POINTS: usize = 10_000;
/// Inflation applied to the empirical sup to obtain `C+`.
pub const C_PLUS_INFLATION: f64 = 1.05;
/// Power-law exponent above which (b) or (c) counts as violated.
pub const GROWTH_LIMIT: f64 = 0.1;

/// Default `y*` hint: the range start, but at least `e` so that `log y` is
/// bounded away from zero.
pub fn default_y_star_hint(phi: &PhiSpec) -> f64 {
    phi.y_min().max(std::f64::consts::E)
}

pub fn certify_conditions(
    phi: &PhiSpec,
    y_star_hint: f64,
    grid_max: f64,
) -> ConditionCertificate {
    certify_conditions_with(phi, y_star_hint, grid_max, CERT_GRID_POINTS)
}

pub fn certify_conditions_with(
    phi: &PhiSpec,
    y_star_hint: f64,
    grid_max: f64,
    points: usize,
) -> ConditionCertificate {
    let mut notes = Vec::new();
    let mut lo = y_star_hint;
    if !(lo >= phi.y_min()) {
        notes.push(format!(
            "y* hint {y_star_hint} below range start {}; clamped",
            phi.y_min()
        ));
        lo = phi.y_min();
    }
    if lo <= 1.0 {
        lo = 1.0 + 1e-6;
        notes.push("grid starts above y = 1 so that log y > 0".into());
    }
    let invalid = |failed: Vec<Condition>, notes: Vec<String>| ConditionCertificate {
        c_plus: f64::NAN,
        y_star: f64::NAN,
        grid_min: lo,
        grid_max,
        grid_points: points,
        margins: [f64::NAN; 3],
        sup_b: f64::NAN,
        sup_c: f64::NAN,
        growth_b: f64::NAN,
        growth_c: f64::NAN,
        valid: false,
        failed,
        notes,
    };
    if !(grid_max > lo) || points < 10 {
        notes.push(format!("empty grid [{lo}, {grid_max}]"));
        return invalid(vec![Condition::A, Condition::B, Condition::C], notes);
    }

    let ys = geometric_grid(lo, grid_max, points);
    let mut vals = Vec::with_capacity(points);
    for &y in &ys {
        match phi.varphi_and_prime(y) {
            Ok(v) => vals.push(v),
            Err(e) => {
                notes.push(format!("evaluation failed: {e}"));
                return invalid(vec![Condition::A], notes);
            }
        }
    }

    // Smallest index from which (a) holds on the rest of the grid.
    let a_ok = |d: f64| (0.0..=1.0).contains(&d);
    let mut start = points;
    for i in (0..points).rev() {
        if a_ok(vals[i].1) {
            start = i;
        } else {
            break;
        }
    }
    if start == points {
        notes.push("ϕ' leaves [0, 1] at the end of the grid".into());
        return invalid(vec![Condition::A], notes);
    }

    let mut sup_b = 0.0f64;
    let mut sup_c = 0.0f64;
    let mut slack_a = f64::INFINITY;
    for i in start..points {
        let (v, d) = vals[i];
        sup_b = sup_b.max(v / ys[i].ln());
        sup_c = sup_c.max(ys[i] * d);
        slack_a = slack_a.min(d.min(1.0 - d));
    }
    let c_plus = C_PLUS_INFLATION * sup_b.max(sup_c);

    let decade_start = ys
        .iter()
        .position(|&y| y >= grid_max / 10.0)
        .unwrap_or(0)
        .max(start);
    let growth = |q0: f64, q1: f64, y0: f64, y1: f64| {
        if q1 <= 0.0 {
            f64::NEG_INFINITY
        } else if q0 <= 0.0 {
            f64::INFINITY
        } else {
            (q1 / q0).ln() / (y1 / y0).ln()
        }
    };
    let (y0, y1) = (ys[decade_start], ys[points - 1]);
    let (growth_b, growth_c) = if y1 > y0 {
        (
            growth(vals[decade_start].0 / y0.ln(), vals[points - 1].0 / y1.ln(), y0, y1),
            growth(y0 * vals[decade_start].1, y1 * vals[points - 1].1, y0, y1),
        )
    } else {
        (0.0, 0.0)
    };

    let mut failed = Vec::new();
    if growth_b >= GROWTH_LIMIT {
        failed.push(Condition::B);
        notes.push(format!(
            "ϕ(y)/log y grows like y^{growth_b:.3} over the last decade"
        ));
    }
    if growth_c >= GROWTH_LIMIT {
        failed.push(Condition::C);
        notes.push(format!("y ϕ'(y) grows like y^{growth_c:.3} over the last decade"));
    }
    if !c_plus.is_finite() || c_plus <= 0.0 {
        failed.push(Condition::B);
        notes.push(format!("C+ = {c_plus} is not a positive finite constant"));
    }

    let margins = [
        slack_a,
        c_plus - sup_b,
        c_plus - sup_c,
    ];
    ConditionCertificate {
        c_plus,
        y_star: ys[start],
        grid_min: lo,
        grid_max,
        grid_points: points,
        margins,
        sup_b,
        sup_c,
        growth_b,
        growth_c,
        valid: failed.is_empty(),
        failed,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn lp(a: f64, al: f64) -> PhiSpec {
        make_phi(PhiFamily::LogPow, a, al).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(lp(1.0, 1.0).phi(E), 1.0);
        assert_eq!(lp(2.0, 0.0).phi(1234.5), 2.0);
        let p = make_phi(PhiFamily::LogPowTimesLogLog, 1.0, 0.5).unwrap();
        // mpmath: sqrt(e)
        assert!((p.phi(E.powf(E)) - 1.648_721_270_700_128_2).abs() < 1e-14);
        assert_eq!(p.x_min(), E);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            make_phi(PhiFamily::LogPowPlusLogLog, 1.0, 1.0),
            Err(PhiError::InvalidAlpha { .. })
        ));
        assert!(make_phi(PhiFamily::LogPowTimesLogLog, 1.0, 1.0).is_err());
        assert!(make_phi(PhiFamily::LogPow, 1.0, 1.0).is_ok());
        assert!(matches!(
            make_phi(PhiFamily::LogPow, 0.0, 0.5),
            Err(PhiError::InvalidScale(_))
        ));
        assert!(make_phi(PhiFamily::LogPow, 1.0, 1.5).is_err());
        assert_eq!(PhiFamily::parse("logpow*loglog").unwrap(), PhiFamily::LogPowTimesLogLog);
        assert!(PhiFamily::parse("sqrt").is_err());
    }

    #[test]
    fn forward_examples() {
        assert!((lp(1.0, 1.0).forward(E).unwrap() - (E + 1.0)).abs() < 1e-15);
        assert_eq!(lp(2.0, 0.0).forward(10.0).unwrap(), 12.0);
        // mpmath: e^4 + 2
        let y = lp(1.0, 0.5).forward(E.powi(4)).unwrap();
        assert!((y - 56.598_150_033_144_24).abs() < 1e-12);
        assert!(matches!(lp(1.0, 1.0).forward(0.5), Err(PhiError::BelowDomain { .. })));
    }

    #[test]
    fn inverse_examples() {
        let p = lp(1.0, 1.0);
        assert!((p.inverse(E + 1.0).unwrap() - E).abs() < 1e-12);
        assert!((lp(2.0, 0.0).inverse(12.0).unwrap() - 10.0).abs() < 1e-12);
        // mpmath findroot of x + log x = 100
        let x = p.inverse(100.0).unwrap();
        assert!((x - 95.441_486_645_575_83).abs() < 1e-10);
        assert!(matches!(p.inverse(0.5), Err(PhiError::BelowRange { .. })));
    }

    #[test]
    fn inverse_against_bisection() {
        let p = lp(1.0, 1.0);
        let (mut lo, mut hi) = (1.0f64, 100.0f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m + m.ln() < 100.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!((p.inverse(100.0).unwrap() - lo).abs() < 1e-12);
    }

    #[test]
    fn varphi_examples() {
        let (v, d) = lp(1.0, 1.0).varphi_and_prime(E + 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        // mpmath: (1/e)/(1 + 1/e)
        assert!((d - 0.268_941_421_369_995_1).abs() < 1e-12);
        let (v, d) = lp(2.0, 0.0).varphi_and_prime(50.0).unwrap();
        assert_eq!((v, d), (2.0, 0.0));
        let y = 1e12;
        let (_, d) = lp(1.0, 1.0).varphi_and_prime(y).unwrap();
        assert!((y * d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn family_limits_at_1e8() {
        let y: f64 = 1e8;
        for &(a, al) in &[(1.0, 1.0), (0.5, 0.5), (2.0, 0.25), (1.0, 0.0)] {
            let (v, d) = lp(a, al).varphi_and_prime(y).unwrap();
            assert!((v / y.ln().powf(al) / a - 1.0).abs() < 0.01, "a={a} alpha={al}");
            if al > 0.0 {
                let lim = y * d / y.ln().powf(al - 1.0);
                assert!((lim / (a * al) - 1.0).abs() < 0.01, "a={a} alpha={al}");
            }
        }
    }

    #[test]
    fn roundtrip_and_monotone() {
        for fam in PhiFamily::BUILT_IN {
            let p = make_phi(fam, 1.5, 0.5).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for x in geometric_grid(p.x_min(), 1e12, 3000) {
                let y = p.forward(x).unwrap();
                assert!(y > prev);
                prev = y;
            }
            let mut s: u64 = 12345;
            for _ in 0..1000 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u = (s >> 11) as f64 / (1u64 << 53) as f64;
                let y = p.y_min() * (u * 30.0).exp();
                let x = p.inverse(y).unwrap();
                assert!((p.forward(x).unwrap() - y).abs() <= 1e-10 * y);
            }
        }
    }

    #[test]
    fn chain_rule_matches_finite_difference() {
        for fam in PhiFamily::BUILT_IN {
            let p = make_phi(fam, 1.0, 0.5).unwrap();
            for y in geometric_grid(p.y_min() * 2.0, 1e8, 200) {
                let h = 1e-5 * y;
                let fd = (p.varphi_and_prime(y + h).unwrap().0
                    - p.varphi_and_prime(y - h).unwrap().0)
                    / (2.0 * h);
                let d = p.varphi_and_prime(y).unwrap().1;
                assert!((fd - d).abs() < 1e-6, "{fam:?} y={y}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn certificate_logpow_one_one() {
        let p = lp(1.0, 1.0);
        let c = p.certify_conditions(default_y_star_hint(&p), 1e8);
        assert!(c.valid, "{c:?}");
        // sup of y ϕ' = (x + ln x)/(x + 1) is 1 + 1/x* where ln x* = 2 + 1/x*
        let (mut lo, mut hi) = (5.0f64, 20.0f64);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if m.ln() < 2.0 + 1.0 / m {
                lo = m;
            } else {
                hi = m;
            }
        }
        let sup = 1.0 + 1.0 / lo;
        assert!((c.sup_c - sup).abs() < 1e-6, "{} vs {sup}", c.sup_c);
        assert!((c.c_plus - 1.05 * sup).abs() < 1e-6, "C+ = {}", c.c_plus);
        assert!(c.sup_b < 1.0);
        assert_eq!(c.y_star, c.grid_min);
        assert!(c.margins.iter().all(|&m| m >= 0.0));
    }

    #[test]
    fn certificate_constant_shift() {
        let p = lp(2.0, 0.0);
        let c = p.certify_conditions(p.y_min(), 1e8);
        assert!(c.valid);
        assert_eq!(c.sup_c, 0.0);
        assert!(c.c_plus >= 2.0 / c.y_star.ln());
        let later = p.certify_conditions(100.0, 1e8);
        assert!(later.c_plus < c.c_plus);
    }

    #[test]
    fn certificate_rejects_linear_shift() {
        let p = custom_phi("x", 1.0, |x| x, |_| 1.0).unwrap();
        let c = p.certify_conditions(3.0, 1e8);
        assert!(!c.valid);
        assert!(c.failed.contains(&Condition::B));
    }

    #[test]
    fn certificate_all_families_valid() {
        for fam in PhiFamily::BUILT_IN {
            for &a in &[0.5, 1.0, 2.0] {
                for &al in &[0.0, 0.5, 1.0] {
                    let Ok(p) = make_phi(fam, a, al) else { continue };
                    let c = p.certify_conditions(default_y_star_hint(&p), 1e8);
                    assert!(c.valid, "{p}: {c:?}");
                }
            }
        }
    }

    #[test]
    fn custom_validation() {
        assert!(custom_phi("neg", 1.0, |_| -1.0, |_| 0.0).is_err());
        assert!(custom_phi("decreasing y", 1.0, |x| 1e9 - x, |_| -1.0).is_err());
        let p = custom_phi("log", 1.0, f64::ln, |x| 1.0 / x).unwrap();
        assert!((p.inverse(100.0).unwrap() - 95.441_486_645_575_83).abs() < 1e-10);
    }
}
