//! Densities with analytically known tails, evaluated in log-space, and the
//! catalog of reference distributions used as fixtures.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::quadrature::{LogQuadrature, QuadError};

/// `ln sqrt(2 pi)`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("unknown catalog distribution `{0}`")]
    UnknownName(String),
    #[error("invalid parameter for {family}: {reason}")]
    InvalidParameter { family: String, reason: String },
    #[error("tail threshold x0 must be finite and positive, got {0}")]
    InvalidThreshold(f64),
    #[error("density vanishes or is non-finite in the tail at x = {x}")]
    TailNotPositive { x: f64 },
    #[error("density oscillates in the tail ({changes} direction changes on the check grid)")]
    TailOscillates { changes: usize },
    #[error("half-line density queried at negative x = {0}")]
    NegativeArgument(f64),
    #[error("normalizing quadrature failed: {0}")]
    Normalization(#[from] QuadError),
}

/// Hamburger (support on the real line, two tails) or Stieltjes (support on
/// `[0, inf)`, one tail).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SupportKind {
    Hamburger,
    Stieltjes,
}

impl fmt::Display for SupportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportKind::Hamburger => f.write_str("R"),
            SupportKind::Stieltjes => f.write_str("R+"),
        }
    }
}

pub type LogFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A density known through its log-kernel plus a log-normalizer.
///
/// Tail-ratio checks only look at differences of the kernel, so rescaling a
/// density (changing `log_norm`) never changes them, not even in the last
/// bit.
#[derive(Clone)]
pub struct TailDensity {
    support: SupportKind,
    x0: f64,
    label: String,
    log_kernel: LogFn,
    log_norm: f64,
    normalized: bool,
}

impl fmt::Debug for TailDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailDensity")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("x0", &self.x0)
            .field("log_norm", &self.log_norm)
            .field("normalized", &self.normalized)
            .finish()
    }
}

/// Points checked for tail positivity at construction.
const TAIL_CHECK_POINTS: usize = 1000;
/// Allowed changes of direction of `log f` along the tail check grid.
const MAX_DIRECTION_CHANGES: usize = 2;

impl TailDensity {
    /// Builds a density from a log-kernel, rejecting kernels that vanish or
    /// oscillate on the tail `|x| >= x0`.
    pub fn new<F>(
        support: SupportKind,
        x0: f64,
        label: impl Into<String>,
        log_kernel: F,
    ) -> Result<Self, DensityError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(support, x0, label.into(), Arc::new(log_kernel), 0.0, false)
    }

    /// Like [`TailDensity::new`] for a kernel that is already a probability
    /// density.
    pub fn normalized_new<F>(
        support: SupportKind,
        x0: f64,
        label: impl Into<String>,
        log_density: F,
    ) -> Result<Self, DensityError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_arc(support, x0, label.into(), Arc::new(log_density), 0.0, true)
    }

    fn from_arc(
        support: SupportKind,
        x0: f64,
        label: String,
        log_kernel: LogFn,
        log_norm: f64,
        normalized: bool,
    ) -> Result<Self, DensityError> {
        if !(x0.is_finite() && x0 > 0.0) {
            return Err(DensityError::InvalidThreshold(x0));
        }
        let d = TailDensity {
            support,
            x0,
            label,
            log_kernel,
            log_norm,
            normalized,
        };
        d.check_tail(1.0)?;
        if support == SupportKind::Hamburger {
            d.check_tail(-1.0)?;
        }
        Ok(d)
    }

    fn check_tail(&self, side: f64) -> Result<(), DensityError> {
        let span = 1e6f64.ln();
        let mut prev: Option<f64> = None;
        let mut prev_dir = 0i8;
        let mut changes = 0usize;
        for i in 0..TAIL_CHECK_POINTS {
            let x = side * self.x0 * (span * i as f64 / (TAIL_CHECK_POINTS - 1) as f64).exp();
            let v = (self.log_kernel)(x);
            if !v.is_finite() {
                return Err(DensityError::TailNotPositive { x });
            }
            if let Some(p) = prev {
                let tol = 1e-12 * (1.0 + v.abs());
                let dir = if v > p + tol {
                    1
                } else if v < p - tol {
                    -1
                } else {
                    0
                };
                if dir != 0 {
                    if prev_dir != 0 && dir != prev_dir {
                        changes += 1;
                    }
                    prev_dir = dir;
                }
            }
            prev = Some(v);
        }
        if changes > MAX_DIRECTION_CHANGES {
            return Err(DensityError::TailOscillates { changes });
        }
        Ok(())
    }

    pub fn support(&self) -> SupportKind {
        self.support
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    /// Whether the density is known to integrate to one.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Unnormalized log-kernel, used for ratio checks.
    #[inline]
    pub fn log_kernel(&self, x: f64) -> f64 {
        (self.log_kernel)(x)
    }

    /// `ln f(x)` without the support check; `-inf` left of zero for
    /// half-line densities.
    #[inline]
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if self.support == SupportKind::Stieltjes && x < 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.log_kernel)(x) + self.log_norm
    }

    /// `ln f(x)`; errors for a negative argument on a half-line density.
    pub fn log_density(&self, x: f64) -> Result<f64, DensityError> {
        if self.support == SupportKind::Stieltjes && x < 0.0 {
            return Err(DensityError::NegativeArgument(x));
        }
        Ok(self.ln_pdf(x))
    }

    /// The same density multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        TailDensity {
            log_norm: self.log_norm + c.ln(),
            normalized: false,
            ..self.clone()
        }
    }

    /// Reflection `x -> -x` of a two-sided density. The reflected density's
    /// right tail is the original left tail.
    pub fn mirrored(&self) -> Self {
        let k = Arc::clone(&self.log_kernel);
        TailDensity {
            log_kernel: Arc::new(move |x| k(-x)),
            label: format!("mirror({})", self.label),
            ..self.clone()
        }
    }

    /// `ln ∫ f` over the support.
    pub fn log_mass(&self, quad: &LogQuadrature) -> Result<f64, QuadError> {
        let plus = quad.integrate_tail(&|x| self.ln_pdf(x), 0.0)?.ln_value;
        match self.support {
            SupportKind::Stieltjes => Ok(plus),
            SupportKind::Hamburger => {
                let minus = quad.integrate_tail(&|x| self.ln_pdf(-x), 0.0)?.ln_value;
                Ok(crate::logspace::log_add_exp(plus, minus))
            }
        }
    }

    /// Rescales the kernel to unit mass by quadrature.
    pub fn normalize(&self, quad: &LogQuadrature) -> Result<Self, DensityError> {
        let mass = TailDensity {
            log_norm: 0.0,
            ..self.clone()
        }
        .log_mass(quad)?;
        Ok(TailDensity {
            log_norm: -mass,
            normalized: true,
            ..self.clone()
        })
    }

    /// Wraps a kernel without the tail checks; callers guarantee validity.
    pub(crate) fn trusted(
        support: SupportKind,
        x0: f64,
        label: String,
        log_kernel: LogFn,
        normalized: bool,
    ) -> Self {
        TailDensity {
            support,
            x0,
            label,
            log_kernel,
            log_norm: 0.0,
            normalized,
        }
    }
}

/// `ln f(x)` for a density; the free-function form of
/// [`TailDensity::log_density`].
pub fn evaluate_log_density(d: &TailDensity, x: f64) -> Result<f64, DensityError> {
    d.log_density(x)
}

/// Literature determinacy classification of a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Mdet,
    Mindet,
    Unknown,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Mdet => "M-det",
            Classification::Mindet => "M-indet",
            Classification::Unknown => "unknown",
        })
    }
}

/// Closed-form `ln E|X|^n`.
pub type LogMomentFn = Arc<dyn Fn(u32) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<f64>,
    pub density: TailDensity,
    pub closed_form_log_moment: Option<LogMomentFn>,
    pub classification: Classification,
    pub classification_source: String,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("density", &self.density)
            .field("closed_form", &self.closed_form_log_moment.is_some())
            .field("classification", &self.classification)
            .finish()
    }
}

/// Names accepted by [`catalog_density`].
pub const CATALOG_NAMES: [&str; 8] = [
    "normal",
    "half_normal",
    "exponential",
    "gamma",
    "lognormal",
    "chi_squared",
    "weibull",
    "generalized_gamma",
];

/// Tail threshold used for every catalog entry.
pub const CATALOG_X0: f64 = 1.0;

const SRC_CARLEMAN: &str = "Carleman's condition holds (moments grow at most like Γ(1+2n))";
const SRC_LOGNORMAL: &str = "Heyde (1963): the lognormal law is moment-indeterminate";
const SRC_STRETCHED: &str =
    "stretched exponential tail exp(-x^p) on R+: determinate iff p >= 1/2 (Carleman / Krein)";

fn invalid(family: &str, reason: impl Into<String>) -> DensityError {
    DensityError::InvalidParameter {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn positive(family: &str, what: &str, v: f64) -> Result<f64, DensityError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(family, format!("{what} must be positive, got {v}")))
    }
}

fn param(params: &[f64], i: usize, default: f64) -> f64 {
    params.get(i).copied().unwrap_or(default)
}

/// `(k - 1) ln x` with the `x = 0` limits resolved.
#[inline]
fn power_log(k_minus_1: f64, x: f64) -> f64 {
    if k_minus_1 == 0.0 {
        0.0
    } else if x == 0.0 {
        if k_minus_1 > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        k_minus_1 * x.ln()
    }
}

/// Looks up a reference distribution.
///
/// Parameters (defaults in brackets): `normal:mu[0],sigma[1]`,
/// `half_normal:sigma[1]`, `exponential:rate[1]`, `gamma:shape[1],scale[1]`,
/// `lognormal:mu[0],sigma[1]`, `chi_squared:k[1]`, `weibull:shape[1],scale[1]`,
/// `generalized_gamma:scale[1],d[1],p[1]` with density
/// `p/a^d x^{d-1} e^{-(x/a)^p} / Γ(d/p)`.
pub fn catalog_density(name: &str, params: &[f64]) -> Result<CatalogEntry, DensityError> {
    let name = name.trim().to_ascii_lowercase();
    let x0 = CATALOG_X0;
    let (support, kernel, moments, classification, source): (
        SupportKind,
        LogFn,
        Option<LogMomentFn>,
        Classification,
        &str,
    ) = match name.as_str() {
        "normal" => {
            let mu = param(params, 0, 0.0);
            let sigma = positive("normal", "sigma", param(params, 1, 1.0))?;
            if !mu.is_finite() {
                return Err(invalid("normal", "mu must be finite"));
            }
            let ls = sigma.ln();
            let kernel: LogFn = Arc::new(move |x: f64| {
                let z = (x - mu) / sigma;
                -0.5 * z * z - ls - LN_SQRT_2PI
            });
            let moments: Option<LogMomentFn> = (mu == 0.0).then(|| {
                Arc::new(move |n: u32| half_gaussian_log_moment(n, sigma)) as LogMomentFn
            });
            (SupportKind::Hamburger, kernel, moments, Classification::Mdet, SRC_CARLEMAN)
        }
        "half_normal" => {
            let sigma = positive("half_normal", "sigma", param(params, 0, 1.0))?;
            let c = std::f64::consts::LN_2 - sigma.ln() - LN_SQRT_2PI;
            let kernel: LogFn = Arc::new(move |x: f64| {
                let z = x / sigma;
                c - 0.5 * z * z
            });
            let moments: LogMomentFn = Arc::new(move |n| half_gaussian_log_moment(n, sigma));
            (SupportKind::Stieltjes, kernel, Some(moments), Classification::Mdet, SRC_CARLEMAN)
        }
        "exponential" => {
            let rate = positive("exponential", "rate", param(params, 0, 1.0))?;
            let lr = rate.ln();
            let kernel: LogFn = Arc::new(move |x: f64| lr - rate * x);
            let moments: LogMomentFn =
                Arc::new(move |n| ln_gamma(f64::from(n) + 1.0) - f64::from(n) * lr);
            (SupportKind::Stieltjes, kernel, Some(moments), Classification::Mdet, SRC_CARLEMAN)
        }
        "gamma" | "chi_squared" => {
            let (shape, scale) = if name == "gamma" {
                (
                    positive("gamma", "shape", param(params, 0, 1.0))?,
                    positive("gamma", "scale", param(params, 1, 1.0))?,
                )
            } else {
                (positive("chi_squared", "k", param(params, 0, 1.0))? / 2.0, 2.0)
            };
            let c = -ln_gamma(shape) - shape * scale.ln();
            let kernel: LogFn =
                Arc::new(move |x: f64| c + power_log(shape - 1.0, x) - x / scale);
            let moments: LogMomentFn = Arc::new(move |n| {
                let n = f64::from(n);
                n * scale.ln() + ln_gamma(shape + n) - ln_gamma(shape)
            });
            (SupportKind::Stieltjes, kernel, Some(moments), Classification::Mdet, SRC_CARLEMAN)
        }
        "lognormal" => {
            let mu = param(params, 0, 0.0);
            let sigma = positive("lognormal", "sigma", param(params, 1, 1.0))?;
            if !mu.is_finite() {
                return Err(invalid("lognormal", "mu must be finite"));
            }
            let ls = sigma.ln();
            let kernel: LogFn = Arc::new(move |x: f64| {
                if x == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let l = x.ln();
                let z = (l - mu) / sigma;
                -0.5 * z * z - l - ls - LN_SQRT_2PI
            });
            let moments: LogMomentFn = Arc::new(move |n| {
                let n = f64::from(n);
                n * mu + 0.5 * n * n * sigma * sigma
            });
            (SupportKind::Stieltjes, kernel, Some(moments), Classification::Mindet, SRC_LOGNORMAL)
        }
        "weibull" => {
            let k = positive("weibull", "shape", param(params, 0, 1.0))?;
            let lambda = positive("weibull", "scale", param(params, 1, 1.0))?;
            let ll = lambda.ln();
            let kernel: LogFn = Arc::new(move |x: f64| {
                let z = x / lambda;
                k.ln() - ll + power_log(k - 1.0, z) - z.powf(k)
            });
            let moments: LogMomentFn = Arc::new(move |n| {
                let n = f64::from(n);
                n * ll + ln_gamma(1.0 + n / k)
            });
            let class = if k >= 0.5 {
                Classification::Mdet
            } else {
                Classification::Mindet
            };
            (SupportKind::Stieltjes, kernel, Some(moments), class, SRC_STRETCHED)
        }
        "generalized_gamma" => {
            let a = positive("generalized_gamma", "scale", param(params, 0, 1.0))?;
            let d = positive("generalized_gamma", "d", param(params, 1, 1.0))?;
            let p = positive("generalized_gamma", "p", param(params, 2, 1.0))?;
            let c = p.ln() - d * a.ln() - ln_gamma(d / p);
            let kernel: LogFn =
                Arc::new(move |x: f64| c + power_log(d - 1.0, x) - (x / a).powf(p));
            let moments: LogMomentFn = Arc::new(move |n| {
                let n = f64::from(n);
                n * a.ln() + ln_gamma((d + n) / p) - ln_gamma(d / p)
            });
            let class = if p >= 0.5 {
                Classification::Mdet
            } else {
                Classification::Mindet
            };
            (SupportKind::Stieltjes, kernel, Some(moments), class, SRC_STRETCHED)
        }
        other => return Err(DensityError::UnknownName(other.to_string())),
    };
    let label = if params.is_empty() {
        name.clone()
    } else {
        let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        format!("{name}:{}", ps.join(","))
    };
    let density = TailDensity::from_arc(support, x0, label, kernel, 0.0, true)?;
    Ok(CatalogEntry {
        name,
        params: params.to_vec(),
        density,
        closed_form_log_moment: moments,
        classification,
        classification_source: source.to_string(),
    })
}

/// `ln E|X|^n` for `X ~ N(0, sigma^2)`, which is also the half-normal moment:
/// `sigma^n 2^{n/2} Γ((n+1)/2) / sqrt(pi)`.
fn half_gaussian_log_moment(n: u32, sigma: f64) -> f64 {
    let n = f64::from(n);
    n * sigma.ln() + 0.5 * n * std::f64::consts::LN_2 + ln_gamma(0.5 * (n + 1.0))
        - 0.5 * std::f64::consts::PI.ln()
}

/// Parses `name:p1,p2,...` as accepted on the command line.
pub fn parse_dist_spec(spec: &str) -> Result<CatalogEntry, DensityError> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, r),
        None => (spec, ""),
    };
    let params = rest
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| invalid(name, format!("cannot parse parameter `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    catalog_density(name, &params)
}

/// Fixture set covering every catalog family, including the indeterminate
/// members kept well away from the determinacy boundary.
pub fn catalog_fixtures() -> Vec<CatalogEntry> {
    let specs: [(&str, &[f64]); 16] = [
        ("normal", &[0.0, 1.0]),
        ("normal", &[0.0, 2.0]),
        ("half_normal", &[1.0]),
        ("exponential", &[1.0]),
        ("exponential", &[0.5]),
        ("gamma", &[0.5, 1.0]),
        ("gamma", &[2.0, 1.0]),
        ("gamma", &[5.0, 1.0]),
        ("chi_squared", &[1.0]),
        ("chi_squared", &[4.0]),
        ("weibull", &[2.0, 1.0]),
        ("weibull", &[0.25, 1.0]),
        ("generalized_gamma", &[1.0, 2.0, 3.0]),
        ("generalized_gamma", &[1.0, 1.0, 0.25]),
        ("lognormal", &[0.0, 1.0]),
        ("lognormal", &[0.0, 0.5]),
    ];
    specs
        .iter()
        .map(|(n, p)| catalog_density(n, p).expect("fixture parameters are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(name: &str, params: &[f64]) -> CatalogEntry {
        catalog_density(name, params).unwrap()
    }

    #[test]
    fn lognormal_at_one_is_gaussian_constant() {
        let d = entry("lognormal", &[0.0, 1.0]).density;
        assert!((d.log_density(1.0).unwrap() + 0.918_938_533_204_672_7).abs() < 1e-15);
    }

    #[test]
    fn normal_density_at_two() {
        // mpmath, 50 digits: exp(-2)/sqrt(2 pi)
        let d = entry("normal", &[]).density;
        let f = d.log_density(2.0).unwrap().exp();
        assert!((f - 0.053_990_966_513_188_05).abs() < 1e-16);
        assert!((d.log_density(0.0).unwrap() + 0.918_938_533_204_672_7).abs() < 1e-15);
    }

    #[test]
    fn exponential_values() {
        let d = entry("exponential", &[1.0]).density;
        assert!((d.log_density(0.5).unwrap().exp() - (-0.5f64).exp()).abs() < 1e-16);
        assert_eq!(d.log_density(3.0).unwrap(), -3.0);
    }

    #[test]
    fn chi_squared_one_at_one() {
        // mpmath: log(exp(-1/2)/sqrt(2 pi))
        let d = entry("chi_squared", &[1.0]).density;
        assert!((d.log_density(1.0).unwrap() + 1.418_938_533_204_672_7).abs() < 1e-14);
    }

    #[test]
    fn supports_and_classifications() {
        assert_eq!(entry("normal", &[]).density.support(), SupportKind::Hamburger);
        for n in ["half_normal", "exponential", "gamma", "lognormal", "chi_squared", "weibull"] {
            assert_eq!(entry(n, &[]).density.support(), SupportKind::Stieltjes, "{n}");
        }
        assert_eq!(entry("lognormal", &[]).classification, Classification::Mindet);
        assert_eq!(entry("weibull", &[0.3]).classification, Classification::Mindet);
        assert_eq!(entry("weibull", &[0.5]).classification, Classification::Mdet);
        for e in catalog_fixtures() {
            assert!(!e.classification_source.is_empty());
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(catalog_density("cauchy", &[]), Err(DensityError::UnknownName(_))));
        assert!(matches!(
            catalog_density("exponential", &[-1.0]),
            Err(DensityError::InvalidParameter { .. })
        ));
        assert!(matches!(
            catalog_density("gamma", &[2.0, 0.0]),
            Err(DensityError::InvalidParameter { .. })
        ));
        let d = entry("exponential", &[]).density;
        assert!(matches!(d.log_density(-1.0), Err(DensityError::NegativeArgument(_))));
    }

    #[test]
    fn rejects_vanishing_and_oscillating_tails() {
        let r = TailDensity::new(SupportKind::Stieltjes, 1.0, "cut", |x: f64| {
            if x > 50.0 {
                f64::NEG_INFINITY
            } else {
                -x
            }
        });
        assert!(matches!(r, Err(DensityError::TailNotPositive { .. })));
        let r = TailDensity::new(SupportKind::Stieltjes, 1.0, "wiggle", |x: f64| {
            -2.0 * x.ln() + x.sin()
        });
        assert!(matches!(r, Err(DensityError::TailOscillates { .. })));
        let r = TailDensity::new(SupportKind::Hamburger, 1.0, "one-sided", |x: f64| {
            if x < -3.0 {
                f64::NEG_INFINITY
            } else {
                -x * x
            }
        });
        assert!(r.is_err());
    }

    #[test]
    fn catalog_entries_integrate_to_one() {
        let q = LogQuadrature::default();
        for e in catalog_fixtures() {
            let m = e.density.log_mass(&q).unwrap();
            assert!(m.abs() < 1e-8, "{}: ln mass {m}", e.density.label());
        }
    }

    #[test]
    fn tails_are_positive_on_a_dense_grid() {
        for e in catalog_fixtures() {
            let d = &e.density;
            for i in 0..1000 {
                let x = d.x0() * (i as f64 * 0.02).exp();
                assert!(d.ln_pdf(x).is_finite(), "{} at {x}", d.label());
                if d.support() == SupportKind::Hamburger {
                    assert!(d.ln_pdf(-x).is_finite());
                }
            }
        }
    }

    #[test]
    fn normalize_and_scale() {
        let q = LogQuadrature::default();
        let d = TailDensity::new(SupportKind::Hamburger, 1.0, "gauss kernel", |x: f64| {
            -0.5 * x * x
        })
        .unwrap();
        assert!(!d.is_normalized());
        let n = d.normalize(&q).unwrap();
        assert!((n.log_norm() + LN_SQRT_2PI).abs() < 1e-12);
        let s = n.scaled(3.0);
        assert_eq!(s.log_kernel(7.0), n.log_kernel(7.0));
        assert!((s.ln_pdf(0.0) - n.ln_pdf(0.0) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn dist_spec_parsing() {
        let e = parse_dist_spec("lognormal:0,1").unwrap();
        assert_eq!(e.params, vec![0.0, 1.0]);
        assert_eq!(e.density.label(), "lognormal:0,1");
        assert!(parse_dist_spec("gamma:abc").is_err());
        assert_eq!(parse_dist_spec("exponential").unwrap().params, Vec::<f64>::new());
    }
}
