//! Carleman sums `Σ m_{2n}^{-1/(2n)}` (line) and `Σ m_n^{-1/(2n)}` (half
//! line) from a moment table, with a growth-exponent diagnosis.
//!
//! Divergence of a series cannot be decided from finitely many terms. The
//! diagnosis is a fitted-exponent heuristic with explicit thresholds and is
//! reported as a diagnostic only.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::density::SupportKind;
use crate::moments::MomentTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CarlemanError {
    #[error("{kind:?} Carleman sum needs a {kind:?} moment table, got {table:?} (symmetrize first)")]
    SupportMismatch {
        kind: SupportKind,
        table: SupportKind,
    },
    #[error("need at least {need} terms, table gives {have}")]
    TooFewTerms { need: usize, have: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Diagnosis {
    Divergent,
    Convergent,
    Inconclusive,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::Divergent => "DIVERGENT",
            Diagnosis::Convergent => "CONVERGENT",
            Diagnosis::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Thresholds of the diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlemanPolicy {
    /// DIVERGENT when the fitted exponent is at most `1 - delta_fit`.
    pub delta_fit: f64,
    /// CONVERGENT when `log term_n` falls at least this fast per order.
    pub delta_geo: f64,
}

impl Default for CarlemanPolicy {
    fn default() -> Self {
        CarlemanPolicy {
            delta_fit: 0.05,
            delta_geo: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlemanDiagnosis {
    pub kind: SupportKind,
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `p` in `log term_n ≈ -p log n + c` over the fit window.
    pub growth_exponent: f64,
    /// Slope of `log term_n` against `n` over the fit window.
    pub geometric_slope: f64,
    /// First and last term index of the fit window (1-based).
    pub fit_window: (usize, usize),
    pub diagnosis: Diagnosis,
}

/// Carleman terms with the default policy.
pub fn carleman_terms(
    table: &MomentTable,
    kind: SupportKind,
) -> Result<CarlemanDiagnosis, CarlemanError> {
    carleman_terms_with(table, kind, &CarlemanPolicy::default())
}

pub fn carleman_terms_with(
    table: &MomentTable,
    kind: SupportKind,
    policy: &CarlemanPolicy,
) -> Result<CarlemanDiagnosis, CarlemanError> {
    if kind != table.support {
        return Err(CarlemanError::SupportMismatch {
            kind,
            table: table.support,
        });
    }
    let log_terms: Vec<f64> = match kind {
        SupportKind::Hamburger => table
            .log_m_even
            .iter()
            .enumerate()
            .map(|(i, &lm)| -lm / (2.0 * (i + 1) as f64))
            .collect(),
        SupportKind::Stieltjes => table
            .log_mu
            .iter()
            .enumerate()
            .map(|(i, &lm)| -lm / (2.0 * (i + 1) as f64))
            .collect(),
    };
    if log_terms.len() < 2 {
        return Err(CarlemanError::TooFewTerms {
            need: 2,
            have: log_terms.len(),
        });
    }
    let terms: Vec<f64> = log_terms.iter().map(|l| l.exp()).collect();
    let partial_sums: Vec<f64> = terms
        .iter()
        .scan(0.0, |s, &t| {
            *s += t;
            Some(*s)
        })
        .collect();

    let n = log_terms.len();
    let lo = (n / 2).max(1).min(n - 1);
    let idx: Vec<f64> = (lo..=n).map(|k| k as f64).collect();
    let window: Vec<f64> = log_terms[lo - 1..].to_vec();
    let logn: Vec<f64> = idx.iter().map(|k| k.ln()).collect();
    let p = -slope(&logn, &window);
    let geo = slope(&idx, &window);
    let n_term_nondecreasing = idx
        .iter()
        .zip(&window)
        .map(|(k, l)| k.ln() + l)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] >= w[0] - 1e-12);

    let diagnosis = if p <= 1.0 - policy.delta_fit || n_term_nondecreasing {
        Diagnosis::Divergent
    } else if geo <= -policy.delta_geo {
        Diagnosis::Convergent
    } else {
        Diagnosis::Inconclusive
    };
    Ok(CarlemanDiagnosis {
        kind,
        terms,
        partial_sums,
        growth_exponent: p,
        geometric_slope: geo,
        fit_window: (lo, n),
        diagnosis,
    })
}

/// Least-squares slope of `y` on `x`.
fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

/// Partial sums of the two lower-bound series implied by a moment bound
/// `μ_n <= d0 c^n (n log n)^n`:
///
/// * half line: `Σ_{n=2}^{N} d0^{-1/(2n)} c^{-1/2} (n log n)^{-1/2}`,
/// * line: `Σ_{n=1}^{N} d0^{-1/(2n)} c^{-1} (2n log 2n)^{-1}`.
///
/// The first vector has `N - 1` entries (from `n = 2`), the second `N`.
pub fn bound_implies_divergence(d0: f64, c: f64, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let ld0 = d0.ln();
    let half_line = (2..=n_max)
        .map(|n| {
            let n = n as f64;
            (-ld0 / (2.0 * n) - 0.5 * c.ln() - 0.5 * (n * n.ln()).ln()).exp()
        })
        .scan(0.0, |s, t| {
            *s += t;
            Some(*s)
        })
        .collect();
    let line = (1..=n_max)
        .map(|n| {
            let n = n as f64;
            let m = 2.0 * n;
            (-ld0 / (2.0 * n) - c.ln() - (m * m.ln()).ln()).exp()
        })
        .scan(0.0, |s, t| {
            *s += t;
            Some(*s)
        })
        .collect();
    (half_line, line)
}

/// Worst slack of `ln μ_n <= ln d0 + n ln c + n ln(n ln n)` over
/// `2 <= n <= n_max`; negative when the bound fails somewhere.
pub fn moment_bound_slack(table: &MomentTable, d0: f64, c: f64) -> f64 {
    (2..=table.n_max)
        .map(|n| {
            let nf = f64::from(n);
            d0.ln() + nf * c.ln() + nf * (nf * nf.ln()).ln() - table.log_mu(n)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::catalog_density;
    use crate::moments::{moment_table, moment_table_for_entry};

    fn table(name: &str, p: &[f64], n_max: u32) -> MomentTable {
        moment_table_for_entry(&catalog_density(name, p).unwrap(), n_max).unwrap()
    }

    #[test]
    fn normal_terms_and_sums() {
        let d = carleman_terms(&table("normal", &[], 6), SupportKind::Hamburger).unwrap();
        // mpmath: 3^(-1/4), 15^(-1/6)
        let want_t = [1.0, 0.759_835_685_651_592_5, 0.636_773_219_473_170_6];
        let want_s = [1.0, 1.759_835_685_651_592_7, 2.396_608_905_124_763_2];
        for i in 0..3 {
            assert!((d.terms[i] - want_t[i]).abs() < 1e-12);
            assert!((d.partial_sums[i] - want_s[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn diagnoses() {
        let n = carleman_terms(&table("normal", &[], 40), SupportKind::Hamburger).unwrap();
        assert_eq!(n.diagnosis, Diagnosis::Divergent);
        assert!((n.growth_exponent - 0.5).abs() < 0.1, "{}", n.growth_exponent);
        let e = carleman_terms(&table("exponential", &[1.0], 40), SupportKind::Stieltjes).unwrap();
        assert_eq!(e.diagnosis, Diagnosis::Divergent);
        assert!((e.growth_exponent - 0.5).abs() < 0.1);
        let l = carleman_terms(&table("lognormal", &[0.0, 1.0], 40), SupportKind::Stieltjes).unwrap();
        assert_eq!(l.diagnosis, Diagnosis::Convergent);
        assert!((l.terms[0] - 0.778_800_783_071_404_9).abs() < 1e-15);
        for (i, t) in l.terms.iter().enumerate() {
            let want = (-((i + 1) as f64) / 4.0).exp();
            assert!((t / want - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn partial_sums_increase() {
        let d = carleman_terms(&table("gamma", &[2.0, 1.0], 20), SupportKind::Stieltjes).unwrap();
        assert!(d.partial_sums.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn mismatched_support() {
        let t = table("exponential", &[], 10);
        assert!(matches!(
            carleman_terms(&t, SupportKind::Hamburger),
            Err(CarlemanError::SupportMismatch { .. })
        ));
    }

    #[test]
    fn bound_series_values() {
        let (h, l) = bound_implies_divergence(1.0, 1.0, 10);
        // mpmath: sum_{n=2}^{10} (n log n)^(-1/2)
        assert!((h.last().unwrap() - 3.431_717_481_269_985_8).abs() < 1e-12);
        assert!((l[0] - 0.721_347_520_444_481_7).abs() < 1e-15);
        assert!(h.windows(2).all(|w| w[1] > w[0]));
        assert!(l.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bound_series_grow_without_limit() {
        let (h, l) = bound_implies_divergence(2.0, 3.0, 1_000_000);
        let gain_h = h[h.len() - 1] - h[1000 - 2];
        assert!(gain_h > 10.0, "{gain_h}");
        // The line series grows like (1/(2c)) ln ln(2N); compare with the
        // integral of the term between the same orders.
        let gain_l = l[l.len() - 1] - l[1000 - 1];
        let integral = ((2e6f64).ln().ln() - (2e3f64).ln().ln()) / (2.0 * 3.0);
        assert!((gain_l / integral - 1.0).abs() < 0.01, "{gain_l} vs {integral}");
    }

    #[test]
    fn moment_bound_implies_small_exponent() {
        let d = catalog_density("gamma", &[5.0, 1.0]).unwrap();
        let t = moment_table(&d.density, 30).unwrap();
        assert!(moment_bound_slack(&t, 1e3, 1.0) >= 0.0);
        let c = carleman_terms(&t, SupportKind::Stieltjes).unwrap();
        assert!(c.growth_exponent <= 1.0);
    }
}
