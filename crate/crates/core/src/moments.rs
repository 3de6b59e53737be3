//! Log-space absolute moments `μ_n^± = ∫_0^∞ x^n f(±x) dx`, their sum
//! `μ_n = E|X|^n`, and the even raw moments `m_{2k} = μ_{2k}`.

use serde::Serialize;
use thiserror::Error;

use crate::density::{CatalogEntry, SupportKind, TailDensity};
use crate::logspace::log_add_exp;
use crate::quadrature::{LogQuadrature, QuadError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("moment of order {n} does not exist ({side:?} side: {source})")]
    DoesNotExist {
        n: u32,
        side: Side,
        source: QuadError,
    },
    #[error("quadrature failed for order {n} ({side:?} side): {source}")]
    Quadrature {
        n: u32,
        side: Side,
        source: QuadError,
    },
    #[error("density `{0}` is not normalized; normalize it before moment analysis")]
    NotNormalized(String),
    #[error("closed form and quadrature disagree at order {n}: relative error {rel:e}")]
    CrossCheck { n: u32, rel: f64 },
    #[error("n_max must be at least 2, got {0}")]
    OrderTooSmall(u32),
}

/// `ln ∫_0^∞ x^n f(±x) dx` with the default quadrature rule.
pub fn log_abs_moment(d: &TailDensity, n: u32, side: Side) -> Result<f64, MomentError> {
    log_abs_moment_with(d, n, side, &LogQuadrature::default())
}

pub fn log_abs_moment_with(
    d: &TailDensity,
    n: u32,
    side: Side,
    quad: &LogQuadrature,
) -> Result<f64, MomentError> {
    let s = match side {
        Side::Plus => 1.0,
        Side::Minus => {
            if d.support() == SupportKind::Stieltjes {
                return Ok(f64::NEG_INFINITY);
            }
            -1.0
        }
    };
    let nf = f64::from(n);
    let h = |x: f64| {
        let lf = d.ln_pdf(s * x);
        if n == 0 {
            lf
        } else if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            nf * x.ln() + lf
        }
    };
    quad.integrate_tail(&h, 0.0)
        .map(|r| r.ln_value)
        .map_err(|e| match e {
            QuadError::NotDecaying { .. } | QuadError::SingularAtZero => {
                MomentError::DoesNotExist { n, side, source: e }
            }
            other => MomentError::Quadrature {
                n,
                side,
                source: other,
            },
        })
}

/// Log-moments for orders `1..=n_max`; index `n - 1` holds order `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    pub n_max: u32,
    pub support: SupportKind,
    pub log_mu_plus: Vec<f64>,
    pub log_mu_minus: Vec<f64>,
    pub log_mu: Vec<f64>,
    /// `ln m_{2k}` for `2k <= n_max`; index `k - 1`.
    pub log_m_even: Vec<f64>,
    /// Whether the values come from closed forms (cross-checked) or quadrature.
    pub closed_form: bool,
}

impl MomentTable {
    fn from_sides(
        support: SupportKind,
        log_mu_plus: Vec<f64>,
        log_mu_minus: Vec<f64>,
        closed_form: bool,
    ) -> Self {
        let log_mu: Vec<f64> = log_mu_plus
            .iter()
            .zip(&log_mu_minus)
            .map(|(&p, &m)| log_add_exp(p, m))
            .collect();
        let n_max = log_mu.len() as u32;
        let log_m_even = (1..=n_max / 2).map(|k| log_mu[(2 * k - 1) as usize]).collect();
        MomentTable {
            n_max,
            support,
            log_mu_plus,
            log_mu_minus,
            log_mu,
            log_m_even,
            closed_form,
        }
    }

    /// `ln μ_n` for `0 <= n <= n_max` (`ln μ_0 = 0` for a probability density).
    pub fn log_mu(&self, n: u32) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.log_mu[(n - 1) as usize]
        }
    }

    pub fn log_mu_plus(&self, n: u32) -> f64 {
        if n == 0 {
            match self.support {
                SupportKind::Stieltjes => 0.0,
                SupportKind::Hamburger => f64::NAN,
            }
        } else {
            self.log_mu_plus[(n - 1) as usize]
        }
    }

    /// Largest violation of `2 ln μ_n <= ln μ_{n-1} + ln μ_{n+1}` over
    /// `1 <= n < n_max`; nonpositive for a valid table.
    pub fn lyapunov_defect(&self) -> f64 {
        (1..self.n_max)
            .map(|n| 2.0 * self.log_mu(n) - self.log_mu(n - 1) - self.log_mu(n + 1))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rows `(n, ln μ_n^+, ln μ_n^-, ln μ_n)`.
    pub fn rows(&self) -> impl Iterator<Item = (u32, f64, f64, f64)> + '_ {
        (1..=self.n_max).map(move |n| {
            let i = (n - 1) as usize;
            (n, self.log_mu_plus[i], self.log_mu_minus[i], self.log_mu[i])
        })
    }
}

/// Moment table of a normalized density by quadrature.
pub fn moment_table(d: &TailDensity, n_max: u32) -> Result<MomentTable, MomentError> {
    moment_table_with(d, n_max, &LogQuadrature::default())
}

pub fn moment_table_with(
    d: &TailDensity,
    n_max: u32,
    quad: &LogQuadrature,
) -> Result<MomentTable, MomentError> {
    if n_max < 2 {
        return Err(MomentError::OrderTooSmall(n_max));
    }
    if !d.is_normalized() {
        return Err(MomentError::NotNormalized(d.label().to_string()));
    }
    let orders: Vec<u32> = (1..=n_max).collect();
    let results: Vec<Result<(f64, f64), MomentError>> = std::thread::scope(|s| {
        let handles: Vec<_> = orders
            .chunks(8)
            .map(|chunk| {
                s.spawn(move || {
                    chunk
                        .iter()
                        .map(|&n| {
                            Ok((
                                log_abs_moment_with(d, n, Side::Plus, quad)?,
                                log_abs_moment_with(d, n, Side::Minus, quad)?,
                            ))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("moment worker panicked"))
            .collect()
    });
    let mut plus = Vec::with_capacity(n_max as usize);
    let mut minus = Vec::with_capacity(n_max as usize);
    for r in results {
        let (p, m) = r?;
        plus.push(p);
        minus.push(m);
    }
    Ok(MomentTable::from_sides(d.support(), plus, minus, false))
}

/// Relative tolerance for the closed-form cross-check.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Moment table of a catalog entry. Uses the closed form when available,
/// after cross-checking it against quadrature at orders `2, n_max/2, n_max`.
pub fn moment_table_for_entry(
    entry: &CatalogEntry,
    n_max: u32,
) -> Result<MomentTable, MomentError> {
    let Some(cf) = &entry.closed_form_log_moment else {
        return moment_table(&entry.density, n_max);
    };
    if n_max < 2 {
        return Err(MomentError::OrderTooSmall(n_max));
    }
    let d = &entry.density;
    let mut checks = vec![2, (n_max / 2).max(2), n_max];
    checks.dedup();
    for n in checks {
        let q = log_add_exp(
            log_abs_moment(d, n, Side::Plus)?,
            log_abs_moment(d, n, Side::Minus)?,
        );
        let rel = (q - cf(n)).exp_m1().abs();
        if !(rel <= CROSS_CHECK_TOL) {
            return Err(MomentError::CrossCheck { n, rel });
        }
    }
    let (plus, minus): (Vec<f64>, Vec<f64>) = (1..=n_max)
        .map(|n| match d.support() {
            SupportKind::Stieltjes => (cf(n), f64::NEG_INFINITY),
            // Catalog two-sided entries with closed forms are symmetric.
            SupportKind::Hamburger => {
                let half = cf(n) - std::f64::consts::LN_2;
                (half, half)
            }
        })
        .unzip();
    Ok(MomentTable::from_sides(d.support(), plus, minus, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{catalog_density, catalog_fixtures};

    fn dens(name: &str, p: &[f64]) -> TailDensity {
        catalog_density(name, p).unwrap().density
    }

    #[test]
    fn single_moment_examples() {
        let e = log_abs_moment(&dens("exponential", &[1.0]), 5, Side::Plus).unwrap();
        assert!((e - 4.787_491_742_782_046).abs() < 1e-9);
        let n = log_abs_moment(&dens("normal", &[]), 4, Side::Plus).unwrap();
        assert!((n - 0.405_465_108_108_164_4).abs() < 1e-9);
        let l = log_abs_moment(&dens("lognormal", &[0.0, 1.0]), 6, Side::Plus).unwrap();
        assert!((l - 18.0).abs() < 1e-9);
        let m = log_abs_moment(&dens("exponential", &[1.0]), 3, Side::Minus).unwrap();
        assert_eq!(m, f64::NEG_INFINITY);
    }

    #[test]
    fn lognormal_order_forty_is_representable() {
        let l = log_abs_moment(&dens("lognormal", &[0.0, 1.0]), 40, Side::Plus).unwrap();
        assert!((l - 800.0).abs() < 1e-8 * 800.0);
    }

    #[test]
    fn tables_match_oracles() {
        let t = moment_table(&dens("normal", &[]), 6).unwrap();
        let want = [0.0, 3f64.ln(), 15f64.ln()];
        for (g, w) in t.log_m_even.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
        let t = moment_table(&dens("exponential", &[1.0]), 4).unwrap();
        let want = [0.0, 2f64.ln(), 6f64.ln(), 24f64.ln()];
        for (g, w) in t.log_mu.iter().zip(want) {
            assert!((g - w).abs() < 1e-9);
        }
        for e in catalog_fixtures() {
            if e.density.support() == SupportKind::Hamburger {
                let t = moment_table(&e.density, 10).unwrap();
                for (p, m) in t.log_mu_plus.iter().zip(&t.log_mu_minus) {
                    assert!((p - m).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadrature_agrees_with_closed_forms() {
        for e in catalog_fixtures() {
            let cf = e.closed_form_log_moment.as_ref().unwrap();
            for n in 1..=30u32 {
                let q = log_add_exp(
                    log_abs_moment(&e.density, n, Side::Plus).unwrap(),
                    log_abs_moment(&e.density, n, Side::Minus).unwrap(),
                );
                let rel = (q - cf(n)).exp_m1().abs();
                assert!(rel <= 1e-6, "{} n={n}: rel {rel:e}", e.density.label());
            }
        }
    }

    #[test]
    fn lyapunov_and_refinement() {
        let fine = LogQuadrature::default().refined();
        for e in catalog_fixtures() {
            let t = moment_table(&e.density, 30).unwrap();
            assert!(t.lyapunov_defect() <= 1e-9, "{}", e.density.label());
            let r = moment_table_with(&e.density, 30, &fine).unwrap();
            for (a, b) in t.log_mu.iter().zip(&r.log_mu) {
                assert!((a - b).abs() < 1e-8, "{}: {a} vs {b}", e.density.label());
            }
        }
    }

    #[test]
    fn entry_tables_use_closed_forms() {
        let e = catalog_density("lognormal", &[0.0, 1.0]).unwrap();
        let t = moment_table_for_entry(&e, 40).unwrap();
        assert!(t.closed_form);
        assert_eq!(t.log_mu(40), 800.0);
        let e = catalog_density("normal", &[0.0, 1.0]).unwrap();
        let t = moment_table_for_entry(&e, 8).unwrap();
        assert!((t.log_m_even[3] - 105f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        use crate::density::SupportKind;
        let heavy = TailDensity::normalized_new(SupportKind::Stieltjes, 1.0, "pareto-ish", |x: f64| {
            (4.0f64).ln() - 5.0 * (1.0 + x).ln()
        })
        .unwrap();
        assert!(log_abs_moment(&heavy, 2, Side::Plus).is_ok());
        assert!(matches!(
            log_abs_moment(&heavy, 5, Side::Plus),
            Err(MomentError::DoesNotExist { n: 5, .. })
        ));
        assert!(matches!(moment_table(&heavy, 6), Err(MomentError::DoesNotExist { n: 4, .. })));
        let raw = TailDensity::new(SupportKind::Stieltjes, 1.0, "kernel", |x: f64| -x).unwrap();
        assert!(matches!(moment_table(&raw, 4), Err(MomentError::NotNormalized(_))));
        assert!(matches!(
            moment_table(&dens("exponential", &[]), 1),
            Err(MomentError::OrderTooSmall(1))
        ));
    }
}
