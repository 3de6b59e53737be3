//! Double-exponential quadrature of `exp(h(x))` over `[lower, inf)`, entirely
//! in log-space.
//!
//! The integral is taken in `t = ln x`, where `x^n f(x)` becomes a smooth
//! bump even for large `n`. The bump's mode is located by a coarse scan plus
//! golden-section refinement; the integral is split at the mode and each side
//! is handled by a double-exponential map (exp-sinh towards an infinite end,
//! tanh-sinh towards a finite one). Sums are accumulated after subtracting
//! the largest log-term, so integrals of size `e^800` are fine.

use std::f64::consts::{FRAC_PI_2, LN_2};

use thiserror::Error;

use crate::logspace::log_add_exp;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("integrand does not decay towards +infinity (still {slope:.3e} at ln x = {t:.2})")]
    NotDecaying { t: f64, slope: f64 },
    #[error("integrand is not integrable at 0")]
    SingularAtZero,
    #[error("integrand evaluated to NaN at x = {x:e}")]
    NonFinite { x: f64 },
    #[error("quadrature did not converge (relative change {rel_change:.3e})")]
    NotConverged { rel_change: f64 },
}

/// Result of a log-space integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    /// `ln` of the integral value; `-inf` for a vanishing integrand.
    pub ln_value: f64,
    /// Change in `ln_value` between the last two refinement levels.
    pub rel_change: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LogQuadrature {
    pub rel_tol: f64,
    /// Refinement level cap; the step at level `k` is `initial_step / 2^k`.
    pub max_level: usize,
    pub initial_step: f64,
    /// Scan range in `t = ln x` when integrating from 0.
    pub t_min: f64,
    pub t_max: f64,
    pub scan_step: f64,
    /// Terms this far (in log units) below the largest one are dropped.
    pub drop: f64,
    /// Required decay of `d/dt ln(x * integrand)` at the truncation point.
    pub decay_slope: f64,
    /// Accept a result whose last refinement changed it by at most this.
    pub accept_tol: f64,
}

impl Default for LogQuadrature {
    fn default() -> Self {
        LogQuadrature {
            rel_tol: 1e-12,
            max_level: 11,
            initial_step: 0.5,
            t_min: -60.0,
            t_max: 700.0,
            scan_step: 0.25,
            drop: 60.0,
            decay_slope: 1e-3,
            accept_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `t = origin + dir * scale * exp(pi/2 sinh u)`, `u` over the real line.
    ExpSinh { origin: f64, scale: f64, dir: f64 },
    /// `t` in `[lo, hi]` via `lo + (hi-lo)/2 * (1 + tanh(pi/2 sinh u))`.
    TanhSinh { lo: f64, hi: f64 },
}

#[inline]
fn ln_cosh(v: f64) -> f64 {
    let a = v.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

impl Piece {
    /// Node position and log-weight for the abscissa `u`.
    fn node(&self, u: f64) -> (f64, f64) {
        let v = FRAC_PI_2 * u.sinh();
        let ln_dv = FRAC_PI_2.ln() + ln_cosh(u);
        match *self {
            Piece::ExpSinh { origin, scale, dir } => {
                let t = origin + dir * scale * v.exp();
                (t, scale.ln() + v + ln_dv)
            }
            Piece::TanhSinh { lo, hi } => {
                let half = 0.5 * (hi - lo);
                let d = 2.0 / (1.0 + (-2.0 * v).exp());
                let t = if u <= 0.0 {
                    lo + half * d
                } else {
                    hi - half * (2.0 - d)
                };
                (t, half.ln() + ln_dv - 2.0 * ln_cosh(v))
            }
        }
    }
}

struct Integrand<'a> {
    h: &'a dyn Fn(f64) -> f64,
    evaluations: usize,
}

impl Integrand<'_> {
    /// `ln(x * integrand(x))` at `x = e^t`.
    fn at(&mut self, t: f64) -> Result<f64, QuadError> {
        let x = t.exp();
        if x == 0.0 || !x.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        self.evaluations += 1;
        let v = (self.h)(x);
        if v.is_nan() {
            return Err(QuadError::NonFinite { x });
        }
        Ok(v + t)
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

impl LogQuadrature {
    /// Same rule with the node budget doubled at every level.
    pub fn refined(&self) -> Self {
        LogQuadrature {
            initial_step: self.initial_step / 2.0,
            ..*self
        }
    }

    /// `ln ∫_{lower}^{∞} exp(h(x)) dx` with `lower >= 0`.
    ///
    /// `h` returns the log-integrand and may return `-inf` where the
    /// integrand vanishes.
    pub fn integrate_tail(
        &self,
        h: &dyn Fn(f64) -> f64,
        lower: f64,
    ) -> Result<LogIntegral, QuadError> {
        let mut f = Integrand { h, evaluations: 0 };
        let bounded_below = lower > 0.0;
        let t_lo = if bounded_below { lower.ln() } else { self.t_min };

        // Coarse scan for the mode.
        let mut best_t = t_lo;
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = 0usize;
        let mut idx = 0usize;
        let mut last_idx = 0usize;
        let mut last_finite = f64::NEG_INFINITY;
        let mut broke_early = false;
        loop {
            let t = t_lo + idx as f64 * self.scan_step;
            if t > self.t_max {
                break;
            }
            let v = f.at(t)?;
            if v > best {
                best = v;
                best_t = t;
                best_idx = idx;
            }
            last_idx = idx;
            if v.is_finite() {
                last_finite = v;
            }
            if best.is_finite() && v < best - 2.0 * self.drop && t - best_t > 5.0 {
                broke_early = true;
                break;
            }
            idx += 1;
        }
        if best == f64::NEG_INFINITY {
            return Ok(LogIntegral {
                ln_value: f64::NEG_INFINITY,
                rel_change: 0.0,
                evaluations: f.evaluations,
            });
        }
        if best == f64::INFINITY {
            return Err(QuadError::SingularAtZero);
        }
        if !broke_early && last_finite > best - self.drop {
            return Err(QuadError::NotDecaying {
                t: self.t_max,
                slope: f64::NAN,
            });
        }
        if best_idx == last_idx && last_idx > 0 {
            let slope = (best - f.at(best_t - self.scan_step)?) / self.scan_step;
            return Err(QuadError::NotDecaying { t: best_t, slope });
        }
        if !bounded_below && best_idx == 0 {
            let slope = (f.at(t_lo + self.scan_step)? - best) / self.scan_step;
            if slope <= 0.0 {
                return Err(QuadError::SingularAtZero);
            }
        }

        // Golden-section refinement inside the neighbouring scan cells.
        let mut a = (best_t - self.scan_step).max(t_lo);
        let mut b = best_t + self.scan_step;
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let mut fc = f.at(c)?;
        let mut fd = f.at(d)?;
        for _ in 0..60 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = f.at(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = f.at(d)?;
            }
            if (b - a).abs() < 1e-10 * (1.0 + best_t.abs()) {
                break;
            }
        }
        let (mut mode, mut h_mode) = if fc >= fd { (c, fc) } else { (d, fd) };
        if best > h_mode {
            mode = best_t;
            h_mode = best;
        }
        let at_boundary = bounded_below && mode - t_lo < 1e-9 * (1.0 + t_lo.abs());
        if at_boundary {
            mode = t_lo;
            h_mode = f.at(t_lo)?;
        }

        let scale = self.local_scale(&mut f, mode, h_mode, at_boundary)?;
        self.check_decay(&mut f, mode, h_mode, scale)?;

        let right = Piece::ExpSinh {
            origin: mode,
            scale,
            dir: 1.0,
        };
        let left = if at_boundary {
            None
        } else if bounded_below {
            Some(Piece::TanhSinh { lo: t_lo, hi: mode })
        } else {
            Some(Piece::ExpSinh {
                origin: mode,
                scale,
                dir: -1.0,
            })
        };

        let r = self.sum_piece(&mut f, right, h_mode)?;
        let (ln_value, rel_change) = match left {
            Some(p) => {
                let l = self.sum_piece(&mut f, p, h_mode)?;
                (log_add_exp(l.0, r.0), l.1.max(r.1))
            }
            None => r,
        };
        if rel_change > self.accept_tol {
            return Err(QuadError::NotConverged { rel_change });
        }
        Ok(LogIntegral {
            ln_value,
            rel_change,
            evaluations: f.evaluations,
        })
    }

    fn local_scale(
        &self,
        f: &mut Integrand<'_>,
        mode: f64,
        h_mode: f64,
        at_boundary: bool,
    ) -> Result<f64, QuadError> {
        let step = 1e-2;
        let s = if at_boundary {
            let slope = (f.at(mode + step)? - h_mode) / step;
            if slope < 0.0 && slope.is_finite() {
                1.0 / -slope
            } else {
                1.0
            }
        } else {
            let curv = (f.at(mode + step)? - 2.0 * h_mode + f.at(mode - step)?) / (step * step);
            if curv < 0.0 && curv.is_finite() {
                1.0 / (-curv).sqrt()
            } else {
                1.0
            }
        };
        Ok(s.clamp(1e-3, 20.0))
    }

    /// Walks right from the mode until the integrand has dropped by `drop`
    /// and requires a strictly negative log-slope there.
    fn check_decay(
        &self,
        f: &mut Integrand<'_>,
        mode: f64,
        h_mode: f64,
        scale: f64,
    ) -> Result<(), QuadError> {
        let mut dt = scale;
        loop {
            let t = mode + dt;
            if t > self.t_max {
                let slope = (f.at(self.t_max)? - f.at(self.t_max - 1.0)?) / 1.0;
                return Err(QuadError::NotDecaying { t: self.t_max, slope });
            }
            let v = f.at(t)?;
            if v == f64::NEG_INFINITY {
                // Overflow of the integrand's formula before it was seen to decay.
                return Err(QuadError::NotDecaying { t, slope: f64::NAN });
            }
            if v < h_mode - self.drop {
                let eps = 1e-3 * (1.0 + t.abs());
                let slope = (f.at(t + eps)? - f.at(t - eps)?) / (2.0 * eps);
                if slope <= -self.decay_slope || slope.is_nan() {
                    return Ok(());
                }
                return Err(QuadError::NotDecaying { t, slope });
            }
            dt *= 2.0;
        }
    }

    /// Trapezoid sums of one piece with level halving. Returns
    /// `(ln integral, last relative change)`.
    fn sum_piece(
        &self,
        f: &mut Integrand<'_>,
        piece: Piece,
        shift: f64,
    ) -> Result<(f64, f64), QuadError> {
        let mut acc = 0.0f64;
        let mut prev = f64::NAN;
        let mut change = f64::INFINITY;
        let mut step = self.initial_step;
        for level in 0..=self.max_level {
            let stride = if level == 0 { 1 } else { 2 };
            let first = if level == 0 { 0 } else { 1 };
            let mut level_sum = 0.0;
            for dir in [1.0f64, -1.0] {
                let mut k = if dir > 0.0 { first } else { 1 };
                let mut quiet = 0;
                let mut last = f64::INFINITY;
                loop {
                    let u = dir * k as f64 * step;
                    if u.abs() > 6.5 {
                        break;
                    }
                    let (t, ln_w) = piece.node(u);
                    let term = f.at(t)? + ln_w - shift;
                    if term > -self.drop {
                        level_sum += term.exp();
                        quiet = 0;
                    } else {
                        // Stop only while moving away from the mass.
                        quiet += 1;
                        if quiet >= 3 && term <= last {
                            break;
                        }
                    }
                    last = term;
                    k += stride;
                }
            }
            acc += level_sum;
            let est = if acc > 0.0 {
                step.ln() + acc.ln() + shift
            } else {
                f64::NEG_INFINITY
            };
            if level > 0 {
                change = if est == prev { 0.0 } else { (est - prev).abs() };
                if level >= 2 && change <= self.rel_tol {
                    return Ok((est, change));
                }
            }
            prev = est;
            step /= 2.0;
        }
        Ok((prev, change))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::ln_gamma;

    fn quad() -> LogQuadrature {
        LogQuadrature::default()
    }

    #[test]
    fn lower_limit_just_past_the_mode() {
        // mpmath: log of int_a^inf y^k log(y) phi(y) dy, a = 2.7206548170447453
        let a = 2.720_654_817_044_745_3;
        for &(k, want) in &[
            (4.0, -1.109_518_616_122_451_4),
            (5.0, 0.050_669_958_786_768_1),
            (6.0, 1.225_919_275_618_278_4),
        ] {
            let h = move |y: f64| {
                k * y.ln() + y.ln().ln() - 0.5 * y * y - 0.918_938_533_204_672_8
            };
            let r = quad().integrate_tail(&h, a).unwrap();
            assert!((r.ln_value - want).abs() < 1e-10, "k={k}: {}", r.ln_value);
        }
    }

    #[test]
    fn gamma_integrals_match_ln_gamma() {
        for &(n, k) in &[(0.0, 1.0), (5.0, 1.0), (40.0, 1.0), (3.0, 0.5), (0.0, 0.3), (30.0, 7.5)] {
            let h = move |x: f64| n * x.ln() + (k - 1.0) * x.ln() - x;
            let r = quad().integrate_tail(&h, 0.0).unwrap();
            let exact = ln_gamma(n + k);
            assert!((r.ln_value - exact).abs() < 1e-10, "n={n} k={k}: {} vs {exact}", r.ln_value);
        }
    }

    #[test]
    fn lognormal_high_order_is_representable() {
        // ∫ x^40 lognormal(0,1) dx = e^800
        let h = |x: f64| {
            let l = x.ln();
            40.0 * l - 0.5 * l * l - l - 0.5 * (2.0 * std::f64::consts::PI).ln()
        };
        let r = quad().integrate_tail(&h, 0.0).unwrap();
        assert!((r.ln_value - 800.0).abs() < 1e-9, "{}", r.ln_value);
    }

    #[test]
    fn lower_limit_above_mode_and_below_mode() {
        // ∫_a^∞ e^{-x} dx = e^{-a}
        let h = |x: f64| -x;
        let r = quad().integrate_tail(&h, 3.0).unwrap();
        assert!((r.ln_value + 3.0).abs() < 1e-11);
        // ∫_1^∞ x^4 e^{-x} dx = 65/e
        let h = |x: f64| 4.0 * x.ln() - x;
        let r = quad().integrate_tail(&h, 1.0).unwrap();
        assert!((r.ln_value - (65f64.ln() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn power_tail_without_moment_is_reported() {
        // x^5 (1+x^2)^{-3} behaves like 1/x: not integrable
        let h = |x: f64| 5.0 * x.ln() - 3.0 * (1.0 + x * x).ln();
        let err = quad().integrate_tail(&h, 0.0).unwrap_err();
        assert!(matches!(err, QuadError::NotDecaying { .. }), "{err:?}");
        // x^4 (1+x^2)^{-3} is integrable: 3π/16
        let h = |x: f64| 4.0 * x.ln() - 3.0 * (1.0 + x * x).ln();
        let r = quad().integrate_tail(&h, 0.0).unwrap();
        assert!((r.ln_value - (3.0 * std::f64::consts::PI / 16.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn vanishing_integrand_gives_neg_infinity() {
        let h = |_x: f64| f64::NEG_INFINITY;
        assert_eq!(quad().integrate_tail(&h, 0.0).unwrap().ln_value, f64::NEG_INFINITY);
    }

    #[test]
    fn refinement_is_stable() {
        let h = |x: f64| 25.0 * x.ln() - 0.5 * x * x;
        let a = quad().integrate_tail(&h, 0.0).unwrap().ln_value;
        let b = quad().refined().integrate_tail(&h, 0.0).unwrap().ln_value;
        assert!((a - b).abs() < 1e-10);
    }
}
