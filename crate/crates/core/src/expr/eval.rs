//! Plain and log-space evaluation.
//!
//! The log-space evaluator carries, for every node, the plain value while it
//! is a normal double and a [`SignedLog`] always. `exp(u)` takes its log
//! directly from `u`, so `exp(-x^2/2)` at `x = 40` is exactly `-800`.

use super::{Expr, ExprError};
use crate::logspace::SignedLog;

pub fn eval_plain(e: &Expr, x: f64) -> Result<f64, ExprError> {
    let v = match e {
        Expr::Const(c) => *c,
        Expr::Var => x,
        Expr::Neg(u) => -eval_plain(u, x)?,
        Expr::Add(a, b) => eval_plain(a, x)? + eval_plain(b, x)?,
        Expr::Sub(a, b) => eval_plain(a, x)? - eval_plain(b, x)?,
        Expr::Mul(a, b) => eval_plain(a, x)? * eval_plain(b, x)?,
        Expr::Div(a, b) => {
            let d = eval_plain(b, x)?;
            if d == 0.0 {
                return Err(ExprError::Domain("division by zero".into()));
            }
            eval_plain(a, x)? / d
        }
        Expr::Pow(a, b) => {
            let base = eval_plain(a, x)?;
            let ex = eval_plain(b, x)?;
            check_pow_domain(base, ex)?;
            base.powf(ex)
        }
        Expr::Exp(u) => eval_plain(u, x)?.exp(),
        Expr::Log(u) => {
            let v = eval_plain(u, x)?;
            if v <= 0.0 {
                return Err(ExprError::Domain(format!("log of non-positive value {v}")));
            }
            v.ln()
        }
        Expr::Abs(u) => eval_plain(u, x)?.abs(),
    };
    if v.is_nan() || v.is_infinite() {
        return Err(ExprError::NonFinite);
    }
    Ok(v)
}

fn check_pow_domain(base: f64, ex: f64) -> Result<(), ExprError> {
    if base < 0.0 && ex.fract() != 0.0 {
        return Err(ExprError::Domain(format!(
            "negative base {base} raised to non-integer power {ex}"
        )));
    }
    if base == 0.0 && ex < 0.0 {
        return Err(ExprError::Domain("zero raised to a negative power".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct Val {
    plain: Option<f64>,
    sl: SignedLog,
}

impl Val {
    fn exact(v: f64) -> Self {
        Val {
            plain: Some(v),
            sl: SignedLog::from_f64(v),
        }
    }

    fn from_sl(sl: SignedLog) -> Self {
        let plain = match sl.sign {
            0 => Some(0.0),
            _ if sl.ln_abs.abs() < 700.0 => Some(sl.to_f64()),
            _ => None,
        };
        Val { plain, sl }
    }

    /// Real value, possibly `0` or `±inf` outside double range.
    fn real(&self) -> f64 {
        self.plain.unwrap_or_else(|| self.sl.to_f64())
    }
}

/// Keeps a plain result only when it carries full precision.
fn keep(r: f64, exact_zero: bool) -> Option<f64> {
    if r.is_normal() || (r == 0.0 && exact_zero) {
        Some(r)
    } else {
        None
    }
}

fn combine(plain: Option<f64>, sl: SignedLog) -> Val {
    match plain {
        Some(p) => Val {
            plain: Some(p),
            sl: SignedLog::from_f64(p),
        },
        None => Val::from_sl(sl),
    }
}

fn go(e: &Expr, x: f64) -> Result<Val, ExprError> {
    let v = match e {
        Expr::Const(c) => Val::exact(*c),
        Expr::Var => Val::exact(x),
        Expr::Neg(u) => {
            let u = go(u, x)?;
            Val {
                plain: u.plain.map(|p| -p),
                sl: u.sl.neg(),
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let a = go(a, x)?;
            let mut b = go(b, x)?;
            if matches!(e, Expr::Sub(..)) {
                b = Val {
                    plain: b.plain.map(|p| -p),
                    sl: b.sl.neg(),
                };
            }
            let plain = match (a.plain, b.plain) {
                (Some(p), Some(q)) => keep(p + q, true),
                _ => None,
            };
            combine(plain, a.sl.add(b.sl))
        }
        Expr::Mul(a, b) => {
            let a = go(a, x)?;
            let b = go(b, x)?;
            let plain = match (a.plain, b.plain) {
                (Some(p), Some(q)) => keep(p * q, p == 0.0 || q == 0.0),
                _ => None,
            };
            combine(plain, a.sl.mul(b.sl))
        }
        Expr::Div(a, b) => {
            let a = go(a, x)?;
            let b = go(b, x)?;
            let sl = a
                .sl
                .div(b.sl)
                .ok_or_else(|| ExprError::Domain("division by zero".into()))?;
            let plain = match (a.plain, b.plain) {
                (Some(p), Some(q)) => keep(p / q, p == 0.0),
                _ => None,
            };
            combine(plain, sl)
        }
        Expr::Pow(a, b) => {
            let base = go(a, x)?;
            let ex = go(b, x)?.real();
            if !ex.is_finite() {
                return Err(ExprError::NonFinite);
            }
            let sl = match base.sl.sign {
                0 => {
                    if ex < 0.0 {
                        return Err(ExprError::Domain("zero raised to a negative power".into()));
                    }
                    if ex == 0.0 {
                        SignedLog::from_f64(1.0)
                    } else {
                        SignedLog::ZERO
                    }
                }
                s => {
                    if s < 0 && ex.fract() != 0.0 {
                        return Err(ExprError::Domain(format!(
                            "negative base raised to non-integer power {ex}"
                        )));
                    }
                    let odd = s < 0 && (ex % 2.0).abs() == 1.0;
                    let ln_abs = if ex == 0.0 { 0.0 } else { ex * base.sl.ln_abs };
                    SignedLog {
                        sign: if odd { -1 } else { 1 },
                        ln_abs,
                    }
                }
            };
            let plain = base.plain.and_then(|p| keep(p.powf(ex), p == 0.0));
            combine(plain, sl)
        }
        Expr::Exp(u) => {
            let u = go(u, x)?.real();
            if u.is_nan() {
                return Err(ExprError::NonFinite);
            }
            let sl = SignedLog::from_ln(u);
            Val {
                plain: keep(u.exp(), false),
                sl,
            }
        }
        Expr::Log(u) => {
            let u = go(u, x)?;
            if u.sl.sign != 1 {
                return Err(ExprError::Domain(format!(
                    "log of non-positive value {}",
                    u.real()
                )));
            }
            let l = match u.plain {
                Some(p) => p.ln(),
                None => u.sl.ln_abs,
            };
            Val::exact(l)
        }
        Expr::Abs(u) => {
            let u = go(u, x)?;
            Val {
                plain: u.plain.map(f64::abs),
                sl: SignedLog {
                    sign: u.sl.sign.abs(),
                    ln_abs: u.sl.ln_abs,
                },
            }
        }
    };
    if v.sl.ln_abs.is_nan() || v.sl.ln_abs == f64::INFINITY {
        return Err(ExprError::NonFinite);
    }
    Ok(v)
}

/// `ln` of the expression value. A zero value gives `-inf`; a negative
/// value is a domain error.
pub fn eval_log(e: &Expr, x: f64) -> Result<f64, ExprError> {
    let v = go(e, x)?;
    match v.sl.sign {
        1 => Ok(v.sl.ln_abs),
        0 => Ok(f64::NEG_INFINITY),
        _ => Err(ExprError::Domain(format!(
            "expression is negative at x = {x}"
        ))),
    }
}
