//! A small expression language for user-supplied density kernels in `x`.
//!
//! The grammar is documented in `docs/density-expr.md`.

mod eval;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::density::{DensityError, SupportKind, TailDensity};

pub use eval::{eval_log, eval_plain};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("lexing error at position {pos}: {msg}")]
    Lex { pos: usize, msg: String },
    #[error("parse error at position {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("arity error at position {pos}: `{func}` takes {expected} argument(s), got {found}")]
    Arity {
        pos: usize,
        func: String,
        expected: usize,
        found: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite intermediate value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Abs,
}

impl Func {
    pub fn from_name(s: &str) -> Option<Func> {
        match s {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Abs(Box<Expr>),
}

pub fn parse_density_expr(src: &str) -> Result<Expr, ExprError> {
    parser::parse(src)
}

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => P_ADD,
            Expr::Mul(..) | Expr::Div(..) => P_MUL,
            Expr::Neg(..) => P_NEG,
            Expr::Pow(..) => P_POW,
            Expr::Const(c) if c.is_sign_negative() => P_NEG,
            _ => P_ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Const(c) => write_number(f, *c),
            Expr::Var => f.write_str("x"),
            Expr::Neg(u) => {
                f.write_str("-")?;
                u.write_at(f, P_NEG)
            }
            Expr::Add(a, b) => {
                a.write_at(f, P_ADD)?;
                f.write_str(" + ")?;
                b.write_at(f, P_MUL)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, P_ADD)?;
                f.write_str(" - ")?;
                b.write_at(f, P_MUL)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, P_MUL)?;
                f.write_str(" * ")?;
                b.write_at(f, P_NEG)
            }
            Expr::Div(a, b) => {
                a.write_at(f, P_MUL)?;
                f.write_str(" / ")?;
                b.write_at(f, P_NEG)
            }
            Expr::Pow(a, b) => {
                a.write_at(f, P_POW)?;
                f.write_str("^")?;
                write_exponent(f, b)
            }
            Expr::Exp(u) => write_call(f, "exp", u),
            Expr::Log(u) => write_call(f, "log", u),
            Expr::Abs(u) => write_call(f, "abs", u),
        }
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Neg(u) => {
            f.write_str("-")?;
            write_exponent(f, u)
        }
        _ => e.write_at(f, P_ATOM),
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, u: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    u.write_at(f, 0)?;
    f.write_str(")")
}

fn write_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        write!(f, "{}", c as i64)
    } else {
        write!(f, "{c:?}")
    }
}

/// Canonical form: minimal parentheses, spaces around `+ - * /`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Error)]
pub enum ExprDensityError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// Builds a density whose log-kernel is `eval_log(src)`. Evaluation errors
/// become `NaN`, which construction and quadrature report.
pub fn expr_density(
    src: &str,
    support: SupportKind,
    x0: f64,
) -> Result<TailDensity, ExprDensityError> {
    let ast = parse_density_expr(src)?;
    let label = ast.to_string();
    let d = TailDensity::new(support, x0, label, move |x| {
        eval_log(&ast, x).unwrap_or(f64::NAN)
    })?;
    Ok(d)
}
