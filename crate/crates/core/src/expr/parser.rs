//! Recursive-descent parser.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary { "^" exponent } ;
//! exponent = "-" exponent | primary ;
//! primary  = number | "x" | func "(" expr ")" | "(" expr ")" ;
//! ```

use super::lexer::{tokenize, Spanned, Tok};
use super::{Expr, ExprError, Func};

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    if src.trim().is_empty() {
        return Err(ExprError::Parse {
            pos: 0,
            expected: "an expression".into(),
            found: "end of input".into(),
        });
    }
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        Tok::RParen => Err(p.error("end of input (unbalanced parenthesis)")),
        _ => Err(p.error("an operator or end of input")),
    }
}

struct Parser {
    toks: Vec<Spanned>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ExprError {
        ExprError::Parse {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            base = Expr::Pow(Box::new(base), Box::new(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.exponent()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                if name == "x" {
                    self.bump();
                    return Ok(Expr::Var);
                }
                let func = Func::from_name(&name).ok_or_else(|| ExprError::Parse {
                    pos,
                    expected: "`x`, a number, `exp`, `log`, `abs` or `(`".into(),
                    found: format!("identifier `{name}`"),
                })?;
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.error(&format!("`(` after `{name}`")));
                }
                self.bump();
                if *self.peek() == Tok::RParen {
                    return Err(ExprError::Arity {
                        pos,
                        func: name,
                        expected: 1,
                        found: 0,
                    });
                }
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)` (unbalanced parenthesis)"));
                }
                self.bump();
                if args.len() != 1 {
                    return Err(ExprError::Arity {
                        pos,
                        func: name,
                        expected: 1,
                        found: args.len(),
                    });
                }
                let arg = Box::new(args.pop().expect("one argument"));
                Ok(match func {
                    Func::Exp => Expr::Exp(arg),
                    Func::Log => Expr::Log(arg),
                    Func::Abs => Expr::Abs(arg),
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)` (unbalanced parenthesis)"));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.error("`x`, a number, a function or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Expr::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn gaussian_kernel_shape() {
        let e = parse("exp(-x^2/2)").unwrap();
        assert_eq!(
            e,
            Exp(b(Div(b(Neg(b(Pow(b(Var), b(Const(2.0)))))), b(Const(2.0)))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("2+3*4^2").unwrap(),
            Add(b(Const(2.0)), b(Mul(b(Const(3.0)), b(Pow(b(Const(4.0)), b(Const(2.0)))))))
        );
        assert_eq!(
            parse("1-2-3").unwrap(),
            Sub(b(Sub(b(Const(1.0)), b(Const(2.0)))), b(Const(3.0)))
        );
        assert_eq!(
            parse("2^3^2").unwrap(),
            Pow(b(Pow(b(Const(2.0)), b(Const(3.0)))), b(Const(2.0)))
        );
        assert_eq!(parse("-x^2").unwrap(), Neg(b(Pow(b(Var), b(Const(2.0))))));
        assert_eq!(parse("x^-2").unwrap(), Pow(b(Var), b(Neg(b(Const(2.0))))));
        assert_eq!(
            parse("-x*2").unwrap(),
            Mul(b(Neg(b(Var))), b(Const(2.0)))
        );
    }

    #[test]
    fn lognormal_kernel_parses() {
        let e = parse("exp(-(log(x))^2/2)/x").unwrap();
        assert!(matches!(e, Div(_, _)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("exp(-x"), Err(ExprError::Parse { pos: 6, .. })));
        assert!(matches!(parse("(x"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("x)"), Err(ExprError::Parse { pos: 1, .. })));
        assert!(matches!(parse(""), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("x +"), Err(ExprError::Parse { pos: 3, .. })));
        assert!(matches!(parse("sin(x)"), Err(ExprError::Parse { pos: 0, .. })));
        assert!(matches!(parse("y"), Err(ExprError::Parse { .. })));
        assert!(matches!(
            parse("exp(x, 2)"),
            Err(ExprError::Arity { expected: 1, found: 2, .. })
        ));
        assert!(matches!(parse("log()"), Err(ExprError::Arity { found: 0, .. })));
        assert!(matches!(parse("x 2"), Err(ExprError::Parse { pos: 2, .. })));
    }
}
