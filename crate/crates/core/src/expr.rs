//! A small expression language for user-defined generators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' atom)?
//! atom   := number | 'x' | 'exp' '(' expr ')' | 'ln' '(' expr ')' | '(' expr ')' | '-' atom
//! ```
//!
//! The exponent of `^` must not depend on `x`.

use std::fmt;

use crate::dual::Dual2;
use crate::error::{QamError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, c) => a.eval(x).powf(*c),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Ln(a) => a.eval(x).ln(),
            Expr::Neg(a) => -a.eval(x),
        }
    }

    /// Value, first and second derivative at `x`.
    pub fn eval_dual(&self, x: f64) -> Dual2 {
        self.dual(Dual2::variable(x))
    }

    fn dual(&self, x: Dual2) -> Dual2 {
        match self {
            Expr::Const(c) => Dual2::constant(*c),
            Expr::X => x,
            Expr::Add(a, b) => a.dual(x) + b.dual(x),
            Expr::Sub(a, b) => a.dual(x) - b.dual(x),
            Expr::Mul(a, b) => a.dual(x) * b.dual(x),
            Expr::Div(a, b) => a.dual(x) / b.dual(x),
            Expr::Pow(a, c) => a.dual(x).powf(*c),
            Expr::Exp(a) => a.dual(x).exp(),
            Expr::Ln(a) => a.dual(x).ln(),
            Expr::Neg(a) => -a.dual(x),
        }
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::X => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_x() || b.depends_on_x()
            }
            Expr::Pow(a, _) | Expr::Exp(a) | Expr::Ln(a) | Expr::Neg(a) => a.depends_on_x(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::X => write!(f, "x"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, c) => write!(f, "({a})^{c}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Neg(a) => write!(f, "-({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> QamError {
        QamError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let exponent = self.atom()?;
            if exponent.depends_on_x() {
                return Err(QamError::Parse { pos: at, msg: "exponent of '^' must be constant".into() });
            }
            let c = exponent.eval(0.0);
            if !c.is_finite() {
                return Err(QamError::Parse { pos: at, msg: "exponent is not finite".into() });
            }
            return Ok(Expr::Pow(Box::new(base), c));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match name {
                    "x" => Ok(Expr::X),
                    "exp" | "ln" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(if name == "exp" { Expr::Exp(Box::new(arg)) } else { Expr::Ln(Box::new(arg)) })
                    }
                    _ => Err(QamError::Parse { pos: start, msg: format!("unknown identifier '{name}'") }),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(QamError::Parse { pos: start, msg: "malformed number".into() });
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // `2exp(x)` is not valid anyway; treat a bare `e` as the end of the literal
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| QamError::Parse { pos: start, msg: format!("malformed number '{text}'") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = Expr::parse("1 + 2 * x ^ 2").unwrap();
        assert_eq!(e.eval(3.0), 19.0);
        let e = Expr::parse("(1 + 2) * x - 4 / 2").unwrap();
        assert_eq!(e.eval(1.0), 1.0);
        // unary minus binds to the atom, below '^'
        let e = Expr::parse("-x^2").unwrap();
        assert_eq!(e.eval(3.0), 9.0);
        let e = Expr::parse("0-x^2").unwrap();
        assert_eq!(e.eval(3.0), -9.0);
    }

    #[test]
    fn functions_and_literals() {
        let e = Expr::parse("exp(1.5e1*x) + ln(x) - .5").unwrap();
        let x = 0.2f64;
        assert!((e.eval(x) - ((15.0 * x).exp() + x.ln() - 0.5)).abs() < 1e-12);
        assert_eq!(Expr::parse("x^(1/2)").unwrap().eval(4.0), 2.0);
        assert_eq!(Expr::parse("x^-1").unwrap().eval(4.0), 0.25);
    }

    #[test]
    fn errors_carry_position() {
        match Expr::parse("x + * 2") {
            Err(QamError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Expr::parse("x^x"), Err(QamError::Parse { pos: 2, .. })));
        assert!(matches!(Expr::parse("sin(x)"), Err(QamError::Parse { pos: 0, .. })));
        assert!(matches!(Expr::parse("(x"), Err(QamError::Parse { .. })));
        assert!(matches!(Expr::parse("x)"), Err(QamError::Parse { pos: 1, .. })));
        assert!(Expr::parse("").is_err());
    }

    #[test]
    fn dual_matches_hand_derivatives() {
        let e = Expr::parse("ln(x)").unwrap();
        let d = e.eval_dual(1.5);
        assert!((d.d2 / d.d1 + 1.0 / 1.5).abs() < 1e-15);
    }
}
