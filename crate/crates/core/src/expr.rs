//! Small expression grammar for multipliers and custom weights.
//!
//! Grammar (whitespace ignored):
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' uint)?
//!   atom   := number | 'i' | var | func '(' expr ')' | '(' expr ')' | '-' atom
//!   var    := 'x' | 'x1' .. 'x9'
//!   func   := 'sign' | 'step' | 'abs' | 'cos' | 'sin'
//!
//! Covers polynomials in x_1..x_d, piecewise pieces via sign/step, and
//! complex constants. Parse errors carry the 1-based column.

use crate::error::{Error, Result};
use crate::symbols::{MultiplierSpec, WeightSpec};
use crate::{Dense, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(C64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sign,
    Step,
    Abs,
    Cos,
    Sin,
}

impl Expr {
    /// Parse an expression; `dims` bounds the variable indices allowed.
    pub fn parse(src: &str, dims: usize) -> Result<Expr> {
        let mut p = Parser {
            chars: src.char_indices().collect(),
            pos: 0,
            dims,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(k) => C64::new(x[*k], 0.0),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Pow(a, e) => a.eval(x).powu(*e),
            Expr::Neg(a) => -a.eval(x),
            Expr::Func(f, a) => {
                let v = a.eval(x);
                match f {
                    Func::Sign => C64::new(
                        if v.re > 0.0 {
                            1.0
                        } else if v.re < 0.0 {
                            -1.0
                        } else {
                            0.0
                        },
                        0.0,
                    ),
                    Func::Step => C64::new(if v.re >= 0.0 { 1.0 } else { 0.0 }, 0.0),
                    Func::Abs => C64::new(v.norm(), 0.0),
                    Func::Cos => v.cos(),
                    Func::Sin => v.sin(),
                }
            }
        }
    }

    /// True when no evaluation can produce an imaginary part.
    pub fn is_real(&self) -> bool {
        match self {
            Expr::Const(c) => c.im == 0.0,
            Expr::Var(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_real() && b.is_real(),
            Expr::Pow(a, _) | Expr::Neg(a) => a.is_real(),
            Expr::Func(Func::Cos, a) | Expr::Func(Func::Sin, a) => a.is_real(),
            Expr::Func(_, _) => true,
        }
    }
}

/// Multiplier from an expression string; block multipliers list p·q entries
/// separated by ';' in row-major order.
pub fn multiplier_from_expr(
    src: &str,
    dims: usize,
    block: Option<(usize, usize)>,
) -> Result<MultiplierSpec> {
    match block {
        None | Some((1, 1)) => {
            let expr = Expr::parse(src, dims)?;
            Ok(MultiplierSpec::scalar(src.to_string(), dims, move |x| {
                expr.eval(x)
            }))
        }
        Some((p, q)) => {
            let parts: Vec<&str> = src.split(';').collect();
            if parts.len() != p * q {
                return Err(Error::Domain(format!(
                    "block multiplier needs {} ';'-separated entries, got {}",
                    p * q,
                    parts.len()
                )));
            }
            let exprs: Result<Vec<Expr>> = parts.iter().map(|e| Expr::parse(e, dims)).collect();
            let exprs = exprs?;
            Ok(MultiplierSpec::block(src.to_string(), dims, p, q, move |x| {
                Dense::from_fn(p, q, |r, c| exprs[r * q + c].eval(x))
            }))
        }
    }
}

/// Univariate weight from its CLI spelling: `cheb1`, `cheb2`, or
/// `custom:<expression in x>`.
pub fn weight_from_spec(spec: &str) -> Result<WeightSpec> {
    match spec {
        "cheb1" => Ok(WeightSpec::chebyshev1(1)),
        "cheb2" => Ok(WeightSpec::chebyshev2(1)),
        _ => {
            if let Some(body) = spec.strip_prefix("custom:") {
                let expr = Expr::parse(body, 1)?;
                let label = format!("custom:{body}");
                Ok(WeightSpec::custom(label, move |x| expr.eval(&[x]).re))
            } else {
                Err(Error::Domain(format!(
                    "unknown weight {spec:?}; expected cheb1, cheb2 or custom:<expr>"
                )))
            }
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    dims: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        let column = self
            .chars
            .get(self.pos)
            .map(|&(byte, _)| byte + 1)
            .unwrap_or_else(|| self.chars.last().map(|&(b, _)| b + 2).unwrap_or(1));
        Error::Parse {
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected integer exponent after '^'"));
            }
            let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E')
        {
            // allow exponent signs directly after e/E
            let c = self.peek().unwrap();
            self.pos += 1;
            if (c == 'e' || c == 'E') && self.peek().is_some_and(|n| n == '+' || n == '-') {
                self.pos += 1;
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let v: f64 = text
            .parse()
            .map_err(|_| self.error("malformed number"))?;
        Ok(Expr::Const(C64::new(v, 0.0)))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        match name.as_str() {
            "i" => Ok(Expr::Const(C64::new(0.0, 1.0))),
            "pi" => Ok(Expr::Const(C64::new(std::f64::consts::PI, 0.0))),
            "x" => {
                if self.dims != 1 {
                    return Err(self.error("bare 'x' needs a univariate context; use x1..x9"));
                }
                Ok(Expr::Var(0))
            }
            _ if name.starts_with('x') && name.len() == 2 => {
                let k = name.as_bytes()[1].wrapping_sub(b'0') as usize;
                if k == 0 || k > self.dims {
                    return Err(self.error("variable index out of range"));
                }
                Ok(Expr::Var(k - 1))
            }
            "sign" | "step" | "abs" | "cos" | "sin" => {
                let f = match name.as_str() {
                    "sign" => Func::Sign,
                    "step" => Func::Step,
                    "abs" => Func::Abs,
                    "cos" => Func::Cos,
                    _ => Func::Sin,
                };
                if !self.eat('(') {
                    return Err(self.error("expected '(' after function name"));
                }
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(Expr::Func(f, Box::new(inner)))
            }
            _ => Err(self.error("unknown identifier")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polynomials() {
        let e = Expr::parse("x^2 - 0.5*x + 1", 1).unwrap();
        let v = e.eval(&[2.0]);
        assert!((v - C64::new(4.0 - 1.0 + 1.0, 0.0)).norm() < 1e-15);
        assert!(e.is_real());
    }

    #[test]
    fn parses_multivariate_and_complex() {
        let e = Expr::parse("x1*x2 + i", 2).unwrap();
        let v = e.eval(&[0.5, -2.0]);
        assert!((v - C64::new(-1.0, 1.0)).norm() < 1e-15);
        assert!(!e.is_real());
    }

    #[test]
    fn parses_piecewise_helpers() {
        let e = Expr::parse("sign(x) + 2*step(x - 0.5)", 1).unwrap();
        assert!((e.eval(&[-0.2]) - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((e.eval(&[0.7]) - C64::new(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reports_error_column() {
        match Expr::parse("x +* 2", 1) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match Expr::parse("x3", 2) {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negation_binds_looser_than_powers() {
        let e = Expr::parse("-x^2", 1).unwrap();
        assert!((e.eval(&[3.0]) - C64::new(-9.0, 0.0)).norm() < 1e-12);
        let e = Expr::parse("(-x)^2", 1).unwrap();
        assert!((e.eval(&[3.0]) - C64::new(9.0, 0.0)).norm() < 1e-12);
    }
}
