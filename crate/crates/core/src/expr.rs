//! Text format for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' NAT)?
//! atom   := NAT | VAR | '(' expr ')'
//! ```
//!
//! There is no implicit multiplication: `xy` is a (probably undeclared)
//! variable name, `x*y` is a product. A leading minus applies to the whole
//! factor, so `-x^2` is `-(x^2)`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::poly::{CoeffRing, IntPolynomial, Integers, ModPolynomial, Polynomial, PrimeField};
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Int(BigInt),
    Var(usize),
    Neg(Box<ExprAst>),
    Sum(Box<ExprAst>, Box<ExprAst>),
    Difference(Box<ExprAst>, Box<ExprAst>),
    Product(Box<ExprAst>, Box<ExprAst>),
    Power(Box<ExprAst>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed exponent")]
    MalformedExponent,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected `)`")]
    UnclosedParen,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Sum(Box::new(lhs), Box::new(rhs));
                }
                Some('-') => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = ExprAst::Difference(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            let rhs = self.factor()?;
            lhs = ExprAst::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let start = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.err(start, ParseErrorKind::MalformedExponent));
            }
            let e: u32 = digits.parse().map_err(|_| self.err(start, ParseErrorKind::MalformedExponent))?;
            return Ok(ExprAst::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if pred(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => Err(self.err(start, ParseErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    let at = self.pos;
                    return Err(self.err(at, ParseErrorKind::UnclosedParen));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                Ok(ExprAst::Int(digits.parse().expect("digit string")))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(ExprAst::Var(i)),
                    None => Err(self.err(start, ParseErrorKind::UnknownVariable(name.to_string()))),
                }
            }
            Some(c) => Err(self.err(start, ParseErrorKind::UnexpectedChar(c))),
        }
    }
}

/// Parses `text` over the declared variable names.
pub fn parse_expr(text: &str, vars: &[String]) -> Result<ExprAst, ParseError> {
    let mut parser = Parser { src: text, pos: 0, vars };
    if parser.peek().is_none() {
        return Err(ParseError { offset: 0, kind: ParseErrorKind::Empty });
    }
    let ast = parser.expr()?;
    match parser.peek() {
        None => Ok(ast),
        Some(c) => Err(ParseError { offset: parser.pos, kind: ParseErrorKind::UnexpectedChar(c) }),
    }
}

impl ExprAst {
    pub fn evaluate<R: CoeffRing>(&self, ring: &R, arity: usize) -> Polynomial<R> {
        match self {
            ExprAst::Int(n) => Polynomial::constant(ring.clone(), arity, ring.from_bigint(n)),
            ExprAst::Var(i) => Polynomial::var(ring.clone(), arity, *i),
            ExprAst::Neg(a) => -a.evaluate(ring, arity),
            ExprAst::Sum(a, b) => a.evaluate(ring, arity) + b.evaluate(ring, arity),
            ExprAst::Difference(a, b) => a.evaluate(ring, arity) - b.evaluate(ring, arity),
            ExprAst::Product(a, b) => a.evaluate(ring, arity) * b.evaluate(ring, arity),
            ExprAst::Power(a, e) => a.evaluate(ring, arity).pow(*e),
        }
    }
}

pub fn parse_polynomial<R: CoeffRing>(text: &str, vars: &[String], ring: &R) -> Result<Polynomial<R>, ParseError> {
    Ok(parse_expr(text, vars)?.evaluate(ring, vars.len()))
}

pub fn parse_int(text: &str, vars: &[String]) -> Result<IntPolynomial, ParseError> {
    parse_polynomial(text, vars, &Integers)
}

pub fn parse_mod(text: &str, vars: &[String], field: PrimeField) -> Result<ModPolynomial, ParseError> {
    parse_polynomial(text, vars, &field)
}

/// Formats in ascending graded-lex order, e.g. `x + 2*y^3` or `1 + x - 3*y^2`.
pub fn format_polynomial<R: CoeffRing>(g: &Polynomial<R>, vars: &[String]) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in g.terms_ascending().enumerate() {
        let (negative, magnitude) = g.ring().signed_repr(c);
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut factors = Vec::new();
        let unit = magnitude == BigInt::from(1);
        if !unit || m.is_one() {
            factors.push(magnitude.to_string());
        }
        for (i, &e) in m.exps().iter().enumerate() {
            let name = vars.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
            match e {
                0 => {}
                1 => factors.push(name),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Formats a truncated series as `x + 3*y^2*t + (x + y)*t^2 + O(t^9)`; the
/// `O` term is omitted for exact series.
pub fn format_series(s: &TruncatedSeries, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (ell, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let t = match ell {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{ell}"),
        };
        let body = format_polynomial(c, vars);
        parts.push(match (ell, c.num_terms(), body.as_str()) {
            (0, _, _) => body,
            (_, _, "1") => t,
            (_, 1, _) if !body.starts_with('-') => format!("{body}*{t}"),
            _ => format!("({body})*{t}"),
        });
    }
    let mut out = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
    if !s.is_exact() {
        out += &format!(" + O(t^{})", s.trunc() + 1);
    }
    out
}

/// Display adapter carrying variable names.
pub struct Named<'a, R: CoeffRing>(pub &'a Polynomial<R>, pub &'a [String]);

impl<R: CoeffRing> fmt::Display for Named<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_polynomial(self.0, self.1))
    }
}

/// `["x", "y"]` style name lists from a comma separated string.
pub fn var_names(spec: &str) -> Vec<String> {
    spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn xy() -> Vec<String> {
        var_names("x,y")
    }

    #[test]
    fn parses_over_prime_fields() {
        let f3 = PrimeField::new(3).unwrap();
        let g = parse_mod("x - y^3", &xy(), f3).unwrap();
        assert_eq!(g.coefficient(&Monomial::new(vec![1, 0])), 1);
        assert_eq!(g.coefficient(&Monomial::new(vec![0, 3])), 2);
        assert_eq!(format_polynomial(&g, &xy()), "x + 2*y^3");

        let f2 = PrimeField::new(2).unwrap();
        let h = parse_mod("x*y", &xy(), f2).unwrap();
        assert_eq!(format_polynomial(&h, &xy()), "x*y");
        assert!(parse_mod("x + x", &xy(), f2).unwrap().is_zero());
    }

    #[test]
    fn formats_signed_integers() {
        let g = parse_int("x - 3*y^2 + 1", &xy()).unwrap();
        assert_eq!(format_polynomial(&g, &xy()), "1 + x - 3*y^2");
        assert_eq!(format_polynomial(&IntPolynomial::zero(Integers, 2), &xy()), "0");
        let f3 = PrimeField::new(3).unwrap();
        let g = parse_mod("-y", &xy(), f3).unwrap();
        assert_eq!(format_polynomial(&g, &xy()), "2*y");
        let g = parse_int("-y + x^2", &xy()).unwrap();
        assert_eq!(format_polynomial(&g, &xy()), "-y + x^2");
    }

    #[test]
    fn unary_minus_applies_after_power() {
        let g = parse_int("-x^2", &xy()).unwrap();
        assert_eq!(g, parse_int("-(x^2)", &xy()).unwrap());
        assert_eq!(parse_int("x - -y", &xy()).unwrap(), parse_int("x + y", &xy()).unwrap());
        assert_eq!(parse_int("(x + y)^2", &xy()).unwrap(), parse_int("x^2 + 2*x*y + y^2", &xy()).unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_int("x + xy", &xy()).unwrap_err();
        assert_eq!(e, ParseError { offset: 4, kind: ParseErrorKind::UnknownVariable("xy".into()) });
        let e = parse_int("x^", &xy()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedExponent);
        assert_eq!(e.offset, 2);
        let e = parse_int("x^-1", &xy()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedExponent);
        let e = parse_int("   ", &xy()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Empty);
        let e = parse_int("(x + y", &xy()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnclosedParen);
        let e = parse_int("x y", &xy()).unwrap_err();
        assert_eq!(e, ParseError { offset: 2, kind: ParseErrorKind::UnexpectedChar('y') });
        assert!(parse_int("x^99999999999", &xy()).is_err());
    }
}
