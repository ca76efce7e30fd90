//! Recursive-descent parser for the shared polynomial expression grammar:
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := rational | ident | '(' expr ')'
//! ```
//!
//! Rational literals are `p` or `p/q`; whitespace is insignificant between
//! tokens. Errors carry the byte offset at which parsing failed. With an
//! active variable whitelist, identifiers outside the list are rejected.

use crate::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

/// Syntax or vocabulary error with the byte offset of the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                toks.push((Tok::Int(n), start));
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError::new(
                    i,
                    format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                ))
            }
        }
    }
    Ok(Lexer {
        toks,
        end: text.len(),
    })
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
    allowed: Option<&'a [String]>,
    seen_vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.offset(), format!("expected {what}")))
        }
    }

    fn note_var(&mut self, name: &str, offset: usize) -> Result<(), ParseError> {
        if let Some(allowed) = self.allowed {
            if !allowed.iter().any(|v| v == name) {
                return Err(ParseError::new(offset, format!("unknown identifier: {name}")));
            }
        }
        if !self.seen_vars.iter().any(|v| v == name) {
            self.seen_vars.push(name.to_string());
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ast::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Ast::Add(Box::new(acc), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Ast::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = Ast::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let off = self.offset();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = u32::try_from(n.clone())
                        .map_err(|_| ParseError::new(off, "exponent too large"))?;
                    Ok(Ast::Pow(Box::new(base), e))
                }
                _ => Err(ParseError::new(off, "expected exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Ast, ParseError> {
        let off = self.offset();
        match self.bump().cloned() {
            Some(Tok::Int(n)) => {
                // optional denominator
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let doff = self.offset();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(ParseError::new(doff, "zero denominator"));
                            }
                            Ok(Ast::Const(BigRational::new(n, d.clone())))
                        }
                        _ => Err(ParseError::new(doff, "expected denominator")),
                    }
                } else {
                    Ok(Ast::Const(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.note_var(&name, off)?;
                Ok(Ast::Var(name))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            _ => Err(ParseError::new(off, "expected a number, identifier, or parenthesized expression")),
        }
    }
}

enum Ast {
    Const(BigRational),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

fn lower(ast: &Ast, vars: &[&str]) -> Poly {
    match ast {
        Ast::Const(c) => Poly::constant(vars, c.clone()),
        Ast::Var(name) => Poly::var(vars, name),
        Ast::Neg(a) => lower(a, vars).neg(),
        Ast::Add(a, b) => lower(a, vars).add(&lower(b, vars)),
        Ast::Sub(a, b) => lower(a, vars).sub(&lower(b, vars)),
        Ast::Mul(a, b) => lower(a, vars).mul(&lower(b, vars)),
        Ast::Pow(a, e) => lower(a, vars).pow(*e),
    }
}

fn parse_impl(text: &str, allowed: Option<&[String]>) -> Result<Poly, ParseError> {
    let lexer = lex(text)?;
    let mut parser = Parser {
        toks: &lexer.toks,
        pos: 0,
        end: lexer.end,
        allowed,
        seen_vars: Vec::new(),
    };
    if parser.peek().is_none() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let ast = parser.expr()?;
    if parser.peek().is_some() {
        return Err(ParseError::new(parser.offset(), "unexpected trailing input"));
    }
    let vars: Vec<String> = match allowed {
        Some(list) => list.to_vec(),
        None => parser.seen_vars.clone(),
    };
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Ok(lower(&ast, &var_refs))
}

/// Parses an expression; the resulting polynomial's variables are the
/// identifiers in first-occurrence order.
pub fn parse_expression(text: &str) -> Result<Poly, ParseError> {
    parse_impl(text, None)
}

/// Parses an expression against a variable whitelist; the resulting
/// polynomial is expressed over exactly `allowed`, in that order.
pub fn parse_expression_with_vars(text: &str, allowed: &[String]) -> Result<Poly, ParseError> {
    parse_impl(text, Some(allowed))
}

impl FromStr for Poly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expression(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parses_basic_expression() {
        let p = parse_expression("x^2 + 3/2*y").unwrap();
        let vars = ["x", "y"];
        let expect = Poly::var(&vars, "x")
            .pow(2)
            .add(&Poly::var(&vars, "y").mul_scalar(&ratio(3, 2)));
        assert_eq!(p, expect);
    }

    #[test]
    fn reports_offset_of_missing_exponent() {
        let err = parse_expression("x^").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_expression("x^y").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn rejects_unknown_identifier_with_whitelist() {
        let allowed: Vec<String> = vec!["x".into(), "y".into()];
        assert!(parse_expression_with_vars("x + y", &allowed).is_ok());
        let err = parse_expression_with_vars("x + w", &allowed).unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.message.contains("unknown identifier"));
    }

    #[test]
    fn parenthesized_and_signed_forms() {
        let p = parse_expression("-(x - 2)*(x + 2)").unwrap();
        let x = Poly::var(&["x"], "x");
        let expect = x.pow(2).neg().add(&Poly::from_int(&["x"], 4));
        assert_eq!(p, expect);
        assert_eq!(parse_expression("0").unwrap(), Poly::zero(&[]));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_expression("x^2+3/2*y").unwrap();
        let b = parse_expression("  x ^ 2 + 3 / 2 * y ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_trailing_and_malformed_input() {
        assert!(parse_expression("").is_err());
        assert!(parse_expression("x y").is_err());
        assert!(parse_expression("1/0").is_err());
        assert!(parse_expression("(x + 1").is_err());
        assert!(parse_expression("x^-2").is_err());
        assert!(parse_expression("x @ y").is_err());
    }

    #[test]
    fn print_parse_round_trip_on_random_polynomials() {
        let mut rng = StdRng::seed_from_u64(2024);
        let vars = ["x", "y", "z"];
        for _ in 0..1000 {
            let mut p = Poly::zero(&vars);
            for _ in 0..rng.gen_range(0..6) {
                let m = Poly::monomial(
                    &vars,
                    &[
                        ("x", rng.gen_range(0..4)),
                        ("y", rng.gen_range(0..4)),
                        ("z", rng.gen_range(0..3)),
                    ],
                    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                );
                p = p.add(&m);
            }
            let allowed: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
            let display = p.to_string();
            let compact = p.to_compact_string();
            assert_eq!(parse_expression_with_vars(&display, &allowed).unwrap(), p);
            assert_eq!(parse_expression_with_vars(&compact, &allowed).unwrap(), p);
        }
    }
}
