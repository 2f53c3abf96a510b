//! Text syntax shared by noncommutative and commutative polynomials.
//!
//! Products are written by juxtaposition or `*`, powers with `^`, and
//! coefficients as integers or fractions (`3/2`). Identifiers that are not
//! declared variables are split greedily into declared names, so `xy` reads
//! as `x*y` when `x` and `y` are variables.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Position in a source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    loc: Location,
}

/// Parsed expression tree; variables are resolved to indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Q),
    Var(usize),
    Sum(Vec<Expr>),
    /// Ordered product; order matters for noncommutative evaluation.
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Anything an [`Expr`] can be evaluated into. `Ctx` carries whatever the
/// target needs to build constants and variables (e.g. the number of variables).
pub trait Evaluate: Sized + Clone {
    type Ctx;
    fn constant(ctx: &Self::Ctx, c: &Q) -> Self;
    fn variable(ctx: &Self::Ctx, index: usize) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn pow(&self, ctx: &Self::Ctx, exp: u32) -> Self {
        let mut acc = Self::constant(ctx, &Q::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Expr {
    pub fn eval<T: Evaluate>(&self, ctx: &T::Ctx) -> T {
        match self {
            Expr::Const(c) => T::constant(ctx, c),
            Expr::Var(i) => T::variable(ctx, *i),
            Expr::Sum(terms) => {
                let mut acc = T::constant(ctx, &Q::zero());
                for t in terms {
                    acc = acc.add(&t.eval(ctx));
                }
                acc
            }
            Expr::Product(factors) => {
                let mut acc = T::constant(ctx, &Q::one());
                for f in factors {
                    acc = acc.mul(&f.eval(ctx));
                }
                acc
            }
            Expr::Neg(e) => e.eval::<T>(ctx).neg(),
            Expr::Pow(e, k) => e.eval::<T>(ctx).pow(ctx, *k),
        }
    }
}

fn tokenize(text: &str, origin: Location) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = origin.line;
    let mut col = origin.column;
    while i < chars.len() {
        let c = chars[i];
        let loc = Location { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Num(s.parse().expect("digits")),
                loc,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(s),
                loc,
            });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{2218}' | '\u{00b7}' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse {
                    location: loc,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Token { tok, loc });
        i += 1;
        col += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    names: &'a [String],
    end: Location,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn loc(&self) -> Location {
        self.tokens.get(self.pos).map(|t| t.loc).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            location: self.loc(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negate { Expr::Neg(Box::new(t)) } else { t });
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    factors.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        // `xy^2` means x*y^2: a power binds to the last letter of a split identifier
        if let (Expr::Product(parts), Some(Tok::Caret)) = (&mut base, self.peek()) {
            let last = parts.pop().expect("split identifiers are nonempty");
            let last = self.power(last)?;
            parts.push(last);
            return Ok(base);
        }
        self.power(base)
    }

    fn power(&mut self, base: Expr) -> Result<Expr> {
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let exp: u32 = match u32::try_from(&n) {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    return Ok(Expr::Pow(Box::new(base), exp));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let loc = self.loc();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Const(Q::new(n, d)))
                        }
                        _ => self.err("expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(Expr::Const(Q::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let vars = split_identifier(&name, self.names).ok_or_else(|| Error::Parse {
                    location: loc,
                    message: format!("unknown variable '{name}'"),
                })?;
                Ok(if vars.len() == 1 {
                    Expr::Var(vars[0])
                } else {
                    Expr::Product(vars.into_iter().map(Expr::Var).collect())
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        // keep parenthesised products intact under a power
                        Ok(match e {
                            Expr::Product(_) => Expr::Sum(vec![e]),
                            other => other,
                        })
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Resolves an identifier to one or more declared variables.
fn split_identifier(ident: &str, names: &[String]) -> Option<Vec<usize>> {
    if let Some(i) = names.iter().position(|n| n == ident) {
        return Some(vec![i]);
    }
    let mut out = Vec::new();
    let mut rest = ident;
    while !rest.is_empty() {
        let (idx, len) = names
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
            .map(|(i, n)| (i, n.len()))
            .max_by_key(|&(_, len)| len)?;
        out.push(idx);
        rest = &rest[len..];
    }
    Some(out)
}

/// Parses `text` over the given variable names. `origin` is the location of
/// the first character, used to report errors relative to an enclosing file.
pub fn parse_expr_at(text: &str, names: &[String], origin: Location) -> Result<Expr> {
    let tokens = tokenize(text, origin)?;
    let end = tokens
        .last()
        .map(|t| Location {
            line: t.loc.line,
            column: t.loc.column + 1,
        })
        .unwrap_or(origin);
    let mut p = Parser {
        tokens,
        pos: 0,
        names,
        end,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_expr(text: &str, names: &[String]) -> Result<Expr> {
    parse_expr_at(text, names, Location { line: 1, column: 1 })
}

/// Writes a coefficient in front of a monomial string, handling signs and
/// unit coefficients. `first` suppresses the leading `+`.
pub(crate) fn write_term(out: &mut String, coeff: &Q, monomial: &str, first: bool) {
    let neg = coeff < &Q::zero();
    let abs = if neg { -coeff.clone() } else { coeff.clone() };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if monomial.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(monomial);
    } else {
        out.push_str(&abs.to_string());
        out.push('*');
        out.push_str(monomial);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn juxtaposition_splits_identifiers() {
        let e = parse_expr("xy", &names(&["x", "y"])).unwrap();
        assert_eq!(e, Expr::Product(vec![Expr::Var(0), Expr::Var(1)]));
    }

    #[test]
    fn longest_name_wins() {
        let e = parse_expr("x3y1", &names(&["x", "x3", "y1"])).unwrap();
        assert_eq!(e, Expr::Product(vec![Expr::Var(1), Expr::Var(2)]));
    }

    #[test]
    fn power_binds_to_last_letter() {
        let n = names(&["x", "y"]);
        let e = parse_expr("xy^2", &n).unwrap();
        assert_eq!(
            e,
            Expr::Product(vec![Expr::Var(0), Expr::Pow(Box::new(Expr::Var(1)), 2)])
        );
        let e = parse_expr("(x*y)^2", &n).unwrap();
        assert!(matches!(e, Expr::Pow(_, 2)));
    }

    #[test]
    fn rational_coefficients() {
        let e = parse_expr("3/2 x", &names(&["x"])).unwrap();
        assert_eq!(
            e,
            Expr::Product(vec![
                Expr::Const(Q::new(3.into(), 2.into())),
                Expr::Var(0)
            ])
        );
    }

    #[test]
    fn errors_carry_location() {
        let err = parse_expr("x +\n  2*z", &names(&["x"])).unwrap_err();
        match err {
            Error::Parse { location, .. } => {
                assert_eq!(location, Location { line: 2, column: 5 })
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("x^", &names(&["x"])).is_err());
        assert!(parse_expr("(x", &names(&["x"])).is_err());
        assert!(parse_expr("", &names(&["x"])).is_err());
        assert!(parse_expr("x $", &names(&["x"])).is_err());
    }
}
