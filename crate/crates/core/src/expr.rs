//! Text syntax for polynomials.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nat)?
//! base   := rational | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Rationals are written `p/q` or as integers; whitespace is ignored. The
//! printed form of a [`Poly`] (see its `Display`) is accepted by
//! [`parse_poly`] and reparses to the same value.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::polyring::{Poly, Rat, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    Parser::new(text, &['x', 'y']).parse()
}

/// Parses a polynomial in the single variable `t`.
pub fn parse_unipoly(text: &str) -> Result<UniPoly, ParseError> {
    let p = Parser::new(text, &['t']).parse()?;
    Ok(UniPoly::from_poly_in_x(&p).expect("only t was accepted"))
}

/// Parses a rational literal `p/q`, `-p/q` or an integer.
pub fn parse_rat(text: &str) -> Result<Rat, ParseError> {
    let t = text.trim();
    let err = |m: &str| ParseError {
        offset: 0,
        message: format!("{m}: {text:?}"),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err("bad numerator"))?;
    let d = BigInt::from_str(den).map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [char],
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, vars: &'a [char]) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
        }
    }

    fn parse(mut self) -> Result<Poly, ParseError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(p)
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
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

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            if op == b'+' {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| ParseError {
                offset: start,
                message: "exponent too large".to_string(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = BigInt::from_str(&self.digits()).expect("digits");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let ds = self.digits();
                    if ds.is_empty() {
                        return Err(self.error("expected denominator"));
                    }
                    let den = BigInt::from_str(&ds).expect("digits");
                    if den.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    return Ok(Poly::constant(Rat::new(num, den)));
                }
                Ok(Poly::constant(Rat::from_integer(num)))
            }
            Some(c) if self.vars.contains(&(c as char)) => {
                self.pos += 1;
                // the first accepted variable maps to x, the second to y
                if c as char == self.vars[0] {
                    Ok(Poly::x())
                } else {
                    Ok(Poly::y())
                }
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, Monomial};

    #[test]
    fn grammar_example() {
        let p = parse_poly("x^2*y - 2/3*y").unwrap();
        let expected = Poly::from_terms([(Monomial::new(2, 1), rat(1, 1)), (Monomial::new(0, 1), rat(-2, 3))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn double_operator_offset() {
        let err = parse_poly("x + + y").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn whitespace_and_parens() {
        let p = parse_poly(" ( x+y ) ^2 ").unwrap();
        assert_eq!(p, (&Poly::x() + &Poly::y()).pow(2));
    }

    #[test]
    fn leading_sign_and_nesting() {
        assert_eq!(parse_poly("-x + 1").unwrap(), &Poly::one() - &Poly::x());
        assert_eq!(parse_poly("(-(x))^2").unwrap(), Poly::x().pow(2));
        assert_eq!(parse_poly("-1/2").unwrap(), Poly::constant(rat(-1, 2)));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_poly("").unwrap_err().offset, 0);
        assert_eq!(parse_poly("x)").unwrap_err().offset, 1);
        assert_eq!(parse_poly("(x").unwrap_err().offset, 2);
        assert_eq!(parse_poly("1/0").unwrap_err().offset, 3);
        assert_eq!(parse_poly("x^").unwrap_err().offset, 2);
        assert_eq!(parse_poly("t").unwrap_err().offset, 0);
        assert!(parse_unipoly("x").is_err());
    }

    #[test]
    fn unipoly_round_trip() {
        let f = parse_unipoly("-1/2*t^2 + 3").unwrap();
        assert_eq!(f.to_string(), "-1/2*t^2 + 3");
        assert_eq!(parse_unipoly(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a").is_err());
    }
}
