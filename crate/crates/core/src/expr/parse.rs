//! Recursive-descent parser for scalar expressions.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = factor { ("*" | "/") factor } ;
//! factor  = "-" factor | power ;
//! power   = atom [ "^" natural ] ;
//! atom    = natural | variable | "(" expr ")" ;
//! natural = digit { digit } ;
//! ```
//!
//! Rational literals are spelled with the division operator (`3/4`), so the
//! parser evaluates directly into a canonical [`ScalarExpr`]. Division by a
//! (sub)expression that simplifies to zero is reported with the position of
//! the `/`.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;

use thiserror::Error;

use super::chart::Chart;
use super::scalar::ScalarExpr;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("division by zero at byte {pos}")]
    DivisionByZero { pos: usize },
    #[error("exponent at byte {pos} does not fit in 32 bits")]
    ExponentOverflow { pos: usize },
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    chart: &'a Chart,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax<T>(&self, msg: impl fmt::Display) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    let op_pos = self.pos;
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| ParseError::DivisionByZero { pos: op_pos })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp_pos = self.pos;
            let digits = self.take_digits();
            if digits.is_empty() {
                return self.syntax("expected a nonnegative integer exponent");
            }
            let exp: u32 = digits
                .parse()
                .map_err(|_| ParseError::ExponentOverflow { pos: exp_pos })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn take_digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].to_owned()
    }

    fn atom(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_digits();
                let n = BigInt::from_str(&digits).expect("digits parse as integer");
                Ok(ScalarExpr::constant(self.chart, BigRational::from(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric()
                        || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match ScalarExpr::var(self.chart, name) {
                    Some(v) => Ok(v),
                    None => Err(ParseError::UnknownVariable {
                        pos: start,
                        name: name.to_owned(),
                    }),
                }
            }
            Some(c) => self.syntax(format!("unexpected character `{}`", c as char)),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Parse a source string into a canonical expression on the chart.
pub fn parse(src: &str, chart: &Chart) -> Result<ScalarExpr, ParseError> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
        chart,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.syntax("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new("M", &["u", "q", "p"]).unwrap()
    }

    #[test]
    fn literals_and_precedence() {
        let c = chart();
        // 1/2*u is (1/2)*u, not 1/(2u).
        let half_u = parse("1/2*u", &c).unwrap();
        let alt = parse("u/2", &c).unwrap();
        assert_eq!(half_u, alt);
        // Unary minus binds below ^.
        assert_eq!(parse("-u^2", &c).unwrap(), parse("-(u^2)", &c).unwrap());
    }

    #[test]
    fn position_annotated_errors() {
        let c = chart();
        match parse("1 + (u", &c).unwrap_err() {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, 6),
            e => panic!("unexpected {e:?}"),
        }
        match parse("u + w", &c).unwrap_err() {
            ParseError::UnknownVariable { pos, name } => {
                assert_eq!((pos, name.as_str()), (4, "w"));
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse("1/0", &c).unwrap_err() {
            ParseError::DivisionByZero { pos } => assert_eq!(pos, 1),
            e => panic!("unexpected {e:?}"),
        }
        // An expression that simplifies to zero is also caught.
        assert!(matches!(
            parse("1/(u - u)", &c).unwrap_err(),
            ParseError::DivisionByZero { .. }
        ));
    }

    #[test]
    fn rejects_negative_exponents_and_trailing_input() {
        let c = chart();
        assert!(matches!(
            parse("u^-1", &c).unwrap_err(),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            parse("u 1", &c).unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }
}
