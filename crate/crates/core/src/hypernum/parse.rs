//! Parser-evaluator for field expressions over the literals `eps` and `H`,
//! e.g. `(H+eps)^2 - H^2` or `1 + 1/H`. Used by the calculator surface.

use thiserror::Error;

use super::hyperreal::{HyperReal, HyperRealError};
use super::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier {name:?} at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error(transparent)]
    Eval(#[from] HyperRealError),
}

/// Parses and evaluates a complete expression; trailing input is an error.
pub fn parse_hyper(text: &str, order: u32) -> Result<HyperReal, HyperParseError> {
    let mut p = Parser::new(text, order);
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses one expression and returns it with the rest of the input; lets a
/// caller read two expressions separated by whitespace.
pub fn parse_hyper_prefix(text: &str, order: u32) -> Result<(HyperReal, &str), HyperParseError> {
    let mut p = Parser::new(text, order);
    let value = p.expr()?;
    Ok((value, &text[p.pos..]))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    order: u32,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, order: u32) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            order,
        }
    }

    fn syntax(&self, msg: &str) -> HyperParseError {
        HyperParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<HyperReal, HyperParseError> {
        let mut value = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                value = &value + &self.term()?;
            } else if self.eat(b'-') {
                value = &value - &self.term()?;
            } else {
                return Ok(value);
            }
        }
    }

    fn term(&mut self) -> Result<HyperReal, HyperParseError> {
        let mut value = self.factor()?;
        loop {
            if self.eat(b'*') {
                value = &value * &self.factor()?;
            } else if self.eat(b'/') {
                let rhs = self.factor()?;
                value = value.div(&rhs)?;
            } else {
                return Ok(value);
            }
        }
    }

    fn factor(&mut self) -> Result<HyperReal, HyperParseError> {
        if self.eat(b'-') {
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.integer()?;
            return Ok(base.pow_int(exp)?);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<HyperReal, HyperParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let value = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(value)
            }
            Some(b) if b.is_ascii_digit() => {
                let q = self.number()?;
                Ok(HyperReal::from_rational(q, self.order))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match name {
                    "eps" => Ok(HyperReal::eps(self.order)),
                    "H" => Ok(HyperReal::infinite_unit(self.order)),
                    _ => Err(HyperParseError::UnknownIdentifier {
                        name: name.to_string(),
                        pos: start,
                    }),
                }
            }
            _ => Err(self.syntax("expected a number, 'eps', 'H', or '('")),
        }
    }

    fn number(&mut self) -> Result<Rational, HyperParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Rational::parse(text).map_err(|e| HyperParseError::Syntax {
            pos: start,
            msg: e.to_string(),
        })
    }

    fn integer(&mut self) -> Result<i64, HyperParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| HyperParseError::Syntax {
                pos: start,
                msg: "expected an integer exponent".to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypernum::DEFAULT_ORDER;

    fn eval(text: &str) -> HyperReal {
        parse_hyper(text, DEFAULT_ORDER).unwrap()
    }

    #[test]
    fn evaluates_increment_example() {
        let v = eval("(H+eps)^2 - H^2");
        assert_eq!(v.to_string(), "2 + eps^2");
    }

    #[test]
    fn evaluates_shadow_example() {
        let v = eval("1 + 1/H");
        assert_eq!(v.st().unwrap(), Rational::one());
        assert_eq!(eval("(H+1)/H").st().unwrap(), Rational::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            parse_hyper("1/(H-H)", DEFAULT_ORDER),
            Err(HyperParseError::Eval(HyperRealError::DivisionByZero))
        ));
    }

    #[test]
    fn reports_positions() {
        match parse_hyper("1 + )", DEFAULT_ORDER) {
            Err(HyperParseError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_hyper("2*q", DEFAULT_ORDER) {
            Err(HyperParseError::UnknownIdentifier { pos, name }) => {
                assert_eq!((pos, name.as_str()), (2, "q"));
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn prefix_parse_splits_two_expressions() {
        let (first, rest) = parse_hyper_prefix("H H+eps", DEFAULT_ORDER).unwrap();
        assert_eq!(first.to_string(), "H");
        assert_eq!(rest.trim(), "H+eps");
    }
}
