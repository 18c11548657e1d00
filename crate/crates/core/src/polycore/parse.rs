//! Polynomial text grammar.
//!
//! ```text
//! expr   := '-'? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := var | rational | 'i' | '(' expr ')'
//! ```
//!
//! Printing (see `print`) is canonical under graded-lex order, so
//! `parse(print(f)) == f` byte-exactly.

use thiserror::Error;

use super::mpoly::{MPoly, VarSet};
use super::scalar::{GaussRat, Rat};
use num_bigint::BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{name}` at byte {pos}")]
    UndeclaredVariable { name: String, pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a VarSet,
}

pub fn parse_poly(text: &str, vars: &VarSet) -> Result<MPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.bump();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            if e > 4096 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(MPoly::constant(self.vars, GaussRat::from_rat(r)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident();
                if name == "i" {
                    return Ok(MPoly::constant(self.vars, GaussRat::i()));
                }
                match self.vars.index_of(&name) {
                    Some(_) => Ok(MPoly::var(self.vars, &name)),
                    None => Err(ParseError::UndeclaredVariable { name, pos: start }),
                }
            }
            _ => Err(self.err("expected variable, number, `i`, or `(`")),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn bigint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<BigInt>()
            .unwrap())
    }

    fn rational(&mut self) -> Result<Rat, ParseError> {
        let num = self.bigint()?;
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.bigint()?;
            if den == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_term_fixture() {
        let v = VarSet::new(vec!["x", "y", "p"]);
        let f = parse_poly("y^2 - y - p*(x^2 - x)", &v).unwrap();
        assert_eq!(f.num_terms(), 4); // y^2, -y, -p*x^2, p*x
        assert_eq!(f.degree_in_name("x"), 2);
        assert_eq!(f.degree_in_name("y"), 2);
        assert_eq!(f.degree_in_name("p"), 1);
    }

    #[test]
    fn zero_literal() {
        let v = VarSet::new(vec!["x"]);
        let f = parse_poly("0", &v).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn algebraic_identity_collapses() {
        let v = VarSet::new(vec!["x", "y"]);
        let f = parse_poly("(x+y)^2 - x^2 - 2*x*y", &v).unwrap();
        assert_eq!(f, parse_poly("y^2", &v).unwrap());
    }

    #[test]
    fn imaginary_unit_and_rationals() {
        let v = VarSet::new(vec!["x"]);
        let f = parse_poly("3/2*i*x + 1/4", &v).unwrap();
        assert_eq!(f.degree(), 1);
        let g = parse_poly("i^2", &v).unwrap();
        assert_eq!(g, MPoly::int(&v, -1));
    }

    #[test]
    fn error_positions() {
        let v = VarSet::new(vec!["x"]);
        match parse_poly("x + w", &v) {
            Err(ParseError::UndeclaredVariable { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("expected undeclared variable, got {other:?}"),
        }
        assert!(matches!(
            parse_poly("x + ", &v),
            Err(ParseError::Syntax { .. })
        ));
        assert!(parse_poly("1/0", &v).is_err());
    }
}
