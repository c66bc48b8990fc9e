//! Text syntax for field elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' digits]
//! atom   := digits ['/' digits] | 'z' | 'w' | '(' expr ')'
//! ```
//!
//! `z` is the absolute generator and `w` the relative one.

use num_bigint::BigInt;

use super::field::{Field, FieldElem};
use super::rat::Rat;
use super::ExactError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Z,
    W,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(offset: usize, msg: impl Into<String>) -> ExactError {
    ExactError::Syntax {
        offset,
        msg: msg.into(),
    }
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExactError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = s[start..i].parse().unwrap();
                let mut den = BigInt::from(1);
                if i < b.len() && b[i] == b'/' {
                    i += 1;
                    let ds = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ds == i {
                        return Err(err(ds, "expected digits after '/'"));
                    }
                    den = s[ds..i].parse().unwrap();
                    if den == BigInt::from(0) {
                        return Err(err(ds, "zero denominator"));
                    }
                }
                out.push((start, Tok::Num(Rat::new(num, den))));
                continue;
            }
            b'z' => out.push((i, Tok::Z)),
            b'w' => out.push((i, Tok::W)),
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'*' => out.push((i, Tok::Star)),
            b'^' => out.push((i, Tok::Caret)),
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            _ => {
                let ch = s[i..].chars().next().unwrap();
                return Err(err(i, format!("unexpected character '{ch}'")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expr(&mut self) -> Result<FieldElem, ExactError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem, ExactError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElem, ExactError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let off = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e: i64 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| err(off, "exponent too large"))?;
                    if e > 4096 {
                        return Err(err(off, "exponent too large"));
                    }
                    return Ok(base.pow(e));
                }
                _ => return Err(err(off, "expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElem, ExactError> {
        let off = self.offset();
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(r)) => Ok(self.field.from_rat(r)),
            Some(Tok::Z) => {
                if self.field.is_rational() && self.field.base().is_none() {
                    Err(err(off, format!("'z' is not defined over {}", self.field)))
                } else {
                    Ok(self.field.generator())
                }
            }
            Some(Tok::W) => self
                .field
                .relative_generator()
                .ok_or_else(|| err(off, format!("'w' is not defined over {}", self.field))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(err(off, format!("unexpected token {t:?}"))),
            None => Err(err(off, "unexpected end of input")),
        }
    }
}

/// Parses a field element written in the generator symbols of `field`.
pub fn parse_elem(s: &str, field: &Field) -> Result<FieldElem, ExactError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(err(0, "empty element"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: s.len(),
        field,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.offset(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat;

    #[test]
    fn parses_and_renders_back() {
        let k = Field::cyclotomic(4).unwrap();
        for s in ["0", "1/2 + 3*z", "-z", "-1/3 - 2*z", "z"] {
            assert_eq!(parse_elem(s, &k).unwrap().render(), s);
        }
        assert_eq!(parse_elem("z^2", &k).unwrap(), k.from_int(-1));
        assert_eq!(parse_elem("(1+z)*(1-z)", &k).unwrap(), k.from_int(2));
    }

    #[test]
    fn rejects_malformed() {
        let q = Field::rational();
        assert!(parse_elem("1/+2", &q).is_err());
        assert!(parse_elem("z", &q).is_err());
        assert!(parse_elem("1 +", &q).is_err());
        assert!(parse_elem("", &q).is_err());
        assert!(parse_elem("1/0", &q).is_err());
        assert_eq!(parse_elem("-7/14", &q).unwrap(), q.from_rat(rat(-1) / rat(2)));
    }

    #[test]
    fn relative_generator() {
        let base = Field::cyclotomic(3).unwrap();
        let k = Field::relative_quadratic(&base, rat(0), rat(1)).unwrap();
        let x = parse_elem("z*w + 1", &k).unwrap();
        assert_eq!(x.render(), "1 + z*w");
        assert_eq!(parse_elem(&x.render(), &k).unwrap(), x);
    }
}
