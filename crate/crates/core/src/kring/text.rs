//! Parser for expression text.
//!
//! Accepts the canonical rendering and a small superset of it:
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ['^' digits]
//! primary := digits | 'L' | 'SpecQ(sqrt(' int '))' | 'C(' int ',' int ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::atom::Atom;
use super::expr::KExpr;
use super::KringError;
use crate::exact::Field;

struct P<'a> {
    s: &'a [u8],
    i: usize,
    base: &'a Field,
}

fn perr(offset: usize, msg: impl Into<String>) -> KringError {
    KringError::Parse {
        offset,
        msg: msg.into(),
    }
}

impl P<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(lit.as_bytes()) {
            self.i += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), KringError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(perr(self.i, format!("expected '{lit}'")))
        }
    }

    fn digits(&mut self) -> Result<BigInt, KringError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(perr(start, "expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .unwrap())
    }

    fn small_int(&mut self) -> Result<i64, KringError> {
        let neg = self.eat("-");
        let off = self.i;
        let n: i64 = self
            .digits()?
            .try_into()
            .map_err(|_| perr(off, "integer out of range"))?;
        let v = if neg { -n } else { n };
        if v == 0 {
            return Err(perr(off, "atom data must be nonzero"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<KExpr, KringError> {
        let neg = self.eat("-");
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat("+") {
                acc = &acc + &self.term()?;
            } else if self.eat("-") {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<KExpr, KringError> {
        let mut acc = self.factor()?;
        while self.eat("*") {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<KExpr, KringError> {
        let p = self.primary()?;
        if self.eat("^") {
            let off = self.i;
            let e: u32 = self
                .digits()?
                .try_into()
                .map_err(|_| perr(off, "exponent out of range"))?;
            if e > 512 {
                return Err(perr(off, "exponent out of range"));
            }
            return Ok(p.pow(e));
        }
        Ok(p)
    }

    fn primary(&mut self) -> Result<KExpr, KringError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.digits()?;
                Ok(KExpr::one(self.base).scale(&n))
            }
            Some(b'L') => {
                self.i += 1;
                Ok(KExpr::lefschetz(self.base))
            }
            Some(b'S') => {
                self.expect("SpecQ(sqrt(")?;
                let d = self.small_int()?;
                self.expect("))")?;
                Ok(KExpr::atom(self.base, Atom::etale(d)))
            }
            Some(b'C') => {
                self.expect("C(")?;
                let a = self.small_int()?;
                self.expect(",")?;
                let b = self.small_int()?;
                self.expect(")")?;
                Ok(KExpr::atom(self.base, Atom::conic(a, b)))
            }
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(c) => Err(perr(self.i, format!("unexpected '{}'", c as char))),
            None => Err(perr(self.i, "unexpected end of input")),
        }
    }
}

/// Parses expression text over the given base field.
pub fn parse_kexpr(text: &str, base: &Field) -> Result<KExpr, KringError> {
    let mut p = P {
        s: text.as_bytes(),
        i: 0,
        base,
    };
    let e = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(perr(p.i, "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_and_loose_forms() {
        let q = Field::rational();
        let a = parse_kexpr("1 + (L - 1)*C(-1,-1)", &q).unwrap();
        assert_eq!(a.render(), "1*L*C(-1,-1) - 1*C(-1,-1) + 1");
        assert_eq!(parse_kexpr(&a.render(), &q).unwrap(), a);
        assert_eq!(parse_kexpr("L^2", &q).unwrap().render(), "1*L^2");
        assert_eq!(parse_kexpr("-1*L + 1", &q).unwrap().render(), "-1*L + 1");
        assert_eq!(
            parse_kexpr("SpecQ(sqrt(-4))", &q).unwrap().render(),
            "1*SpecQ(sqrt(-1))"
        );
    }

    #[test]
    fn rejects_garbage() {
        let q = Field::rational();
        for s in ["", "L +", "C(1)", "C(0,1)", "X", "L^", "(L"] {
            assert!(parse_kexpr(s, &q).is_err(), "{s}");
        }
    }
}
