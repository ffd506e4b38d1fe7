//! Parser for the canonical polynomial text form.
//!
//! Grammar: `poly := ['-'] term ( ('+'|'-') term )*` with
//! `term := coeff ('*' atom_pow)* | atom_pow ('*' atom_pow)*` and
//! `atom_pow := atom ('^' uint)?`. The renderer's output always re-parses to
//! the identical polynomial.

use num_bigint::BigInt;
use num_traits::One;
use std::str::FromStr;

use super::{Atom, MPoly, Monomial, Rat};
use crate::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.into(),
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
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected number"));
        }
        Ok(BigInt::from_str(std::str::from_utf8(&self.src[start..self.pos]).unwrap()).unwrap())
    }

    fn bracketed_id(&mut self) -> Result<String> {
        self.expect(b'[')?;
        let id = self.ident()?;
        self.expect(b']')?;
        Ok(id)
    }

    fn atom(&mut self) -> Result<Atom> {
        let name = self.ident()?;
        let atom = match name.as_str() {
            "x" => Atom::X,
            "y" => Atom::Y,
            "z" => Atom::Z,
            "q" => Atom::Q,
            "w" => Atom::W,
            "theta" => Atom::Theta,
            "alpha" => Atom::alpha(self.bracketed_id()?),
            "beta" => Atom::beta(self.bracketed_id()?),
            "qv" => Atom::vweight(self.bracketed_id()?),
            "wi" => Atom::wi(self.bracketed_id()?),
            "xi" => {
                self.expect(b'[')?;
                let n = self.uint()?;
                self.expect(b']')?;
                Atom::Xi(n)
            }
            "qs" => {
                self.expect(b'[')?;
                self.expect(b'{')?;
                let mut ids = Vec::new();
                if self.peek() != Some(b'}') {
                    loop {
                        ids.push(self.ident()?);
                        if !self.eat(b',') {
                            break;
                        }
                    }
                }
                self.expect(b'}')?;
                self.expect(b']')?;
                if ids.is_empty() {
                    return Err(self.err("qs[] requires a nonempty flag set"));
                }
                Atom::qset(ids)
            }
            "ws" => {
                self.expect(b'[')?;
                self.expect(b'(')?;
                let mut ids = Vec::new();
                if self.peek() != Some(b')') {
                    loop {
                        ids.push(self.ident()?);
                        if !self.eat(b',') {
                            break;
                        }
                    }
                }
                self.expect(b')')?;
                self.expect(b']')?;
                Atom::wset(ids)
            }
            other => return Err(self.err(format!("unknown atom `{other}`"))),
        };
        Ok(atom)
    }

    fn term(&mut self) -> Result<(Rat, Monomial)> {
        let mut coeff = Rat::one();
        let mut pairs: Vec<(Atom, u32)> = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.bigint()?;
                    let den = if self.eat(b'/') { self.bigint()? } else { BigInt::one() };
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    coeff *= Rat::new(num, den);
                }
                Some(_) => {
                    let a = self.atom()?;
                    let k = if self.eat(b'^') { self.uint()? as u32 } else { 1 };
                    pairs.push((a, k));
                }
                None => return Err(self.err("expected term")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((coeff, Monomial::from_pairs(pairs)))
    }
}

/// Parses the canonical polynomial text form.
pub fn parse_poly(src: &str) -> Result<MPoly> {
    let mut cur = Cursor::new(src);
    let mut out = MPoly::zero();
    let mut sign = if cur.eat(b'-') { -1 } else { 1 };
    loop {
        let (c, m) = cur.term()?;
        let c = if sign < 0 { -c } else { c };
        out += MPoly::term(c, m);
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                sign = 1;
            }
            Some(b'-') => {
                cur.bump();
                sign = -1;
            }
            None => break,
            Some(c) => return Err(cur.err(format!("unexpected `{}`", c as char))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Monomial};

    #[test]
    fn roundtrip_simple() {
        for src in [
            "0",
            "1",
            "-1/4",
            "x^2 + x + y",
            "1/4*theta^2 + alpha[e1]*alpha[e2]",
            "qs[{f1,f2}]*qs[{f3}] - 2*xi[3]*wi[f1] + ws[(f1,f2)]",
            "q^3 + beta[e1]*qv[u]",
        ] {
            let p = parse_poly(src).unwrap();
            assert_eq!(p.to_string(), src, "canonical form should round-trip");
        }
    }

    #[test]
    fn parse_is_inverse_of_display() {
        let p = &MPoly::term(rat(-3, 7), Monomial::from_pairs([(Atom::X, 2), (Atom::Theta, 1)]))
            + &MPoly::term(rat(5, 1), Monomial::atom(Atom::wi("f9")));
        let q = parse_poly(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("foo[e1]").is_err());
        assert!(parse_poly("qs[{}]").is_err());
        assert!(parse_poly("1/0").is_err());
    }
}
