//! Canonical text form of polynomials.
//!
//! Coefficients are written `p/q` (`/1` omitted, unit coefficients omitted in
//! front of a monomial), variables `x(i)`, `t(i,j,k)`, `s(i,j,k)`, factors
//! joined by `*`, exponents `^e`, terms joined by ` + ` / ` - ` in descending
//! monomial order. The `Cas` style renames variables to `x_i`, `t_i_j_k`,
//! `s_i_j_k`. [`parse_poly`] accepts both styles.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, Poly, Rational, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PolyStyle {
    #[default]
    Canonical,
    Cas,
}

pub fn render_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn render_poly(p: &Poly, style: PolyStyle) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let name = |v: &VarId| match style {
        PolyStyle::Canonical => v.to_string(),
        PolyStyle::Cas => v.cas_name(),
    };
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        if m.is_one() {
            out.push_str(&render_rational(&abs));
            continue;
        }
        if !abs.is_one() {
            out.push_str(&render_rational(&abs));
            out.push('*');
        }
        m.write_with(&mut out, name, "*").expect("writing to a String cannot fail");
    }
    out
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn index(&mut self) -> Result<usize> {
        self.digits()?.parse().map_err(|_| self.err("index too large"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
        if self.eat(b'/') {
            let den: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn indices(&mut self, count: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(count);
        if self.eat(b'(') {
            for i in 0..count {
                if i > 0 {
                    self.expect(b',')?;
                }
                out.push(self.index()?);
            }
            self.expect(b')')?;
        } else {
            for _ in 0..count {
                self.expect(b'_')?;
                out.push(self.index()?);
            }
        }
        Ok(out)
    }

    fn var(&mut self, n: usize) -> Result<VarId> {
        let kind = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match kind {
            b'x' => {
                let i = self.indices(1)?;
                VarId::x(n, i[0])
            }
            b't' => {
                let i = self.indices(3)?;
                VarId::t(n, i[0], i[1], i[2])
            }
            b's' => {
                let i = self.indices(3)?;
                VarId::s(n, i[0], i[1], i[2])
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected a variable"))
            }
        }
    }

    fn term(&mut self, n: usize) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::one();
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                coeff *= self.rational()?;
            } else {
                let v = self.var(n)?;
                let e = if self.eat(b'^') {
                    self.digits()?.parse::<u32>().map_err(|_| self.err("bad exponent"))?
                } else {
                    1
                };
                factors.push((v, e));
            }
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial::from_factors(factors), coeff))
    }
}

/// Parses a polynomial over ambient dimension `n`.
pub fn parse_poly(n: usize, s: &str) -> Result<Poly> {
    let mut c = Cursor { s: s.as_bytes(), pos: 0 };
    let mut out = Poly::zero(n);
    c.skip_ws();
    let mut sign = if c.eat(b'-') {
        -Rational::one()
    } else {
        c.eat(b'+');
        Rational::one()
    };
    loop {
        let (m, coeff) = c.term(n)?;
        out.add_term(m, &(coeff * &sign));
        c.skip_ws();
        match c.peek() {
            None => break,
            Some(b'+') => sign = Rational::one(),
            Some(b'-') => sign = -Rational::one(),
            Some(_) => return Err(c.err("expected '+' or '-'")),
        }
        c.pos += 1;
    }
    Ok(out)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut c = Cursor { s: s.trim().as_bytes(), pos: 0 };
    let neg = c.eat(b'-');
    let r = c.rational()?;
    if c.pos != c.s.len() {
        return Err(c.err("trailing characters"));
    }
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::super::{q, qi, tv, xv};
    use super::*;

    #[test]
    fn render_examples() {
        let n = 3;
        let t = |i, j, k| Poly::var(n, tv(i, j, k));
        let x = |i| Poly::var(n, xv(i));
        let p = &t(1, 2, 1) * &t(1, 3, 1) - (&t(1, 2, 2) * &t(2, 3, 1)).scale(&q(1, 2)) + (&x(1) * &x(1)).scale(&qi(3));
        assert_eq!(p.to_string(), "-1/2*t(2,3,1)*t(1,2,2) + t(1,3,1)*t(1,2,1) + 3*x(1)^2");
        assert_eq!(p.render(PolyStyle::Cas), "-1/2*t_2_3_1*t_1_2_2 + t_1_3_1*t_1_2_1 + 3*x_1^2");
        assert_eq!(Poly::zero(n).to_string(), "0");
        assert_eq!(Poly::constant(n, q(-3, 4)).to_string(), "-3/4");
        assert_eq!((x(1) - Poly::one(n)).to_string(), "x(1) - 1");
    }

    #[test]
    fn parse_roundtrip_examples() {
        let n = 4;
        for s in ["0", "-3/4", "x(1) - 1", "-1/2*t(2,3,1)*t(1,2,2) + 3*x(1)^2", "s(0,1,1) - 1"] {
            let p = parse_poly(n, s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p = parse_poly(n, "t_2_1_3*x_1 + 2 * x(1)^2*x(1)").unwrap();
        assert_eq!(p.to_string(), "2*x(1)^3 + t(1,2,3)*x(1)");
        assert!(parse_poly(n, "x(5)").is_err());
        assert!(parse_poly(n, "x(1) +").is_err());
        assert!(parse_poly(n, "y(1)").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/2x").is_err());
        assert_eq!(render_rational(&q(4, 2)), "2");
    }
}
