//! Exact sparse multivariate polynomials over the rationals.
//!
//! Variables come from three typed families (`x`, `t`, `s`, see [`VarId`]);
//! every [`Poly`] carries the ambient dimension `n` its variables live in and
//! mixing polynomials of different ambient dimension is an error. Terms are
//! kept in a `BTreeMap` keyed by [`Monomial`] so iteration, printing and
//! serialisation follow the global graded-lex order and are byte-stable.

mod monomial;
mod text;
mod var;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use monomial::Monomial;
pub use num_rational::BigRational as Rational;
pub use text::{parse_poly, parse_rational, render_rational, PolyStyle};
pub use var::{s_vars, sv, t_vars, tv, xv, VarId, VarKind, MAX_N};

use crate::error::{Error, Result};

/// `num / den` as an exact rational.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn qi(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Gradings understood by [`Poly::homogeneous_components`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Degree in the `t` variables.
    TDegree,
    /// Degree in the `x` variables.
    XDegree,
    /// Internal degree: every `x` and `t` has degree 1 (see
    /// [`VarId::internal_degree`]).
    Internal,
}

/// A polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    n: u8,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_N, "ambient dimension {n} too large");
        Poly { n: n as u8, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    /// The polynomial `v`. Panics if `v` is not a variable of ambient
    /// dimension `n`; use [`Poly::try_var`] for untrusted input.
    pub fn var(n: usize, v: VarId) -> Self {
        Self::try_var(n, v).expect("variable outside the ambient universe")
    }

    pub fn try_var(n: usize, v: VarId) -> Result<Self> {
        if !v.fits(n) {
            return Err(Error::IndexOutOfRange { what: v.to_string(), n });
        }
        Ok(Self::term(n, Monomial::var(v), Rational::one()))
    }

    pub fn term(n: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_universe(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::UniverseMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_universe(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_universe(other)?;
        let mut out = Poly::zero(self.n());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n());
        }
        Poly { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n());
        }
        Poly { n: self.n, terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.n());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    /// Whether every variable of `self` satisfies `pred`.
    pub fn only_vars(&self, pred: impl Fn(VarId) -> bool) -> bool {
        self.terms.keys().all(|m| m.vars().all(&pred))
    }

    /// Splits by grading; the components sum to `self` and the zero
    /// polynomial has no components.
    pub fn homogeneous_components(&self, grading: Grading) -> BTreeMap<i64, Poly> {
        let mut out: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = match grading {
                Grading::TDegree => m.degree_in(VarKind::T) as i64,
                Grading::XDegree => m.degree_in(VarKind::X) as i64,
                Grading::Internal => m.internal_degree() as i64,
            };
            out.entry(d).or_insert_with(|| Poly::zero(self.n())).terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// Splits by (total degree, torus weight). Every ideal handled by this
    /// crate is homogeneous for both, so membership decomposes along these
    /// components.
    pub fn weight_components(&self) -> BTreeMap<(u32, Vec<i32>), Poly> {
        let mut out: BTreeMap<(u32, Vec<i32>), Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = (m.degree(), m.weight(self.n()));
            out.entry(key).or_insert_with(|| Poly::zero(self.n())).terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// Groups terms by their monomial in the variables accepted by `keep`;
    /// each value is the coefficient polynomial in the remaining variables.
    pub fn coefficients_by(&self, keep: impl Fn(VarId) -> bool) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.split(&keep);
            out.entry(k).or_insert_with(|| Poly::zero(self.n())).add_term(rest, c);
        }
        out
    }

    /// Ring homomorphism fixing constants: each variable is replaced by
    /// `image(v)` when that returns `Some`, and kept otherwise.
    pub fn substitute(&self, image: impl Fn(VarId) -> Option<Poly>) -> Poly {
        let mut cache: BTreeMap<VarId, Option<Poly>> = BTreeMap::new();
        let mut out = Poly::zero(self.n());
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(self.n(), c.clone());
            let mut kept: Vec<(VarId, u32)> = Vec::new();
            for (v, e) in m.factors() {
                let img = cache.entry(v).or_insert_with(|| image(v));
                match img {
                    Some(p) => {
                        for _ in 0..e {
                            acc = &acc * &*p;
                        }
                    }
                    None => kept.push((v, e)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let km = Monomial::from_factors(kept);
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&km), &ac);
            }
        }
        out
    }

    /// Partial evaluation: assigned variables are replaced by their values,
    /// unassigned ones stay symbolic.
    pub fn eval(&self, assignment: &BTreeMap<VarId, Rational>) -> Poly {
        let mut out = Poly::zero(self.n());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept: Vec<(VarId, u32)> = Vec::new();
            for (v, e) in m.factors() {
                match assignment.get(&v) {
                    Some(val) => coeff *= num_traits::pow(val.clone(), e as usize),
                    None => kept.push((v, e)),
                }
                if coeff.is_zero() {
                    break;
                }
            }
            out.add_term(Monomial::from_factors(kept), &coeff);
        }
        out
    }

    /// Full evaluation; `None` if some variable is left unassigned.
    pub fn eval_rational(&self, assignment: &BTreeMap<VarId, Rational>) -> Option<Rational> {
        let r = self.eval(assignment);
        match r.terms.len() {
            0 => Some(Rational::zero()),
            1 if r.terms.keys().next().is_some_and(Monomial::is_one) => Some(r.constant_term()),
            _ => None,
        }
    }

    /// `(±self, flipped)` with the leading coefficient made positive. Two
    /// polynomials agree up to sign iff their normalised forms are equal.
    pub fn sign_normalized(&self) -> (Poly, bool) {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => (-self, true),
            _ => (self.clone(), false),
        }
    }

    /// Same polynomial over a different ambient dimension; fails if some
    /// variable does not fit.
    pub fn with_n(&self, n: usize) -> Result<Poly> {
        if let Some(v) = self.vars().into_iter().find(|v| !v.fits(n)) {
            return Err(Error::IndexOutOfRange { what: v.to_string(), n });
        }
        Ok(Poly { n: n as u8, terms: self.terms.clone() })
    }

    /// Rendering in the given style (see [`PolyStyle`]).
    pub fn render(&self, style: PolyStyle) -> String {
        text::render_poly(self, style)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(PolyStyle::Canonical))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$try(rhs).expect("ambient dimension mismatch")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
