//! Free modules over the polynomial ring with symbolic bases.
//!
//! Three families of basis symbols appear: `e[i,j]` for the generators
//! `x_i x_j` of `I`, `e[i,j]^e[k,l]` for the second syzygy module of the
//! truncated Taylor complex, and `e[i,j]v[k,l]` for the exterior square used
//! by the resolution in the derivation picture. The last two live in separate
//! namespaces and never cancel against each other.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Signed};

use crate::poly::{render_rational, xv, Monomial, Poly};

/// An unordered index pair `{i, j}`, stored with `i <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(u8, u8);

impl Pair {
    pub fn new(i: usize, j: usize) -> Self {
        if i <= j {
            Pair(i as u8, j as u8)
        } else {
            Pair(j as u8, i as u8)
        }
    }

    pub fn i(&self) -> usize {
        self.0 as usize
    }

    pub fn j(&self) -> usize {
        self.1 as usize
    }

    /// Whether the pair contains index `a`.
    pub fn has(&self, a: usize) -> bool {
        self.i() == a || self.j() == a
    }

    /// The other index when `a` is one of them.
    pub fn other(&self, a: usize) -> Option<usize> {
        if self.i() == a {
            Some(self.j())
        } else if self.j() == a {
            Some(self.i())
        } else {
            None
        }
    }

    /// The generator `x_i x_j`.
    pub fn monomial(&self) -> Monomial {
        Monomial::from_factors([(xv(self.i()), 1), (xv(self.j()), 1)])
    }

    /// The pairs `{i, j}` with `1 <= i <= j <= n`.
    pub fn all(n: usize) -> Vec<Pair> {
        (1..=n).flat_map(|i| (i..=n).map(move |j| Pair::new(i, j))).collect()
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.0, self.1)
    }
}

/// A basis symbol. Two-pair symbols are stored with the first pair smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    E(Pair),
    Wedge(Pair, Pair),
    Curly(Pair, Pair),
}

impl Basis {
    /// Canonical form of `a ∧ b`: the symbol and a sign, or `None` if it is zero.
    pub fn wedge(a: Pair, b: Pair) -> Option<(Basis, bool)> {
        ordered(a, b).map(|(x, y, flip)| (Basis::Wedge(x, y), flip))
    }

    /// Canonical form of `a ⋏ b`.
    pub fn curly(a: Pair, b: Pair) -> Option<(Basis, bool)> {
        ordered(a, b).map(|(x, y, flip)| (Basis::Curly(x, y), flip))
    }

    /// The pairs of a two-pair symbol.
    pub fn pairs(&self) -> Option<(Pair, Pair)> {
        match *self {
            Basis::E(_) => None,
            Basis::Wedge(a, b) | Basis::Curly(a, b) => Some((a, b)),
        }
    }

    /// Every `e[a]^e[b]` with `a < b`.
    pub fn all_wedges(n: usize) -> Vec<Basis> {
        two_pair_symbols(n, Basis::Wedge)
    }

    /// Every `e[a]v[b]` with `a < b`.
    pub fn all_curly(n: usize) -> Vec<Basis> {
        two_pair_symbols(n, Basis::Curly)
    }
}

fn ordered(a: Pair, b: Pair) -> Option<(Pair, Pair, bool)> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((a, b, false)),
        std::cmp::Ordering::Greater => Some((b, a, true)),
        std::cmp::Ordering::Equal => None,
    }
}

fn two_pair_symbols(n: usize, make: fn(Pair, Pair) -> Basis) -> Vec<Basis> {
    let pairs = Pair::all(n);
    let mut out = Vec::new();
    for (x, a) in pairs.iter().enumerate() {
        for b in &pairs[x + 1..] {
            out.push(make(*a, *b));
        }
    }
    out
}

/// Writes two distinct pairs sharing an index as `{i, a}` and `{i, b}`.
/// Returns `None` for disjoint pairs; `a != b` always holds.
pub fn shared_index(p: Pair, q: Pair) -> Option<(usize, usize, usize)> {
    for i in [p.i(), p.j()] {
        if let (Some(a), Some(b)) = (p.other(i), q.other(i)) {
            if a != b {
                return Some((i, a, b));
            }
        }
    }
    None
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::E(p) => write!(f, "{p}"),
            Basis::Wedge(a, b) => write!(f, "{a}^{b}"),
            Basis::Curly(a, b) => write!(f, "{a}v[{},{}]", b.i(), b.j()),
        }
    }
}

/// A finite sum `Σ coeff · basis` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModElt {
    n: usize,
    terms: BTreeMap<Basis, Poly>,
}

impl FreeModElt {
    pub fn zero(n: usize) -> Self {
        FreeModElt { n, terms: BTreeMap::new() }
    }

    pub fn basis(n: usize, b: Basis) -> Self {
        FreeModElt::term(n, b, Poly::one(n))
    }

    pub fn term(n: usize, b: Basis, c: Poly) -> Self {
        let mut out = FreeModElt::zero(n);
        out.add_term(b, &c);
        out
    }

    /// `e[i,j]`.
    pub fn e(n: usize, i: usize, j: usize) -> Self {
        FreeModElt::basis(n, Basis::E(Pair::new(i, j)))
    }

    /// `e[i,j] ∧ e[k,l]`, canonicalised; zero when the pairs agree.
    pub fn wedge(n: usize, a: Pair, b: Pair) -> Self {
        match Basis::wedge(a, b) {
            None => FreeModElt::zero(n),
            Some((s, flip)) => FreeModElt::term(n, s, if flip { -Poly::one(n) } else { Poly::one(n) }),
        }
    }

    /// `e[i,j] ⋏ e[k,l]`, canonicalised.
    pub fn curly(n: usize, a: Pair, b: Pair) -> Self {
        match Basis::curly(a, b) {
            None => FreeModElt::zero(n),
            Some((s, flip)) => FreeModElt::term(n, s, if flip { -Poly::one(n) } else { Poly::one(n) }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Poly)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &Basis) -> Poly {
        self.terms.get(b).cloned().unwrap_or_else(|| Poly::zero(self.n))
    }

    pub fn add_term(&mut self, b: Basis, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(|| Poly::zero(self.n));
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    /// Multiplies every coefficient by `p`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut out = FreeModElt::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, &(c * p));
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = FreeModElt::zero(self.n);
        for (b, c) in &self.terms {
            out.add_term(*b, &f(c));
        }
        out
    }

    /// Whether only `E` symbols occur.
    pub fn in_generator_summand(&self) -> bool {
        self.terms.keys().all(|b| matches!(b, Basis::E(_)))
    }
}

impl AddAssign<&FreeModElt> for FreeModElt {
    fn add_assign(&mut self, rhs: &FreeModElt) {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        for (b, c) in &rhs.terms {
            self.add_term(*b, c);
        }
    }
}

impl SubAssign<&FreeModElt> for FreeModElt {
    fn sub_assign(&mut self, rhs: &FreeModElt) {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        for (b, c) in &rhs.terms {
            self.add_term(*b, &-c);
        }
    }
}

impl Add for &FreeModElt {
    type Output = FreeModElt;
    fn add(self, rhs: &FreeModElt) -> FreeModElt {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &FreeModElt {
    type Output = FreeModElt;
    fn sub(self, rhs: &FreeModElt) -> FreeModElt {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &FreeModElt {
    type Output = FreeModElt;
    fn neg(self) -> FreeModElt {
        self.map_coeffs(|c| -c)
    }
}

impl fmt::Display for FreeModElt {
    /// Terms as `(c) * m * symbol`, unit coefficients and monomials omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            for (m, r) in c.terms().rev() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                if !r.is_one() {
                    let s = render_rational(r);
                    if r.is_negative() || s.contains('/') {
                        write!(f, "({s}) * ")?;
                    } else {
                        write!(f, "{s} * ")?;
                    }
                }
                if !m.is_one() {
                    write!(f, "{m} * ")?;
                }
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

/// Sum over a coefficient map, for building elements from `(symbol, coefficient)` lists.
pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Basis, Poly)>) -> FreeModElt {
    let mut out = FreeModElt::zero(n);
    for (b, c) in terms {
        out.add_term(b, &c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_and_wedge_canonicalisation() {
        let n = 3;
        assert_eq!(FreeModElt::e(n, 2, 1), FreeModElt::e(n, 1, 2));
        let a = Pair::new(1, 2);
        let b = Pair::new(1, 3);
        assert_eq!(FreeModElt::wedge(n, b, a), -&FreeModElt::wedge(n, a, b));
        assert!(FreeModElt::wedge(n, a, a).is_zero());
        assert_ne!(FreeModElt::wedge(n, a, b), FreeModElt::curly(n, a, b));
    }

    #[test]
    fn shared_indices() {
        assert_eq!(shared_index(Pair::new(1, 2), Pair::new(1, 3)), Some((1, 2, 3)));
        assert_eq!(shared_index(Pair::new(1, 1), Pair::new(1, 2)), Some((1, 1, 2)));
        assert_eq!(shared_index(Pair::new(2, 3), Pair::new(1, 3)), Some((3, 2, 1)));
        assert_eq!(shared_index(Pair::new(1, 2), Pair::new(3, 4)), None);
        assert_eq!(shared_index(Pair::new(1, 1), Pair::new(2, 2)), None);
    }

    #[test]
    fn rendering() {
        let n = 3;
        let x3 = Poly::var(n, xv(3));
        let m = &FreeModElt::term(n, Basis::E(Pair::new(1, 2)), -&x3) + &FreeModElt::e(n, 1, 3);
        assert_eq!(m.to_string(), "(-1) * x(3) * e[1,2] + e[1,3]");
        assert_eq!(FreeModElt::wedge(n, Pair::new(1, 2), Pair::new(1, 3)).to_string(), "e[1,2]^e[1,3]");
        assert_eq!(FreeModElt::curly(n, Pair::new(1, 2), Pair::new(1, 3)).to_string(), "e[1,2]v[1,3]");
        assert_eq!(Basis::all_wedges(3).len(), 15);
    }
}
