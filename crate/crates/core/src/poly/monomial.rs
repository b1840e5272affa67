use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::var::{VarId, VarKind};

/// A power product, stored as `(variable, exponent)` pairs sorted by variable
/// with no zero exponents.
///
/// Monomials are ordered graded-lexicographically: total degree first, then
/// the exponent of the largest variable, then the next largest, and so on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        let mut f = SmallVec::new();
        f.push((v, 1));
        Monomial(f)
    }

    /// Builds a monomial from arbitrary factors, merging repeats and dropping
    /// zero exponents.
    pub fn from_factors(factors: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut f: SmallVec<[(VarId, u32); 4]> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        f.sort_by_key(|(v, _)| *v);
        let mut out: SmallVec<[(VarId, u32); 4]> = SmallVec::with_capacity(f.len());
        for (v, e) in f {
            match out.last_mut() {
                Some((w, ew)) if *w == v => *ew += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Degree counting only variables of the given kind.
    pub fn degree_in(&self, kind: VarKind) -> u32 {
        self.0.iter().filter(|(v, _)| v.kind() == kind).map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.binary_search_by_key(&v, |(w, _)| *w).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(VarId, u32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Exact quotient `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (v, e) in other.factors() {
            let pos = out.iter().position(|(w, _)| *w == v)?;
            if out[pos].1 < e {
                return None;
            }
            out[pos].1 -= e;
        }
        out.retain(|(_, e)| *e > 0);
        Some(Monomial(out))
    }

    /// Splits into the part in variables accepted by `keep` and the rest.
    pub fn split(&self, keep: impl Fn(VarId) -> bool) -> (Monomial, Monomial) {
        let (mut yes, mut no) = (SmallVec::new(), SmallVec::new());
        for &(v, e) in &self.0 {
            if keep(v) {
                yes.push((v, e));
            } else {
                no.push((v, e));
            }
        }
        (Monomial(yes), Monomial(no))
    }

    /// Torus weight as a vector indexed by `1..=n` (slot 0 unused).
    pub fn weight(&self, n: usize) -> Vec<i32> {
        let mut w = vec![0; n + 1];
        for &(v, e) in &self.0 {
            for (i, d) in v.weight_terms() {
                if i != 0 {
                    w[i] += d * e as i32;
                }
            }
        }
        w
    }

    pub fn internal_degree(&self) -> i32 {
        self.0.iter().map(|(v, e)| v.internal_degree() * *e as i32).sum()
    }

    pub(crate) fn write_with(
        &self,
        f: &mut impl fmt::Write,
        name: impl Fn(&VarId) -> String,
        sep: &str,
    ) -> fmt::Result {
        for (idx, (v, e)) in self.0.iter().rev().enumerate() {
            if idx > 0 {
                f.write_str(sep)?;
            }
            f.write_str(&name(v))?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.0.iter().rev();
            let mut b = other.0.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => {
                        let c = va.cmp(vb).then(ea.cmp(eb));
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        self.write_with(f, |v| v.to_string(), "*")
    }
}

#[cfg(test)]
mod tests {
    use super::super::var::{tv, xv};
    use super::*;

    #[test]
    fn graded_then_lex() {
        let x1 = Monomial::var(xv(1));
        let x2 = Monomial::var(xv(2));
        let t = Monomial::var(tv(1, 1, 1));
        assert!(x1 < x2);
        assert!(x2 < t);
        assert!(t < x1.mul(&x1));
        // x2^2 > x1 * x2 > x1^2
        assert!(x2.mul(&x2) > x1.mul(&x2));
        assert!(x1.mul(&x2) > x1.mul(&x1));
        assert!(Monomial::one() < x1);
    }

    #[test]
    fn division_and_split() {
        let m = Monomial::from_factors([(xv(1), 2), (tv(1, 2, 3), 1)]);
        assert_eq!(m.div(&Monomial::var(xv(1))), Some(Monomial::from_factors([(xv(1), 1), (tv(1, 2, 3), 1)])));
        assert_eq!(m.div(&Monomial::var(xv(2))), None);
        let (x, t) = m.split(|v| v.is_x());
        assert_eq!(x.degree(), 2);
        assert_eq!(t.degree(), 1);
        assert_eq!(m.weight(3), vec![0, 3, 1, -1]);
    }
}
