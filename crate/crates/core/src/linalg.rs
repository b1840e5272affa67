//! Exact linear algebra over the rationals.
//!
//! [`SparseEchelon`] keeps an incrementally built row-echelon basis of sparse
//! vectors, optionally remembering how every basis row was obtained from the
//! inserted source vectors. That provenance is what turns a successful
//! reduction into an explicit certificate.

use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::{One, Zero};

use crate::poly::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

#[derive(Clone, Debug)]
struct PivotRow<K> {
    row: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Result of reducing a vector: `input = remainder + sum(combo[s] * source[s])`.
#[derive(Clone, Debug)]
pub struct Reduction<K> {
    pub remainder: SparseVec<K>,
    pub combo: SparseVec<usize>,
}

/// Row-echelon basis over columns ordered by `K`; the leading entry of a row
/// is its smallest key.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    pivots: BTreeMap<K, PivotRow<K>>,
    track: bool,
    sources: usize,
}

fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, a: &Rational, src: &SparseVec<K>) {
    for (k, v) in src {
        let prod = a * v;
        match dst.entry(k.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(prod);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += prod;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    /// `track` enables provenance bookkeeping (needed for certificates).
    pub fn new(track: bool) -> Self {
        SparseEchelon { pivots: BTreeMap::new(), track, sources: 0 }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of vectors inserted so far; the next insertion gets this id.
    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> Reduction<K> {
        let mut r = v.clone();
        r.retain(|_, c| !c.is_zero());
        let mut combo = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => r.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Unbounded, Bound::Unbounded)),
                    Some(k) => r.range::<K, (Bound<&K>, Bound<&K>)>((Bound::Excluded(k), Bound::Unbounded)),
                };
                range.map(|(k, _)| k).find(|k| self.pivots.contains_key(*k)).cloned()
            };
            let Some(k) = next else { break };
            let a = r[&k].clone();
            let p = &self.pivots[&k];
            axpy(&mut r, &-&a, &p.row);
            if self.track {
                axpy(&mut combo, &a, &p.combo);
            }
            cursor = Some(k);
        }
        Reduction { remainder: r, combo }
    }

    /// Inserts a source vector; returns whether it was independent of the
    /// vectors inserted before it.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let id = self.sources;
        self.sources += 1;
        let red = self.reduce(v);
        let Some((lead, lc)) = red.remainder.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lc;
        let row: SparseVec<K> = red.remainder.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let combo = if self.track {
            let mut c: SparseVec<usize> = red.combo.into_iter().map(|(k, c)| (k, -c * &inv)).collect();
            c.insert(id, inv);
            c
        } else {
            SparseVec::new()
        };
        self.pivots.insert(lead, PivotRow { row, combo });
        true
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).remainder.is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(rows: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut e = SparseEchelon::new(false);
    for r in rows {
        e.insert(&r);
    }
    e.rank()
}

/// Solves the square system `a x = b` by Gauss-Jordan elimination; `None` if
/// `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            assert_eq!(ra.len(), n, "matrix must be square");
            ra.iter().chain(rb).cloned().collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = Rational::one() / &aug[col][col];
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (dst, src) in row.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst -= &f * src;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..n + m].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qi};

    fn v(entries: &[(usize, i64)]) -> SparseVec<usize> {
        entries.iter().map(|&(k, c)| (k, qi(c))).collect()
    }

    #[test]
    fn rank_and_certificates() {
        let mut e = SparseEchelon::new(true);
        assert!(e.insert(&v(&[(0, 1), (1, 2)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        let target = v(&[(0, 2), (1, 1), (2, -3)]);
        let red = e.reduce(&target);
        assert!(red.remainder.is_empty());
        // target = 2*s0 - 3*s1
        assert_eq!(red.combo.get(&0), Some(&qi(2)));
        assert_eq!(red.combo.get(&1), Some(&qi(-3)));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn remainder_is_canonical() {
        let mut a = SparseEchelon::new(false);
        a.insert(&v(&[(0, 1), (1, 1)]));
        let mut b = SparseEchelon::new(false);
        b.insert(&v(&[(0, 3), (1, 3)]));
        let t = v(&[(0, 5), (1, 1), (2, 7)]);
        assert_eq!(a.reduce(&t).remainder, b.reduce(&t).remainder);
        assert_eq!(a.reduce(&t).remainder, v(&[(1, -4), (2, 7)]));
    }

    #[test]
    fn square_solve() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let b = vec![vec![qi(3)], vec![qi(5)]];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![vec![q(4, 5)], vec![q(7, 5)]]);
        let singular = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(solve_square(&singular, &b).is_none());
    }
}
