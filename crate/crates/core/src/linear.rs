//! Coordinate linear subspaces `L_{A,B}` of the parameter space, the
//! maximal dimension they reach, and the smoothing component for comparison.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::{binomial, Roots};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma::restricted_survivors;
use crate::poly::{q, qi, render_rational, tv, Rational, VarId};
use crate::report::Report;

/// Disjoint `A, B ⊆ {1,…,n}`; `L_{A,B}` keeps `t_{ij}^k` only for
/// `i, j ∈ A` and `k ∈ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubspaceSpec {
    n: usize,
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
}

impl LinearSubspaceSpec {
    pub fn new(n: usize, a: impl IntoIterator<Item = usize>, b: impl IntoIterator<Item = usize>) -> Result<Self> {
        let (a, b): (BTreeSet<usize>, BTreeSet<usize>) = (a.into_iter().collect(), b.into_iter().collect());
        if let Some(&bad) = a.iter().chain(&b).find(|&&i| i == 0 || i > n) {
            return Err(Error::IndexOutOfRange { what: format!("subset element {bad}"), n });
        }
        let common: Vec<usize> = a.intersection(&b).copied().collect();
        if !common.is_empty() {
            return Err(Error::OverlappingSubsets(common));
        }
        Ok(LinearSubspaceSpec { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &BTreeSet<usize> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<usize> {
        &self.b
    }

    /// Whether the coordinate `v` is free on `L_{A,B}`.
    pub fn keeps(&self, v: VarId) -> bool {
        let (i, j, k) = v.triple();
        v.is_t() && self.a.contains(&i) && self.a.contains(&j) && self.b.contains(&k)
    }

    /// The free coordinates, in variable order, including the `t_{ii}^k`.
    pub fn free_vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for &i in &self.a {
            for &j in self.a.range(i..) {
                for &k in &self.b {
                    out.push(tv(i, j, k));
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "A": self.a, "B": self.b, "dim": subspace_dim(self) })
    }
}

/// `a(a−1)b/2`, the number of free coordinates `t_{ij}^k` with `i ≠ j`.
/// The `ab` coordinates `t_{ii}^k` are free on `L_{A,B}` as well.
pub fn subspace_dim(spec: &LinearSubspaceSpec) -> u64 {
    let (a, b) = (spec.a.len() as u64, spec.b.len() as u64);
    a * a.saturating_sub(1) * b / 2
}

/// Restricts every generator of `𝔍` to `L_{A,B}`; each must become zero.
/// Records one failure per surviving generator and a final count.
pub fn containment_check(spec: &LinearSubspaceSpec) -> Result<Report> {
    let mut rep = Report::new();
    let n = spec.n;
    let mut mask = vec![false; (n + 1).pow(3)];
    for v in spec.free_vars() {
        let (i, j, k) = v.triple();
        mask[(i * (n + 1) + j) * (n + 1) + k] = true;
    }
    let keep = |v: VarId| {
        let (i, j, k) = v.triple();
        v.is_t() && mask[(i * (n + 1) + j) * (n + 1) + k]
    };
    let (total, survivors) = restricted_survivors(n, &keep)?;
    for (label, p) in &survivors {
        rep.zero("containment", label, p, false);
    }
    rep.zero("containment", format!("{total} generators"), survivors.len(), survivors.is_empty());
    Ok(rep)
}

/// `(n+1)n`.
pub fn smoothing_dim(n: usize) -> u64 {
    let n = n as u64;
    n * n + n
}

/// `a(a−1)(n−a)/2`, the dimension of `L_{A,B}` with `|A| = a` and `B` the
/// complement.
pub fn split_dim(n: usize, a: usize) -> u64 {
    let (n, a) = (n as u64, a as u64);
    a * a.saturating_sub(1) * n.saturating_sub(a) / 2
}

/// The closed-form lower bound for the residue class of `n` mod 3.
pub fn case_formula(n: usize) -> Rational {
    let nn = qi(n as i64);
    let base = &(&q(2, 27) * &nn.pow(3)) - &(&q(1, 9) * &nn.pow(2));
    match n % 3 {
        0 => base,
        1 => base + q(1, 27),
        _ => base - &q(1, 9) * &nn + q(2, 27),
    }
}

/// The subset size `m` in the count `binomial(n, m)`.
pub fn case_m(n: usize) -> usize {
    match n % 3 {
        0 => 2 * n / 3,
        1 => (2 * n + 1) / 3,
        _ => (2 * n + 2) / 3,
    }
}

/// `(⌊a_max⌋, ⌈a_max⌉)` for `a_max = ((n+1) + √(n²−n+1))/3`, in integers.
pub fn a_max_bounds(n: usize) -> (usize, usize) {
    let d = (n * n - n + 1) as u64;
    let r = d.sqrt();
    let num = (n + 1) as u64 + r;
    if r * r == d {
        ((num / 3) as usize, num.div_ceil(3) as usize)
    } else {
        ((num / 3) as usize, (num / 3 + 1) as usize)
    }
}

/// Result of maximising `a(a−1)(n−a)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxLinear {
    pub n: usize,
    pub dim: u64,
    /// Every `a` attaining `dim`.
    pub argmax: Vec<usize>,
    pub m: usize,
    pub count_lower_bound: BigUint,
    pub formula: Rational,
    pub a_max_floor: usize,
    pub a_max_ceil: usize,
}

impl MaxLinear {
    /// The closed form is an integer equal to the maximum.
    pub fn formula_matches(&self) -> bool {
        self.formula.is_integer() && self.formula == qi(self.dim as i64)
    }

    pub fn m_attains_max(&self) -> bool {
        self.argmax.contains(&self.m)
    }

    pub fn argmax_near_a_max(&self) -> bool {
        self.argmax.iter().all(|a| *a == self.a_max_floor || *a == self.a_max_ceil)
    }

    pub fn smoothing_dim(&self) -> u64 {
        smoothing_dim(self.n)
    }

    pub fn exceeds_smoothing(&self) -> bool {
        self.dim > self.smoothing_dim()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "dim": self.dim,
            "argmax": self.argmax,
            "m": self.m,
            "count_lower_bound": self.count_lower_bound.to_string(),
            "formula": render_rational(&self.formula),
            "formula_matches": self.formula_matches(),
            "m_attains_max": self.m_attains_max(),
            "a_max_floor": self.a_max_floor,
            "a_max_ceil": self.a_max_ceil,
            "smoothing_dim": self.smoothing_dim(),
            "exceeds_smoothing": self.exceeds_smoothing(),
        })
    }
}

pub fn max_linear_dim(n: usize) -> Result<MaxLinear> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    let dim = (1..n).map(|a| split_dim(n, a)).max().unwrap_or(0);
    let argmax = (1..n).filter(|&a| split_dim(n, a) == dim).collect();
    let m = case_m(n);
    let (a_max_floor, a_max_ceil) = a_max_bounds(n);
    Ok(MaxLinear {
        n,
        dim,
        argmax,
        m,
        count_lower_bound: binomial(BigUint::from(n), BigUint::from(m)),
        formula: case_formula(n),
        a_max_floor,
        a_max_ceil,
    })
}

/// Subspaces `L_{A, A^c}` with `|A| = m`, at most `limit` of them.
pub fn optimal_specs(n: usize, limit: usize) -> Result<Vec<LinearSubspaceSpec>> {
    let m = case_m(n);
    (1..=n)
        .combinations(m)
        .take(limit)
        .map(|a| {
            let b: Vec<usize> = (1..=n).filter(|i| !a.contains(i)).collect();
            LinearSubspaceSpec::new(n, a, b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::restricted_generators;

    #[test]
    fn dims() {
        let s = LinearSubspaceSpec::new(16, 1..=11, 12..=16).unwrap();
        assert_eq!(subspace_dim(&s), 275);
        assert_eq!(s.free_vars().len(), 275 + 55);
        assert_eq!(subspace_dim(&LinearSubspaceSpec::new(3, [1, 2], [3]).unwrap()), 1);
        assert_eq!(subspace_dim(&LinearSubspaceSpec::new(5, [1], [2, 3, 4]).unwrap()), 0);
        assert!(matches!(LinearSubspaceSpec::new(3, [1, 2], [2]), Err(Error::OverlappingSubsets(v)) if v == vec![2]));
    }

    #[test]
    fn containment_examples() {
        for spec in
            [LinearSubspaceSpec::new(3, [1, 2], [3]).unwrap(), LinearSubspaceSpec::new(5, [1, 2, 3], [4, 5]).unwrap()]
        {
            assert!(containment_check(&spec).unwrap().passed());
        }
    }

    #[test]
    fn non_disjoint_support_is_not_contained() {
        // With the same index allowed in both roles the restriction fails.
        let n = 3;
        let keep = |v: VarId| {
            let (i, j, k) = v.triple();
            [1, 2].contains(&i) && [1, 2].contains(&j) && [2, 3].contains(&k)
        };
        let gens = restricted_generators(n, &keep).unwrap();
        assert!(gens.iter().any(|(_, p)| !p.is_zero()));
        let (total, survivors) = restricted_survivors(n, &keep).unwrap();
        assert_eq!(total, gens.len());
        assert_eq!(survivors.len(), gens.iter().filter(|(_, p)| !p.is_zero()).count());
    }

    #[test]
    fn corollary_values() {
        let m16 = max_linear_dim(16).unwrap();
        assert_eq!(m16.dim, 275);
        assert!(m16.exceeds_smoothing());
        assert_eq!(smoothing_dim(16), 272);
        let m3 = max_linear_dim(3).unwrap();
        assert_eq!((m3.dim, m3.m, m3.count_lower_bound.clone()), (1, 2, BigUint::from(3u32)));
        assert_eq!(max_linear_dim(4).unwrap().dim, 3);
        assert_eq!(max_linear_dim(5).unwrap().argmax, vec![3, 4]);
        assert_eq!(smoothing_dim(14), 210);
        assert!(!max_linear_dim(14).unwrap().exceeds_smoothing());
    }

    #[test]
    fn case_formulas_match_maximisation() {
        for n in 3..=200 {
            let ml = max_linear_dim(n).unwrap();
            assert!(ml.formula_matches(), "n={n}");
            assert!(ml.m_attains_max(), "n={n}");
            assert!(ml.argmax_near_a_max(), "n={n}");
        }
    }

    #[test]
    fn optimal_listing() {
        let specs = optimal_specs(5, 100).unwrap();
        assert_eq!(specs.len(), 5);
        assert!(specs.iter().all(|s| subspace_dim(s) == 6));
    }
}
