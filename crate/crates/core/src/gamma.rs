//! The quadrics `γ` and the presentations of the ideal `𝔍` they generate.
//!
//! `γ_{ijk}^ℓ = Σ_λ t_{ij}^λ t_{kλ}^ℓ − t_{ik}^λ t_{jλ}^ℓ`; the ideal `𝔍` is
//! generated by the `γ_{ijk}^ℓ` with `j, k, ℓ` distinct together with the
//! differences `γ_{ijk}^k − γ_{ijℓ}^ℓ` (`j ∉ {k, ℓ}`).

use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{qi, t_vars, tv, Monomial, Poly, PolyStyle, VarId};

/// Which ring and normalisation a presentation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// The full `t`-ring.
    Hilbert,
    /// `t_{ii}^i` set to zero.
    Miniversal,
    /// Structure constants `s_{ij}^k` of based algebras.
    BasedAlgebra,
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(Flavor::Hilbert),
            "miniversal" => Ok(Flavor::Miniversal),
            "based_algebra" | "based" => Ok(Flavor::BasedAlgebra),
            other => Err(Error::Parse { position: 0, message: format!("unknown flavor '{other}'") }),
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Flavor::Hilbert => "hilbert",
            Flavor::Miniversal => "miniversal",
            Flavor::BasedAlgebra => "based_algebra",
        })
    }
}

/// A finite generating set in a fixed order, with a label per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealPresentation {
    pub n: usize,
    pub flavor: Flavor,
    pub generators: Vec<Poly>,
    pub labels: Vec<String>,
    /// Variables of the ambient ring; multipliers in certificates use these.
    pub ring_vars: Vec<VarId>,
    /// Candidates dropped because they were zero.
    pub dropped_zero: usize,
    /// Candidates dropped as exact duplicates or negatives of earlier ones.
    pub dropped_duplicate: usize,
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    n: usize,
    flavor: Flavor,
    generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [String]>,
}

impl IdealPresentation {
    /// Builds a presentation from labelled candidates, dropping zeros and
    /// candidates equal to an earlier one up to sign.
    pub fn from_candidates(
        n: usize,
        flavor: Flavor,
        ring_vars: Vec<VarId>,
        candidates: impl IntoIterator<Item = (String, Poly)>,
    ) -> Self {
        let mut seen: HashMap<u64, Vec<usize>> = HashMap::new();
        let (mut generators, mut labels): (Vec<Poly>, Vec<String>) = (Vec::new(), Vec::new());
        let (mut dropped_zero, mut dropped_duplicate) = (0, 0);
        for (label, p) in candidates {
            if p.is_zero() {
                dropped_zero += 1;
                continue;
            }
            let normalized = p.sign_normalized().0;
            let bucket = seen.entry(fingerprint(&normalized)).or_default();
            if bucket.iter().any(|&g| generators[g].sign_normalized().0 == normalized) {
                dropped_duplicate += 1;
                continue;
            }
            bucket.push(generators.len());
            generators.push(p);
            labels.push(label);
        }
        log::debug!(
            "{flavor} presentation at n={n}: {} generators, {dropped_zero} zero and {dropped_duplicate} duplicate candidates dropped",
            generators.len()
        );
        IdealPresentation { n, flavor, generators, labels, ring_vars, dropped_zero, dropped_duplicate }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `{"n", "flavor", "generators"}` with generators in the given text style.
    pub fn to_json(&self, style: PolyStyle, with_labels: bool) -> serde_json::Value {
        let doc = PresentationJson {
            n: self.n,
            flavor: self.flavor,
            generators: self.generators.iter().map(|g| g.render(style)).collect(),
            labels: with_labels.then_some(self.labels.as_slice()),
        };
        serde_json::to_value(doc).expect("presentation serialises")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    if n > crate::poly::MAX_N {
        return Err(Error::UnsupportedDimension { n, reason: "ambient dimension above 64" });
    }
    Ok(())
}

fn fingerprint(p: &Poly) -> u64 {
    let mut h = DefaultHasher::new();
    for (m, c) in p.terms() {
        m.hash(&mut h);
        c.numer().hash(&mut h);
        c.denom().hash(&mut h);
    }
    h.finish()
}

/// `γ_{ijk}^ℓ` over ambient dimension `n`.
pub fn gamma(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<Poly> {
    if [i, j, k, l].iter().any(|&a| a == 0 || a > n) {
        return Err(Error::IndexOutOfRange { what: format!("gamma({i},{j},{k},{l})"), n });
    }
    Ok(gamma_unchecked(i, j, k, l, n))
}

pub(crate) fn gamma_unchecked(i: usize, j: usize, k: usize, l: usize, n: usize) -> Poly {
    gamma_restricted(i, j, k, l, n, &|_| true)
}

/// `γ_{ijk}^ℓ` with every `t` outside `keep` set to zero.
pub(crate) fn gamma_restricted(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    n: usize,
    keep: &(impl Fn(VarId) -> bool + ?Sized),
) -> Poly {
    let mut out = Poly::zero(n);
    for lam in 1..=n {
        for (a, b, c) in [(tv(i, j, lam), tv(k, lam, l), 1), (tv(i, k, lam), tv(j, lam, l), -1)] {
            if keep(a) && keep(b) {
                out.add_term(Monomial::from_factors([(a, 1), (b, 1)]), &qi(c));
            }
        }
    }
    out
}

/// `Σ_k γ_{ijk}^k`.
pub fn gamma_trace(i: usize, j: usize, n: usize) -> Poly {
    let mut out = Poly::zero(n);
    for k in 1..=n {
        out += &gamma_unchecked(i, j, k, k, n);
    }
    out
}

/// `γ_{ijk}^ℓ + γ_{jki}^ℓ + γ_{kij}^ℓ`, which vanishes identically.
pub fn cyclic_sum_check(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<Poly> {
    Ok(&(&gamma(i, j, k, l, n)? + &gamma(j, k, i, l, n)?) + &gamma(k, i, j, l, n)?)
}

/// Ring variables for the `t`-ring of the given flavor.
pub fn t_ring_vars(n: usize, flavor: Flavor) -> Vec<VarId> {
    let all = t_vars(n);
    match flavor {
        Flavor::Miniversal => all.into_iter().filter(|v| !is_diagonal(*v)).collect(),
        _ => all,
    }
}

/// Whether `v` is some `t_{ii}^i`.
pub fn is_diagonal(v: VarId) -> bool {
    let (a, b, c) = v.triple();
    v.is_t() && a == b && b == c
}

/// Sets every `t_{ii}^i` to zero.
pub fn drop_diagonal(p: &Poly) -> Poly {
    p.substitute(|v| is_diagonal(v).then(|| Poly::zero(p.n())))
}

/// Candidates `(label, poly)` over all `(i,j,k,ℓ)` accepted by `keep`, in
/// lexicographic index order.
fn family<T: Send>(
    n: usize,
    keep: impl Fn(usize, usize, usize, usize) -> bool + Sync,
    make: impl Fn(usize, usize, usize, usize) -> T + Sync,
) -> Vec<T> {
    (1..=n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        if keep(i, j, k, l) {
                            out.push(make(i, j, k, l));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

fn first_family(n: usize, keep: &(dyn Fn(VarId) -> bool + Sync)) -> Vec<(GeneratorLabel, Poly)> {
    family(
        n,
        |_, j, k, l| j != k && j != l && k != l,
        |i, j, k, l| (GeneratorLabel::Gamma(i, j, k, l), gamma_restricted(i, j, k, l, n, keep)),
    )
}

/// Index data of one generator of `𝔍`, rendered on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// `γ_{ijk}^ℓ`.
    Gamma(usize, usize, usize, usize),
    /// `γ_{ijk}^k − γ_{ijℓ}^ℓ` as `(i, j, k, ℓ)`.
    TraceDifference(usize, usize, usize, usize),
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorLabel::Gamma(i, j, k, l) => write!(f, "gamma({i},{j},{k},{l})"),
            GeneratorLabel::TraceDifference(i, j, k, l) => write!(f, "gamma({i},{j},{k},{k})-gamma({i},{j},{l},{l})"),
        }
    }
}

/// Generators of `𝔍` (full `t`-ring) with every `t` outside `keep` set to
/// zero, before any deduplication.
pub fn restricted_generators(n: usize, keep: &(dyn Fn(VarId) -> bool + Sync)) -> Result<Vec<(GeneratorLabel, Poly)>> {
    check_n(n)?;
    let mut cands = first_family(n, keep);
    cands.extend(family(
        n,
        |_, j, k, l| j != k && j != l && k < l,
        |i, j, k, l| {
            let p = &gamma_restricted(i, j, k, k, n, keep) - &gamma_restricted(i, j, l, l, n, keep);
            (GeneratorLabel::TraceDifference(i, j, k, l), p)
        },
    ));
    Ok(cands)
}

fn has_restricted_term(i: usize, j: usize, k: usize, l: usize, n: usize, keep: &impl Fn(VarId) -> bool) -> bool {
    (1..=n).any(|lam| (keep(tv(i, j, lam)) && keep(tv(k, lam, l))) || (keep(tv(i, k, lam)) && keep(tv(j, lam, l))))
}

/// The generators that [`restricted_generators`] would return nonzero,
/// and the total number of generators; polynomials are only built when a
/// monomial survives the restriction.
pub fn restricted_survivors(
    n: usize,
    keep: &(impl Fn(VarId) -> bool + Sync),
) -> Result<(usize, Vec<(GeneratorLabel, Poly)>)> {
    check_n(n)?;
    let nonzero = |label: GeneratorLabel, p: Poly| (!p.is_zero()).then_some((label, p));
    let first = family(
        n,
        |_, j, k, l| j != k && j != l && k != l,
        |i, j, k, l| {
            has_restricted_term(i, j, k, l, n, keep)
                .then(|| nonzero(GeneratorLabel::Gamma(i, j, k, l), gamma_restricted(i, j, k, l, n, keep)))
                .flatten()
        },
    );
    let second = family(
        n,
        |_, j, k, l| j != k && j != l && k < l,
        |i, j, k, l| {
            (has_restricted_term(i, j, k, k, n, keep) || has_restricted_term(i, j, l, l, n, keep))
                .then(|| {
                    let p = &gamma_restricted(i, j, k, k, n, keep) - &gamma_restricted(i, j, l, l, n, keep);
                    nonzero(GeneratorLabel::TraceDifference(i, j, k, l), p)
                })
                .flatten()
        },
    );
    let total = first.len() + second.len();
    Ok((total, first.into_iter().chain(second).flatten().collect()))
}

/// The generators of `𝔍` in the stated order: first every `γ_{ijk}^ℓ` with
/// `j, k, ℓ` distinct, then every `γ_{ijk}^k − γ_{ijℓ}^ℓ` with `j ∉ {k, ℓ}`.
/// The miniversal flavor applies `t_{ii}^i ↦ 0` afterwards.
pub fn ideal_generators(n: usize, flavor: Flavor) -> Result<IdealPresentation> {
    check_n(n)?;
    if flavor == Flavor::BasedAlgebra {
        return crate::based::b_ideal_generators(n);
    }
    let cands = restricted_generators(n, &|_| true)?;
    Ok(finish(n, flavor, cands.into_iter().map(|(l, p)| (l.to_string(), p)).collect()))
}

/// The second presentation: the `γ_{ijk}^ℓ` with distinct lower-right
/// indices together with `γ_{ijk}^k − γ_{jiℓ}^ℓ` for `j ≠ k`, `i ≠ ℓ`.
pub fn alternate_generators(n: usize, flavor: Flavor) -> Result<IdealPresentation> {
    check_n(n)?;
    let mut cands: Vec<(String, Poly)> =
        first_family(n, &|_| true).into_iter().map(|(l, p)| (l.to_string(), p)).collect();
    cands.extend(family(
        n,
        |i, j, k, l| j != k && i != l,
        |i, j, k, l| {
            let p = &gamma_unchecked(i, j, k, k, n) - &gamma_unchecked(j, i, l, l, n);
            (format!("gamma({i},{j},{k},{k})-gamma({j},{i},{l},{l})"), p)
        },
    ));
    Ok(finish(n, flavor, cands))
}

fn finish(n: usize, flavor: Flavor, cands: Vec<(String, Poly)>) -> IdealPresentation {
    let cands: Vec<(String, Poly)> = match flavor {
        Flavor::Miniversal => cands.into_par_iter().map(|(l, p)| (l, drop_diagonal(&p))).collect(),
        _ => cands,
    };
    IdealPresentation::from_candidates(n, flavor, t_ring_vars(n, flavor), cands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use crate::poly::Grading;

    fn t(n: usize, i: usize, j: usize, k: usize) -> Poly {
        Poly::var(n, tv(i, j, k))
    }

    #[test]
    fn gamma_with_equal_middle_indices_vanishes() {
        assert!(gamma(1, 2, 2, 3, 3).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry_example() {
        let s = &gamma(1, 2, 3, 1, 3).unwrap() + &gamma(1, 3, 2, 1, 3).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn eight_term_expansion() {
        let n = 4;
        let g = gamma(1, 2, 3, 4, n).unwrap();
        let mut expected = Poly::zero(n);
        for lam in 1..=4 {
            expected += &(&t(n, 1, 2, lam) * &t(n, 3, lam, 4));
            expected -= &(&t(n, 1, 3, lam) * &t(n, 2, lam, 4));
        }
        assert_eq!(g, expected);
        assert_eq!(g.len(), 8);
    }

    #[test]
    fn out_of_range() {
        assert!(gamma(0, 1, 2, 3, 3).is_err());
        assert!(gamma(1, 2, 3, 4, 3).is_err());
        assert!(ideal_generators(2, Flavor::Hilbert).is_err());
    }

    #[test]
    fn generators_are_quadratic_in_t() {
        let p = ideal_generators(3, Flavor::Hilbert).unwrap();
        for g in &p.generators {
            let comps = g.homogeneous_components(Grading::TDegree);
            assert_eq!(comps.keys().copied().collect::<Vec<_>>(), vec![2]);
            assert!(g.only_vars(|v| v.is_t()));
        }
        assert!(p.dropped_duplicate > 0);
    }

    #[test]
    fn miniversal_is_the_diagonal_free_image() {
        let h = ideal_generators(3, Flavor::Hilbert).unwrap();
        let m = ideal_generators(3, Flavor::Miniversal).unwrap();
        let image: BTreeSet<String> = h
            .generators
            .iter()
            .map(drop_diagonal)
            .filter(|p| !p.is_zero())
            .map(|p| p.sign_normalized().0.to_string())
            .collect();
        let got: BTreeSet<String> = m.generators.iter().map(|p| p.sign_normalized().0.to_string()).collect();
        assert_eq!(image, got);
        assert!(m.generators.iter().all(|g| g.vars().iter().all(|v| !is_diagonal(*v))));
    }

    #[test]
    fn cyclic_examples() {
        for (i, j, k, l, n) in [(1, 2, 3, 1, 3), (1, 1, 2, 3, 3), (2, 3, 4, 1, 4)] {
            assert!(cyclic_sum_check(i, j, k, l, n).unwrap().is_zero());
        }
    }

    #[test]
    fn json_shape() {
        let p = ideal_generators(3, Flavor::Hilbert).unwrap();
        let v = p.to_json(PolyStyle::Canonical, false);
        assert_eq!(v["n"], 3);
        assert_eq!(v["flavor"], "hilbert");
        assert_eq!(v["generators"].as_array().unwrap().len(), p.len());
    }
}
