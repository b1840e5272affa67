//! Linear spans of polynomials and homogeneous ideal membership.
//!
//! Every ideal handled here is generated by polynomials that are homogeneous
//! for the total degree and for the torus weight, so membership of a
//! polynomial splits into independent finite-dimensional problems, one per
//! (degree, weight) block. Each block is solved exactly by sparse elimination
//! and every positive answer comes with a certificate that is re-checked by
//! polynomial arithmetic before it is returned.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::One;

use crate::error::{Error, Result};
use crate::gamma::IdealPresentation;
use crate::linalg::{SparseEchelon, SparseVec};
use crate::poly::{Monomial, Poly, Rational, VarId};

type Col = Reverse<Monomial>;

fn to_vec(p: &Poly) -> SparseVec<Col> {
    p.terms().map(|(m, c)| (Reverse(m.clone()), c.clone())).collect()
}

fn from_vec(n: usize, v: SparseVec<Col>) -> Poly {
    Poly::from_terms(n, v.into_iter().map(|(Reverse(m), c)| (m, c)))
}

/// The 𝕜-span of a list of polynomials, with provenance.
///
/// Reduction eliminates the largest monomials first, so the remainder is the
/// same for any two lists with equal span.
#[derive(Clone, Debug)]
pub struct LinearSpan {
    n: usize,
    echelon: SparseEchelon<Col>,
    members: Vec<Poly>,
}

impl LinearSpan {
    pub fn new(n: usize) -> Self {
        LinearSpan { n, echelon: SparseEchelon::new(true), members: Vec::new() }
    }

    pub fn from_polys<'a>(n: usize, polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut s = LinearSpan::new(n);
        for p in polys {
            s.push(p.clone());
        }
        s
    }

    /// Adds a member; returns whether it enlarged the span.
    pub fn push(&mut self, p: Poly) -> bool {
        let grew = self.echelon.insert(&to_vec(&p));
        self.members.push(p);
        grew
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn members(&self) -> &[Poly] {
        &self.members
    }

    /// Canonical representative of `p` modulo the span.
    pub fn normal_form(&self, p: &Poly) -> Poly {
        from_vec(self.n, self.echelon.reduce(&to_vec(p)).remainder)
    }

    /// Coefficients `c` with `p = Σ c[i]·members[i]`, verified exactly, or
    /// `None` if `p` is not in the span.
    pub fn express(&self, p: &Poly) -> Option<Vec<(usize, Rational)>> {
        let red = self.echelon.reduce(&to_vec(p));
        if !red.remainder.is_empty() {
            return None;
        }
        let combo: Vec<(usize, Rational)> = red.combo.into_iter().collect();
        let mut check = Poly::zero(self.n);
        for (i, c) in &combo {
            check += &self.members[*i].scale(c);
        }
        assert_eq!(&check, p, "span certificate failed to verify");
        Some(combo)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.echelon.contains(&to_vec(p))
    }
}

/// `p = Σ multiplier_g · generator_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub terms: Vec<(usize, Poly)>,
}

impl Certificate {
    pub fn evaluate(&self, ideal: &IdealPresentation) -> Poly {
        let mut out = Poly::zero(ideal.n);
        for (g, m) in &self.terms {
            out += &(m * &ideal.generators[*g]);
        }
        out
    }

    /// Highest degree of a multiplier, `None` for the empty certificate.
    pub fn multiplier_degree(&self) -> Option<u32> {
        self.terms.iter().filter_map(|(_, m)| m.degree()).max()
    }

    /// Rendered as `[(label, multiplier)]`.
    pub fn describe(&self, ideal: &IdealPresentation) -> Vec<(String, String)> {
        self.terms.iter().map(|(g, m)| (ideal.labels[*g].clone(), m.to_string())).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member(Certificate),
    /// The nonzero normal form witnessing non-membership.
    NotMember {
        remainder: Poly,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotMember { .. } => None,
        }
    }
}

type BlockKey = (u32, Vec<i32>);

struct Block {
    span: LinearSpan,
    products: Vec<(usize, Monomial)>,
}

/// Membership oracle for an ideal generated by weight-homogeneous quadrics,
/// for queries of degree at most 3 in the ring variables.
pub struct IdealSpan<'a> {
    ideal: &'a IdealPresentation,
    gens_by_weight: BTreeMap<Vec<i32>, Vec<usize>>,
    vars_by_weight: BTreeMap<Vec<i32>, Vec<VarId>>,
    blocks: Mutex<HashMap<BlockKey, Arc<Block>>>,
}

/// Highest degree of the queries [`IdealSpan`] answers.
pub const MAX_QUERY_DEGREE: u32 = 3;

impl<'a> IdealSpan<'a> {
    pub fn new(ideal: &'a IdealPresentation) -> Result<Self> {
        let n = ideal.n;
        let mut gens_by_weight: BTreeMap<Vec<i32>, Vec<usize>> = BTreeMap::new();
        for (idx, g) in ideal.generators.iter().enumerate() {
            let comps = g.weight_components();
            let Some(((deg, w), _)) = comps.iter().next() else { continue };
            if comps.len() != 1 || *deg != 2 {
                return Err(Error::Inconsistent(format!(
                    "generator {} is not a weight-homogeneous quadric",
                    ideal.labels[idx]
                )));
            }
            if !g.only_vars(|v| ideal.ring_vars.binary_search(&v).is_ok()) {
                return Err(Error::NotInRing { var: ideal.labels[idx].clone(), ring: "presentation ring" });
            }
            gens_by_weight.entry(w.clone()).or_default().push(idx);
        }
        let mut vars_by_weight: BTreeMap<Vec<i32>, Vec<VarId>> = BTreeMap::new();
        for v in &ideal.ring_vars {
            vars_by_weight.entry(Monomial::var(*v).weight(n)).or_default().push(*v);
        }
        Ok(IdealSpan { ideal, gens_by_weight, vars_by_weight, blocks: Mutex::new(HashMap::new()) })
    }

    pub fn ideal(&self) -> &IdealPresentation {
        self.ideal
    }

    fn block(&self, key: &BlockKey) -> Arc<Block> {
        if let Some(b) = self.blocks.lock().expect("block cache poisoned").get(key) {
            return Arc::clone(b);
        }
        let built = Arc::new(self.build_block(key));
        let mut cache = self.blocks.lock().expect("block cache poisoned");
        Arc::clone(cache.entry(key.clone()).or_insert(built))
    }

    fn build_block(&self, (deg, w): &BlockKey) -> Block {
        let n = self.ideal.n;
        let mut span = LinearSpan::new(n);
        let mut products = Vec::new();
        match deg {
            2 => {
                for &g in self.gens_by_weight.get(w).into_iter().flatten() {
                    span.push(self.ideal.generators[g].clone());
                    products.push((g, Monomial::one()));
                }
            }
            3 => {
                for (wg, gens) in &self.gens_by_weight {
                    let wv: Vec<i32> = w.iter().zip(wg).map(|(a, b)| a - b).collect();
                    for v in self.vars_by_weight.get(&wv).into_iter().flatten() {
                        let m = Monomial::var(*v);
                        for &g in gens {
                            span.push(self.ideal.generators[g].mul_term(&m, &Rational::one()));
                            products.push((g, m.clone()));
                        }
                    }
                }
            }
            _ => unreachable!("blocks exist only for degrees 2 and 3"),
        }
        Block { span, products }
    }

    fn check_ring(&self, p: &Poly) -> Result<()> {
        if p.n() != self.ideal.n {
            return Err(Error::UniverseMismatch { left: p.n(), right: self.ideal.n });
        }
        if let Some(v) = p.vars().into_iter().find(|v| self.ideal.ring_vars.binary_search(v).is_err()) {
            return Err(Error::NotInRing { var: v.to_string(), ring: "presentation ring" });
        }
        Ok(())
    }

    /// Decides `p ∈ ideal`. Components of degree below 2 are never members;
    /// components of degree above 3 are rejected.
    pub fn membership(&self, p: &Poly) -> Result<Membership> {
        self.check_ring(p)?;
        let n = self.ideal.n;
        let mut remainder = Poly::zero(n);
        let mut multipliers: BTreeMap<usize, Poly> = BTreeMap::new();
        for (key, comp) in p.weight_components() {
            if key.0 > MAX_QUERY_DEGREE {
                return Err(Error::UnsupportedDegree { degree: key.0 });
            }
            if key.0 < 2 {
                remainder += &comp;
                continue;
            }
            let block = self.block(&key);
            match block.span.express(&comp) {
                Some(combo) => {
                    for (idx, c) in combo {
                        let (g, m) = &block.products[idx];
                        multipliers.entry(*g).or_insert_with(|| Poly::zero(n)).add_term(m.clone(), &c);
                    }
                }
                None => remainder += &block.span.normal_form(&comp),
            }
        }
        if !remainder.is_zero() {
            return Ok(Membership::NotMember { remainder });
        }
        let cert = Certificate { terms: multipliers.into_iter().filter(|(_, m)| !m.is_zero()).collect() };
        if &cert.evaluate(self.ideal) != p {
            return Err(Error::Inconsistent("membership certificate failed to verify".into()));
        }
        Ok(Membership::Member(cert))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.membership(p)?.is_member())
    }

    /// Canonical representative of `p` modulo the ideal, for `p` of degree at
    /// most 3: two polynomials have equal normal forms iff their difference
    /// lies in the ideal.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check_ring(p)?;
        let mut out = Poly::zero(self.ideal.n);
        for (key, comp) in p.weight_components() {
            if key.0 > MAX_QUERY_DEGREE {
                return Err(Error::UnsupportedDegree { degree: key.0 });
            }
            if key.0 < 2 {
                out += &comp;
            } else {
                out += &self.block(&key).span.normal_form(&comp);
            }
        }
        Ok(out)
    }

    /// Dimension of the degree-2 part of the ideal.
    pub fn quadratic_rank(&self) -> usize {
        self.gens_by_weight.keys().map(|w| self.block(&(2, w.clone())).span.rank()).sum()
    }
}

/// Result of comparing the degree-2 parts of two presentations.
#[derive(Clone, Debug)]
pub struct SpanComparison {
    pub rank_left: usize,
    pub rank_right: usize,
    /// One certificate per generator of the left presentation in terms of the right.
    pub left_in_right: Vec<Option<Certificate>>,
    pub right_in_left: Vec<Option<Certificate>>,
}

impl SpanComparison {
    pub fn equal(&self) -> bool {
        self.rank_left == self.rank_right
            && self.left_in_right.iter().all(Option::is_some)
            && self.right_in_left.iter().all(Option::is_some)
    }

    /// Labels of left generators not certified in the right, then vice versa.
    pub fn failures(&self, left: &IdealPresentation, right: &IdealPresentation) -> Vec<String> {
        let mut out: Vec<String> = self
            .left_in_right
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| left.labels[i].clone())
            .collect();
        out.extend(
            self.right_in_left.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(i, _)| right.labels[i].clone()),
        );
        out
    }
}

fn certify_all(from: &IdealPresentation, into: &IdealSpan<'_>) -> Result<Vec<Option<Certificate>>> {
    use rayon::prelude::*;
    from.generators.par_iter().map(|g| Ok(into.membership(g)?.certificate().cloned())).collect()
}

/// Mutual membership certificates and ranks for two presentations of
/// quadratically generated ideals in the same ring.
pub fn compare_spans(left: &IdealPresentation, right: &IdealPresentation) -> Result<SpanComparison> {
    let ls = IdealSpan::new(left)?;
    let rs = IdealSpan::new(right)?;
    Ok(SpanComparison {
        rank_left: ls.quadratic_rank(),
        rank_right: rs.quadratic_rank(),
        left_in_right: certify_all(left, &rs)?,
        right_in_left: certify_all(right, &ls)?,
    })
}

/// Whether every coefficient is zero.
pub fn all_zero<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> bool {
    polys.into_iter().all(Poly::is_zero)
}
