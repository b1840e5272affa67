//! The truncated Taylor complex `S^q → S^p → S` of `S/I`, `I = ⟨x_1..x_n⟩²`,
//! and the first-order deformation space `Hom_S(I, S/I)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freemod::{shared_index, Basis, FreeModElt, Pair};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::poly::{qi, xv, Monomial, Poly, Rational, VarKind};

fn x(n: usize, i: usize) -> Poly {
    Poly::var(n, xv(i))
}

/// `f`: `e[i,j] ↦ x_i x_j`, extended linearly over the coefficients.
pub fn f_map(m: &FreeModElt) -> Result<Poly> {
    let mut out = Poly::zero(m.n());
    for (b, c) in m.terms() {
        match b {
            Basis::E(p) => out += &c.mul_term(&p.monomial(), &qi(1)),
            _ => return Err(Error::WrongSummand("generator")),
        }
    }
    Ok(out)
}

/// `r(e_a ∧ e_b) = (−f_b e_a + f_a e_b) / gcd(f_a, f_b)` on one symbol.
pub fn r_basis(n: usize, a: Pair, b: Pair) -> FreeModElt {
    let (fa, fb) = (a.monomial(), b.monomial());
    let g = monomial_gcd(&fa, &fb);
    let mut out = FreeModElt::zero(n);
    out.add_term(Basis::E(a), &-&Poly::term(n, fb.div(&g).expect("gcd divides"), qi(1)));
    out.add_term(Basis::E(b), &Poly::term(n, fa.div(&g).expect("gcd divides"), qi(1)));
    out
}

fn monomial_gcd(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::from_factors(a.factors().map(|(v, e)| (v, e.min(b.exponent(v)))))
}

/// `r` extended linearly over `∧`-symbols.
pub fn r_map(w: &FreeModElt) -> Result<FreeModElt> {
    let mut out = FreeModElt::zero(w.n());
    for (b, c) in w.terms() {
        match b {
            Basis::Wedge(p, q) => out += &r_basis(w.n(), *p, *q).mul_poly(c),
            _ => return Err(Error::WrongSummand("wedge")),
        }
    }
    Ok(out)
}

/// Whether `e_a ∧ e_b` is a Koszul symbol, i.e. `x_a` and `x_b` are coprime.
pub fn is_koszul(a: Pair, b: Pair) -> bool {
    shared_index(a, b).is_none()
}

/// The non-Koszul symbol `e[i,j] ∧ e[i,k]` (`j ≠ k`) as an element, with its sign.
pub fn wedge_ijk(n: usize, i: usize, j: usize, k: usize) -> FreeModElt {
    FreeModElt::wedge(n, Pair::new(i, j), Pair::new(i, k))
}

/// An element of `S/I ⊗ R` for a coefficient ring `R`: coefficients of the
/// residues of `1, x_1, ..., x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElt {
    coeffs: Vec<Poly>,
}

impl QuotientElt {
    pub fn zero(n: usize) -> Self {
        QuotientElt { coeffs: vec![Poly::zero(n); n + 1] }
    }

    /// Residue of `p`: terms of `x`-degree at least 2 are dropped and the
    /// remaining `x`-monomials become basis slots; other variables stay in
    /// the coefficients.
    pub fn reduce(p: &Poly) -> Self {
        let n = p.n();
        let mut out = QuotientElt::zero(n);
        for (xm, c) in p.coefficients_by(|v| v.kind() == VarKind::X) {
            match xm.degree() {
                0 => out.coeffs[0] += &c,
                1 => out.coeffs[xm.vars().next().expect("degree one").x_index()] += &c,
                _ => {}
            }
        }
        out
    }

    /// Coefficient of the residue of `1` (slot 0) or of `x_i`.
    pub fn coeff(&self, slot: usize) -> &Poly {
        &self.coeffs[slot]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// The representative `c_0 + Σ c_i x_i`.
    pub fn lift(&self) -> Poly {
        let n = self.coeffs.len() - 1;
        let mut out = self.coeffs[0].clone();
        for i in 1..=n {
            out += &(&self.coeffs[i] * &x(n, i));
        }
        out
    }
}

/// `θ^{ij}_k` applied to `e[l,m]`: `x_k` if `{l,m} = {i,j}` and `0` otherwise.
pub fn theta(i: usize, j: usize, k: usize, lm: Pair, n: usize) -> QuotientElt {
    if Pair::new(i, j) == lm {
        QuotientElt::reduce(&x(n, k))
    } else {
        QuotientElt::zero(n)
    }
}

/// Applies the homomorphism `e ↦ phi(e)` to an element of `S^p`, in `S/I`.
pub fn apply_hom(phi: impl Fn(Pair) -> QuotientElt, m: &FreeModElt) -> Result<QuotientElt> {
    let mut lifted = Poly::zero(m.n());
    for (b, c) in m.terms() {
        match b {
            Basis::E(p) => lifted += &(c * &phi(*p).lift()),
            _ => return Err(Error::WrongSummand("generator")),
        }
    }
    Ok(QuotientElt::reduce(&lifted))
}

/// Dimension counts of the first-order deformation spaces.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TangentDims {
    pub n: usize,
    /// `dim Hom_S(I, S/I)`, from the kernel of the syzygy constraints.
    pub hom_dim: usize,
    /// Rank of the `θ^{ij}_k`, all of which lie in the kernel.
    pub theta_rank: usize,
    /// Rank of the images of the derivations `∂/∂x_i`.
    pub derivation_rank: usize,
    /// `hom_dim − derivation_rank`.
    pub t1_dim: usize,
    /// Whether every `θ` satisfies the syzygy constraints.
    pub thetas_in_kernel: bool,
}

/// Unknown index of the coefficient of slot `s` in the image of pair number `e`.
fn unknown(e: usize, s: usize, n: usize) -> usize {
    e * (n + 1) + s
}

/// Image of `∂/∂x_i` in `Hom_S(I, S/I)` as a map on generators.
pub fn derivation_image(i: usize, lm: Pair, n: usize) -> QuotientElt {
    let f = Poly::term(n, lm.monomial(), qi(1));
    let mut d = Poly::zero(n);
    for (m, c) in f.terms() {
        let e = m.exponent(xv(i));
        if e > 0 {
            let q = m.div(&Monomial::var(xv(i))).expect("x_i divides");
            d.add_term(q, &(c * qi(e as i64)));
        }
    }
    QuotientElt::reduce(&d)
}

/// Computes `dim Hom_S(I, S/I)` and `dim T¹` by exact rank computations.
///
/// A homomorphism is determined by the images of the `p` generators, each an
/// element of the `(n+1)`-dimensional space `S/I`; it is well defined iff it
/// kills `r(w)` for every wedge `w`.
pub fn tangent_dims(n: usize) -> Result<TangentDims> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    let pairs = Pair::all(n);
    let index: BTreeMap<Pair, usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let unknowns = pairs.len() * (n + 1);

    // A coefficient x_a on e[lm] sends the constant slot to x_a and kills the
    // linear slots; quadratic coefficients kill everything.
    let mut constraints = SparseEchelon::<usize>::new(false);
    let mut constraint_rows = Vec::new();
    for w in Basis::all_wedges(n) {
        let (a, b) = w.pairs().expect("wedge symbol");
        let img = r_basis(n, a, b);
        let mut rows: BTreeMap<usize, SparseVec<usize>> = BTreeMap::new();
        for (sym, c) in img.terms() {
            let Basis::E(p) = sym else { unreachable!("r lands in S^p") };
            for (m, coeff) in c.terms() {
                if m.degree() == 1 {
                    let slot = m.vars().next().expect("degree one").x_index();
                    rows.entry(slot).or_default().insert(unknown(index[p], 0, n), coeff.clone());
                }
            }
        }
        for row in rows.into_values() {
            constraints.insert(&row);
            constraint_rows.push(row);
        }
    }
    let hom_dim = unknowns - constraints.rank();

    let mut thetas = SparseEchelon::<usize>::new(false);
    let mut thetas_in_kernel = true;
    for p in &pairs {
        for k in 1..=n {
            let mut v = SparseVec::new();
            for (e, lm) in pairs.iter().enumerate() {
                let img = theta(p.i(), p.j(), k, *lm, n);
                for s in 0..=n {
                    let c = img.coeff(s).constant_term();
                    if !c.is_zero() {
                        v.insert(unknown(e, s, n), c);
                    }
                }
            }
            thetas_in_kernel &= constraint_rows.iter().all(|row| dot(row, &v).is_zero());
            thetas.insert(&v);
        }
    }

    let mut derivations = SparseEchelon::<usize>::new(false);
    for i in 1..=n {
        let mut v: SparseVec<usize> = SparseVec::new();
        for (e, p) in pairs.iter().enumerate() {
            let img = derivation_image(i, *p, n);
            for s in 0..=n {
                let c = img.coeff(s).constant_term();
                if !c.is_zero() {
                    v.insert(unknown(e, s, n), c);
                }
            }
        }
        derivations.insert(&v);
    }

    Ok(TangentDims {
        n,
        hom_dim,
        theta_rank: thetas.rank(),
        derivation_rank: derivations.rank(),
        t1_dim: hom_dim - derivations.rank(),
        thetas_in_kernel,
    })
}

fn dot(a: &SparseVec<usize>, b: &SparseVec<usize>) -> Rational {
    a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum()
}

/// `x_ℓ·r(e_ij∧e_ik) − x_k·r(e_ij∧e_iℓ) + x_j·r(e_ik∧e_iℓ)`, the linear
/// syzygy among the non-Koszul relations.
pub fn linear_syzygy(i: usize, j: usize, k: usize, l: usize, n: usize) -> Result<FreeModElt> {
    let r = |a: usize, b: usize| r_map(&wedge_ijk(n, i, a, b));
    let mut out = r(j, k)?.mul_poly(&x(n, l));
    out -= &r(j, l)?.mul_poly(&x(n, k));
    out += &r(k, l)?.mul_poly(&x(n, j));
    Ok(out)
}

/// One entry per `(i, j, k, ℓ)` with `j, k, ℓ` distinct: the linear syzygy
/// and whether it vanishes.
pub fn obstruction_degree_check(n: usize) -> Result<Vec<((usize, usize, usize, usize), FreeModElt)>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if j != k && j != l && k != l {
                        out.push(((i, j, k, l), linear_syzygy(i, j, k, l, n)?));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Dimension of `S/I` read off from the residues of `1, x_1, ..., x_n` and
/// the monomials of degree two, which all lie in `I`.
pub fn quotient_dim(n: usize) -> usize {
    let mut span = SparseEchelon::<usize>::new(false);
    let mut probe = vec![Poly::one(n)];
    probe.extend((1..=n).map(|i| x(n, i)));
    for p in Pair::all(n) {
        probe.push(Poly::term(n, p.monomial(), qi(1)));
    }
    for p in probe {
        let q = QuotientElt::reduce(&p);
        let v: SparseVec<usize> = (0..=n)
            .filter_map(|s| {
                let c: Rational = q.coeff(s).constant_term();
                (!c.is_zero()).then_some((s, c))
            })
            .collect();
        span.insert(&v);
    }
    span.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_examples() {
        let n = 3;
        let x12 = &x(n, 1) * &x(n, 2);
        assert_eq!(f_map(&FreeModElt::e(n, 1, 2)).unwrap(), x12);
        assert_eq!(f_map(&FreeModElt::e(n, 2, 1)).unwrap(), x12);
        let m = FreeModElt::e(n, 1, 1).mul_poly(&x(n, 3));
        assert_eq!(f_map(&m).unwrap(), &(&x(n, 3) * &x(n, 1)) * &x(n, 1));
        assert!(f_map(&wedge_ijk(n, 1, 2, 3)).is_err());
    }

    #[test]
    fn r_examples() {
        let n = 4;
        let w = FreeModElt::wedge(n, Pair::new(1, 2), Pair::new(3, 4));
        let expect = &FreeModElt::e(n, 1, 2).mul_poly(&-&(&x(n, 3) * &x(n, 4)))
            + &FreeModElt::e(n, 3, 4).mul_poly(&(&x(n, 1) * &x(n, 2)));
        assert_eq!(r_map(&w).unwrap(), expect);
        let w = wedge_ijk(n, 1, 2, 3);
        let expect = &FreeModElt::e(n, 1, 2).mul_poly(&-&x(n, 3)) + &FreeModElt::e(n, 1, 3).mul_poly(&x(n, 2));
        assert_eq!(r_map(&w).unwrap(), expect);
    }

    #[test]
    fn complex_condition() {
        for n in 3..=4 {
            for w in Basis::all_wedges(n) {
                let img = r_map(&FreeModElt::basis(n, w)).unwrap();
                assert!(f_map(&img).unwrap().is_zero(), "{w}");
            }
        }
    }

    #[test]
    fn theta_examples() {
        let n = 3;
        assert_eq!(theta(1, 2, 3, Pair::new(1, 2), n), QuotientElt::reduce(&x(n, 3)));
        assert!(theta(1, 2, 3, Pair::new(1, 3), n).is_zero());
        let rel = r_map(&wedge_ijk(n, 1, 2, 3)).unwrap();
        assert!(apply_hom(|p| theta(1, 2, 3, p, n), &rel).unwrap().is_zero());
    }

    #[test]
    fn dims_small() {
        let d = tangent_dims(3).unwrap();
        assert_eq!((d.hom_dim, d.t1_dim, d.theta_rank), (18, 15, 18));
        assert!(d.thetas_in_kernel);
        let d = tangent_dims(4).unwrap();
        assert_eq!((d.hom_dim, d.t1_dim), (40, 36));
    }

    #[test]
    fn derivation_picks_up_factor_two_on_squares() {
        let n = 3;
        let img = derivation_image(1, Pair::new(1, 1), n);
        assert_eq!(img, QuotientElt::reduce(&x(n, 1).scale(&qi(2))));
        let img = derivation_image(1, Pair::new(1, 2), n);
        assert_eq!(img, QuotientElt::reduce(&x(n, 2)));
        assert!(derivation_image(1, Pair::new(2, 3), n).is_zero());
    }

    #[test]
    fn linear_syzygy_examples() {
        assert!(linear_syzygy(1, 2, 3, 4, 4).unwrap().is_zero());
        assert!(linear_syzygy(1, 1, 2, 3, 3).unwrap().is_zero());
        assert_eq!(quotient_dim(3), 4);
    }
}
