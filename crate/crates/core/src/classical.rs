//! Order-by-order lifting of the generators and relations of `I`.
//!
//! `f⁽¹⁾(e_{ℓm}) = Σ_λ t_{ℓm}^λ x_λ`; on the non-Koszul relations
//! `r⁽¹⁾(e_{ij}∧e_{ik}) = Σ_λ t_{ij}^λ e_{kλ} − t_{ik}^λ e_{jλ}`, while the
//! Koszul relations lift trivially. Second order forces the equations of `𝔍`
//! and the tails `c_{ℓm} = Σ_k γ_{ℓmk}^k/(n−1)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freemod::{shared_index, Basis, FreeModElt, Pair};
use crate::gamma::{drop_diagonal, gamma_trace, ideal_generators, Flavor, IdealPresentation};
use crate::linalg::{solve_square, SparseEchelon, SparseVec};
use crate::poly::{q, qi, tv, xv, Grading, Monomial, Poly, Rational, VarKind};
use crate::report::Report;
use crate::span::{compare_spans, Certificate, IdealSpan, SpanComparison};
use crate::taylor::{f_map, r_basis};

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    Ok(())
}

/// The perturbed maps in a fixed flavor; the miniversal flavor sets every
/// `t_{ii}^i` to zero.
#[derive(Clone, Copy, Debug)]
pub struct Lifting {
    pub n: usize,
    pub flavor: Flavor,
}

impl Lifting {
    pub fn new(n: usize, flavor: Flavor) -> Result<Self> {
        check_n(n)?;
        if flavor == Flavor::BasedAlgebra {
            return Err(Error::Inconsistent("lifting is defined in the t-ring only".into()));
        }
        Ok(Lifting { n, flavor })
    }

    fn adjust(&self, p: Poly) -> Poly {
        match self.flavor {
            Flavor::Miniversal => drop_diagonal(&p),
            _ => p,
        }
    }

    fn t(&self, i: usize, j: usize, k: usize) -> Poly {
        self.adjust(Poly::var(self.n, tv(i, j, k)))
    }

    pub fn f0(&self, e: Pair) -> Poly {
        Poly::term(self.n, e.monomial(), qi(1))
    }

    /// `f⁽¹⁾(e_{ℓm}) = Σ_λ t_{ℓm}^λ x_λ`.
    pub fn f1(&self, e: Pair) -> Poly {
        let mut out = Poly::zero(self.n);
        for lam in 1..=self.n {
            out += &(&self.t(e.i(), e.j(), lam) * &Poly::var(self.n, xv(lam)));
        }
        out
    }

    /// `f⁽²⁾(e_{ℓm}) = c_{ℓm} = Σ_k γ_{ℓmk}^k / (n−1)`.
    pub fn f2(&self, e: Pair) -> Poly {
        self.adjust(tail(e.i(), e.j(), self.n))
    }

    /// `f⁽⁰⁾ + ... + f⁽ᵈ⁾` for `d = order`.
    pub fn f_upto(&self, e: Pair, order: usize) -> Poly {
        let mut out = self.f0(e);
        if order >= 1 {
            out += &self.f1(e);
        }
        if order >= 2 {
            out += &self.f2(e);
        }
        out
    }

    /// Applies `f⁽⁰⁾ + ... + f⁽ᵈ⁾` linearly.
    pub fn apply_f(&self, m: &FreeModElt, order: usize) -> Result<Poly> {
        self.apply_f_with(m, |e| self.f_upto(e, order))
    }

    fn apply_f_with(&self, m: &FreeModElt, f: impl Fn(Pair) -> Poly) -> Result<Poly> {
        let mut out = Poly::zero(self.n);
        for (b, c) in m.terms() {
            match b {
                Basis::E(p) => out += &(c * &f(*p)),
                _ => return Err(Error::WrongSummand("generator")),
            }
        }
        Ok(out)
    }

    pub fn r0(&self, a: Pair, b: Pair) -> FreeModElt {
        r_basis(self.n, a, b)
    }

    /// `r⁽¹⁾` on the symbol `e_a ∧ e_b` (`a < b`).
    pub fn r1(&self, a: Pair, b: Pair) -> FreeModElt {
        let n = self.n;
        match shared_index(a, b) {
            Some((i, j, k)) => {
                let mut out = FreeModElt::zero(n);
                for lam in 1..=n {
                    out.add_term(Basis::E(Pair::new(k, lam)), &self.t(i, j, lam));
                    out.add_term(Basis::E(Pair::new(j, lam)), &-&self.t(i, k, lam));
                }
                out
            }
            None => self.koszul_lift(a, b, |e| self.f1(e)),
        }
    }

    /// `−F(e_b) e_a + F(e_a) e_b`, the trivial lift of a Koszul relation.
    pub fn koszul_lift(&self, a: Pair, b: Pair, f: impl Fn(Pair) -> Poly) -> FreeModElt {
        let mut out = FreeModElt::zero(self.n);
        out.add_term(Basis::E(a), &-&f(b));
        out.add_term(Basis::E(b), &f(a));
        out
    }

    /// `r̂ = r⁽⁰⁾ + r⁽¹⁾` on a symbol.
    pub fn r_hat(&self, a: Pair, b: Pair) -> FreeModElt {
        &self.r0(a, b) + &self.r1(a, b)
    }
}

/// `c_{ℓm} = Σ_k γ_{ℓmk}^k / (n−1)`.
pub fn tail(l: usize, m: usize, n: usize) -> Poly {
    gamma_trace(l, m, n).scale(&q(1, n as i64 - 1))
}

/// The cubic `Σ_{ℓ,λ} t_{ij}^ℓ γ_{kℓλ}^λ − t_{ik}^ℓ γ_{jℓλ}^λ`.
pub fn syzygy_cubic(i: usize, j: usize, k: usize, n: usize) -> Poly {
    let mut out = Poly::zero(n);
    for l in 1..=n {
        out += &(&Poly::var(n, tv(i, j, l)) * &gamma_trace(k, l, n));
        out -= &(&Poly::var(n, tv(i, k, l)) * &gamma_trace(j, l, n));
    }
    out
}

/// Every non-Koszul symbol as `(symbol, (i, j, k))` with the symbol equal to
/// `e_{ij} ∧ e_{ik}`.
pub fn non_koszul_wedges(n: usize) -> Vec<(Basis, (usize, usize, usize))> {
    Basis::all_wedges(n)
        .into_iter()
        .filter_map(|w| {
            let (a, b) = w.pairs().expect("wedge symbol");
            shared_index(a, b).map(|ijk| (w, ijk))
        })
        .collect()
}

/// `f⁽⁰⁾r⁽¹⁾ + f⁽¹⁾r⁽⁰⁾` on every wedge symbol.
pub fn first_order_residual(n: usize) -> Result<Vec<(Basis, Poly)>> {
    let lift = Lifting::new(n, Flavor::Hilbert)?;
    Basis::all_wedges(n)
        .into_par_iter()
        .map(|w| {
            let (a, b) = w.pairs().expect("wedge symbol");
            let res = &f_map(&lift.r1(a, b))? + &lift.apply_f_with(&lift.r0(a, b), |e| lift.f1(e))?;
            Ok((w, res))
        })
        .collect()
}

/// One coefficient equation `known + Σ coeff·c_pair = 0`.
#[derive(Clone, Debug)]
pub(crate) struct AffineEquation {
    pub(crate) label: String,
    pub(crate) known: Poly,
    pub(crate) unknowns: SparseVec<Pair>,
}

/// Outcome of the second-order computation.
#[derive(Clone, Debug)]
pub struct SecondOrder {
    /// The conditions on `t` needed for the tails to exist.
    pub equations: IdealPresentation,
    /// One solution for the tails `c_{ℓm}`.
    pub tails: BTreeMap<Pair, Poly>,
    /// Number of tail unknowns not fixed by the equations.
    pub free_tails: usize,
}

/// Expands `(f⁽¹⁾r⁽¹⁾ + f⁽²⁾r⁽⁰⁾)(e_{ij}∧e_{ik}) = 0` with unknown tails,
/// eliminates the tails and returns the remaining conditions on `t`.
pub fn second_order_obstruction(n: usize, flavor: Flavor) -> Result<SecondOrder> {
    let lift = Lifting::new(n, flavor)?;
    let mut eqs: Vec<AffineEquation> = Vec::new();
    for (w, (i, j, k)) in non_koszul_wedges(n) {
        let (a, b) = w.pairs().expect("wedge symbol");
        let known = lift.apply_f_with(&lift.r1(a, b), |e| lift.f1(e))?;
        let mut by_x: BTreeMap<Monomial, AffineEquation> = BTreeMap::new();
        for (xm, c) in known.coefficients_by(|v| v.kind() == VarKind::X) {
            by_x.entry(xm.clone()).or_insert_with(|| AffineEquation {
                label: format!("e[{i},{j}]^e[{i},{k}] @ {xm}"),
                known: c,
                unknowns: SparseVec::new(),
            });
        }
        for (sym, c) in lift.r0(a, b).terms() {
            let Basis::E(p) = sym else { unreachable!("r lands in S^p") };
            for (xm, coeff) in c.terms() {
                let eq = by_x.entry(xm.clone()).or_insert_with(|| AffineEquation {
                    label: format!("e[{i},{j}]^e[{i},{k}] @ {xm}"),
                    known: Poly::zero(n),
                    unknowns: SparseVec::new(),
                });
                let slot = eq.unknowns.entry(*p).or_insert_with(Rational::zero);
                *slot += coeff;
                if slot.is_zero() {
                    eq.unknowns.remove(p);
                }
            }
        }
        eqs.extend(by_x.into_values());
    }

    let (constraints, tails, free_tails) = eliminate(n, &eqs, "tail")?;

    let equations = IdealPresentation::from_candidates(n, flavor, crate::gamma::t_ring_vars(n, flavor), constraints);
    Ok(SecondOrder { equations, tails, free_tails })
}

/// Splits `known + Σ c_p·u_p = 0` into conditions on `t` (combinations with
/// no unknowns left) and one solution for the unknowns, free ones set to 0.
pub(crate) fn eliminate(
    n: usize,
    eqs: &[AffineEquation],
    what: &str,
) -> Result<(Vec<(String, Poly)>, BTreeMap<Pair, Poly>, usize)> {
    let mut ech = SparseEchelon::<Pair>::new(true);
    let mut independent = Vec::new();
    let mut constraints = Vec::new();
    for (idx, eq) in eqs.iter().enumerate() {
        let red = ech.reduce(&eq.unknowns);
        if red.remainder.is_empty() {
            let mut c = eq.known.clone();
            for (s, coeff) in &red.combo {
                c -= &eqs[*s].known.scale(coeff);
            }
            constraints.push((eq.label.clone(), c));
        } else {
            independent.push(idx);
        }
        ech.insert(&eq.unknowns);
    }

    let pairs = Pair::all(n);
    let pivots: Vec<Pair> = ech.pivot_columns().copied().collect();
    let free = pairs.len() - pivots.len();
    let matrix: Vec<Vec<Rational>> = independent
        .iter()
        .map(|&e| pivots.iter().map(|p| eqs[e].unknowns.get(p).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let identity: Vec<Vec<Rational>> = (0..pivots.len())
        .map(|r| (0..pivots.len()).map(|c| if r == c { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let inverse = solve_square(&matrix, &identity)
        .ok_or_else(|| Error::Inconsistent(format!("pivot block of the {what} equations is singular")))?;
    let mut solution: BTreeMap<Pair, Poly> = pairs.iter().map(|p| (*p, Poly::zero(n))).collect();
    for (r, p) in pivots.iter().enumerate() {
        let mut v = Poly::zero(n);
        for (c, &e) in independent.iter().enumerate() {
            v -= &eqs[e].known.scale(&inverse[r][c]);
        }
        solution.insert(*p, v);
    }
    Ok((constraints, solution, free))
}

/// Comparison data for the second-order computation.
#[derive(Clone, Debug)]
pub struct ObstructionCheck {
    pub second_order: SecondOrder,
    pub span: SpanComparison,
    /// Pairs whose solved tail differs from `Σ_k γ_{ℓmk}^k/(n−1)` modulo `𝔍`.
    pub tail_mismatches: Vec<Pair>,
}

pub fn check_second_order(n: usize, flavor: Flavor) -> Result<ObstructionCheck> {
    let so = second_order_obstruction(n, flavor)?;
    let ideal = ideal_generators(n, flavor)?;
    let span = compare_spans(&so.equations, &ideal)?;
    let oracle = IdealSpan::new(&ideal)?;
    let lift = Lifting::new(n, flavor)?;
    let mut tail_mismatches = Vec::new();
    for (p, c) in &so.tails {
        if oracle.normal_form(c)? != oracle.normal_form(&lift.f2(*p))? {
            tail_mismatches.push(*p);
        }
    }
    Ok(ObstructionCheck { second_order: so, span, tail_mismatches })
}

/// `x_i x_j + Σ_k t_{ij}^k x_k + Σ_k γ_{ijk}^k/(n−1)` for `i <= j`.
pub fn universal_family(n: usize, flavor: Flavor) -> Result<Vec<(Pair, Poly)>> {
    let lift = Lifting::new(n, flavor)?;
    Ok(Pair::all(n).into_iter().map(|p| (p, lift.f_upto(p, 2))).collect())
}

/// Certificate that the cubic of `(i, j, k)` lies in `𝔍`; in the miniversal
/// flavor the cubic is taken with `t_{ii}^i = 0`.
pub fn syzygy_certificate(i: usize, j: usize, k: usize, span: &IdealSpan<'_>) -> Result<Certificate> {
    let n = span.ideal().n;
    if j == k {
        return Err(Error::Inconsistent(format!("syzygy({i},{j},{k}) needs j != k")));
    }
    let mut cubic = syzygy_cubic(i, j, k, n);
    if span.ideal().flavor == Flavor::Miniversal {
        cubic = drop_diagonal(&cubic);
    }
    span.membership(&cubic)?
        .certificate()
        .cloned()
        .ok_or_else(|| Error::CertificateNotFound(format!("syzygy({i},{j},{k})")))
}

/// Checks `(f⁽⁰⁾+f⁽¹⁾+f⁽²⁾)(r⁽⁰⁾+r⁽¹⁾)` on every non-Koszul symbol: the parts
/// of `t`-degree 0 and 1 vanish, every `x`-coefficient of degree 2 lies in
/// `𝔍`, and the degree-3 part equals the cubic over `n−1` and lies in `𝔍`.
/// Koszul symbols with the trivial lift to second order give exactly zero.
pub fn flatness_residual(n: usize, flavor: Flavor) -> Result<Report> {
    let lift = Lifting::new(n, flavor)?;
    let ideal = ideal_generators(n, flavor)?;
    let span = IdealSpan::new(&ideal)?;
    let inv = q(1, n as i64 - 1);
    let wedges = Basis::all_wedges(n);
    let parts: Vec<Result<Report>> = wedges
        .par_iter()
        .map(|w| {
            let mut rep = Report::new();
            let (a, b) = w.pairs().expect("wedge symbol");
            let Some((i, j, k)) = shared_index(a, b) else {
                let full = lift.apply_f(&lift.koszul_lift(a, b, |e| lift.f_upto(e, 2)), 2)?;
                rep.zero("flatness.koszul", w, &full, full.is_zero());
                return Ok(rep);
            };
            let full = lift.apply_f(&lift.r_hat(a, b), 2)?;
            let comps = full.homogeneous_components(Grading::TDegree);
            for d in 0..=1 {
                let c = comps.get(&d).cloned().unwrap_or_else(|| Poly::zero(n));
                rep.zero(&format!("flatness.tdeg{d}"), w, &c, c.is_zero());
            }
            if let Some(c2) = comps.get(&2) {
                for (xm, coeff) in c2.coefficients_by(|v| v.kind() == VarKind::X) {
                    let nf = span.normal_form(&coeff)?;
                    rep.zero("flatness.tdeg2", format!("{w} @ {xm}"), &nf, nf.is_zero());
                }
            }
            let c3 = comps.get(&3).cloned().unwrap_or_else(|| Poly::zero(n));
            let expected = lift.adjust(syzygy_cubic(i, j, k, n)).scale(&inv);
            let diff = &c3 - &expected;
            rep.zero("flatness.tdeg3_is_cubic", w, &diff, diff.is_zero());
            let member = span.membership(&c3)?;
            rep.zero(
                "flatness.tdeg3_in_ideal",
                w,
                if member.is_member() { "0" } else { "not in ideal" },
                member.is_member(),
            );
            let beyond: Vec<_> = comps.keys().filter(|d| **d > 3).collect();
            rep.zero("flatness.tdeg_bound", w, format!("{beyond:?}"), beyond.is_empty());
            Ok(rep)
        })
        .collect();
    let mut out = Report::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// The full classical route as a report.
pub fn run(n: usize, flavor: Flavor) -> Result<Report> {
    let mut rep = Report::new();
    for (w, res) in first_order_residual(n)? {
        rep.zero("first_order", w, &res, res.is_zero());
    }
    let chk = check_second_order(n, flavor)?;
    let eqs = &chk.second_order.equations;
    let ideal = ideal_generators(n, flavor)?;
    rep.zero(
        "second_order.span_rank",
        format!("{} vs {}", chk.span.rank_left, chk.span.rank_right),
        chk.span.rank_left as i64 - chk.span.rank_right as i64,
        chk.span.rank_left == chk.span.rank_right,
    );
    for (idx, c) in chk.span.left_in_right.iter().enumerate() {
        rep.zero(
            "second_order.equation_in_ideal",
            &eqs.labels[idx],
            if c.is_some() { "0" } else { "not in ideal" },
            c.is_some(),
        );
    }
    for (idx, c) in chk.span.right_in_left.iter().enumerate() {
        rep.zero(
            "second_order.generator_from_equations",
            &ideal.labels[idx],
            if c.is_some() { "0" } else { "not spanned" },
            c.is_some(),
        );
    }
    for p in Pair::all(n) {
        let ok = !chk.tail_mismatches.contains(&p);
        rep.zero("second_order.tail", p, if ok { "0" } else { "differs modulo ideal" }, ok);
    }
    let span = IdealSpan::new(&ideal)?;
    let mut triples = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if j != k {
                    triples.push((i, j, k));
                }
            }
        }
    }
    let certs: Vec<(usize, usize, usize, Result<Certificate>)> =
        triples.par_iter().map(|&(i, j, k)| (i, j, k, syzygy_certificate(i, j, k, &span))).collect();
    for (i, j, k, c) in certs {
        match c {
            Ok(_) => rep.zero("syzygy_certificate", format!("({i},{j},{k})"), 0, true),
            Err(Error::CertificateNotFound(_)) => {
                rep.zero("syzygy_certificate", format!("({i},{j},{k})"), "not in ideal", false)
            }
            Err(e) => return Err(e),
        }
    }
    rep.extend(flatness_residual(n, flavor)?);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, xv(i))
    }

    fn t(n: usize, i: usize, j: usize, k: usize) -> Poly {
        Poly::var(n, tv(i, j, k))
    }

    #[test]
    fn f1_example() {
        let n = 3;
        let lift = Lifting::new(n, Flavor::Hilbert).unwrap();
        let expect = &(&(&t(n, 1, 2, 1) * &x(n, 1)) + &(&t(n, 1, 2, 2) * &x(n, 2))) + &(&t(n, 1, 2, 3) * &x(n, 3));
        assert_eq!(lift.f1(Pair::new(1, 2)), expect);
    }

    #[test]
    fn r1_examples() {
        let n = 4;
        let lift = Lifting::new(n, Flavor::Hilbert).unwrap();
        let mut expect = FreeModElt::zero(n);
        for lam in 1..=n {
            expect += &FreeModElt::e(n, 3, lam).mul_poly(&t(n, 1, 2, lam));
            expect -= &FreeModElt::e(n, 2, lam).mul_poly(&t(n, 1, 3, lam));
        }
        assert_eq!(lift.r1(Pair::new(1, 2), Pair::new(1, 3)), expect);
        let (a, b) = (Pair::new(1, 2), Pair::new(3, 4));
        let expect = &FreeModElt::e(n, 1, 2).mul_poly(&-&lift.f1(b)) + &FreeModElt::e(n, 3, 4).mul_poly(&lift.f1(a));
        assert_eq!(lift.r1(a, b), expect);
    }

    #[test]
    fn first_order_vanishes() {
        for n in 3..=4 {
            assert!(first_order_residual(n).unwrap().iter().all(|(_, r)| r.is_zero()));
        }
    }

    #[test]
    fn obstruction_coefficients() {
        let n = 3;
        let lift = Lifting::new(n, Flavor::Hilbert).unwrap();
        let known = lift.apply_f_with(&lift.r1(Pair::new(1, 2), Pair::new(1, 3)), |e| lift.f1(e)).unwrap();
        let by_x = known.coefficients_by(|v| v.is_x());
        assert_eq!(by_x[&Monomial::var(xv(1))], gamma(1, 2, 3, 1, n).unwrap());
        assert_eq!(by_x[&Monomial::var(xv(3))], gamma(1, 2, 3, 3, n).unwrap());
        assert_eq!(by_x[&Monomial::var(xv(2))], gamma(1, 2, 3, 2, n).unwrap());
    }

    #[test]
    fn second_order_matches_ideal_at_three() {
        let chk = check_second_order(3, Flavor::Hilbert).unwrap();
        assert!(chk.span.equal());
        assert!(chk.tail_mismatches.is_empty());
        assert_eq!(chk.second_order.free_tails, 0);
    }

    #[test]
    fn family_examples() {
        let n = 3;
        let fam = universal_family(n, Flavor::Hilbert).unwrap();
        let (p, g) = &fam[0];
        assert_eq!(*p, Pair::new(1, 1));
        let mut expect = &x(n, 1) * &x(n, 1);
        for k in 1..=n {
            expect += &(&t(n, 1, 1, k) * &x(n, k));
            expect += &gamma(1, 1, k, k, n).unwrap().scale(&q(1, 2));
        }
        assert_eq!(g, &expect);
        let zero = std::collections::BTreeMap::from_iter(crate::poly::t_vars(n).into_iter().map(|v| (v, qi(0))));
        for (p, g) in &fam {
            assert_eq!(g.eval(&zero), Poly::term(n, p.monomial(), qi(1)));
        }
    }

    #[test]
    fn syzygies_at_three() {
        let n = 3;
        let ideal = ideal_generators(n, Flavor::Hilbert).unwrap();
        let span = IdealSpan::new(&ideal).unwrap();
        for (i, j, k) in [(1, 2, 3), (1, 1, 2)] {
            let cert = syzygy_certificate(i, j, k, &span).unwrap();
            assert_eq!(cert.evaluate(&ideal), syzygy_cubic(i, j, k, n));
            assert_eq!(cert.multiplier_degree(), Some(1));
        }
    }

    #[test]
    fn flatness_at_three() {
        let rep = flatness_residual(3, Flavor::Hilbert).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }
}
