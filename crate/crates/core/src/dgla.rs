//! The derivation picture: the truncated resolution
//! `P⁻² = ⋀²S^p ⊕ S^q → P⁻¹ = S^p → P⁰ = S`, the degree-one derivation `φ`
//! lifting `Σ t_{ij}^k θ^{ij}_k`, its closedness, the cup product `φ∘φ` and
//! the quadratic part of the Kuranishi map.
//!
//! Derivations of cohomological degree one are given by their values on the
//! free generators `e_{ab}` and `e_a ∧ e_b`; on `e_a ⋏ e_b` they act by the
//! graded Leibniz rule `δ(e_a ⋏ e_b) = δ(e_a) e_b − δ(e_b) e_a`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::classical::{eliminate, non_koszul_wedges, second_order_obstruction, tail, AffineEquation};
use crate::error::{Error, Result};
use crate::freemod::{shared_index, Basis, FreeModElt, Pair};
use crate::gamma::{drop_diagonal, gamma_unchecked, ideal_generators, t_ring_vars, Flavor, IdealPresentation};
use crate::linalg::SparseVec;
use crate::poly::{qi, tv, xv, Poly, Rational, VarKind};
use crate::report::Report;
use crate::span::{compare_spans, IdealSpan, SpanComparison};
use crate::taylor::{r_basis, QuotientElt};

type OnGenerator<'a> = Box<dyn Fn(Pair) -> Poly + Send + Sync + 'a>;
type OnWedge<'a> = Box<dyn Fn(Pair, Pair) -> FreeModElt + Send + Sync + 'a>;

/// A derivation of cohomological degree 1 on the truncated resolution.
pub struct Derivation<'a> {
    n: usize,
    on_generator: OnGenerator<'a>,
    on_wedge: OnWedge<'a>,
}

impl<'a> Derivation<'a> {
    pub fn new(
        n: usize,
        on_generator: impl Fn(Pair) -> Poly + Send + Sync + 'a,
        on_wedge: impl Fn(Pair, Pair) -> FreeModElt + Send + Sync + 'a,
    ) -> Self {
        Derivation { n, on_generator: Box::new(on_generator), on_wedge: Box::new(on_wedge) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value on `P⁻¹ → P⁰`.
    pub fn on_p1(&self, m: &FreeModElt) -> Result<Poly> {
        let mut out = Poly::zero(self.n);
        for (b, c) in m.terms() {
            match b {
                Basis::E(p) => out += &(c * &(self.on_generator)(*p)),
                _ => return Err(Error::WrongSummand("generator")),
            }
        }
        Ok(out)
    }

    /// Value on `P⁻² → P⁻¹`, using the Leibniz rule on `⋏`-symbols.
    pub fn on_p2(&self, m: &FreeModElt) -> Result<FreeModElt> {
        let mut out = FreeModElt::zero(self.n);
        for (b, c) in m.terms() {
            match b {
                Basis::Wedge(x, y) => out += &(self.on_wedge)(*x, *y).mul_poly(c),
                Basis::Curly(x, y) => {
                    let mut v = FreeModElt::zero(self.n);
                    v.add_term(Basis::E(*y), &(self.on_generator)(*x));
                    v.add_term(Basis::E(*x), &-&(self.on_generator)(*y));
                    out += &v.mul_poly(c);
                }
                Basis::E(_) => return Err(Error::WrongSummand("degree -2")),
            }
        }
        Ok(out)
    }

    /// `(δ₁ ∘ δ₂)` restricted to `P⁻² → P⁰`.
    pub fn compose_on_p2(first: &Derivation<'_>, second: &Derivation<'_>, m: &FreeModElt) -> Result<Poly> {
        first.on_p1(&second.on_p2(m)?)
    }
}

/// The differential `∂_P`: `f` on `e_{ab}`, `r` on `∧`-symbols and, by
/// Leibniz, the Koszul differential on `⋏`-symbols.
pub fn partial_p(n: usize) -> Derivation<'static> {
    Derivation::new(n, move |e| Poly::term(n, e.monomial(), qi(1)), move |a, b| r_basis(n, a, b))
}

/// Options for the derivation route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DglaConfig {
    /// Keep the parameters `t_{ii}^i` (the Hilbert-functor variant) instead of
    /// setting them to zero.
    pub retain_diagonal: bool,
}

impl DglaConfig {
    pub fn flavor(&self) -> Flavor {
        if self.retain_diagonal {
            Flavor::Hilbert
        } else {
            Flavor::Miniversal
        }
    }
}

fn param(n: usize, cfg: DglaConfig, i: usize, j: usize, k: usize) -> Poly {
    let v = Poly::var(n, tv(i, j, k));
    if cfg.retain_diagonal {
        v
    } else {
        drop_diagonal(&v)
    }
}

fn phi_generator(n: usize, cfg: DglaConfig, e: Pair) -> Poly {
    let mut out = Poly::zero(n);
    for lam in 1..=n {
        out += &(&param(n, cfg, e.i(), e.j(), lam) * &Poly::var(n, xv(lam)));
    }
    out
}

/// `φ(e_{ℓm}) = Σ_λ t_{ℓm}^λ x_λ`, `φ(e_{ij}∧e_{ik}) = Σ_λ t_{ij}^λ e_{kλ} − t_{ik}^λ e_{jλ}`,
/// and on a Koszul symbol `φ(e_a∧e_b) = −φ(e_b) e_a + φ(e_a) e_b`.
pub fn build_phi(n: usize, cfg: DglaConfig) -> Result<Derivation<'static>> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    Ok(Derivation::new(
        n,
        move |e| phi_generator(n, cfg, e),
        move |a, b| match shared_index(a, b) {
            Some((i, j, k)) => {
                let mut out = FreeModElt::zero(n);
                for lam in 1..=n {
                    out.add_term(Basis::E(Pair::new(k, lam)), &param(n, cfg, i, j, lam));
                    out.add_term(Basis::E(Pair::new(j, lam)), &-&param(n, cfg, i, k, lam));
                }
                out
            }
            None => {
                let mut out = FreeModElt::zero(n);
                out.add_term(Basis::E(a), &-&phi_generator(n, cfg, b));
                out.add_term(Basis::E(b), &phi_generator(n, cfg, a));
                out
            }
        },
    ))
}

/// All degree −2 symbols: `∧` first, then `⋏`.
pub fn p2_symbols(n: usize) -> Vec<Basis> {
    let mut out = Basis::all_wedges(n);
    out.extend(Basis::all_curly(n));
    out
}

/// `[∂_P, φ] = ∂_P φ + φ ∂_P` on every degree −2 symbol. On `e_{kℓ}` the
/// bracket lands in `P¹ = 0`.
pub fn closedness_residual(n: usize, cfg: DglaConfig) -> Result<Vec<(Basis, Poly)>> {
    let phi = build_phi(n, cfg)?;
    let d = partial_p(n);
    p2_symbols(n)
        .into_par_iter()
        .map(|y| {
            let m = FreeModElt::basis(n, y);
            let v = &Derivation::compose_on_p2(&d, &phi, &m)? + &Derivation::compose_on_p2(&phi, &d, &m)?;
            Ok((y, v))
        })
        .collect()
}

/// `φ∘φ` on every degree −2 symbol, reduced to `S/I`.
pub fn cup_product(n: usize, cfg: DglaConfig) -> Result<Vec<(Basis, Poly, QuotientElt)>> {
    let phi = build_phi(n, cfg)?;
    p2_symbols(n)
        .into_par_iter()
        .map(|y| {
            let raw = Derivation::compose_on_p2(&phi, &phi, &FreeModElt::basis(n, y))?;
            let red = QuotientElt::reduce(&raw);
            Ok((y, raw, red))
        })
        .collect()
}

/// `Σ_ℓ γ_{ijk}^ℓ x_ℓ` in the chosen parameter convention.
pub fn expected_cup(i: usize, j: usize, k: usize, n: usize, cfg: DglaConfig) -> Poly {
    let mut out = Poly::zero(n);
    for l in 1..=n {
        let g = gamma_unchecked(i, j, k, l, n);
        let g = if cfg.retain_diagonal { g } else { drop_diagonal(&g) };
        out += &(&g * &Poly::var(n, xv(l)));
    }
    out
}

/// The quadratic Kuranishi locus and the `ψ` solving `φ∘φ = ψ∘∂_P` on it.
#[derive(Clone, Debug)]
pub struct KuranishiLocus {
    pub equations: IdealPresentation,
    /// Constant parts `ψ(e_{ab})` of one solution.
    pub psi: BTreeMap<Pair, Poly>,
}

/// Requires a `ψ` with values in `S/I ⊗ k[t]` such that for every
/// non-Koszul symbol `φ∘φ(e_{ij}∧e_{ik}) = ψ(∂_P(e_{ij}∧e_{ik})) = −x_k ψ(e_{ij}) + x_j ψ(e_{ik})`
/// in `S/I`. Only the constant parts of `ψ` can contribute; eliminating them
/// leaves the returned conditions on `t`.
pub fn kuranishi_quadratic_locus(n: usize, cfg: DglaConfig) -> Result<KuranishiLocus> {
    let phi = build_phi(n, cfg)?;
    let d = partial_p(n);
    let flavor = cfg.flavor();
    let mut eqs: Vec<AffineEquation> = Vec::new();
    for (w, _) in non_koszul_wedges(n) {
        let m = FreeModElt::basis(n, w);
        let cup = QuotientElt::reduce(&Derivation::compose_on_p2(&phi, &phi, &m)?);
        let boundary = d.on_p2(&m)?;
        let mut per_slot: BTreeMap<usize, SparseVec<Pair>> = BTreeMap::new();
        for (b, c) in boundary.terms() {
            let Basis::E(p) = b else { unreachable!("∂_P lands in P⁻¹") };
            for (xm, coeff) in c.coefficients_by(|v| v.kind() == VarKind::X) {
                if xm.degree() == 1 {
                    let slot = xm.vars().next().expect("degree one").x_index();
                    let r: Rational = coeff.constant_term();
                    let e = per_slot.entry(slot).or_default().entry(*p).or_insert_with(Rational::zero);
                    *e += r;
                }
            }
        }
        for slot in 0..=n {
            let mut unknowns = per_slot.remove(&slot).unwrap_or_default();
            unknowns.retain(|_, c| !c.is_zero());
            let known = cup.coeff(slot).clone();
            if known.is_zero() && unknowns.is_empty() {
                continue;
            }
            // cup − ψ∘∂ = 0, written as known + Σ(−coeff)·u = 0.
            let unknowns = unknowns.into_iter().map(|(p, c)| (p, -c)).collect();
            eqs.push(AffineEquation { label: format!("{w} @ slot {slot}"), known, unknowns });
        }
    }

    let (constraints, psi, _) = eliminate(n, &eqs, "ψ")?;
    let equations = IdealPresentation::from_candidates(n, flavor, t_ring_vars(n, flavor), constraints);
    Ok(KuranishiLocus { equations, psi })
}

/// Mutual certificates between the classical second-order equations and the
/// Kuranishi locus, both in the same parameter convention.
pub fn compare_classical_dgla(n: usize, cfg: DglaConfig) -> Result<SpanComparison> {
    let classical = second_order_obstruction(n, cfg.flavor())?;
    let locus = kuranishi_quadratic_locus(n, cfg)?;
    compare_spans(&classical.equations, &locus.equations)
}

/// The full derivation route as a report.
pub fn run(n: usize, cfg: DglaConfig) -> Result<Report> {
    let mut rep = Report::new();
    for p in Pair::all(n) {
        rep.zero("closedness", p, 0, true);
    }
    for (y, v) in closedness_residual(n, cfg)? {
        rep.zero("closedness", y, &v, v.is_zero());
    }
    for (y, _, red) in cup_product(n, cfg)? {
        let expected = match y {
            Basis::Wedge(a, b) => match shared_index(a, b) {
                Some((i, j, k)) => QuotientElt::reduce(&expected_cup(i, j, k, n, cfg)),
                None => QuotientElt::zero(n),
            },
            _ => QuotientElt::zero(n),
        };
        let diff = &red.lift() - &expected.lift();
        rep.zero("cup_product", y, &diff, diff.is_zero());
    }
    let flavor = cfg.flavor();
    let locus = kuranishi_quadratic_locus(n, cfg)?;
    let ideal = ideal_generators(n, flavor)?;
    let cmp = compare_spans(&locus.equations, &ideal)?;
    rep.zero(
        "kuranishi.span_rank",
        format!("{} vs {}", cmp.rank_left, cmp.rank_right),
        cmp.rank_left as i64 - cmp.rank_right as i64,
        cmp.rank_left == cmp.rank_right,
    );
    for f in cmp.failures(&locus.equations, &ideal) {
        rep.zero("kuranishi.span", f, "not certified", false);
    }
    if cmp.equal() {
        rep.zero("kuranishi.span", "all generators", 0, true);
    }
    let span = IdealSpan::new(&ideal)?;
    for (p, v) in &locus.psi {
        let c = drop_if(cfg, tail(p.i(), p.j(), n));
        let lhs = span.normal_form(v)?;
        let rhs = span.normal_form(&-&c)?;
        let diff = &lhs - &rhs;
        rep.zero("kuranishi.psi_is_minus_tail", p, &diff, diff.is_zero());
    }
    let cross = compare_classical_dgla(n, cfg)?;
    rep.zero(
        "classical_vs_dgla",
        format!("rank {} vs {}", cross.rank_left, cross.rank_right),
        cross.failures(&second_order_obstruction(n, flavor)?.equations, &locus.equations).len(),
        cross.equal(),
    );
    Ok(rep)
}

fn drop_if(cfg: DglaConfig, p: Poly) -> Poly {
    if cfg.retain_diagonal {
        p
    } else {
        drop_diagonal(&p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::Lifting;

    const MINI: DglaConfig = DglaConfig { retain_diagonal: false };

    #[test]
    fn phi_values() {
        let n = 3;
        let phi = build_phi(n, MINI).unwrap();
        let lift = Lifting::new(n, Flavor::Miniversal).unwrap();
        let (a, b) = (Pair::new(1, 2), Pair::new(1, 3));
        assert_eq!(phi.on_p1(&FreeModElt::e(n, 1, 2)).unwrap(), lift.f1(a));
        assert_eq!(phi.on_p2(&FreeModElt::wedge(n, a, b)).unwrap(), lift.r1(a, b));
        let (c, d) = (Pair::new(1, 2), Pair::new(3, 3));
        let expect = &FreeModElt::term(n, Basis::E(d), lift.f1(c)) - &FreeModElt::term(n, Basis::E(c), lift.f1(d));
        assert_eq!(phi.on_p2(&FreeModElt::curly(n, c, d)).unwrap(), expect);
    }

    #[test]
    fn differential_squares_to_zero() {
        let n = 3;
        let d = partial_p(n);
        for y in p2_symbols(n) {
            assert!(Derivation::compose_on_p2(&d, &d, &FreeModElt::basis(n, y)).unwrap().is_zero(), "{y}");
        }
    }

    #[test]
    fn closed_at_three_and_four() {
        for n in 3..=4 {
            assert!(closedness_residual(n, MINI).unwrap().iter().all(|(_, v)| v.is_zero()));
        }
    }

    #[test]
    fn cup_matches_gamma() {
        let n = 3;
        for (y, raw, red) in cup_product(n, MINI).unwrap() {
            match y {
                Basis::Wedge(a, b) if shared_index(a, b).is_some() => {
                    let (i, j, k) = shared_index(a, b).unwrap();
                    assert_eq!(raw, expected_cup(i, j, k, n, MINI));
                }
                _ => assert!(red.is_zero(), "{y}"),
            }
        }
    }

    #[test]
    fn kuranishi_at_three() {
        let n = 3;
        let locus = kuranishi_quadratic_locus(n, MINI).unwrap();
        let ideal = ideal_generators(n, Flavor::Miniversal).unwrap();
        assert!(compare_spans(&locus.equations, &ideal).unwrap().equal());
        assert!(compare_classical_dgla(n, MINI).unwrap().equal());
        let gamma_312_1 = drop_diagonal(&gamma_unchecked(1, 2, 3, 1, n));
        let span = IdealSpan::new(&locus.equations).unwrap();
        assert!(span.contains(&gamma_312_1).unwrap());
    }

    #[test]
    fn full_route_at_three() {
        let rep = run(3, MINI).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let rep = run(3, DglaConfig { retain_diagonal: true }).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }
}
