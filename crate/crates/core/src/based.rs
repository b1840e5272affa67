//! Based algebras: commutative unital algebras with a fixed basis
//! `v_0 = 1, v_1, …, v_n`, their structure constants `s_{ij}^k`, the ideal
//! `𝔍̃` cutting them out, and the maps `π`, `ι` relating `𝔍̃` to `𝔍`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classical::{syzygy_certificate, syzygy_cubic};
use crate::error::{Error, Result};
use crate::gamma::{gamma_trace, ideal_generators, Flavor, IdealPresentation};
use crate::poly::{qi, render_rational, s_vars, sv, t_vars, tv, Poly, Rational, VarId, VarKind};
use crate::report::Report;
use crate::span::{IdealSpan, LinearSpan};

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::UnsupportedDimension { n, reason: "the ambient dimension must be at least 3" });
    }
    if n > crate::poly::MAX_N {
        return Err(Error::UnsupportedDimension { n, reason: "ambient dimension above 64" });
    }
    Ok(())
}

fn s(n: usize, i: usize, j: usize, k: usize) -> Poly {
    Poly::var(n, sv(i, j, k))
}

/// `γ̃_{ijk}^ℓ = Σ_{λ=0}^n s_{ij}^λ s_{kλ}^ℓ − s_{ik}^λ s_{jλ}^ℓ`.
pub fn gamma_tilde(i: usize, j: usize, k: usize, l: usize, n: usize) -> Poly {
    let mut out = Poly::zero(n);
    for lam in 0..=n {
        out += &(&s(n, i, j, lam) * &s(n, k, lam, l));
        out -= &(&s(n, i, k, lam) * &s(n, j, lam, l));
    }
    out
}

/// Generators of `𝔍̃`: commutativity, the unit relations, and `γ̃_{ijk}^ℓ`
/// for `j ≠ k`.
pub fn b_ideal_generators(n: usize) -> Result<IdealPresentation> {
    check_n(n)?;
    let mut cands = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                cands.push((format!("commutative({i},{j},{k})"), &s(n, i, j, k) - &s(n, j, i, k)));
            }
        }
    }
    for i in 0..=n {
        cands.push((format!("unit({i})"), &s(n, 0, i, i) - &Poly::one(n)));
    }
    for i in 0..=n {
        for j in (0..=n).filter(|&j| j != i) {
            cands.push((format!("unit_off({i},{j})"), s(n, 0, i, j)));
        }
    }
    for i in 0..=n {
        for j in 0..=n {
            for k in (0..=n).filter(|&k| k != j) {
                for l in 0..=n {
                    cands.push((format!("gamma~({i},{j},{k},{l})"), gamma_tilde(i, j, k, l, n)));
                }
            }
        }
    }
    Ok(IdealPresentation::from_candidates(n, Flavor::BasedAlgebra, s_vars(n), cands))
}

/// A multiplication table `v_i·v_j = Σ_k s_{ij}^k v_k` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    n: usize,
    s: Vec<Rational>,
}

impl MulTable {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let m = self.n + 1;
        (i * m + j) * m + k
    }

    /// All entries zero.
    pub fn zeros(n: usize) -> Self {
        MulTable { n, s: vec![Rational::zero(); (n + 1).pow(3)] }
    }

    /// The table of `S/I` itself: unit rows and `v_i v_j = 0` for `i, j ≥ 1`.
    pub fn square_zero(n: usize) -> Self {
        let mut t = MulTable::zeros(n);
        t.set_unit_rows();
        t
    }

    fn set_unit_rows(&mut self) {
        for i in 0..=self.n {
            self.set(0, i, i, Rational::one());
            self.set(i, 0, i, Rational::one());
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> Rational) -> Self {
        let mut t = MulTable::zeros(n);
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.s[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let at = self.idx(i, j, k);
        self.s[at] = v;
    }

    /// Checks commutativity and that `v_0` is the identity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    if self.get(i, j, k) != self.get(j, i, k) {
                        return Err(Error::MalformedTable(format!("s({i},{j},{k}) != s({j},{i},{k})")));
                    }
                }
            }
            for k in 0..=n {
                let want = if k == i { Rational::one() } else { Rational::zero() };
                if self.get(0, i, k) != &want {
                    return Err(Error::MalformedTable(format!("v_0 is not the identity at s(0,{i},{k})")));
                }
            }
        }
        Ok(())
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let m = self.n + 1;
        let mut out = vec![Rational::zero(); m];
        for (a, ua) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let uv = ua * vb;
                for (c, slot) in out.iter_mut().enumerate() {
                    let e = self.get(a, b, c);
                    if !e.is_zero() {
                        *slot += &uv * e;
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.n + 1];
        v[i] = Rational::one();
        v
    }

    /// `s` as a point of the `s`-coordinate space.
    pub fn assignment(&self) -> BTreeMap<VarId, Rational> {
        s_vars(self.n)
            .into_iter()
            .map(|v| {
                let (i, j, k) = v.triple();
                (v, self.get(i, j, k).clone())
            })
            .collect()
    }

    /// `{"n": n, "s": s[i][j][k]}` with entries as rational strings.
    pub fn to_json(&self) -> Value {
        let m = self.n + 1;
        let s: Vec<Vec<Vec<String>>> = (0..m)
            .map(|i| (0..m).map(|j| (0..m).map(|k| render_rational(self.get(i, j, k))).collect()).collect())
            .collect();
        json!({ "n": self.n, "s": s })
    }
}

/// `(v_j·v_i)·v_k − v_j·(v_i·v_k)` for every triple, as coordinate vectors.
pub fn associativity_residual(table: &MulTable) -> Result<BTreeMap<(usize, usize, usize), Vec<Rational>>> {
    table.validate()?;
    let m = table.n + 1;
    let triples: Vec<(usize, usize, usize)> =
        (0..m).flat_map(|i| (0..m).flat_map(move |j| (0..m).map(move |k| (i, j, k)))).collect();
    Ok(triples
        .into_par_iter()
        .map(|(i, j, k)| {
            let (vi, vj, vk) = (table.basis(i), table.basis(j), table.basis(k));
            let left = table.mul(&table.mul(&vj, &vi), &vk);
            let right = table.mul(&vj, &table.mul(&vi, &vk));
            let diff = left.iter().zip(&right).map(|(a, b)| a - b).collect();
            ((i, j, k), diff)
        })
        .collect())
}

pub fn is_associative(table: &MulTable) -> Result<bool> {
    Ok(associativity_residual(table)?.values().all(|v| v.iter().all(Zero::is_zero)))
}

/// `π(s_{ij}^k)`: unit entries become constants, `s_{ij}^0` becomes
/// `−(1/(n−1)) Σ_λ γ_{ijλ}^λ` and everything else becomes `t_{ij}^k`.
pub fn pi_var(i: usize, j: usize, k: usize, n: usize) -> Poly {
    if i == 0 || j == 0 {
        let other = i.max(j);
        return if other == k { Poly::one(n) } else { Poly::zero(n) };
    }
    if k == 0 {
        return gamma_trace(i, j, n).scale(&-Rational::new(1.into(), ((n - 1) as i64).into()));
    }
    Poly::var(n, tv(i, j, k))
}

fn require_kind(p: &Poly, kind: VarKind, ring: &'static str) -> Result<()> {
    match p.vars().into_iter().find(|v| v.kind() != kind) {
        Some(v) => Err(Error::NotInRing { var: v.to_string(), ring }),
        None => Ok(()),
    }
}

/// The ring map `π` from the `s`-ring to the `t`-ring.
pub fn pi_map(p: &Poly, n: usize) -> Result<Poly> {
    require_kind(p, VarKind::S, "s-ring")?;
    Ok(p.substitute(|v| {
        let (i, j, k) = v.triple();
        Some(pi_var(i, j, k, n))
    }))
}

/// The section `ι: t_{ij}^k ↦ s_{ij}^k` (with `i ≤ j`).
pub fn iota_map(q: &Poly, n: usize) -> Result<Poly> {
    require_kind(q, VarKind::T, "t-ring")?;
    Ok(q.substitute(|v| {
        let (i, j, k) = v.triple();
        Some(s(n, i, j, k))
    }))
}

/// Reduction modulo the commutativity and unit relations: `s_{ij}^k` goes to
/// `s_{min,max}^k`, unit entries to `0` or `1`.
pub fn reduce_units(p: &Poly, n: usize) -> Poly {
    p.substitute(|v| {
        if !v.is_s() {
            return None;
        }
        let (i, j, k) = v.triple();
        if i == 0 || j == 0 {
            let other = i.max(j);
            return Some(if other == k { Poly::one(n) } else { Poly::zero(n) });
        }
        Some(s(n, i.min(j), i.max(j), k))
    })
}

/// Checks both inclusions `π(𝔍̃) ⊆ 𝔍` and `ι(𝔍) ⊆ 𝔍̃`, surjectivity of `ῑ`,
/// `π∘ι = id` and the sign symmetry of `𝔍`.
pub fn verify_theorem_bn(n: usize) -> Result<Report> {
    check_n(n)?;
    let mut rep = Report::new();
    for v in t_vars(n) {
        let back = pi_map(&iota_map(&Poly::var(n, v), n)?, n)?;
        let want = Poly::var(n, v);
        rep.zero("pi_iota_identity", v, &(&back - &want), back == want);
    }

    let based = b_ideal_generators(n)?;
    let ideal = ideal_generators(n, Flavor::Hilbert)?;
    let span = IdealSpan::new(&ideal)?;
    let nm1 = qi(n as i64 - 1);
    let pi_records: Vec<Vec<(String, String, String, bool)>> = based
        .generators
        .par_iter()
        .zip(&based.labels)
        .map(|(g, label)| -> Result<Vec<(String, String, String, bool)>> {
            let image = pi_map(g, n)?;
            let mut out = Vec::new();
            if image.is_zero() {
                out.push(("pi_in_J".into(), label.clone(), "0".into(), true));
                return Ok(out);
            }
            match span.membership(&image)? {
                crate::span::Membership::Member(_) => out.push(("pi_in_J".into(), label.clone(), "0".into(), true)),
                crate::span::Membership::NotMember { remainder } => {
                    out.push(("pi_in_J".into(), label.clone(), remainder.to_string(), false))
                }
            }
            if let Some((i, j, k)) = zero_target(label) {
                let scaled = image.scale(&nm1);
                let expected = -&syzygy_cubic(i, j, k, n);
                let diff = &scaled - &expected;
                out.push(("pi_zero_target_is_syzygy".into(), label.clone(), diff.to_string(), diff.is_zero()));
                let ok = syzygy_certificate(i, j, k, &span).is_ok();
                out.push((
                    "pi_zero_target_certificate".into(),
                    label.clone(),
                    if ok { "0" } else { "no certificate" }.into(),
                    ok,
                ));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    for (check, g, r, ok) in pi_records.into_iter().flatten() {
        rep.zero(&check, g, r, ok);
    }

    let reduced = LinearSpan::from_polys(n, &based.generators.iter().map(|g| reduce_units(g, n)).collect::<Vec<_>>());
    for (g, label) in ideal.generators.iter().zip(&ideal.labels) {
        let image = reduce_units(&iota_map(g, n)?, n);
        let r = reduced.normal_form(&image);
        rep.zero("iota_in_J_tilde", label, &r, r.is_zero());
    }
    for i in 1..=n {
        for j in i..=n {
            let target = &s(n, i, j, 0) - &iota_map(&pi_var(i, j, 0, n), n)?;
            let r = reduced.normal_form(&reduce_units(&target, n));
            rep.zero("iota_surjective", sv(i, j, 0), &r, r.is_zero());
        }
    }
    for (g, label) in ideal.generators.iter().zip(&ideal.labels) {
        let flipped = g.substitute(|v| Some(-&Poly::var(n, v)));
        rep.zero("sign_flip", label, &(&flipped - g), &flipped == g);
    }
    Ok(rep)
}

/// `(i,j,k)` for a label `gamma~(i,j,k,0)` with `i,j,k ≥ 1`.
fn zero_target(label: &str) -> Option<(usize, usize, usize)> {
    let inner = label.strip_prefix("gamma~(")?.strip_suffix(')')?;
    let idx: Vec<usize> = inner.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?;
    match idx[..] {
        [i, j, k, 0] if i >= 1 && j >= 1 && k >= 1 => Some((i, j, k)),
        _ => None,
    }
}

/// The algebra of the universal family at a point: `s_{ij}^k = −t_{ij}^k` and
/// `s_{ij}^0 = −Σ_k γ_{ijk}^k(t)/(n−1)` for `i, j ≥ 1`, with `v_0 = 1`.
/// Parameters absent from `tvals` are zero.
pub fn table_from_point(tvals: &BTreeMap<VarId, Rational>, n: usize) -> Result<MulTable> {
    check_n(n)?;
    let mut point: BTreeMap<VarId, Rational> = t_vars(n).into_iter().map(|v| (v, Rational::zero())).collect();
    for (v, c) in tvals {
        if !v.is_t() || !v.fits(n) {
            return Err(Error::NotInRing { var: v.to_string(), ring: "t-ring" });
        }
        point.insert(*v, c.clone());
    }
    let mut table = MulTable::square_zero(n);
    let nm1 = qi(n as i64 - 1);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                table.set(i, j, k, -point[&tv(i, j, k)].clone());
            }
            let trace = gamma_trace(i, j, n).eval_rational(&point).expect("every t assigned");
            table.set(i, j, 0, -trace / &nm1);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;
    use crate::poly::q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_table(n: usize, seed: u64) -> MulTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = MulTable::square_zero(n);
        for i in 1..=n {
            for j in i..=n {
                for k in 0..=n {
                    let v = q(rng.gen_range(-3..=3), rng.gen_range(1..=2));
                    t.set(i, j, k, v.clone());
                    t.set(j, i, k, v);
                }
            }
        }
        t
    }

    #[test]
    fn generator_families_present() {
        let b = b_ideal_generators(3).unwrap();
        let has = |p: &Poly| b.generators.iter().any(|g| g == p || g == &-p);
        assert!(has(&(&s(3, 0, 1, 1) - &Poly::one(3))));
        assert!(has(&(&s(3, 1, 2, 3) - &s(3, 2, 1, 3))));
        assert!(has(&gamma_tilde(1, 2, 3, 0, 3)));
        assert!(has(&gamma_tilde(0, 2, 3, 1, 3)) || gamma_tilde(0, 2, 3, 1, 3).is_zero());
    }

    #[test]
    fn pi_examples() {
        let n = 3;
        let want = gamma_trace(1, 2, n).scale(&q(-1, 2));
        assert_eq!(pi_map(&s(n, 1, 2, 0), n).unwrap(), want);
        assert_eq!(pi_map(&s(n, 0, 1, 1), n).unwrap(), Poly::one(n));
        assert_eq!(pi_map(&s(n, 0, 1, 2), n).unwrap(), Poly::zero(n));
        let t = Poly::var(n, tv(1, 2, 3));
        assert_eq!(pi_map(&iota_map(&t, n).unwrap(), n).unwrap(), t);
        assert!(pi_map(&t, n).is_err());
    }

    #[test]
    fn pi_of_distinct_gamma_tilde() {
        let n = 4;
        assert_eq!(pi_map(&gamma_tilde(1, 2, 3, 4, n), n).unwrap(), gamma(1, 2, 3, 4, n).unwrap());
        let diag = pi_map(&gamma_tilde(1, 2, 3, 3, n), n).unwrap();
        let want = &gamma(1, 2, 3, 3, n).unwrap() - &gamma_trace(1, 2, n).scale(&q(1, 3));
        assert_eq!(diag, want);
    }

    #[test]
    fn residual_is_gamma_tilde() {
        let n = 3;
        for seed in 0..4 {
            let t = random_table(n, seed);
            let point = t.assignment();
            for ((i, j, k), v) in associativity_residual(&t).unwrap() {
                for (l, r) in v.iter().enumerate() {
                    assert_eq!(gamma_tilde(i, j, k, l, n).eval_rational(&point).unwrap(), *r);
                }
            }
        }
    }

    #[test]
    fn simple_tables() {
        assert!(is_associative(&MulTable::square_zero(3)).unwrap());
        let mut t = MulTable::square_zero(3);
        t.set(1, 1, 1, qi(1));
        assert!(is_associative(&t).unwrap());
        let mut bad = MulTable::square_zero(3);
        bad.set(1, 2, 3, qi(1));
        assert!(matches!(associativity_residual(&bad), Err(Error::MalformedTable(_))));
    }

    fn generic_full(p: &BTreeMap<VarId, Rational>, n: usize) -> BTreeMap<VarId, Rational> {
        let mut full: BTreeMap<VarId, Rational> = t_vars(n).into_iter().map(|v| (v, Rational::zero())).collect();
        full.extend(p.clone());
        full
    }

    #[test]
    fn tables_from_points() {
        let n = 3;
        assert_eq!(table_from_point(&BTreeMap::new(), n).unwrap(), MulTable::square_zero(n));
        let point = BTreeMap::from([(tv(1, 1, 1), qi(-1))]);
        let t = table_from_point(&point, n).unwrap();
        assert_eq!(t.get(1, 1, 1), &qi(1));
        assert!((1..=n).all(|i| (1..=n).all(|j| t.get(i, j, 0).is_zero())));
        assert!(is_associative(&t).unwrap());
        let generic = BTreeMap::from([(tv(1, 1, 2), qi(1)), (tv(2, 2, 3), qi(1))]);
        assert_eq!(gamma(1, 1, 2, 3, n).unwrap().eval_rational(&generic_full(&generic, n)), Some(qi(1)));
        assert!(!is_associative(&table_from_point(&generic, n).unwrap()).unwrap());
    }

    #[test]
    fn theorem_at_three() {
        let rep = verify_theorem_bn(3).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        assert!(rep.records.iter().any(|r| r.check == "pi_zero_target_certificate"));
    }

    #[test]
    fn random_table_json_shape() {
        let t = random_table(3, 9);
        let v = t.to_json();
        assert_eq!(v["s"].as_array().unwrap().len(), 4);
        assert_eq!(v["s"][0][2][2], "1");
    }
}
