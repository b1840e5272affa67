//! Brute-force checks that do not go through the ideal `𝔍`: points coming
//! from actual configurations of `n+1` points, the dimension of the fiber of
//! the universal family, and agreement of three membership tests on samples.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::based::{is_associative, table_from_point};
use crate::error::{Error, Result};
use crate::gamma::{gamma_trace, ideal_generators, Flavor, IdealPresentation};
use crate::linalg::{solve_square, SparseEchelon, SparseVec};
use crate::linear::LinearSubspaceSpec;
use crate::poly::{q, qi, t_vars, tv, Rational, VarId};
use crate::report::Report;

/// A `t`-point as an assignment; absent parameters are zero.
pub type TPoint = BTreeMap<VarId, Rational>;

fn full_point(tvals: &TPoint, n: usize) -> TPoint {
    let mut p: TPoint = t_vars(n).into_iter().map(|v| (v, Rational::zero())).collect();
    p.extend(tvals.iter().map(|(v, c)| (*v, c.clone())));
    p
}

fn param(p: &TPoint, i: usize, j: usize, k: usize) -> Rational {
    p.get(&tv(i, j, k)).cloned().unwrap_or_else(Rational::zero)
}

/// `Σ_k γ_{ijk}^k(t)/(n−1)`, the constant term of the family relation for `x_i x_j`.
fn constant_term(point: &TPoint, i: usize, j: usize, n: usize) -> Rational {
    gamma_trace(i, j, n).eval_rational(point).expect("every t assigned") / qi(n as i64 - 1)
}

/// Whether every generator vanishes at the point.
pub fn vanishes_on(ideal: &IdealPresentation, tvals: &TPoint) -> bool {
    let point = full_point(tvals, ideal.n);
    ideal.generators.iter().all(|g| g.eval_rational(&point).is_some_and(|v| v.is_zero()))
}

/// The `t`-point of the coordinate ring of `n+1` points in `𝔸ⁿ`, written in
/// the basis `1, x_1, …, x_n`: `x_i x_j = −Σ_k t_{ij}^k x_k − c_{ij}`.
pub fn point_from_configuration(points: &[Vec<Rational>], n: usize) -> Result<TPoint> {
    if points.len() != n + 1 || points.iter().any(|p| p.len() != n) {
        return Err(Error::Inconsistent(format!("expected {} points in dimension {n}", n + 1)));
    }
    let eval: Vec<Vec<Rational>> =
        points.iter().map(|p| std::iter::once(Rational::one()).chain(p.iter().cloned()).collect()).collect();
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            pairs.push((i, j));
        }
    }
    let rhs: Vec<Vec<Rational>> =
        points.iter().map(|p| pairs.iter().map(|&(i, j)| &p[i - 1] * &p[j - 1]).collect()).collect();
    let coeffs = solve_square(&eval, &rhs).ok_or(Error::BasisCriterionFailure)?;
    let mut out = TPoint::new();
    for (col, &(i, j)) in pairs.iter().enumerate() {
        for k in 1..=n {
            out.insert(tv(i, j, k), -coeffs[k][col].clone());
        }
    }
    let full = full_point(&out, n);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        if coeffs[0][col] != -constant_term(&full, i, j, n) {
            return Err(Error::Inconsistent(format!("constant term of x{i}*x{j} disagrees with the family")));
        }
    }
    if !vanishes_on(&ideal_generators(n, Flavor::Hilbert)?, &out) {
        return Err(Error::Inconsistent("configuration point does not satisfy the equations".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCheck {
    pub dimension: usize,
    pub basis_ok: bool,
}

/// Dimension of `k[x]/J_t` where `J_t` is the family ideal at `tvals`.
///
/// Multiplication by `x_i` acts on `V = span(1, x_1, …, x_n)` through the
/// family relations; the quotient is `V/W` with `W` the smallest subspace
/// stable under every `x_i` that contains all commutator defects.
pub fn fiber_check(tvals: &TPoint, n: usize) -> FiberCheck {
    let point = full_point(tvals, n);
    let dim = n + 1;
    // ops[i][j] = x_i · (basis vector j)
    let mut ops: Vec<Vec<SparseVec<usize>>> = vec![Vec::new(); dim];
    for i in 1..=n {
        let mut cols = Vec::with_capacity(dim);
        cols.push(SparseVec::from([(i, Rational::one())]));
        for j in 1..=n {
            let mut v = SparseVec::new();
            let c = constant_term(&point, i, j, n);
            if !c.is_zero() {
                v.insert(0, -c);
            }
            for k in 1..=n {
                let t = param(&point, i, j, k);
                if !t.is_zero() {
                    v.insert(k, -t);
                }
            }
            cols.push(v);
        }
        ops[i] = cols;
    }
    let apply = |i: usize, v: &SparseVec<usize>| -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (b, c) in v {
            for (k, e) in &ops[i][*b] {
                let slot = out.entry(*k).or_insert_with(Rational::zero);
                *slot += c * e;
            }
        }
        out.retain(|_, c: &mut Rational| !c.is_zero());
        out
    };
    let mut w = SparseEchelon::<usize>::new(false);
    let mut queue = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            for m in 0..dim {
                let e = SparseVec::from([(m, Rational::one())]);
                let mut d = apply(i, &apply(j, &e));
                for (k, c) in apply(j, &apply(i, &e)) {
                    let slot = d.entry(k).or_insert_with(Rational::zero);
                    *slot -= c;
                }
                d.retain(|_, c| !c.is_zero());
                queue.push(d);
            }
        }
    }
    while let Some(v) = queue.pop() {
        if w.rank() == dim {
            break;
        }
        if w.insert(&v) {
            for i in 1..=n {
                queue.push(apply(i, &v));
            }
        }
    }
    FiberCheck { dimension: dim - w.rank(), basis_ok: w.rank() == 0 }
}

fn small_rational(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-10..=10), rng.gen_range(1..=10))
}

/// How a sample was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    /// From `n+1` random points in general position.
    Configuration,
    /// A random point of a random `L_{A,B}`.
    Subspace,
    /// Random values on a few parameters, chosen off the variety.
    Generic,
}

impl SampleKind {
    /// Whether samples of this kind lie on the variety by construction.
    pub fn expected_member(self) -> bool {
        !matches!(self, SampleKind::Generic)
    }
}

impl std::fmt::Display for SampleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SampleKind::Configuration => "configuration",
            SampleKind::Subspace => "subspace",
            SampleKind::Generic => "generic",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub kind: SampleKind,
    pub tvals: TPoint,
}

fn configuration_sample(n: usize, rng: &mut ChaCha8Rng) -> Result<TPoint> {
    loop {
        let pts: Vec<Vec<Rational>> = (0..=n).map(|_| (0..n).map(|_| small_rational(rng)).collect()).collect();
        match point_from_configuration(&pts, n) {
            Err(Error::BasisCriterionFailure) => continue,
            other => return other,
        }
    }
}

fn subspace_sample(n: usize, rng: &mut ChaCha8Rng) -> TPoint {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    let a_len = rng.gen_range(2..n);
    let b_len = rng.gen_range(1..=n - a_len);
    let spec = LinearSubspaceSpec::new(n, idx[..a_len].iter().copied(), idx[a_len..a_len + b_len].iter().copied())
        .expect("disjoint by construction");
    spec.free_vars().into_iter().map(|v| (v, small_rational(rng))).collect()
}

fn generic_sample(n: usize, rng: &mut ChaCha8Rng, ideal: &IdealPresentation) -> TPoint {
    let vars = t_vars(n);
    loop {
        let count = rng.gen_range(2..=2 * n);
        let p: TPoint = vars.choose_multiple(rng, count).map(|v| (*v, small_rational(rng))).collect();
        if !vanishes_on(ideal, &p) {
            return p;
        }
    }
}

/// `count` samples cycling through configuration, subspace and generic
/// kinds; sample `k` depends only on `(seed, k)`.
pub fn sample_points(n: usize, seed: u64, count: usize) -> Result<Vec<Sample>> {
    let ideal = ideal_generators(n, Flavor::Hilbert)?;
    (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let kind = [SampleKind::Configuration, SampleKind::Subspace, SampleKind::Generic][k % 3];
            let tvals = match kind {
                SampleKind::Configuration => configuration_sample(n, &mut rng)?,
                SampleKind::Subspace => subspace_sample(n, &mut rng),
                SampleKind::Generic => generic_sample(n, &mut rng, &ideal),
            };
            Ok(Sample { kind, tvals })
        })
        .collect()
}

/// The three membership verdicts for one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub symbolic: bool,
    pub associative: bool,
    pub fiber: FiberCheck,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        self.symbolic == self.associative && self.associative == self.fiber.basis_ok
    }
}

pub fn verdicts(ideal: &IdealPresentation, tvals: &TPoint) -> Result<Verdicts> {
    let n = ideal.n;
    Ok(Verdicts {
        symbolic: vanishes_on(ideal, tvals),
        associative: is_associative(&table_from_point(tvals, n)?)?,
        fiber: fiber_check(tvals, n),
    })
}

/// Agreement of the symbolic, associativity and fiber tests on seeded samples.
pub fn agreement(n: usize, seed: u64, count: usize) -> Result<Report> {
    let ideal = ideal_generators(n, Flavor::Hilbert)?;
    let samples = sample_points(n, seed, count)?;
    let results: Vec<Verdicts> = samples.par_iter().map(|s| verdicts(&ideal, &s.tvals)).collect::<Result<_>>()?;
    let mut rep = Report::new();
    for (k, (s, v)) in samples.iter().zip(&results).enumerate() {
        let label = format!("sample {k} ({})", s.kind);
        let residual = format!(
            "symbolic={} associative={} fiber_dim={} basis_ok={}",
            v.symbolic, v.associative, v.fiber.dimension, v.fiber.basis_ok
        );
        rep.zero("oracle_agreement", &label, &residual, v.agree());
        rep.zero("oracle_expected", &label, &residual, v.symbolic == s.kind.expected_member());
        if v.symbolic {
            rep.zero("oracle_fiber_dim", &label, v.fiber.dimension, v.fiber.dimension == n + 1);
        }
    }
    Ok(rep)
}
