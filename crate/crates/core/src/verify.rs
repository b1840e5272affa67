//! End-to-end verification suites grouped by route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{alternate_generators, cyclic_sum_check, gamma, ideal_generators, Flavor};
use crate::report::Report;
use crate::span::compare_spans;
use crate::taylor::{obstruction_degree_check, tangent_dims};
use crate::{based, classical, dgla, oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Classical,
    Dgla,
    Based,
    Oracle,
    All,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Route::Classical),
            "dgla" => Ok(Route::Dgla),
            "based" => Ok(Route::Based),
            "oracle" => Ok(Route::Oracle),
            "all" => Ok(Route::All),
            other => Err(Error::Parse { position: 0, message: format!("unknown route '{other}'") }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub n: usize,
    /// Parameter convention; the classical route defaults to the full
    /// `t`-ring and the derivation route to `t_{ii}^i = 0`.
    pub flavor: Option<Flavor>,
    pub route: Route,
    pub seed: u64,
    pub samples: usize,
}

/// `γ` antisymmetry and cyclic sum on every index tuple, the two generator
/// presentations, the tangent dimensions and the degree of obstructions.
pub fn preliminaries(n: usize, flavor: Flavor) -> Result<Report> {
    let mut rep = Report::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let tag = format!("({i},{j},{k},{l})");
                    let anti = &gamma(i, j, k, l, n)? + &gamma(i, k, j, l, n)?;
                    rep.zero("gamma.antisymmetry", &tag, &anti, anti.is_zero());
                    let cyc = cyclic_sum_check(i, j, k, l, n)?;
                    rep.zero("gamma.cyclic_sum", &tag, &cyc, cyc.is_zero());
                }
            }
        }
    }
    let (main, alt) = (ideal_generators(n, flavor)?, alternate_generators(n, flavor)?);
    let cmp = compare_spans(&main, &alt)?;
    for f in cmp.failures(&main, &alt) {
        rep.zero("generator_replacement", f, "not certified", false);
    }
    rep.zero("generator_replacement", format!("rank {} vs {}", cmp.rank_left, cmp.rank_right), 0, cmp.equal());
    let dims = tangent_dims(n)?;
    let want_hom = n * n * (n + 1) / 2;
    let want_t1 = (n + 2) * n * (n - 1) / 2;
    rep.zero("tangent.hom_dim", want_hom, dims.hom_dim, dims.hom_dim == want_hom);
    rep.zero("tangent.t1_dim", want_t1, dims.t1_dim, dims.t1_dim == want_t1);
    rep.zero(
        "tangent.theta_basis",
        dims.theta_rank,
        dims.hom_dim,
        dims.thetas_in_kernel && dims.theta_rank == dims.hom_dim,
    );
    for (idx, v) in obstruction_degree_check(n)? {
        rep.zero("obstruction.linear_syzygy", format!("{idx:?}"), &v, v.is_zero());
    }
    Ok(rep)
}

pub fn run(opts: &VerifyOptions) -> Result<Report> {
    let VerifyOptions { n, flavor, route, seed, samples } = *opts;
    let mut rep = Report::new();
    let all = route == Route::All;
    if flavor == Some(Flavor::BasedAlgebra) {
        return Err(Error::Parse {
            position: 0,
            message: "verify runs in the t-ring; use hilbert or miniversal".into(),
        });
    }
    if all || route == Route::Classical {
        let flavor = flavor.unwrap_or(Flavor::Hilbert);
        rep.extend(preliminaries(n, flavor)?);
        rep.extend(classical::run(n, flavor)?);
    }
    if all || route == Route::Dgla {
        let cfg = dgla::DglaConfig { retain_diagonal: flavor == Some(Flavor::Hilbert) };
        rep.extend(dgla::run(n, cfg)?);
    }
    if all || route == Route::Based {
        rep.extend(based::verify_theorem_bn(n)?);
    }
    if all || route == Route::Oracle {
        rep.extend(oracle::agreement(n, seed, samples)?);
    }
    Ok(rep)
}
