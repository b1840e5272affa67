//! `hilbworst`: generators, universal family, verification suites, linear
//! subspaces and multiplication tables from the command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use hilbworst::based::{associativity_residual, table_from_point};
use hilbworst::classical::universal_family;
use hilbworst::gamma::{alternate_generators, ideal_generators, Flavor};
use hilbworst::linear::{max_linear_dim, optimal_specs, LinearSubspaceSpec};
use hilbworst::poly::{parse_rational, render_rational, PolyStyle, Rational, VarId};
use hilbworst::report::Report;
use hilbworst::taylor::tangent_dims;
use hilbworst::verify::{self, Route, VerifyOptions};

const SCHEMA: &str = "hilbworst/1";

#[derive(Parser)]
#[command(name = "hilbworst", version, about = "Local equations of Hilb_{n+1}(A^n) at the square of the maximal ideal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Cas,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    Hilbert,
    Miniversal,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Hilbert => Flavor::Hilbert,
            FlavorArg::Miniversal => Flavor::Miniversal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Classical,
    Dgla,
    Based,
    Oracle,
    All,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Classical => Route::Classical,
            RouteArg::Dgla => Route::Dgla,
            RouteArg::Based => Route::Based,
            RouteArg::Oracle => Route::Oracle,
            RouteArg::All => Route::All,
        }
    }
}

#[derive(Args, Clone)]
struct Output {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Shorthand for `--format json`
    #[arg(long)]
    json: bool,
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }

    fn style(&self) -> PolyStyle {
        if self.format() == Format::Cas {
            PolyStyle::Cas
        } else {
            PolyStyle::Canonical
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the generators of the ideal of local equations
    Gens {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "hilbert")]
        flavor: FlavorArg,
        /// Use the presentation with `γ_{ijk}^k − γ_{jiℓ}^ℓ`
        #[arg(long)]
        alternate: bool,
        /// Include a label for each generator
        #[arg(long)]
        labels: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the generators of the universal family
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "hilbert")]
        flavor: FlavorArg,
        #[command(flatten)]
        output: Output,
    },
    /// Run verification suites; exits 1 if any check fails
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        route: RouteArg,
        #[arg(long, value_enum)]
        flavor: Option<FlavorArg>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        /// Also print every passing record in text mode
        #[arg(long)]
        all_records: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Maximal coordinate linear subspaces inside the chart
    Subspaces {
        #[arg(long)]
        n: usize,
        /// Enumerate optimal (A, B) pairs
        #[arg(long)]
        list: bool,
        /// Maximum number of pairs listed
        #[arg(long, default_value_t = 20)]
        limit: usize,
        /// Also restrict every generator to each listed subspace
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Multiplication table of the fiber over a t-point, with its associativity residual
    Table {
        /// JSON file `{"n": n, "t": [[i, j, k, "p/q"], ...]}`; `-` reads stdin
        #[arg(long)]
        input: Option<PathBuf>,
        /// Ambient dimension when no input is given (the base point)
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Bundle generators, family and dimension counts for external tools
    Export {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn polys_text(polys: &[String], labels: Option<&[String]>) -> String {
    let mut s = String::new();
    for (i, p) in polys.iter().enumerate() {
        match labels {
            Some(l) => s.push_str(&format!("{}\t{p}\n", l[i])),
            None => s.push_str(&format!("{p}\n")),
        }
    }
    s
}

fn with_schema(command: &str, mut body: Value) -> String {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    let mut s = serde_json::to_string_pretty(&body).expect("json");
    s.push('\n');
    s
}

fn gens(n: usize, flavor: Flavor, alternate: bool, labels: bool, output: &Output) -> Result<()> {
    let ideal = if alternate { alternate_generators(n, flavor)? } else { ideal_generators(n, flavor)? };
    match output.format() {
        Format::Json => output.emit(&with_schema("gens", ideal.to_json(output.style(), labels))),
        _ => {
            let rendered: Vec<String> = ideal.generators.iter().map(|g| g.render(output.style())).collect();
            output.emit(&polys_text(&rendered, labels.then_some(&ideal.labels[..])))
        }
    }
}

fn family(n: usize, flavor: Flavor, output: &Output) -> Result<()> {
    let fam = universal_family(n, flavor)?;
    let rendered: Vec<String> = fam.iter().map(|(_, p)| p.render(output.style())).collect();
    match output.format() {
        Format::Json => {
            let pairs: Vec<[usize; 2]> = fam.iter().map(|(p, _)| [p.i(), p.j()]).collect();
            output.emit(&with_schema(
                "family",
                json!({ "n": n, "flavor": flavor, "pairs": pairs, "generators": rendered }),
            ))
        }
        _ => output.emit(&polys_text(&rendered, None)),
    }
}

fn report_text(rep: &Report, all_records: bool) -> String {
    let mut s = String::new();
    for (check, pass, fail) in rep.summary() {
        let status = if fail == 0 { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status} {check}: {pass} passed, {fail} failed\n"));
    }
    for r in &rep.records {
        if all_records || !r.passed() {
            s.push_str(&format!("  {:?} {} [{}]: {}\n", r.status, r.check, r.generator, r.residual));
        }
    }
    s
}

fn report_json(rep: &Report) -> Value {
    let summary: Vec<Value> =
        rep.summary().into_iter().map(|(c, p, f)| json!({ "check": c, "passed": p, "failed": f })).collect();
    json!({ "passed": rep.passed(), "summary": summary, "records": rep.records })
}

/// Returns whether every check passed.
fn verify_cmd(opts: VerifyOptions, all_records: bool, output: &Output) -> Result<bool> {
    let rep = verify::run(&opts)?;
    match output.format() {
        Format::Json => {
            let mut body = report_json(&rep);
            body["n"] = json!(opts.n);
            body["route"] = json!(opts.route);
            body["seed"] = json!(opts.seed);
            output.emit(&with_schema("verify", body))?;
        }
        _ => output.emit(&report_text(&rep, all_records))?,
    }
    if let Some(f) = rep.first_failure() {
        eprintln!("first failure: {} on {}: {}", f.check, f.generator, f.residual);
    }
    Ok(rep.passed())
}

fn subspaces(n: usize, list: bool, limit: usize, check: bool, output: &Output) -> Result<bool> {
    let ml = max_linear_dim(n)?;
    let specs = if list || check { optimal_specs(n, limit)? } else { Vec::new() };
    let mut ok = ml.formula_matches();
    let mut checks = Vec::new();
    if check {
        for s in &specs {
            let rep = hilbworst::linear::containment_check(s)?;
            ok &= rep.passed();
            checks.push(rep.passed());
        }
    }
    match output.format() {
        Format::Json => {
            let mut body = ml.to_json();
            if list || check {
                body["subspaces"] = specs.iter().map(LinearSubspaceSpec::to_json).collect();
            }
            if check {
                body["contained"] = json!(checks);
            }
            output.emit(&with_schema("subspaces", body))?;
        }
        _ => {
            let mut s = format!(
                "n = {n}\nmax linear dim = {} (a in {:?}, formula {})\nsmoothing component dim = {}\nlinear exceeds smoothing: {}\nm = {}, at least {} such subspaces\n",
                ml.dim,
                ml.argmax,
                render_rational(&ml.formula),
                ml.smoothing_dim(),
                ml.exceeds_smoothing(),
                ml.m,
                ml.count_lower_bound
            );
            for (i, sp) in specs.iter().enumerate() {
                let mark = checks.get(i).map(|c| if *c { " contained" } else { " NOT contained" }).unwrap_or("");
                s.push_str(&format!("A = {:?}, B = {:?}{mark}\n", sp.a(), sp.b()));
            }
            output.emit(&s)?;
        }
    }
    Ok(ok)
}

#[derive(Deserialize)]
struct TableInput {
    n: usize,
    #[serde(default)]
    t: Vec<(usize, usize, usize, String)>,
}

fn read_table_input(path: &Path) -> Result<(usize, BTreeMap<VarId, Rational>)> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let input: TableInput = serde_json::from_str(&text).context("parsing table input")?;
    let mut point = BTreeMap::new();
    for (i, j, k, c) in input.t {
        let v = VarId::t(input.n, i, j, k)?;
        let c = parse_rational(&c)?;
        point.insert(v, c);
    }
    Ok((input.n, point))
}

fn table(input: Option<&Path>, n: Option<usize>, output: &Output) -> Result<bool> {
    let (n, point) = match (input, n) {
        (Some(p), _) => read_table_input(p)?,
        (None, Some(n)) => (n, BTreeMap::new()),
        (None, None) => bail!(UsageError("table needs --input or --n".into())),
    };
    let table = table_from_point(&point, n)?;
    let residual = associativity_residual(&table)?;
    let bad: Vec<Value> = residual
        .iter()
        .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
        .map(|((i, j, k), v)| json!({ "triple": [i, j, k], "residual": v.iter().map(render_rational).collect::<Vec<_>>() }))
        .collect();
    let associative = bad.is_empty();
    match output.format() {
        Format::Json => {
            let mut body = table.to_json();
            body["associative"] = json!(associative);
            body["nonzero_residuals"] = json!(bad);
            output.emit(&with_schema("table", body))?;
        }
        _ => {
            let mut s = String::new();
            for i in 0..=n {
                for j in 0..=n {
                    let row: Vec<String> = (0..=n).map(|k| render_rational(table.get(i, j, k))).collect();
                    s.push_str(&format!("v{i}*v{j} = [{}]\n", row.join(", ")));
                }
            }
            s.push_str(&format!("associative: {associative}\n"));
            for b in &bad {
                s.push_str(&format!("  residual {} = {}\n", b["triple"], b["residual"]));
            }
            output.emit(&s)?;
        }
    }
    Ok(associative)
}

fn export(n: usize, output: &Output) -> Result<()> {
    let style = output.style();
    let render = |ps: &[hilbworst::poly::Poly]| ps.iter().map(|p| p.render(style)).collect::<Vec<_>>();
    let hilb = ideal_generators(n, Flavor::Hilbert)?;
    let mini = ideal_generators(n, Flavor::Miniversal)?;
    let fam: Vec<_> = universal_family(n, Flavor::Hilbert)?.into_iter().map(|(_, p)| p).collect();
    let dims = tangent_dims(n)?;
    match output.format() {
        Format::Json => output.emit(&with_schema(
            "export",
            json!({
                "n": n,
                "ideal": render(&hilb.generators),
                "ideal_miniversal": render(&mini.generators),
                "family": render(&fam),
                "tangent": dims,
            }),
        )),
        _ => {
            let list = |xs: Vec<String>| xs.join(",\n  ");
            let s = format!(
                "n = {n};\nJ = [\n  {}\n];\nJmini = [\n  {}\n];\nF = [\n  {}\n];\n",
                list(render(&hilb.generators)),
                list(render(&mini.generators)),
                list(render(&fam)),
            );
            output.emit(&s)
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gens { n, flavor, alternate, labels, output } => {
            gens(n, flavor.into(), alternate, labels, &output).map(|_| true)
        }
        Command::Family { n, flavor, output } => family(n, flavor.into(), &output).map(|_| true),
        Command::Verify { n, route, flavor, seed, samples, all_records, output } => {
            let opts = VerifyOptions { n, flavor: flavor.map(Into::into), route: route.into(), seed, samples };
            verify_cmd(opts, all_records, &output)
        }
        Command::Subspaces { n, list, limit, check, output } => subspaces(n, list, limit, check, &output),
        Command::Table { input, n, output } => table(input.as_deref(), n, &output),
        Command::Export { n, output } => export(n, &output).map(|_| true),
    }
}

/// Errors caused by the request rather than by a failed computation.
fn is_usage(err: &anyhow::Error) -> bool {
    if err.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        err.downcast_ref::<hilbworst::Error>(),
        Some(
            hilbworst::Error::UnsupportedDimension { .. }
                | hilbworst::Error::IndexOutOfRange { .. }
                | hilbworst::Error::Parse { .. }
                | hilbworst::Error::OverlappingSubsets(_)
                | hilbworst::Error::MalformedTable(_)
                | hilbworst::Error::NotInRing { .. }
        )
    ) || err.downcast_ref::<serde_json::Error>().is_some()
        || err.downcast_ref::<std::io::Error>().is_some()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
