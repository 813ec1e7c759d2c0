//! The `ocs` command line.
//!
//! Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error or
//! unreadable/malformed input. Output files are written only on success.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cache::{cached, Cache};
use crate::dowling::{
    build_poset, count_elements_species, enumerate_elements, factor_interval, DowlingElement, DowlingSpec,
    DEFAULT_CAP,
};
use crate::error::Error;
use crate::homology::{reduced_homology, whitney_homology};
use crate::io::{read_spec, stem};
use crate::poset::{Poset, PosetJson};
use crate::rational::{fmt as fmt_rat, Rational};
use crate::series::{bm_betti, e1_table, euler_closed_form, euler_series, SpaceInput, DEFAULT_TRUNCATION};
use crate::stability::{iterate_report, verify_generator_bound, Classification, Variant};
use crate::symm::{decompose, decomposition_json, stable_multiplicity_check, whitney_character};

#[derive(Debug, Parser)]
#[command(name = "ocs", version, about = "Exact combinatorics of orbit configuration spaces")]
pub struct Cli {
    /// Output path; `-` or absent writes to standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dowling posets D_n^T(G,S).
    #[command(subcommand)]
    Dowling(DowlingCmd),
    /// Generic finite posets given as JSON.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// E1 page, Borel-Moore Betti numbers and Euler characteristics.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Generation-locus stabilization.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Symmetric-group decompositions.
    #[command(subcommand)]
    Rep(RepCmd),
}

#[derive(Debug, Args)]
pub struct DowlingArgs {
    /// G-set spec or space spec.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Maximum number of elements to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive_usize)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum DowlingCmd {
    /// Enumerate the poset and print it with element labels.
    Build(DowlingArgs),
    /// Element count by enumeration and by the species formula.
    Count(DowlingArgs),
    /// Factor the lower interval below an element.
    Interval {
        #[command(flatten)]
        args: DowlingArgs,
        /// Canonical element string, e.g. `0:1,1:2|Z{3:0}`.
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, Args)]
pub struct PosetArgs {
    #[arg(long)]
    pub poset: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum PosetCmd {
    /// Möbius values μ(from, x) for every x.
    Mobius {
        #[command(flatten)]
        args: PosetArgs,
        /// Defaults to the unique minimum.
        #[arg(long)]
        from: Option<usize>,
    },
    /// Reduced homology of the order complex.
    Homology {
        #[command(flatten)]
        args: PosetArgs,
        /// Remove the bottom and top first.
        #[arg(long)]
        proper_part: bool,
    },
    /// Whitney homology by rank and degree.
    Whitney(PosetArgs),
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    /// Space spec (JSON with `betti`).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION, value_parser = positive_usize)]
    pub nmax: usize,
}

#[derive(Debug, Subcommand)]
pub enum ConfigCmd {
    /// Bigraded E1 dimensions for n ≤ nmax.
    E1(SpaceArgs),
    /// Borel-Moore Betti numbers for n ≤ nmax.
    Betti(SpaceArgs),
    /// Compactly supported Euler characteristics for n ≤ nmax.
    Euler {
        #[command(flatten)]
        args: SpaceArgs,
        /// Compare with the closed-form product (free, unpunctured spaces).
        #[arg(long)]
        check_closed_form: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Left,
    Right,
    Bottom,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Left => Variant::Left,
            VariantArg::Right => Variant::Right,
            VariantArg::Bottom => Variant::Bottom,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum StabilityCmd {
    /// Classify successive generators of the locus.
    Report {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Left)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        steps: usize,
        /// Check generator bounds of absolute steps by series division.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION, value_parser = positive_usize)]
        nmax: usize,
        /// Largest diagonal offset j to verify.
        #[arg(long, default_value_t = 3)]
        j: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ActionArg {
    Sym,
}

#[derive(Debug, Subcommand)]
pub enum RepCmd {
    /// Decompose a rank-r Whitney character under S_n.
    Decompose {
        /// Poset whose labels are canonical partition-lattice elements.
        #[arg(long, conflicts_with = "spec")]
        poset: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ActionArg::Sym)]
        action: ActionArg,
        /// G-set or space spec; requires --n.
        #[arg(long, requires = "n")]
        spec: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive_usize)]
        cap: usize,
    },
    /// Multiplicity stability of rank-r Whitney characters across a window.
    Stability {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = parse_window)]
        window: (usize, usize),
        #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive_usize)]
        cap: usize,
    },
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: usize = a.parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a == 0 || a > b {
        return Err("window must satisfy 1 ≤ a ≤ b".into());
    }
    Ok((a, b))
}

/// A failure, tagged with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Input errors exit with 2.
fn input<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

pub enum Output {
    Json(Value),
    Text(String),
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => match emit(cli.out.as_deref(), out) {
            Ok(()) => 0,
            Err(e) => {
                report(&Error::Io(e.to_string()));
                1
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", json!({"error": "usage", "message": msg}));
            2
        }
        Err(Failure::Domain(e)) => {
            report(&e);
            1
        }
    }
}

fn report(e: &Error) {
    eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
}

fn emit(out: Option<&Path>, value: Output) -> std::io::Result<()> {
    let text = match value {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).map_err(std::io::Error::other)?;
            s.push('\n');
            s
        }
        Output::Text(s) => s,
    };
    match out {
        None => std::io::stdout().lock().write_all(text.as_bytes()),
        Some(p) if p == Path::new("-") => std::io::stdout().lock().write_all(text.as_bytes()),
        Some(p) => std::fs::write(p, text),
    }
}

pub fn execute(cli: &Cli) -> Result<Output, Failure> {
    let cache = Cache::from_env();
    match &cli.command {
        Command::Dowling(cmd) => dowling(cmd),
        Command::Poset(cmd) => poset(cmd, cache.as_ref()),
        Command::Config(cmd) => config(cmd, cli.format),
        Command::Stability(cmd) => stability(cmd),
        Command::Rep(cmd) => rep(cmd),
    }
}

fn load_dowling(args: &DowlingArgs) -> Result<DowlingSpec, Failure> {
    let gset = input(read_spec(&args.spec).and_then(|s| s.gset()))?;
    input(DowlingSpec::new(gset, args.n))
}

fn load_space(path: &Path) -> Result<SpaceInput, Failure> {
    input(read_spec(path).and_then(|s| s.space(&stem(path))))
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    let text = input(std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display()))))?;
    let json: PosetJson = input(serde_json::from_str(&text).map_err(Error::from))?;
    input(Poset::from_json(&json))
}

fn dowling(cmd: &DowlingCmd) -> Result<Output, Failure> {
    match cmd {
        DowlingCmd::Build(args) => {
            let spec = load_dowling(args)?;
            let dp = build_poset(&spec, args.cap)?;
            Ok(Output::Json(serde_json::to_value(dp.poset.to_json()).map_err(Error::from)?))
        }
        DowlingCmd::Count(args) => {
            let spec = load_dowling(args)?;
            let enumerated = enumerate_elements(&spec, args.cap)?.len();
            let species = count_elements_species(&spec)?;
            Ok(Output::Json(json!({
                "n": spec.n(),
                "enumerated": enumerated,
                "species": species.to_string(),
                "agree": species == enumerated.into(),
            })))
        }
        DowlingCmd::Interval { args, element } => {
            let spec = load_dowling(args)?;
            let e = input(DowlingElement::parse(&spec, element))?;
            let dp = build_poset(&spec, args.cap)?;
            let idx = dp.index_of(&e).ok_or_else(|| Error::InvalidElement(element.clone()))?;
            let factors = factor_interval(&spec, &e)?;
            let group = spec.group();
            let mut posets = Vec::new();
            let mut described = Vec::new();
            for f in &factors {
                posets.push(f.poset(group, args.cap)?);
                described.push(match f {
                    crate::dowling::IntervalFactor::Partition { ground } => {
                        json!({"kind": "partition", "ground": ground.iter().map(|i| i + 1).collect::<Vec<_>>()})
                    }
                    crate::dowling::IntervalFactor::Dowling { ground, stabilizer, in_t, .. } => json!({
                        "kind": "dowling",
                        "ground": ground.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "stabilizer": stabilizer.elements(),
                        "inT": in_t,
                    }),
                });
            }
            let interval = dp.poset.lower_interval(idx);
            let product = Poset::product_all(posets.iter());
            Ok(Output::Json(json!({
                "element": e.canonical_string(),
                "intervalSize": interval.len(),
                "factors": described,
                "productSize": product.len(),
                "isomorphic": interval.is_isomorphic(&product).is_some(),
            })))
        }
    }
}

fn poset(cmd: &PosetCmd, cache: Option<&Cache>) -> Result<Output, Failure> {
    match cmd {
        PosetCmd::Mobius { args, from } => {
            let p = load_poset(&args.poset)?;
            let a = match from {
                Some(a) if *a < p.len() => *a,
                Some(a) => return Err(Failure::Usage(format!("element {a} is out of range"))),
                None => p.bottom().ok_or_else(|| Error::InvalidPoset("no unique minimum; pass --from".into()))?,
            };
            let v = cached(cache, &format!("mobius:{a}"), &p, || {
                let row = p.mobius_row(a);
                let values: Vec<Value> =
                    (0..p.len()).filter(|&x| p.leq(a, x)).map(|x| json!({"element": x, "mu": row[x]})).collect();
                Ok(json!({"from": a, "values": values}))
            })?;
            Ok(Output::Json(v))
        }
        PosetCmd::Homology { args, proper_part } => {
            let p = load_poset(&args.poset)?;
            let op = if *proper_part { "homology:proper" } else { "homology" };
            let v = cached(cache, op, &p, || {
                let target = if *proper_part { p.proper_part()? } else { p.clone() };
                let h = reduced_homology(&target)?;
                Ok(json!({
                    "reducedBetti": h,
                    "eulerCharacteristic": h.euler_characteristic(),
                    "concentratedDegree": h.concentrated_degree(),
                }))
            })?;
            Ok(Output::Json(v))
        }
        PosetCmd::Whitney(args) => {
            let p = load_poset(&args.poset)?;
            let v = cached(cache, "whitney", &p, || {
                let w = whitney_homology(&p)?;
                Ok(json!({"table": w, "diagonal": w.is_diagonal(), "poincare": w.poincare_polynomial()}))
            })?;
            Ok(Output::Json(v))
        }
    }
}

fn config(cmd: &ConfigCmd, format: Format) -> Result<Output, Failure> {
    match cmd {
        ConfigCmd::E1(args) => {
            let space = load_space(&args.spec)?;
            let table = e1_table(&space, args.nmax)?;
            Ok(match format {
                Format::Csv => Output::Text(table.to_csv()),
                Format::Json => Output::Json(json!({"space": space.name, "e1": table})),
            })
        }
        ConfigCmd::Betti(args) => {
            let space = load_space(&args.spec)?;
            let rows = (1..=args.nmax).map(|n| Ok((n, bm_betti(&space, n)?))).collect::<crate::Result<Vec<_>>>()?;
            Ok(match format {
                Format::Csv => {
                    let mut s = String::from("n,degree,rank\n");
                    for (n, row) in &rows {
                        for (d, r) in row {
                            s.push_str(&format!("{n},{d},{r}\n"));
                        }
                    }
                    Output::Text(s)
                }
                Format::Json => Output::Json(json!({
                    "space": space.name,
                    "betti": rows.iter().map(|(n, row)| json!({
                        "n": n,
                        "ranks": row.iter().map(|(d, r)| json!({"degree": d, "rank": r})).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                })),
            })
        }
        ConfigCmd::Euler { args, check_closed_form } => {
            let space = load_space(&args.spec)?;
            let series = euler_series(&space, args.nmax)?;
            let mut v = json!({
                "space": space.name,
                "euler": series.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            if *check_closed_form {
                if !space.is_free_and_unpunctured() {
                    return Err(Error::Refused("the closed form applies to free spaces without special orbits".into()).into());
                }
                let closed = euler_closed_form(&space, args.nmax);
                if closed != series {
                    return Err(Error::Series("Euler series disagrees with the closed form".into()).into());
                }
                v["closedFormAgrees"] = json!(true);
            }
            Ok(match format {
                Format::Csv => {
                    let mut s = String::from("n,euler\n");
                    for (n, e) in series.iter().enumerate() {
                        s.push_str(&format!("{n},{e}\n"));
                    }
                    Output::Text(s)
                }
                Format::Json => Output::Json(v),
            })
        }
    }
}

fn stability(cmd: &StabilityCmd) -> Result<Output, Failure> {
    let StabilityCmd::Report { spec, variant, steps, verify, nmax, j } = cmd;
    let space = load_space(spec)?;
    let report = iterate_report(&space, (*variant).into(), *steps)?;
    let mut v = report.to_json();
    if *verify {
        let mut checks = Vec::new();
        for (i, step) in report.steps.iter().enumerate() {
            if step.classification != Classification::Absolute {
                continue;
            }
            for jj in 0..=*j {
                for m in 0..=1 {
                    let w = verify_generator_bound(&space, &report, i, jj, m, *nmax)?;
                    checks.push(json!({
                        "step": i, "j": jj, "m": m,
                        "bound": fmt_rat(&w.bound),
                        "holds": w.holds,
                        "lastNonzero": w.last_nonzero,
                    }));
                    if !w.holds {
                        return Err(Error::Stability(format!(
                            "generator bound fails at step {i}, j={jj}, m={m}: {:?}",
                            w.violations
                        ))
                        .into());
                    }
                }
            }
        }
        v["verification"] = Value::Array(checks);
    }
    Ok(Output::Json(v))
}

fn rep(cmd: &RepCmd) -> Result<Output, Failure> {
    match cmd {
        RepCmd::Decompose { poset, action: ActionArg::Sym, spec, n, rank, cap } => {
            let dp = match (poset, spec, n) {
                (Some(path), _, _) => {
                    let p = load_poset(path)?;
                    let labels = p
                        .labels()
                        .ok_or_else(|| Failure::Usage("the poset needs element labels".into()))?;
                    let n = labels.first().map_or(0, |l| l.matches(':').count());
                    let dspec = DowlingSpec::partition(n);
                    let dp = build_poset(&dspec, *cap)?;
                    let same = dp.len() == p.len()
                        && labels
                            .iter()
                            .all(|l| DowlingElement::parse(&dspec, l).is_ok_and(|e| dp.index_of(&e).is_some()))
                        && dp.poset.is_isomorphic(&p).is_some();
                    if !same {
                        return Err(Failure::Usage(
                            "--action sym needs the labelled partition lattice; use --spec for other posets".into(),
                        ));
                    }
                    dp
                }
                (None, Some(path), Some(n)) => {
                    let gset = input(read_spec(path).and_then(|s| s.gset()))?;
                    build_poset(&input(DowlingSpec::new(gset, *n))?, *cap)?
                }
                _ => return Err(Failure::Usage("pass --poset, or --spec with --n".into())),
            };
            let chi = whitney_character(&dp, *rank)?;
            let d = decompose(&chi)?;
            Ok(Output::Json(json!({
                "n": dp.spec.n(),
                "rank": rank,
                "character": chi.to_json(),
                "decomposition": decomposition_json(&d),
            })))
        }
        RepCmd::Stability { spec, rank, window, cap } => {
            let file = input(read_spec(spec))?;
            let gset = input(file.gset())?;
            let mut seq = Vec::new();
            for n in window.0..=window.1 {
                let dp = build_poset(&input(DowlingSpec::new(gset.clone(), n))?, *cap)?;
                seq.push((n, whitney_character(&dp, *rank)?));
            }
            // size bound i/ε with i = (d−1)·r, from the first absolute step
            let bound = match file.space(&stem(spec)) {
                Ok(space) => iterate_report(&space, Variant::Left, 1).ok().and_then(|r| {
                    let eps = r.steps[0].epsilon.clone()?;
                    let i = (space.dimension().saturating_sub(1) * rank) as i64;
                    Some(Rational::from_integer(i.into()) / eps)
                }),
                Err(_) => None,
            };
            let report = stable_multiplicity_check(&seq, bound)?;
            Ok(Output::Json(report.to_json()))
        }
    }
}
