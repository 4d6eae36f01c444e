//! `fano3`: batch interface to the exact Fano 3-fold toolkit.
//!
//! Every verb is a thin adapter over the library: the binary parses
//! arguments, calls one library entry point, renders the result as a
//! plain-text table (default) or canonical JSON (`--format json`), and
//! maps the outcome to an exit code:
//!
//! - 0: computation done, all checks passed / verdict reached;
//! - 1: a verification or replay reported failures;
//! - 2: usage or input errors (bad flags, malformed files, unknown ids).
//!
//! JSON output is byte-identical across runs and thread counts: lists are
//! sorted, rationals print as `p/q` in lowest terms, and no timestamps or
//! environment data are emitted. Tables are plain text with no color, so
//! `NO_COLOR` is honored trivially.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fano3::catalog::{
    builtin_catalog, check_catalog, load_catalog, replay_exclusion, CaseReport, Catalog,
    ExclusionFixture,
};
use fano3::exclusion::CenterKind;
use fano3::families::{search_with, Codimension, SearchOptions};
use fano3::links::{verify_link, LinkReport, MobileSystemData};
use fano3::rat::Rat;
use fano3::rr::{Basket, FanoNumerics, QuotientSingularity};

#[derive(Parser)]
#[command(
    name = "fano3",
    version,
    about = "Exact invariants of Fano 3-folds with terminal quotient baskets, \
             weighted-family search, link ledgers and exclusion certificates"
)]
struct Cli {
    /// Output format: human table or canonical JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Path to a catalog file (defaults to the built-in catalog)
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Riemann-Roch data of a Fano 3-fold from genus and basket
    Rr(RrArgs),
    /// Hilbert series of a weighted hypersurface or complete intersection
    Series(SeriesArgs),
    /// Search weighted families matching target invariants
    Search(SearchArgs),
    /// Sarkisov link ledger
    #[command(subcommand)]
    Link(LinkCmd),
    /// Replay exclusion certificates
    #[command(subcommand)]
    Exclude(ExcludeCmd),
    /// Canonical threshold and weak maximality of a mobile system
    Threshold(ThresholdArgs),
    /// Inspect or validate a catalog
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Args)]
struct RrArgs {
    /// Genus g (h0(-K) = g + 2)
    #[arg(long, allow_hyphen_values = true)]
    genus: i64,
    /// Basket entry `r,a`; repeat for multiple points
    #[arg(long = "basket", value_name = "R,A")]
    basket: Vec<String>,
    /// Last n of the reported sequence h0(-nK), n = 0..=N
    #[arg(long, default_value_t = 10)]
    n: u64,
}

#[derive(Args)]
struct SeriesArgs {
    /// Ambient weights, comma separated (5 or 6 of them)
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<u32>,
    /// Equation degrees, comma separated (1 or 2 of them)
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u32>,
    /// Series depth
    #[arg(long, default_value_t = 10)]
    depth: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, allow_hyphen_values = true)]
    genus: i64,
    #[arg(long = "basket", value_name = "R,A")]
    basket: Vec<String>,
    /// Codimension of the searched families: 1 or 2
    #[arg(long)]
    codim: u8,
    /// Largest ambient weight to enumerate
    #[arg(long = "max-weight", default_value_t = 6)]
    max_weight: u32,
    /// Series match depth (default: max(10, 2 * sum of weights) per candidate)
    #[arg(long)]
    depth: Option<u64>,
    /// Worker threads; the output does not depend on this
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Fano index of the searched families
    #[arg(long, default_value_t = 1)]
    index: i64,
}

#[derive(Subcommand)]
enum LinkCmd {
    /// Verify every ledger identity of a link record
    Verify {
        /// Catalog id of the link
        #[arg(long)]
        id: String,
    },
}

#[derive(Subcommand)]
enum ExcludeCmd {
    /// Replay a curve-center exclusion case
    Curve(ExcludeArgs),
    /// Replay a point-center exclusion case
    Point(ExcludeArgs),
}

#[derive(Args)]
struct ExcludeArgs {
    /// Catalog id of the exclusion case
    #[arg(long, conflicts_with = "case")]
    id: Option<String>,
    /// Path to an inline exclusion case (JSON, same schema as a catalog
    /// `exclusion_case` payload)
    #[arg(long)]
    case: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Pair `a,m` (discrepancy, multiplicity); repeat for multiple divisors
    #[arg(long = "pair", value_name = "A,M", required = true)]
    pairs: Vec<String>,
    /// Mobile system degree; when given, weak maximality is reported per pair
    #[arg(long)]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entries (id, kind, provenance)
    List,
    /// Print one entry in full
    Show {
        #[arg(long)]
        id: String,
    },
    /// Run every validation the catalog carries data for
    Check,
}

/// Input-level failure: exits 2.
struct InputError(String);

impl<T: std::fmt::Display> From<T> for InputError {
    fn from(e: T) -> Self {
        InputError(e.to_string())
    }
}

/// Dying quietly on a closed pipe (`fano3 catalog list | head`) is the
/// expected CLI behavior; Rust's default turns it into a panic.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    let catalog = match &cli.catalog {
        None => builtin_catalog(),
        Some(path) => match load_catalog(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    match run(&cli, &catalog) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Returns `Ok(true)` for success, `Ok(false)` for a failed verdict.
fn run(cli: &Cli, catalog: &Catalog) -> Result<bool, InputError> {
    match &cli.command {
        Command::Rr(args) => run_rr(args, cli.format),
        Command::Series(args) => run_series(args, cli.format),
        Command::Search(args) => run_search(args, cli.format),
        Command::Link(LinkCmd::Verify { id }) => run_link_verify(catalog, id, cli.format),
        Command::Exclude(cmd) => run_exclude(catalog, cmd, cli.format),
        Command::Threshold(args) => run_threshold(args, cli.format),
        Command::Catalog(cmd) => run_catalog(catalog, cmd, cli.format),
    }
}

fn parse_basket(specs: &[String]) -> Result<Basket, InputError> {
    let mut entries = Vec::new();
    for spec in specs {
        let (r, a) = spec
            .split_once(',')
            .ok_or_else(|| InputError(format!("basket entry {spec:?}: expected `r,a`")))?;
        let r: u32 = r
            .trim()
            .parse()
            .map_err(|_| InputError(format!("basket entry {spec:?}: bad index")))?;
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| InputError(format!("basket entry {spec:?}: bad weight")))?;
        entries.push(QuotientSingularity::new(r, a).map_err(|e| InputError(e.to_string()))?);
    }
    Ok(Basket::new(entries))
}

fn parse_rat_pair(spec: &str) -> Result<(Rat, Rat), InputError> {
    let (a, m) = spec
        .split_once(',')
        .ok_or_else(|| InputError(format!("pair {spec:?}: expected `a,m`")))?;
    let a: Rat = a
        .trim()
        .parse()
        .map_err(|e| InputError(format!("pair {spec:?}: {e}")))?;
    let m: Rat = m
        .trim()
        .parse()
        .map_err(|e| InputError(format!("pair {spec:?}: {e}")))?;
    Ok((a, m))
}

fn numerics_from(genus: i64, basket_specs: &[String]) -> Result<FanoNumerics, InputError> {
    let basket = parse_basket(basket_specs)?;
    FanoNumerics::from_genus_basket(genus, basket).map_err(|e| InputError(e.to_string()))
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce()) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string(value).expect("report serialization cannot fail")
            );
        }
        Format::Table => table(),
    }
}

#[derive(Serialize)]
struct RrOutput {
    genus: i64,
    basket: Vec<(u32, u32)>,
    kcube: Rat,
    values: Vec<Rat>,
    clean: bool,
}

fn run_rr(args: &RrArgs, format: Format) -> Result<bool, InputError> {
    let basket = parse_basket(&args.basket)?;
    let kcube = fano3::rr::anticanonical_cube(args.genus, &basket);
    if !kcube.is_positive() {
        eprintln!("not a Fano candidate: (-K)^3 = {kcube} is not positive");
        return Ok(false);
    }
    let numerics = FanoNumerics::from_genus_basket(args.genus, basket.clone())
        .map_err(|e| InputError(e.to_string()))?;
    let seq = numerics.hilbert_sequence(args.n);
    let out = RrOutput {
        genus: args.genus,
        basket: basket.iter().map(|q| (q.index(), q.weight())).collect(),
        kcube,
        values: seq.values.clone(),
        clean: seq.is_clean(),
    };
    emit(format, &out, || {
        println!("genus     {}", out.genus);
        println!("basket    {}", basket);
        println!("(-K)^3    {}", out.kcube);
        println!("n     h0(-nK)");
        for (n, v) in out.values.iter().enumerate() {
            println!("{n:<5} {v}");
        }
        if !out.clean {
            println!("warning: sequence has non-integer or negative entries");
        }
    });
    Ok(out.clean)
}

#[derive(Serialize)]
struct SeriesOutput {
    weights: Vec<u32>,
    degrees: Vec<u32>,
    index: i64,
    kcube: Option<Rat>,
    values: Vec<String>,
}

fn run_series(args: &SeriesArgs, format: Format) -> Result<bool, InputError> {
    let family = fano3::families::Family::from_raw(&args.weights, &args.degrees)
        .map_err(|e| InputError(e.to_string()))?;
    let series = match family.hilbert_series(args.depth) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("series check failed: {e}");
            return Ok(false);
        }
    };
    let out = SeriesOutput {
        weights: family.ambient().weights().to_vec(),
        degrees: family.degrees().to_vec(),
        index: family.fano_index(),
        kcube: family.anticanonical_cube().ok(),
        values: series.values().iter().map(|v| v.to_string()).collect(),
    };
    emit(format, &out, || {
        println!("family    {family}");
        println!("index     {}", out.index);
        match &out.kcube {
            Some(k) => println!("(-K)^3    {k}"),
            None => println!("(-K)^3    (index is not 1)"),
        }
        println!("n     h0(O(n))");
        for (n, v) in out.values.iter().enumerate() {
            println!("{n:<5} {v}");
        }
    });
    Ok(true)
}

#[derive(Serialize)]
struct SearchOutput {
    genus: i64,
    basket: Vec<(u32, u32)>,
    kcube: Rat,
    codimension: u8,
    max_weight: u32,
    index: i64,
    matches: Vec<SearchRow>,
}

#[derive(Serialize)]
struct SearchRow {
    weights: Vec<u32>,
    degrees: Vec<u32>,
    depth: u64,
}

fn run_search(args: &SearchArgs, format: Format) -> Result<bool, InputError> {
    let codim = match args.codim {
        1 => Codimension::One,
        2 => Codimension::Two,
        other => return Err(InputError(format!("codim must be 1 or 2, got {other}"))),
    };
    let target = numerics_from(args.genus, &args.basket)?;
    let matches = search_with(
        &target,
        codim,
        args.max_weight,
        &SearchOptions {
            index: args.index,
            depth: args.depth,
            jobs: args.jobs,
        },
    );
    let out = SearchOutput {
        genus: target.genus(),
        basket: target
            .basket()
            .iter()
            .map(|q| (q.index(), q.weight()))
            .collect(),
        kcube: target.kcube().clone(),
        codimension: args.codim,
        max_weight: args.max_weight,
        index: args.index,
        matches: matches
            .iter()
            .map(|m| SearchRow {
                weights: m.family.ambient().weights().to_vec(),
                degrees: m.family.degrees().to_vec(),
                depth: m.depth,
            })
            .collect(),
    };
    emit(format, &out, || {
        println!(
            "target: genus {}, (-K)^3 = {}, basket {}",
            out.genus,
            out.kcube,
            target.basket()
        );
        if out.matches.is_empty() {
            println!("no matching families with weights <= {}", out.max_weight);
        } else {
            println!("family                      match depth");
            for (m, row) in matches.iter().zip(&out.matches) {
                println!("{:<27} {}", m.family.to_string(), row.depth);
            }
        }
    });
    Ok(true)
}

fn run_link_verify(catalog: &Catalog, id: &str, format: Format) -> Result<bool, InputError> {
    let record = catalog
        .resolve_link(id)
        .map_err(|e| InputError(e.to_string()))?;
    let report = verify_link(&record);
    emit(format, &report, || print_link_report(&report));
    Ok(report.all_passed())
}

fn print_link_report(report: &LinkReport) {
    println!(
        "{}: {}",
        report.label,
        if report.all_passed() {
            "all checks passed"
        } else {
            "FAILED checks"
        }
    );
    for c in &report.checks {
        println!(
            "  [{}] {}: {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
}

fn run_exclude(catalog: &Catalog, cmd: &ExcludeCmd, format: Format) -> Result<bool, InputError> {
    let (args, wanted) = match cmd {
        ExcludeCmd::Curve(args) => (args, CenterKind::Curve),
        ExcludeCmd::Point(args) => (args, CenterKind::Point),
    };
    let owned;
    let fixture: &ExclusionFixture = match (&args.id, &args.case) {
        (Some(id), None) => catalog
            .exclusion_case(id)
            .map_err(|e| InputError(e.to_string()))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| InputError(e.to_string()))?;
            owned = serde_json::from_str::<ExclusionFixture>(&text)
                .map_err(|e| InputError(format!("inline case: {e}")))?;
            &owned
        }
        _ => return Err(InputError("provide exactly one of --id or --case".into())),
    };
    if fixture.center_kind() != wanted {
        let verb = match wanted {
            CenterKind::Curve => "curve",
            CenterKind::Point => "point",
        };
        return Err(InputError(format!(
            "case {:?} is not a {verb}-center case",
            fixture.label()
        )));
    }
    let report = replay_exclusion(fixture);
    emit(format, &report, || print_case_report(&report));
    Ok(report.all_passed())
}

fn print_case_report(report: &CaseReport) {
    print!("{report}");
}

#[derive(Serialize)]
struct ThresholdOutput {
    pairs: Vec<(Rat, Rat)>,
    canonical_threshold: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weak_maximal: Option<Vec<bool>>,
}

fn run_threshold(args: &ThresholdArgs, format: Format) -> Result<bool, InputError> {
    let pairs = args
        .pairs
        .iter()
        .map(|s| parse_rat_pair(s))
        .collect::<Result<Vec<_>, _>>()?;
    let data = MobileSystemData::new(args.n.unwrap_or(1), pairs.clone())
        .map_err(|e| InputError(e.to_string()))?;
    let threshold = data
        .canonical_threshold()
        .map_err(|e| InputError(e.to_string()))?;
    let weak = args.n.map(|_| {
        (0..pairs.len())
            .map(|i| data.is_weak_maximal(i))
            .collect::<Vec<_>>()
    });
    let out = ThresholdOutput {
        pairs,
        canonical_threshold: threshold,
        degree: args.n,
        weak_maximal: weak,
    };
    emit(format, &out, || {
        println!("canonical threshold  {}", out.canonical_threshold);
        if let (Some(n), Some(weak)) = (out.degree, &out.weak_maximal) {
            println!("pair (a, m)          weak maximal at n = {n}");
            for ((a, m), w) in out.pairs.iter().zip(weak) {
                println!("({a}, {m})  {w}");
            }
        }
    });
    Ok(true)
}

#[derive(Serialize)]
struct CatalogRow {
    id: String,
    kind: &'static str,
    provenance: &'static str,
}

fn run_catalog(catalog: &Catalog, cmd: &CatalogCmd, format: Format) -> Result<bool, InputError> {
    match cmd {
        CatalogCmd::List => {
            let rows: Vec<CatalogRow> = catalog
                .entries
                .iter()
                .map(|e| CatalogRow {
                    id: e.id.clone(),
                    kind: e.payload.kind_name(),
                    provenance: match e.provenance.kind {
                        fano3::catalog::ProvenanceKind::Paper => "paper",
                        fano3::catalog::ProvenanceKind::Derived => "derived",
                        fano3::catalog::ProvenanceKind::Inferred => "inferred",
                    },
                })
                .collect();
            emit(format, &rows, || {
                println!("{:<28} {:<15} provenance", "id", "kind");
                for r in &rows {
                    println!("{:<28} {:<15} {}", r.id, r.kind, r.provenance);
                }
            });
            Ok(true)
        }
        CatalogCmd::Show { id } => {
            let entry = catalog
                .lookup(id)
                .ok_or_else(|| InputError(format!("no catalog entry with id {id:?}")))?;
            println!(
                "{}",
                serde_json::to_string_pretty(entry).expect("entry serialization cannot fail")
            );
            Ok(true)
        }
        CatalogCmd::Check => {
            let report = check_catalog(catalog);
            emit(format, &report, || {
                println!("oracle pairs:");
                for l in &report.oracle_pairs {
                    println!("  [{}] {}", if l.passed { "ok" } else { "FAIL" }, l.name);
                }
                println!("links:");
                for r in &report.links {
                    print_link_report(r);
                }
                println!("exclusion cases:");
                for c in &report.exclusion_cases {
                    print_case_report(c);
                }
                println!(
                    "catalog check: {}",
                    if report.all_passed() {
                        "all passed"
                    } else {
                        "FAILED"
                    }
                );
            });
            Ok(report.all_passed())
        }
    }
}
