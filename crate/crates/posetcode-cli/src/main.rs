//! Command-line front end: build and inspect evaluation codes in poset
//! metrics, run verification sweeps, and reproduce the reference example.
//!
//! Exit codes: 0 success, 2 parameter or input error, 3 property failure
//! (golden mismatch, failed sweep row, failed bound check), 4 enumeration
//! budget exceeded.

use std::cmp::min;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use posetcode::agcodes::{
    ag_grid, build_ag_code, build_ag_code_unconstrained, mds_inequality, run_ag_sweep,
    AgCodeSpec, AgSweepPoint, Divisor, MdsInequalityParams, Place,
};
use posetcode::codes::{
    bottleneck_grid, build_code, nrt_grid, run_rs_sweep, Code, CodeSpec, MetricComparison,
    RsCodeSpec, RsSweepPoint, SingletonReport, SweepRow, SweepStatus, WeightEnumerator,
    SWEEP_FIELD_ORDERS,
};
use posetcode::example::{self, ExampleReport, GoldenMismatch};
use posetcode::gf::Field;
use posetcode::poset::{bottleneck, chain_union, BottleneckShape, Poset};
use posetcode::DEFAULT_BUDGET;
use serde::Serialize;

const EXIT_PARAM: u8 = 2;
const EXIT_PROPERTY: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "posetcode", version, about = "Evaluation codes in poset metrics")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Write the command's output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on exhaustive codeword enumeration; overrides POSETCODE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Csv,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild the reference example and check it against the golden table.
    Example {
        /// Alternative golden CSV to check against.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Poset inspection.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Point-evaluation codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Verify code parameters over a whole grid.
    Sweep(SweepArgs),
    /// Function-field codes on the projective line.
    #[command(subcommand)]
    Ag(AgCmd),
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Print a poset as a cover table, DOT graph, or JSON edge list.
    Show {
        /// Rows of the underlying matrices.
        #[arg(long)]
        s: usize,
        /// Columns of the underlying matrices.
        #[arg(long)]
        r: usize,
        /// Collapse the rank level of this constant matrix row (1-based);
        /// omit for the plain chain union.
        #[arg(long)]
        b_row: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Build a code and emit it as JSON (to --out or stdout).
    Build(BuildArgs),
    /// Weight distribution as weight,count rows.
    Weights {
        /// Code file produced by `code build` or `ag build`; defaults to
        /// the built-in reference example.
        file: Option<PathBuf>,
    },
    /// Exhaustive minimum distance against the Singleton bound.
    CheckMds {
        /// Code file; defaults to the built-in reference example.
        file: Option<PathBuf>,
        /// Fail (exit 3) unless the code is MDS.
        #[arg(long)]
        expect_mds: bool,
    },
    /// The plain-chain code and the constant-row code side by side.
    Compare {
        /// Field order, as "q" or "p^m", optionally ",modulus=[c0,...,1]".
        #[arg(long)]
        q: String,
        /// Evaluation points as comma-separated element codes.
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
        #[arg(long)]
        s: usize,
        /// Messages are polynomials of degree < t.
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct BuildArgs {
    /// Field order, as "q" or "p^m", optionally ",modulus=[c0,...,1]".
    #[arg(long)]
    q: String,
    /// Evaluation points as comma-separated element codes.
    #[arg(long, value_delimiter = ',', required = true)]
    points: Vec<u64>,
    #[arg(long)]
    s: usize,
    /// Messages are polynomials of degree < t.
    #[arg(long)]
    t: usize,
    /// Constant matrix row (1-based); omit for the plain chain metric.
    #[arg(long)]
    b_row: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter family to sweep.
    #[arg(long, value_enum)]
    family: Family,
    /// Pin the field order (default: every grid order).
    #[arg(long)]
    q: Option<u64>,
    /// Pin the point count.
    #[arg(long)]
    r: Option<usize>,
    /// Pin the row count.
    #[arg(long)]
    s: Option<usize>,
    /// Pin the constant row (bottleneck family only).
    #[arg(long)]
    b_row: Option<usize>,
    /// Pin the degree bound (bottleneck and nrt families only).
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Constant-row codes: dim = t-r+1 and d = rs-t+1, checked exactly.
    Bottleneck,
    /// Plain chain codes: dim = t and d = rs-t+1, checked exactly.
    Nrt,
    /// Constrained function-field codes: divisor-degree bounds, plus MDS.
    Ag,
    /// Unconstrained function-field codes in the chain metric.
    AgNrt,
}

#[derive(Subcommand)]
enum AgCmd {
    /// Build a function-field code from a divisor and emit it as JSON.
    Build(AgBuildArgs),
    /// Re-check the bound report of a stored function-field code.
    Verify { file: PathBuf },
    /// Exact arithmetic check of the parameter inequality.
    MdsIneq(MdsIneqArgs),
}

#[derive(Args)]
struct AgBuildArgs {
    /// Field order, as "q" or "p^m", optionally ",modulus=[c0,...,1]".
    #[arg(long)]
    q: String,
    /// Evaluation places: comma-separated element codes, or "inf".
    #[arg(long, value_delimiter = ',', required = true)]
    places: Vec<String>,
    /// Divisor as comma-separated "P<code>:<coeff>" terms, "Pinf" for the
    /// place at infinity (e.g. "P1:2,P3:-1,Pinf:3").
    #[arg(long)]
    divisor: String,
    #[arg(long)]
    s: usize,
    /// Skip the shared-leading-coefficient constraint and use the plain
    /// chain metric.
    #[arg(long)]
    unconstrained: bool,
}

#[derive(Args)]
struct MdsIneqArgs {
    #[arg(long)]
    g: u64,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    k: u64,
    /// Divisor class number (exact integer, any size).
    #[arg(long)]
    h: String,
    /// Count of positive divisors of degree k (exact integer, any size).
    #[arg(long = "Ak")]
    a_k: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

fn classify(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<posetcode::Error>() {
        Some(posetcode::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        _ => EXIT_PARAM,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let budget = match cli.budget {
        Some(b) => b,
        None => match std::env::var("POSETCODE_BUDGET") {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("POSETCODE_BUDGET must be an integer, got '{v}'"))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if budget < 1 {
        bail!("budget must be >= 1");
    }
    match cli.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .context("building the worker pool")?
            .install(|| dispatch(&cli, budget)),
        None => dispatch(&cli, budget),
    }
}

fn dispatch(cli: &Cli, budget: u64) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Example { golden } => cmd_example(cli, golden.as_deref()),
        Command::Poset(PosetCmd::Show { s, r, b_row }) => cmd_poset_show(cli, *s, *r, *b_row),
        Command::Code(CodeCmd::Build(args)) => cmd_build(cli, args),
        Command::Code(CodeCmd::Weights { file }) => cmd_weights(cli, file.as_deref(), budget),
        Command::Code(CodeCmd::CheckMds { file, expect_mds }) => {
            cmd_check_mds(cli, file.as_deref(), *expect_mds, budget)
        }
        Command::Code(CodeCmd::Compare { q, points, s, t }) => {
            cmd_compare(cli, q, points, *s, *t, budget)
        }
        Command::Sweep(args) => cmd_sweep(cli, args, budget),
        Command::Ag(AgCmd::Build(args)) => cmd_ag_build(cli, args),
        Command::Ag(AgCmd::Verify { file }) => cmd_ag_verify(cli, file, budget),
        Command::Ag(AgCmd::MdsIneq(args)) => cmd_mds_ineq(cli, args),
    }
}

fn deliver(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_field(s: &str) -> anyhow::Result<Field> {
    let field = if s.contains('^') || s.contains("modulus") {
        Field::parse(s)?
    } else {
        let q: u64 = s.trim().parse().map_err(|_| anyhow!("bad field order '{s}'"))?;
        Field::of_order(q)?
    };
    Ok(field)
}

fn parse_place(s: &str) -> anyhow::Result<Place> {
    let name = s.trim().trim_start_matches(['P', 'p']);
    if name.eq_ignore_ascii_case("inf") {
        return Ok(Place::Infinity);
    }
    let code: u64 = name
        .parse()
        .map_err(|_| anyhow!("bad place '{s}': want an element code or 'inf'"))?;
    Ok(Place::Finite(code))
}

fn parse_divisor(s: &str) -> anyhow::Result<Divisor> {
    let mut pairs = Vec::new();
    for term in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (place, coeff) = term
            .split_once(':')
            .ok_or_else(|| anyhow!("bad divisor term '{term}': want P<code>:<coeff>"))?;
        let coeff: i64 = coeff
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad divisor coefficient in '{term}'"))?;
        pairs.push((parse_place(place)?, coeff));
    }
    Ok(Divisor::new(&pairs))
}

fn json_line<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn reference_code() -> anyhow::Result<Code> {
    let field = Field::new(5, 1)?;
    let spec = RsCodeSpec::from_point_codes(&field, &[1, 3, 4], 2, 4, Some(1))?;
    Ok(build_code(&spec)?)
}

fn load_code(file: Option<&std::path::Path>) -> anyhow::Result<Code> {
    match file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let code: Code = serde_json::from_str(&text)
                .with_context(|| format!("loading {}", path.display()))?;
            Ok(code)
        }
        None => reference_code(),
    }
}

fn cmd_example(cli: &Cli, golden: Option<&std::path::Path>) -> anyhow::Result<ExitCode> {
    let report = match golden {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            example::check_against(&text)?
        }
        None => example::check()?,
    };
    let text = match cli.format {
        Format::Pretty => render_example_pretty(&report),
        Format::Csv => render_example_csv(&report)?,
        Format::Json => json_line(&report)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    match &report.mismatch {
        None => Ok(ExitCode::SUCCESS),
        Some(m) => {
            eprintln!("{}", mismatch_line(m));
            Ok(ExitCode::from(EXIT_PROPERTY))
        }
    }
}

fn mismatch_line(m: &GoldenMismatch) -> String {
    match m {
        GoldenMismatch::Row { row, column, golden, computed } => format!(
            "golden mismatch at row {row}, column {column}: table has '{golden}', recomputed '{computed}'"
        ),
        GoldenMismatch::Table { detail } => format!("golden mismatch: {detail}"),
    }
}

fn render_example_pretty(report: &ExampleReport) -> String {
    let mut out = String::new();
    let wp = report.rows.iter().map(|r| r.poly.len()).max().unwrap_or(4).max(4);
    let wd = report.rows.iter().map(|r| r.deriv.len()).max().unwrap_or(5).max(5);
    let wc = report.rows.iter().map(|r| r.codeword.len()).max().unwrap_or(8).max(8);
    let _ = writeln!(out, "{:<wp$}  {:<wd$}  {:<wc$}  weight", "poly", "deriv", "codeword");
    for r in &report.rows {
        let _ = writeln!(out, "{:<wp$}  {:<wd$}  {:<wc$}  {}", r.poly, r.deriv, r.codeword, r.weight);
    }
    let _ = writeln!(out, "parameters: n={} k={} d={}", report.n, report.k, report.d);
    let _ = writeln!(out, "enumerator: {}", report.enumerator.poly_string());
    match &report.mismatch {
        None => {
            let _ = writeln!(out, "golden table: {} rows verified", report.rows.len());
        }
        Some(m) => {
            let _ = writeln!(out, "{}", mismatch_line(m));
        }
    }
    out
}

fn render_example_csv(report: &ExampleReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_poset_show(
    cli: &Cli,
    s: usize,
    r: usize,
    b_row: Option<usize>,
) -> anyhow::Result<ExitCode> {
    let (poset, name) = match b_row {
        Some(b) => {
            let shape = BottleneckShape::new(s, r, b)?;
            (bottleneck(shape), format!("bottleneck poset U({s},{r},{b})"))
        }
        None => (chain_union(s, r)?, format!("chain union C({s},{r})")),
    };
    let text = match cli.format {
        Format::Dot => poset.to_dot(),
        Format::Json => {
            let mut t = poset.to_json();
            t.push('\n');
            t
        }
        Format::Pretty => render_poset_pretty(&poset, &name),
        Format::Csv => bail!("csv output does not apply to `poset show`"),
    };
    deliver(cli, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn render_poset_pretty(poset: &Poset, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{name}: {} vertices", poset.n());
    let _ = writeln!(out, "labels: {:?}", poset.labels());
    let _ = writeln!(out, "covers:");
    for (a, b) in poset.covers() {
        let _ = writeln!(out, "  {a} < {b}");
    }
    out
}

fn cmd_build(cli: &Cli, args: &BuildArgs) -> anyhow::Result<ExitCode> {
    let field = parse_field(&args.q)?;
    let spec = RsCodeSpec::from_point_codes(&field, &args.points, args.s, args.t, args.b_row)?;
    let code = build_code(&spec)?;
    deliver(cli, &json_line(&code)?)?;
    if cli.out.is_some() {
        println!("n={} k={}", code.length(), code.dim());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ag_build(cli: &Cli, args: &AgBuildArgs) -> anyhow::Result<ExitCode> {
    let field = parse_field(&args.q)?;
    let places: Vec<Place> =
        args.places.iter().map(|p| parse_place(p)).collect::<anyhow::Result<_>>()?;
    let divisor = parse_divisor(&args.divisor)?;
    let spec = AgCodeSpec::new(&field, &places, divisor, args.s)?;
    let code = if args.unconstrained {
        build_ag_code_unconstrained(&spec)?
    } else {
        build_ag_code(&spec)?
    };
    deliver(cli, &json_line(&code)?)?;
    if cli.out.is_some() {
        println!("n={} k={}", code.length(), code.dim());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_weights(
    cli: &Cli,
    file: Option<&std::path::Path>,
    budget: u64,
) -> anyhow::Result<ExitCode> {
    let code = load_code(file)?;
    let enumerator = code.weight_enumerator(budget)?;
    let text = match cli.format {
        Format::Pretty | Format::Csv => render_weights_csv(&enumerator),
        Format::Json => json_line(&enumerator)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn render_weights_csv(enumerator: &WeightEnumerator) -> String {
    let mut out = String::from("weight,count\n");
    for (w, &c) in enumerator.counts().iter().enumerate() {
        if c > 0 {
            let _ = writeln!(out, "{w},{c}");
        }
    }
    out
}

fn cmd_check_mds(
    cli: &Cli,
    file: Option<&std::path::Path>,
    expect_mds: bool,
    budget: u64,
) -> anyhow::Result<ExitCode> {
    let code = load_code(file)?;
    let d = code.min_distance(budget)?;
    let report = code.singleton_report(d);
    let text = match cli.format {
        Format::Pretty => format!(
            "n={} k={} d={} slack={} mds={}\n",
            report.n, report.k, report.d, report.slack, report.mds
        ),
        Format::Csv => render_singleton_csv(&report),
        Format::Json => json_line(&report)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    if expect_mds && !report.mds {
        eprintln!("not MDS: d = {} but n - k + 1 = {}", report.d, report.n - report.k + 1);
        return Ok(ExitCode::from(EXIT_PROPERTY));
    }
    Ok(ExitCode::SUCCESS)
}

fn render_singleton_csv(report: &SingletonReport) -> String {
    format!(
        "n,k,d,slack,mds\n{},{},{},{},{}\n",
        report.n, report.k, report.d, report.slack, report.mds
    )
}

fn cmd_compare(
    cli: &Cli,
    q: &str,
    points: &[u64],
    s: usize,
    t: usize,
    budget: u64,
) -> anyhow::Result<ExitCode> {
    let field = parse_field(q)?;
    let pts = points
        .iter()
        .map(|&c| field.elem(c))
        .collect::<posetcode::Result<Vec<_>>>()?;
    let cmp = posetcode::codes::compare_metrics(&field, &pts, s, t, budget)?;
    let text = match cli.format {
        Format::Pretty => render_compare_pretty(&cmp),
        Format::Csv => render_compare_csv(&cmp),
        Format::Json => json_line(&cmp)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn render_compare_pretty(cmp: &MetricComparison) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "q={} r={} s={} t={}", cmp.q, cmp.r, cmp.s, cmp.t);
    let _ = writeln!(out, "{:<11} {:>2} {:>2} {:>2} {:>6} {:>9}", "metric", "n", "k", "d", "rate", "rel-dist");
    for (name, c) in [("nrt", &cmp.nrt), ("bottleneck", &cmp.bottleneck)] {
        let _ = writeln!(
            out,
            "{:<11} {:>2} {:>2} {:>2} {:>6} {:>9}",
            name,
            c.n,
            c.k,
            c.d,
            c.rate.to_string(),
            c.relative_distance.to_string()
        );
    }
    let _ = writeln!(out, "bottleneck advantage: {}", cmp.bottleneck_advantage);
    out
}

fn render_compare_csv(cmp: &MetricComparison) -> String {
    let mut out = String::from("metric,n,k,d,rate,relative_distance\n");
    for (name, c) in [("nrt", &cmp.nrt), ("bottleneck", &cmp.bottleneck)] {
        let _ = writeln!(out, "{name},{},{},{},{},{}", c.n, c.k, c.d, c.rate, c.relative_distance);
    }
    out
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, budget: u64) -> anyhow::Result<ExitCode> {
    let rows = match args.family {
        Family::Bottleneck | Family::Nrt => {
            let grid = rs_grid(args, budget)?;
            run_rs_sweep(&grid, budget)
        }
        Family::Ag | Family::AgNrt => {
            if args.b_row.is_some() || args.t.is_some() {
                bail!("only --q, --r, and --s pins apply to the function-field families");
            }
            let grid = ag_pick_grid(args, budget);
            run_ag_sweep(&grid, budget, args.family == Family::Ag)
        }
    };
    let text = match cli.format {
        Format::Pretty => render_sweep_pretty(&rows),
        Format::Csv => render_rows_csv(&rows)?,
        Format::Json => json_line(&rows)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    let fails = rows.iter().filter(|r| r.status == SweepStatus::Fail).count();
    let over = rows.iter().filter(|r| r.status == SweepStatus::BudgetExceeded).count();
    if fails > 0 {
        eprintln!("{fails} of {} rows failed", rows.len());
        return Ok(ExitCode::from(EXIT_PROPERTY));
    }
    if over > 0 {
        eprintln!("{over} of {} rows exceeded the enumeration budget", rows.len());
        return Ok(ExitCode::from(EXIT_BUDGET));
    }
    Ok(ExitCode::SUCCESS)
}

/// The default grids are budget-filtered and all-valid; as soon as any pin
/// is given the rows are built from the pinned cross product unfiltered, so
/// out-of-range or over-budget points show up as classified rows.
fn rs_grid(args: &SweepArgs, budget: u64) -> anyhow::Result<Vec<RsSweepPoint>> {
    let constrained = args.family == Family::Bottleneck;
    if args.b_row.is_some() && !constrained {
        bail!("--b-row only applies to the bottleneck family");
    }
    let pinned = args.q.is_some()
        || args.r.is_some()
        || args.s.is_some()
        || args.b_row.is_some()
        || args.t.is_some();
    if !pinned {
        return Ok(if constrained { bottleneck_grid(budget) } else { nrt_grid(budget) });
    }
    let qs: Vec<u64> = args.q.map(|v| vec![v]).unwrap_or_else(|| SWEEP_FIELD_ORDERS.to_vec());
    let mut grid = Vec::new();
    for &q in &qs {
        let rmax = min(q as usize, 4).max(2);
        let rr: Vec<usize> = args.r.map(|v| vec![v]).unwrap_or_else(|| (2..=rmax).collect());
        for &r in &rr {
            let ss: Vec<usize> = args.s.map(|v| vec![v]).unwrap_or_else(|| (2..=4).collect());
            for &s in &ss {
                let bs: Vec<Option<usize>> = if constrained {
                    args.b_row
                        .map(|v| vec![Some(v)])
                        .unwrap_or_else(|| (1..=s).map(Some).collect())
                } else {
                    vec![None]
                };
                for &b in &bs {
                    let t_lo = b.map_or(1, |b| r * b.saturating_sub(1) + 1);
                    let ts: Vec<usize> =
                        args.t.map(|v| vec![v]).unwrap_or_else(|| (t_lo..=r * s).collect());
                    for &t in &ts {
                        grid.push(RsSweepPoint { q, r, s, b_row: b, t });
                    }
                }
            }
        }
    }
    Ok(grid)
}

fn ag_pick_grid(args: &SweepArgs, budget: u64) -> Vec<AgSweepPoint> {
    if args.q.is_none() && args.r.is_none() && args.s.is_none() {
        return ag_grid(budget);
    }
    let qs: Vec<u64> = args.q.map(|v| vec![v]).unwrap_or_else(|| vec![5, 7, 8]);
    let rr: Vec<usize> = args.r.map(|v| vec![v]).unwrap_or_else(|| vec![2, 3]);
    let ss: Vec<usize> = args.s.map(|v| vec![v]).unwrap_or_else(|| vec![2, 3]);
    let mut grid = Vec::new();
    for &q in &qs {
        for &r in &rr {
            for &s in &ss {
                let mut coeffs = vec![-3i64; r + 1];
                loop {
                    let deg: i64 = coeffs.iter().sum();
                    if deg >= r as i64 - 1 && deg <= (r * s) as i64 - r as i64 + 1 {
                        grid.push(AgSweepPoint { q, r, s, coeffs: coeffs.clone() });
                    }
                    let mut i = 0;
                    while i <= r && coeffs[i] == 3 {
                        coeffs[i] = -3;
                        i += 1;
                    }
                    if i > r {
                        break;
                    }
                    coeffs[i] += 1;
                }
            }
        }
    }
    grid
}

fn render_sweep_pretty(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let mut tallies = [0usize; 4];
    for row in rows {
        let mut line = format!("{:<10} q={:<3} r={} s={}", row.family, row.q, row.r, row.s);
        if let Some(b) = row.b_row {
            let _ = write!(line, " b={b}");
        }
        if let Some(t) = row.t {
            let _ = write!(line, " t={t}");
        }
        if let Some(d) = row.deg_g {
            let _ = write!(line, " degG={d}");
        }
        let _ = write!(line, ": {}", row.status);
        if let (Some(k), Some(d)) = (row.observed_dim, row.observed_dist) {
            let _ = write!(line, " dim={k} d={d}");
        }
        if !row.detail.is_empty() {
            let _ = write!(line, " ({})", row.detail);
        }
        let _ = writeln!(out, "{line}");
        tallies[match row.status {
            SweepStatus::Pass => 0,
            SweepStatus::Fail => 1,
            SweepStatus::BudgetExceeded => 2,
            SweepStatus::ParameterOutOfRange => 3,
        }] += 1;
    }
    let _ = writeln!(
        out,
        "summary: {} rows, {} pass, {} fail, {} budget-exceeded, {} out-of-range",
        rows.len(),
        tallies[0],
        tallies[1],
        tallies[2],
        tallies[3]
    );
    out
}

fn render_rows_csv(rows: &[SweepRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct BoundCheck {
    name: String,
    observed: i64,
    required: i64,
    ok: bool,
}

#[derive(Serialize)]
struct AgVerifyReport {
    constrained: bool,
    n: usize,
    k: usize,
    d: usize,
    deg_g: i64,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn cmd_ag_verify(cli: &Cli, file: &std::path::Path, budget: u64) -> anyhow::Result<ExitCode> {
    let code = load_code(Some(file))?;
    let (spec, constrained) = match code.spec() {
        CodeSpec::Ag(s) => (s, true),
        CodeSpec::AgUnconstrained(s) => (s, false),
        CodeSpec::Rs(_) => bail!("{} holds a point-evaluation code; use `code check-mds`", file.display()),
    };
    let (r, s, deg_g) = (spec.r() as i64, spec.s() as i64, spec.divisor().degree());
    let d = code.min_distance(budget)? as i64;
    let k = code.dim() as i64;
    let mut checks = vec![BoundCheck {
        name: "d >= rs - degG".into(),
        observed: d,
        required: r * s - deg_g,
        ok: d >= r * s - deg_g,
    }];
    if constrained {
        checks.push(BoundCheck {
            name: "dim >= degG - r + 2".into(),
            observed: k,
            required: deg_g - r + 2,
            ok: k >= deg_g - r + 2,
        });
        checks.push(BoundCheck {
            name: "dim + d >= rs - r + 2 (MDS)".into(),
            observed: k + d,
            required: r * s - r + 2,
            ok: k + d >= r * s - r + 2,
        });
    } else {
        checks.push(BoundCheck {
            name: "dim = degG + 1".into(),
            observed: k,
            required: deg_g + 1,
            ok: k == deg_g + 1,
        });
    }
    let pass = checks.iter().all(|c| c.ok);
    let report = AgVerifyReport {
        constrained,
        n: code.length(),
        k: code.dim(),
        d: d as usize,
        deg_g,
        checks,
        pass,
    };
    let text = match cli.format {
        Format::Pretty => render_verify_pretty(&report),
        Format::Csv => render_verify_csv(&report),
        Format::Json => json_line(&report)?,
        Format::Dot => bail!("dot output only applies to `poset show`"),
    };
    deliver(cli, &text)?;
    if report.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("bound check failed for {}", file.display());
        Ok(ExitCode::from(EXIT_PROPERTY))
    }
}

fn render_verify_pretty(report: &AgVerifyReport) -> String {
    let mut out = String::new();
    let kind = if report.constrained { "constrained" } else { "unconstrained" };
    let _ = writeln!(
        out,
        "function-field code ({kind}): n={} k={} d={} degG={}",
        report.n, report.k, report.d, report.deg_g
    );
    for c in &report.checks {
        let _ = writeln!(
            out,
            "  {}: {} vs {}  {}",
            c.name,
            c.observed,
            c.required,
            if c.ok { "ok" } else { "VIOLATED" }
        );
    }
    let _ = writeln!(out, "result: {}", if report.pass { "PASS" } else { "FAIL" });
    out
}

fn render_verify_csv(report: &AgVerifyReport) -> String {
    let mut out = String::from("check,observed,required,ok\n");
    for c in &report.checks {
        let _ = writeln!(out, "\"{}\",{},{},{}", c.name, c.observed, c.required, c.ok);
    }
    out
}

fn cmd_mds_ineq(cli: &Cli, args: &MdsIneqArgs) -> anyhow::Result<ExitCode> {
    let h: BigUint = args.h.trim().parse().map_err(|_| anyhow!("bad integer for --h"))?;
    let a_k: BigUint = args.a_k.trim().parse().map_err(|_| anyhow!("bad integer for --Ak"))?;
    let params =
        MdsInequalityParams { g: args.g, r: args.r, s: args.s, k: args.k, h, a_k };
    let report = mds_inequality(&params);
    let text = match cli.format {
        Format::Pretty => {
            let mut out = String::new();
            let _ = writeln!(out, "lhs = C(r+s+k-g, r-1) * A_k = {}", report.lhs);
            let _ = writeln!(out, "rhs = h = {}", report.rhs);
            let _ = writeln!(out, "holds: {}", report.holds);
            let _ = writeln!(out, "distance bound when holding: d >= {}", report.dist_bound);
            let _ = writeln!(
                out,
                "dimension bounds: {} (stated) / {} (proof-derived)",
                report.dim_bound, report.dim_bound_alt
            );
            let _ = writeln!(out, "mds case (g = k-1): {}", report.mds_case);
            for v in &report.violations {
                let _ = writeln!(out, "violation: {v}");
            }
            for n in &report.notes {
                let _ = writeln!(out, "note: {n}");
            }
            out
        }
        Format::Json => json_line(&report)?,
        Format::Csv | Format::Dot => bail!("use pretty or json output for `ag mds-ineq`"),
    };
    deliver(cli, &text)?;
    Ok(ExitCode::SUCCESS)
}
