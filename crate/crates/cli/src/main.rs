use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use taelman::base::parse::{parse_poly, THETA_NAMES};
use taelman::base::{ConstantField, PolyRing};
use taelman::class_module::{class_module_with_modulus, compute_class_module, format_theta};
use taelman::drinfeld::DrinfeldModule;
use taelman::lambda_mu::{
    finite_part_length, length_quotient, presentation_lengths, verify_alg_t, PresentationMatrix, SeriesT,
};
use taelman::ramification::{divergence_certificate, BreakData};
use taelman::selftest::{run_suite, Suite};
use taelman::tower::{asymptotic_fit, descent_check, run_tower, TowerSpec};

const SCHEMA: u32 = 1;

/// Class modules of Drinfeld modules, constant-field towers, `R[[T]]`
/// lengths and ramification.
#[derive(Parser)]
#[command(name = "taelman", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class module of a Drinfeld module over `L(θ)`, optionally with a modulus.
    ClassModule(ClassModuleArgs),
    /// Constant-field towers.
    #[command(subcommand)]
    Tower(TowerCommand),
    /// Lengths over `F_q[[π]][[T]]`.
    #[command(subcommand)]
    Iwasawa(IwasawaCommand),
    /// Differents and traces from lower ramification breaks.
    Ramification(RamificationArgs),
    /// Seeded property suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ClassModuleArgs {
    /// Module JSON file, or inline JSON.
    #[arg(long)]
    module: String,
    #[arg(long, default_value_t = 1)]
    constants_degree: u32,
    /// Polynomial in `theta` over `F_q`.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TowerCommand {
    Run(TowerArgs),
}

#[derive(Args)]
struct TowerArgs {
    #[arg(long)]
    module: String,
    #[arg(long)]
    nmax: u32,
    #[arg(long, default_value_t = 3)]
    prime_degree_bound: usize,
    /// Extra primes of `F_q[t]` to tabulate.
    #[arg(long, value_delimiter = ',')]
    prime: Vec<String>,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum IwasawaCommand {
    /// `R[[T]]/(f, T^N)` over a range of `N`.
    Lengths(LengthsArgs),
    /// Eventual affinity of the three length sequences of a presented module.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct LengthsArgs {
    /// Polynomial in `pi` and `T`.
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Range `a..b` (inclusive).
    #[arg(long = "N", default_value = "1..12")]
    n: String,
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix JSON file or inline JSON: `{"q": 2, "rows": [["T", "pi"], ["0", "T"]]}`.
    #[arg(long)]
    matrix: String,
    #[arg(long = "N", default_value_t = 12)]
    n: usize,
    /// Settling bound; defaults to the row-wise `ord_T` bound.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RamificationArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_delimiter = ',')]
    breaks: Vec<u64>,
    #[arg(long)]
    nmax: usize,
    /// Trace valuation to reach by extending the breaks with `1`s.
    #[arg(long, default_value_t = 10)]
    target: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Success, a definite negative, or an inconclusive certificate.
enum Outcome {
    Ok,
    Failed,
    Inconclusive,
}

impl Outcome {
    fn code(&self) -> ExitCode {
        match self {
            Outcome::Ok => ExitCode::SUCCESS,
            Outcome::Failed => ExitCode::from(1),
            Outcome::Inconclusive => ExitCode::from(2),
        }
    }
}

fn read_arg(s: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        return Ok(s.to_string());
    }
    fs::read_to_string(s).with_context(|| format!("reading {s}"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, &s)
}

fn budget() -> Result<Option<Duration>> {
    match std::env::var("RESOURCE_BUDGET_SECS") {
        Ok(v) => {
            let secs: u64 = v.trim().parse().with_context(|| format!("RESOURCE_BUDGET_SECS={v:?}"))?;
            Ok(Some(Duration::from_secs(secs)))
        }
        Err(_) => Ok(None),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").with_context(|| format!("range {s:?} is not of the form a..b"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a, b))
}

fn class_module(args: &ClassModuleArgs) -> Result<Outcome> {
    let module = DrinfeldModule::from_json(&read_arg(&args.module)?)?;
    let consts = ConstantField::new(module.field(), args.constants_degree)?;
    let mut outcome = Outcome::Ok;
    let report = match &args.modulus {
        None => {
            let h = compute_class_module(&module, &consts)?;
            json!({
                "schema": SCHEMA,
                "command": "class-module",
                "module": module.to_spec(),
                "constants_degree": args.constants_degree,
                "class_module": h.summary(),
            })
        }
        Some(m) => {
            let f = parse_poly(&PolyRing::new(module.field().clone()), m, THETA_NAMES)?;
            let f = consts.embed_poly(&f);
            let r = class_module_with_modulus(&module, &consts, &f)?;
            if !r.euler.conclusive {
                outcome = Outcome::Inconclusive;
            } else if r.euler.holds() == Some(false) {
                outcome = Outcome::Failed;
            }
            json!({
                "schema": SCHEMA,
                "command": "class-module",
                "module": module.to_spec(),
                "constants_degree": args.constants_degree,
                "modulus": format_theta(&consts, &f),
                "class_module": r.h.summary(),
                "class_module_mod_f": r.h_f.summary(),
                "local_points": {
                    "dim": r.local.dim(),
                    "divisors": r.local.divisor_strings(),
                },
                "units": r.units,
                "euler": r.euler,
                "euler_holds": r.euler.holds(),
            })
        }
    };
    emit_json(args.out.as_deref(), &report)?;
    Ok(outcome)
}

fn tower(args: &TowerArgs) -> Result<Outcome> {
    let module = DrinfeldModule::from_json(&read_arg(&args.module)?)?;
    let ring = PolyRing::new(module.field().clone());
    let mut spec = TowerSpec::new(&module, args.nmax);
    spec.prime_degree_bound = args.prime_degree_bound;
    spec.primes = args
        .prime
        .iter()
        .map(|s| parse_poly(&ring, s, &["t"]))
        .collect::<taelman::Result<_>>()?;
    spec.budget = budget()?;
    let t = run_tower(&spec)?;
    let p = t.table.p;

    if args.csv {
        let mut s = String::from("n,constants_degree,window_dim,dim,divisors");
        for q in &t.table.primes {
            s.push_str(&format!(",len[{q}]"));
        }
        s.push_str(",remainder\n");
        for r in &t.table.layers {
            s.push_str(&format!("{},{},{},{},{}", r.n, r.constants_degree, r.window_dim, r.dim, r.divisors.join(";")));
            for l in &r.lengths {
                s.push_str(&format!(",{l}"));
            }
            s.push_str(&format!(",{}\n", r.remainder));
        }
        emit(args.out.as_deref(), &s)?;
        return Ok(Outcome::Ok);
    }

    let descent: Vec<_> = (1..t.layers.len())
        .map(|n| descent_check(&t, n).map(|ok| json!({ "n": n, "holds": ok })))
        .collect::<taelman::Result<_>>()?;
    let fit = |col: Vec<i64>| asymptotic_fit(&col, p).ok().map(|f| f.report());
    let fits: Vec<_> = t
        .table
        .primes
        .iter()
        .enumerate()
        .map(|(i, q)| json!({ "prime": q, "fit": fit(t.column(i)) }))
        .collect();
    let report = json!({
        "schema": SCHEMA,
        "command": "tower run",
        "module": module.to_spec(),
        "table": t.table,
        "descent": descent,
        "dim_fit": fit(t.dims()),
        "prime_fits": fits,
    });
    emit_json(args.out.as_deref(), &report)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct LengthRow {
    n: usize,
    rank: usize,
    length: String,
    finite: usize,
    closed_form_length: String,
    closed_form_finite: Option<usize>,
    agrees: bool,
}

fn iwasawa_lengths(args: &LengthsArgs) -> Result<Outcome> {
    let ring = PolyRing::new(taelman::base::FiniteField::from_order(args.q)?);
    let f = SeriesT::parse(&ring, &args.f)?;
    let (lo, hi) = parse_range(&args.n)?;
    let a = PresentationMatrix::new(&ring, vec![vec![f.clone()]], 1)?;
    let mut rows = Vec::new();
    for n in lo..=hi {
        let o = presentation_lengths(&a, n);
        let total = length_quotient(&f, n)?;
        let fin = finite_part_length(&f, n).ok();
        let agrees = total == o.total && fin.map_or(true, |v| v == o.finite);
        rows.push(LengthRow {
            n,
            rank: o.rank,
            length: o.total.to_string(),
            finite: o.finite,
            closed_form_length: total.to_string(),
            closed_form_finite: fin,
            agrees,
        });
    }
    let ok = rows.iter().all(|r| r.agrees);
    if args.csv {
        let mut s = String::from("N,rank,length,finite,closed_form_length,closed_form_finite,agrees\n");
        for r in &rows {
            let cf = r.closed_form_finite.map_or(String::new(), |v| v.to_string());
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n, r.rank, r.length, r.finite, r.closed_form_length, cf, r.agrees
            ));
        }
        emit(args.out.as_deref(), &s)?;
    } else {
        let report = json!({
            "schema": SCHEMA,
            "command": "iwasawa lengths",
            "q": args.q,
            "f": f.format(&ring),
            "ord_t": f.ord_t(),
            "rows": rows,
        });
        emit_json(args.out.as_deref(), &report)?;
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

fn iwasawa_verify(args: &VerifyArgs) -> Result<Outcome> {
    let a = PresentationMatrix::from_json(&read_arg(&args.matrix)?)?;
    let bound = args.bound.unwrap_or_else(|| a.ord_t_bound());
    let r = verify_alg_t(&a, 1, args.n, bound, None)?;
    let report = json!({
        "schema": SCHEMA,
        "command": "iwasawa verify",
        "report": r,
    });
    emit_json(args.out.as_deref(), &report)?;
    Ok(if r.pass { Outcome::Ok } else { Outcome::Failed })
}

fn ramification(args: &RamificationArgs) -> Result<Outcome> {
    let bd = BreakData::new(args.p, args.breaks.clone())?;
    let r = divergence_certificate(&bd, args.nmax, args.target)?;
    if args.json {
        emit_json(args.out.as_deref(), &json!({ "schema": SCHEMA, "command": "ramification", "report": r }))?;
    } else {
        let mut s = format!("p = {}, breaks = {:?}\n", r.p, r.breaks);
        for row in &r.rows {
            s.push_str(&format!(
                "n = {}  v(D_{}) = {}  v(Tr_{}) = {}  v(D_{})/p^{} = {}  bound {}  {}\n",
                row.n,
                row.n,
                row.different,
                row.n,
                row.trace,
                row.n,
                row.n,
                row.ratio,
                row.bound,
                if row.holds { "ok" } else { "FAILS" }
            ));
        }
        s.push_str(&format!(
            "trace monotone: {}; trace reaches {} at layer {}\n",
            r.trace_monotone, r.target, r.layers_to_target
        ));
        emit(args.out.as_deref(), &s)?;
    }
    Ok(if r.pass() { Outcome::Ok } else { Outcome::Failed })
}

fn selftest(args: &SelftestArgs) -> Result<Outcome> {
    let suite: Suite = args.suite.parse()?;
    let r = run_suite(suite, args.seed)?;
    emit_json(args.out.as_deref(), &json!({ "schema": SCHEMA, "command": "selftest", "pass": r.pass(), "report": r }))?;
    Ok(if r.pass() { Outcome::Ok } else { Outcome::Failed })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::ClassModule(a) => class_module(a),
        Command::Tower(TowerCommand::Run(a)) => tower(a),
        Command::Iwasawa(IwasawaCommand::Lengths(a)) => iwasawa_lengths(a),
        Command::Iwasawa(IwasawaCommand::Verify(a)) => iwasawa_verify(a),
        Command::Ramification(a) => ramification(a),
        Command::Selftest(a) => selftest(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => o.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
