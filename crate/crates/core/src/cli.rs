//! `rpverify` command line.
//!
//! Exit codes: 0 all checks passed, 1 at least one failure, 2 usage or input
//! error, 3 resource limit.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundParams};
use crate::error::{Error, Result};
use crate::ramanujan::{build_table_with_sieve, RamanujanTable};
use crate::sieve::{sieve_for_nth_prime, PrimeTable, DEFAULT_MEMORY_BUDGET};
use crate::verify::{self, ClassicBound, DusartSide, InequalityReport, DEFAULT_TIE_BAND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const MEMORY_ENV: &str = "RP_VERIFY_MEMORY_MB";

#[derive(Parser, Debug)]
#[command(
    name = "rpverify",
    version,
    about = "Compute Ramanujan primes and check explicit upper bounds on them"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Relative band within which a strict inequality is flagged as a near tie.
    #[arg(long, global = true, default_value_t = DEFAULT_TIE_BAND)]
    pub tie_band: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build R_1..R_N and write the table as CSV.
    Table {
        #[arg(long, value_parser = parse_count)]
        n_max: u64,
    },
    /// Exhaustive sweeps over a computed table or sieve.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Integer thresholds.
    Threshold {
        #[command(subcommand)]
        what: ThresholdCommand,
    },
    /// Sampled checks of the inequalities used above n = 688383.
    Check(CheckArgs),
    /// Empirical N for a custom j(n).
    Explore {
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Share of epsilon assigned to epsilon1 (default epsilon / 5).
        #[arg(long)]
        epsilon1: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
        #[arg(long, value_parser = parse_count, default_value = "10^7")]
        cap: u64,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Evaluate one of the bound functions.
    Eval {
        #[arg(long, value_enum)]
        func: Func,
        #[arg(long, value_parser = parse_real)]
        at: f64,
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
        #[command(flatten)]
        shape: ShapeArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// s < 2n(1 + 1/g(n)) for every n in the range.
    Corollary {
        #[arg(long, value_parser = parse_count, default_value = "44")]
        n_min: u64,
        #[arg(long, value_parser = parse_count, default_value = "688383")]
        n_max: u64,
        /// Table cache from `rpverify table`; rebuilt in-process when absent.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Classical bounds on R_n.
    Classic {
        #[arg(long, value_enum)]
        which: ClassicArg,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        n_min: u64,
        #[arg(long, value_parser = parse_count)]
        n_max: u64,
    },
    /// Dusart's bounds on p_k.
    Dusart {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_parser = parse_count)]
        k_min: u64,
        #[arg(long, value_parser = parse_count)]
        k_max: u64,
    },
    /// Closed-form derivatives against central differences.
    Derivatives {
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        points: Option<Vec<u64>>,
        #[arg(long, default_value_t = verify::DEFAULT_REL_TOL)]
        rel_tol: f64,
        #[command(flatten)]
        shape: ShapeArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThresholdCommand {
    /// Smallest n with log(log(2.4n)/log n) < eps2/5.
    Eq4 {
        #[arg(long, default_value_t = 0.4)]
        eps2: f64,
    },
    /// First n from which 2n < alpha < 2.4n holds through --n-max.
    Alpha {
        #[arg(long, value_parser = parse_count, default_value = "44")]
        n_min: u64,
        #[arg(long, value_parser = parse_count, default_value = "688383")]
        n_max: u64,
        #[command(flatten)]
        shape: ShapeArgs,
    },
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub which: CheckKind,
    #[arg(long, value_parser = parse_count, conflicts_with = "samples")]
    pub n: Option<u64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub samples: Option<Vec<u64>>,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

/// Bound parameters. Without `--j` the corollary preset is used.
#[derive(Args, Debug, Default)]
pub struct ShapeArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub epsilon1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
}

impl ShapeArgs {
    fn params(&self) -> Result<BoundParams> {
        match &self.j {
            None => {
                if self.epsilon.is_some_and(|e| e != 0.5) || self.epsilon1.is_some_and(|e| e != 0.1)
                {
                    return Err(Error::InvalidInput(
                        "--epsilon/--epsilon1 need --j; the preset fixes 0.5 = 0.1 + 0.4".into(),
                    ));
                }
                Ok(BoundParams::corollary())
            }
            Some(j) => custom_params(self.epsilon.unwrap_or(0.5), self.epsilon1, j),
        }
    }
}

fn custom_params(epsilon: f64, epsilon1: Option<f64>, j: &str) -> Result<BoundParams> {
    let e1 = epsilon1.unwrap_or(epsilon / 5.0);
    BoundParams::custom(epsilon, e1, epsilon - e1, j)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassicArg {
    SondowLower,
    SondowUpper,
    Laishram,
    Sn2014,
    Lemma221,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Eq2,
    Eq3,
    Eq5,
    Eq6,
    Eq7,
    Gneg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Func {
    #[value(name = "L")]
    Lower,
    #[value(name = "U")]
    Upper,
    #[value(name = "f")]
    Gap,
    #[value(name = "fprime")]
    GapPrime,
    #[value(name = "F")]
    Separation,
    #[value(name = "G")]
    SeparationAtAlpha,
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "g")]
    Shape,
    #[value(name = "Uprime")]
    UpperPrime,
    #[value(name = "Lprime")]
    LowerPrime,
    #[value(name = "A")]
    SlopeDifference,
    #[value(name = "Gprime")]
    SeparationSlope,
}

/// Integers as `123`, `10^9`, `2e6` or `5*10^7`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let bad = || format!("`{s}` is not a non-negative integer (forms: 123, 10^9, 2e6, 5*10^7)");
    let factor = |f: &str| -> std::result::Result<u64, String> {
        let f = f.trim();
        if let Some((b, e)) = f.split_once('^') {
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)
        } else if let Some((m, e)) = f.split_once(['e', 'E']) {
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            10u64
                .checked_pow(e)
                .and_then(|p| m.checked_mul(p))
                .ok_or_else(bad)
        } else {
            f.parse().map_err(|_| bad())
        }
    };
    s.split('*')
        .try_fold(1u64, |acc, f| acc.checked_mul(factor(f)?).ok_or_else(bad))
}

/// Reals, plus the integer forms accepted by [`parse_count`].
pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .or_else(|_| parse_count(s).map(|v| v as f64))
        .map_err(|_| format!("`{s}` is not a number"))
}

/// Twelve significant digits; integers print without a fraction.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return format!("{x:.0}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_FAILURES,
        _ => EXIT_USAGE,
    }
}

fn memory_budget() -> Result<u64> {
    match std::env::var(MEMORY_ENV) {
        Err(_) => Ok(DEFAULT_MEMORY_BUDGET),
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .and_then(|mb| mb.checked_mul(1024 * 1024))
            .ok_or_else(|| Error::InvalidInput(format!("{MEMORY_ENV}={v} is not a size in MB"))),
    }
}

#[derive(Serialize)]
struct ThresholdOut {
    name: &'static str,
    parameter: f64,
    threshold: Option<u64>,
    crossover: Option<f64>,
}

#[derive(Serialize)]
struct ValueOut {
    func: String,
    at: f64,
    n: Option<u64>,
    value: f64,
}

enum Output {
    Reports(Vec<InequalityReport>),
    /// Reports plus per-sample sides, for `check` in human format.
    Checks(Vec<InequalityReport>, Vec<(String, u64, f64, f64)>),
    Exploration(Box<verify::Exploration>),
    Threshold(ThresholdOut),
    Value(ValueOut),
    Table(RamanujanTable),
}

struct Outcome {
    output: Output,
    /// Forces exit 2 after output (per-sample input errors).
    input_errors: bool,
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    let outcome = if cli.workers == 0 {
        execute(cli)
    } else {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build()
        {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(Error::ResourceLimit(format!("thread pool: {e}"))),
        }
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rpverify: {e}");
            return exit_code(&e);
        }
    };
    let (text, failed) = render(&outcome.output, cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("rpverify: writing output: {e}");
        return EXIT_USAGE;
    }
    if outcome.input_errors {
        EXIT_USAGE
    } else if failed {
        EXIT_FAILURES
    } else {
        EXIT_OK
    }
}

fn reports(r: Vec<InequalityReport>) -> Outcome {
    Outcome {
        output: Output::Reports(r),
        input_errors: false,
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    if !(cli.tie_band >= 0.0 && cli.tie_band.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "bad --tie-band {}",
            cli.tie_band
        )));
    }
    let tie = cli.tie_band;
    let budget = memory_budget()?;
    match &cli.command {
        Command::Table { n_max } => {
            let (tab, _) = build_table_with_sieve(*n_max, budget)?;
            Ok(Outcome {
                output: Output::Table(tab),
                input_errors: false,
            })
        }
        Command::Verify { what } => verify_command(what, tie, budget),
        Command::Threshold { what } => threshold_command(what),
        Command::Check(args) => check_command(args, tie),
        Command::Explore {
            epsilon,
            epsilon1,
            j,
            cap,
            table,
        } => {
            let p = custom_params(*epsilon, *epsilon1, j)?;
            let tab = table.as_ref().map(RamanujanTable::load).transpose()?;
            let ex = verify::explore_theorem(&p, *cap, tab.as_ref(), tie)?;
            for w in &ex.hypothesis.warnings {
                eprintln!("warning: {w}");
            }
            Ok(Outcome {
                output: Output::Exploration(Box::new(ex)),
                input_errors: false,
            })
        }
        Command::Eval { func, at, n, shape } => eval_command(*func, *at, *n, shape),
    }
}

fn verify_command(what: &VerifyCommand, tie: f64, budget: u64) -> Result<Outcome> {
    match what {
        VerifyCommand::Corollary {
            n_min,
            n_max,
            table,
        } => {
            let p = BoundParams::corollary();
            if *n_min < verify::sweeps::COROLLARY_MIN_N || n_min > n_max {
                return Err(Error::InvalidInput(format!(
                    "corollary range must satisfy 44 <= n-min <= n-max, got [{n_min}, {n_max}]"
                )));
            }
            match table {
                None => {
                    let (tab, _) = build_table_with_sieve(*n_max, budget)?;
                    Ok(reports(vec![verify::verify_corollary(
                        &tab, &p, *n_min, *n_max, tie,
                    )?]))
                }
                Some(path) => {
                    let tab = RamanujanTable::load(path)?;
                    let primes = PrimeTable::build_with_budget(tab.scan_bound().max(2), budget)?;
                    let integrity = verify::verify_table_integrity(&tab, &primes)?;
                    let cor = verify::verify_corollary(&tab, &p, *n_min, *n_max, tie)?;
                    Ok(reports(vec![integrity, cor]))
                }
            }
        }
        VerifyCommand::Classic {
            which,
            n_min,
            n_max,
        } => {
            let (tab, primes) = build_table_with_sieve(*n_max, budget)?;
            let list: Vec<ClassicBound> = match which {
                ClassicArg::All => ClassicBound::ALL.to_vec(),
                ClassicArg::SondowLower => vec![ClassicBound::SondowLower],
                ClassicArg::SondowUpper => vec![ClassicBound::SondowUpper],
                ClassicArg::Laishram => vec![ClassicBound::Laishram],
                ClassicArg::Sn2014 => vec![ClassicBound::Sn2014],
                ClassicArg::Lemma221 => vec![ClassicBound::Lemma221],
            };
            let mut out = Vec::new();
            for b in list {
                let lo = if *which == ClassicArg::All && b == ClassicBound::Sn2014 {
                    (*n_min).max(verify::sweeps::SN2014_MIN_N)
                } else {
                    *n_min
                };
                out.push(verify::verify_classic(&tab, &primes, b, lo, *n_max, tie)?);
            }
            Ok(reports(out))
        }
        VerifyCommand::Dusart { side, k_min, k_max } => {
            let side = match side {
                SideArg::Lower => DusartSide::Lower,
                SideArg::Upper => DusartSide::Upper,
            };
            // Validate the range before paying for the sieve.
            let min = match side {
                DusartSide::Lower => verify::sweeps::DUSART_LOWER_MIN_K,
                DusartSide::Upper => verify::sweeps::DUSART_UPPER_MIN_K,
            };
            if k_min < &min || k_min > k_max {
                return Err(Error::InvalidInput(format!(
                    "dusart range must satisfy {min} <= k-min <= k-max, got [{k_min}, {k_max}]"
                )));
            }
            let primes = sieve_for_nth_prime(*k_max, budget)?;
            Ok(reports(vec![verify::verify_dusart(
                &primes, side, *k_min, *k_max, tie,
            )?]))
        }
        VerifyCommand::Derivatives {
            points,
            rel_tol,
            shape,
        } => {
            let p = shape.params()?;
            let pts = points
                .clone()
                .unwrap_or_else(|| vec![1_000, 100_000, 100_000_000]);
            Ok(reports(vec![verify::derivative_consistency(
                &p, &pts, *rel_tol, tie,
            )]))
        }
    }
}

fn threshold_command(what: &ThresholdCommand) -> Result<Outcome> {
    let out = match what {
        ThresholdCommand::Eq4 { eps2 } => {
            let t = verify::eq4_threshold(*eps2)?;
            ThresholdOut {
                name: "eq4",
                parameter: *eps2,
                threshold: Some(t.threshold),
                crossover: Some(t.crossover),
            }
        }
        ThresholdCommand::Alpha {
            n_min,
            n_max,
            shape,
        } => {
            let p = shape.params()?;
            if n_min > n_max || *n_min < 2 {
                return Err(Error::InvalidInput("need 2 <= n-min <= n-max".into()));
            }
            ThresholdOut {
                name: "alpha-below-2.4n",
                parameter: p.epsilon,
                threshold: verify::alpha_ratio_onset(&p, *n_min, *n_max),
                crossover: None,
            }
        }
    };
    Ok(Outcome {
        output: Output::Threshold(out),
        input_errors: false,
    })
}

type Sides = Box<dyn Fn(u64) -> Result<(f64, f64)> + Sync>;

fn check_command(args: &CheckArgs, tie: f64) -> Result<Outcome> {
    let p = args.shape.params()?;
    let samples = match (&args.n, &args.samples) {
        (Some(n), _) => vec![*n],
        (None, Some(list)) => list.clone(),
        (None, None) => verify::proof_samples(),
    };
    let show_sides = samples.len() <= 50;
    let (reps, errors, sides): (Vec<InequalityReport>, Vec<verify::SampleError>, Vec<_>) =
        match args.which {
            CheckKind::Gneg => {
                let out = verify::check_g_negative(&p, &samples, tie);
                let mut rows = Vec::new();
                if show_sides {
                    for &n in &samples {
                        let x = n as f64;
                        if let Ok(v) = p.separation_at_alpha(x) {
                            rows.push(("G".to_string(), n, v, 0.0));
                        }
                        if let Ok(v) = p.separation_at_alpha_slope(x) {
                            rows.push(("Gprime".to_string(), n, v, 0.0));
                        }
                    }
                }
                (vec![out.g, out.g_prime], out.errors, rows)
            }
            kind => {
                let eps2 = p.epsilon2;
                let pc = p.clone();
                let (name, f): (&str, Sides) = match kind {
                    CheckKind::Eq2 => ("eq2", Box::new(move |n| verify::eq2_sides(n, &pc))),
                    CheckKind::Eq3 => ("eq3", Box::new(move |n| verify::eq3_sides(n, &pc))),
                    CheckKind::Eq5 => (
                        "eq5",
                        Box::new(move |n| {
                            verify::eq5_check(n, eps2).map(|(v, _)| (v, 4.0 * eps2 / 5.0))
                        }),
                    ),
                    CheckKind::Eq6 => ("eq6", Box::new(move |n| verify::eq6_sides(n, &pc))),
                    CheckKind::Eq7 => ("eq7", Box::new(move |n| verify::eq7_sides(n, &pc))),
                    CheckKind::Gneg => unreachable!(),
                };
                let (rep, errs) = verify::check_samples(name, &samples, Some(&p), tie, &f);
                let rows = if show_sides {
                    samples
                        .iter()
                        .filter_map(|&n| f(n).ok().map(|(l, r)| (name.to_string(), n, l, r)))
                        .collect()
                } else {
                    Vec::new()
                };
                (vec![rep], errs, rows)
            }
        };
    for e in &errors {
        eprintln!("rpverify: sample n = {}: {}", e.n, e.message);
    }
    Ok(Outcome {
        output: Output::Checks(reps, sides),
        input_errors: !errors.is_empty(),
    })
}

fn eval_command(func: Func, at: f64, n: Option<u64>, shape: &ShapeArgs) -> Result<Outcome> {
    let p = shape.params()?;
    let value = match func {
        Func::Lower => bounds::lower(at)?,
        Func::Upper => bounds::upper(at)?,
        Func::Gap => bounds::gap(at)?,
        Func::GapPrime => bounds::gap_prime(at)?,
        Func::UpperPrime => bounds::upper_prime(at)?,
        Func::LowerPrime => bounds::lower_prime(at)?,
        Func::Separation => {
            let n = n.ok_or_else(|| Error::InvalidInput("F needs --n".into()))?;
            bounds::separation(at, n as f64)?
        }
        Func::Shape => p.shape(at)?,
        Func::Alpha => p.alpha(at)?,
        Func::SeparationAtAlpha => p.separation_at_alpha(at)?,
        Func::SlopeDifference => p.slope_difference(at)?,
        Func::SeparationSlope => p.separation_at_alpha_slope(at)?,
    };
    let name = func
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    Ok(Outcome {
        output: Output::Value(ValueOut {
            func: name,
            at,
            n,
            value,
        }),
        input_errors: false,
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serialises");
    s.push('\n');
    s
}

fn reports_json(r: &[InequalityReport]) -> String {
    if r.len() == 1 {
        to_json(&r[0])
    } else {
        to_json(&r)
    }
}

fn reports_csv(r: &[InequalityReport]) -> String {
    let mut s = String::from("report,kind,n,lhs,rhs\n");
    for rep in r {
        for (kind, list) in [("failure", &rep.failures), ("near_tie", &rep.near_ties)] {
            for x in list {
                let _ = writeln!(
                    s,
                    "{},{kind},{},{},{}",
                    rep.name,
                    x.n,
                    sig12(x.lhs),
                    sig12(x.rhs)
                );
            }
        }
    }
    s
}

fn reports_human(r: &[InequalityReport]) -> String {
    let mut s = format!(
        "{:<18} {:>27} {:>10} {:>10} {:>9} {:>9} {:>10}\n",
        "report", "range", "checked", "passed", "failures", "near_ties", "elapsed_ms"
    );
    for rep in r {
        let _ = writeln!(
            s,
            "{:<18} {:>27} {:>10} {:>10} {:>9} {:>9} {:>10}",
            rep.name,
            format!("[{}, {}]", rep.range[0], rep.range[1]),
            rep.checked,
            rep.passed,
            rep.failures.len(),
            rep.near_ties.len(),
            rep.elapsed_ms
        );
    }
    for rep in r {
        for (label, list) in [("failures", &rep.failures), ("near ties", &rep.near_ties)] {
            if list.is_empty() {
                continue;
            }
            let _ = writeln!(s, "{} {label} (first {}):", rep.name, list.len().min(20));
            for x in list.iter().take(20) {
                let _ = writeln!(
                    s,
                    "  n = {}  lhs = {}  rhs = {}",
                    x.n,
                    sig12(x.lhs),
                    sig12(x.rhs)
                );
            }
        }
    }
    let verdict = if r.iter().all(InequalityReport::ok) {
        "PASS"
    } else {
        "FAIL"
    };
    let _ = writeln!(s, "{verdict}");
    s
}

fn render(out: &Output, format: Format) -> (String, bool) {
    match out {
        Output::Reports(r) | Output::Checks(r, _) => {
            let failed = !r.iter().all(InequalityReport::ok);
            let text = match (format, out) {
                (Format::Json, _) => reports_json(r),
                (Format::Csv, _) => reports_csv(r),
                (Format::Human, Output::Checks(_, rows)) if !rows.is_empty() => {
                    let mut s = String::new();
                    for (name, n, l, rr) in rows {
                        let _ = writeln!(
                            s,
                            "{name} n = {n}: lhs = {}  rhs = {}  {}",
                            sig12(*l),
                            sig12(*rr),
                            if l < rr { "ok" } else { "NOT <" }
                        );
                    }
                    s + &reports_human(r)
                }
                (Format::Human, _) => reports_human(r),
            };
            (text, failed)
        }
        Output::Exploration(ex) => {
            let failed =
                ex.empirical_n.is_none() || ex.table_check.as_ref().is_some_and(|r| !r.ok());
            let text = match format {
                Format::Json => to_json(ex),
                Format::Csv => {
                    let mut s = String::from("n,j,n_j_prime,g\n");
                    for h in &ex.hypothesis.samples {
                        let f = |v: Option<f64>| v.map(sig12).unwrap_or_default();
                        let _ = writeln!(s, "{},{},{},{}", h.n, f(h.j), f(h.n_j_prime), f(h.g));
                    }
                    s
                }
                Format::Human => {
                    let mut s = format!(
                        "EMPIRICAL (valid only up to n = {})\nj(n) = {}, epsilon = {}\n",
                        ex.cap, ex.params.j, ex.params.epsilon
                    );
                    let h = &ex.hypothesis;
                    let _ = writeln!(
                        s,
                        "hypotheses: j > 0 {}, j increasing {}, n j' shrinking {}, g >= 1 {}",
                        h.j_positive, h.j_increasing, h.n_j_prime_shrinking, h.g_at_least_one
                    );
                    match ex.empirical_n {
                        Some(n) => {
                            let _ = writeln!(s, "G(n) < 0 at every sampled n in ({n}, {}]", ex.cap);
                        }
                        None => {
                            let _ = writeln!(s, "no N found: G(cap) is not negative");
                        }
                    }
                    if let Some(r) = &ex.table_check {
                        s.push_str(&reports_human(std::slice::from_ref(r)));
                    }
                    s
                }
            };
            (text, failed)
        }
        Output::Threshold(t) => {
            let text = match format {
                Format::Json => to_json(t),
                Format::Csv => format!(
                    "name,parameter,threshold,crossover\n{},{},{},{}\n",
                    t.name,
                    sig12(t.parameter),
                    t.threshold.map(|v| v.to_string()).unwrap_or_default(),
                    t.crossover.map(sig12).unwrap_or_default()
                ),
                Format::Human => match t.threshold {
                    Some(v) => format!("{v}\n"),
                    None => "none\n".to_string(),
                },
            };
            (text, t.threshold.is_none())
        }
        Output::Value(v) => {
            let text = match format {
                Format::Json => to_json(v),
                Format::Csv => format!(
                    "func,at,n,value\n{},{},{},{}\n",
                    v.func,
                    sig12(v.at),
                    v.n.map(|n| n.to_string()).unwrap_or_default(),
                    sig12(v.value)
                ),
                Format::Human => format!("{}\n", sig12(v.value)),
            };
            (text, false)
        }
        Output::Table(tab) => {
            let mut buf = Vec::new();
            tab.write_csv(&mut buf).expect("writing to memory");
            (String::from_utf8(buf).expect("ascii"), false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("688383"), Ok(688_383));
        assert_eq!(parse_count("10^9"), Ok(1_000_000_000));
        assert_eq!(parse_count("2e6"), Ok(2_000_000));
        assert_eq!(parse_count("5*10^7"), Ok(50_000_000));
        assert!(parse_count("-1").is_err());
        assert!(parse_count("10^99").is_err());
        assert!(parse_count("abc").is_err());
        assert_eq!(parse_real("1e-3"), Ok(1e-3));
        assert_eq!(parse_real("10^5"), Ok(1e5));
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(36734.0), "36734");
        assert_eq!(sig12(0.284_636_911_997_716), "0.284636911998");
        assert_eq!(sig12(114.772_136_497_478), "114.772136497");
        assert_eq!(sig12(-682_433.857_095_516_8), "-682433.857096");
        assert_eq!(sig12(1.5e20), "1.50000000000e20");
    }

    #[test]
    fn exit_codes_by_error() {
        assert_eq!(exit_code(&Error::ResourceLimit("x".into())), 3);
        assert_eq!(exit_code(&Error::InvalidInput("x".into())), 2);
        assert_eq!(exit_code(&Error::Domain("x".into())), 2);
        assert_eq!(exit_code(&Error::Internal("x".into())), 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            main_with_args(["rpverify", "verify", "corollary", "--n-min", "10"]),
            2
        );
        assert_eq!(main_with_args(["rpverify", "frobnicate"]), 2);
        assert_eq!(
            main_with_args(["rpverify", "threshold", "eq4", "--bogus"]),
            2
        );
        assert_eq!(
            main_with_args([
                "rpverify", "verify", "dusart", "--side", "upper", "--k-min", "10", "--k-max", "20"
            ]),
            2
        );
    }

    #[test]
    fn preset_rejects_stray_epsilon() {
        let s = ShapeArgs {
            epsilon: Some(0.3),
            ..Default::default()
        };
        assert!(s.params().is_err());
        assert!(ShapeArgs::default().params().unwrap().is_corollary());
    }
}
