//! Command-line front end for the addition-only factoring engine: factor
//! numbers, certify primality, dump step traces, reproduce the reference
//! results table, sweep benchmark grids, and audit the arithmetic a run
//! used.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 step budget exhausted,
//! 3 composite (`prime` only).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use diofac::audit::{AuditContext, OpCounts};
use diofac::bench::{self, BenchRecord, SweepConfig, DEFAULT_BUDGET};
use diofac::engine::{self, OddInteger, RunStatus};
use diofac::factorize::{self, Factorization};

/// Column order for `table` output.
const TABLE_HEADER: &str = "n,a,b,c,p,q,n_check,i";
/// Column order for `trace` output.
const TRACE_HEADER: &str = "k,b,c,y,branch";
/// Rows whose step count exceeds this stay out of `table` runs unless
/// `--all` asks for them.
const LONG_ROW_CUTOFF: u64 = 10_000_000;

#[derive(Parser)]
#[command(
    name = "diofac",
    version,
    about = "Factor odd integers with an addition-only search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an integer completely (twos stripped first).
    Factor(FactorArgs),
    /// Certify an odd integer prime (exit 0) or composite (exit 3).
    Prime(PrimeArgs),
    /// Dump the per-step search trajectory as CSV.
    Trace(TraceArgs),
    /// Reproduce the reference results table as CSV.
    Table(TableArgs),
    /// Measure step counts over prime pairs as CSV.
    Bench(BenchArgs),
    /// Report the arithmetic operation counts of one run.
    Audit(AuditArgs),
}

#[derive(Args)]
struct FactorArgs {
    /// The integer to factor.
    n: String,
    /// Cap on total search steps across all runs.
    #[arg(long)]
    budget: Option<u64>,
    /// Emit the result as JSON.
    #[arg(long)]
    json: bool,
    /// Read the input as hexadecimal.
    #[arg(long)]
    hex: bool,
    /// List every engine run after the summary.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct PrimeArgs {
    /// The odd integer (at least 3) to test.
    n: String,
    /// Read the input as hexadecimal.
    #[arg(long)]
    hex: bool,
}

#[derive(Args)]
struct TraceArgs {
    /// The odd integer to trace.
    n: String,
    /// Stop after this many steps.
    #[arg(long)]
    limit: Option<u64>,
    /// Read the input as hexadecimal.
    #[arg(long)]
    hex: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// How many reference rows to run (0 to 9).
    #[arg(long, default_value_t = 9)]
    rows: u32,
    /// Include rows that need more than 10^7 steps.
    #[arg(long)]
    all: bool,
    /// Append the off-ratio extra pair 13 * 256410241.
    #[arg(long)]
    extra: bool,
    /// Cap on search steps per row; exceeded rows are marked.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Target sizes (rounded log2 n), comma separated.
    #[arg(long, value_delimiter = ',')]
    bits: Vec<u32>,
    /// Target ratios (rounded log2 q - log2 p), comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [3u32])]
    gaps: Vec<u32>,
    /// Prime pairs per (size, ratio) cell.
    #[arg(long, default_value_t = 2)]
    samples: usize,
    /// Cap on search steps per pair; exceeded pairs are marked.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Sampler seed; equal seeds give identical CSV.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Measure the fixed reference pairs instead of sampling.
    #[arg(long)]
    reference: bool,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// The odd integer to run and audit.
    n: String,
    /// Read the input as hexadecimal.
    #[arg(long)]
    hex: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Factor(args) => cmd_factor(args),
        Command::Prime(args) => cmd_prime(args),
        Command::Trace(args) => cmd_trace(args),
        Command::Table(args) => cmd_table(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Audit(args) => cmd_audit(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// Parse a nonnegative integer, decimal by default, hexadecimal (with or
/// without a `0x` prefix) behind the flag.
fn parse_integer(text: &str, hex: bool) -> Result<BigUint, String> {
    let trimmed = text.trim();
    let (digits, radix, label) = if hex {
        let stripped = trimmed
            .strip_prefix("0x")
            .or_else(|| trimmed.strip_prefix("0X"))
            .unwrap_or(trimmed);
        (stripped, 16, "hexadecimal")
    } else {
        (trimmed, 10, "decimal")
    };
    if digits.is_empty() {
        return Err(format!("not a {label} integer: {text:?}"));
    }
    BigUint::parse_bytes(digits.as_bytes(), radix)
        .ok_or_else(|| format!("not a {label} integer: {text:?}"))
}

/// Print lines to standard output, or to `out` when given.
fn emit_lines(lines: &[String], out: Option<&Path>) -> Result<(), String> {
    let text = lines.join("\n") + "\n";
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|err| format!("cannot write {}: {err}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Exponent digits as Unicode superscripts: `25` becomes `²⁵`.
fn superscript(exponent: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    exponent
        .to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

/// `[(2, 5), (3, 1)]` rendered as `2⁵ · 3`.
fn render_product(factors: &[(BigUint, u32)]) -> String {
    factors
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}{}", superscript(*e))
            }
        })
        .collect::<Vec<_>>()
        .join(" · ")
}

/// The one-line verdict for a completed factorization.
fn summary_line(n: &BigUint, f: &Factorization) -> String {
    if f.factors.is_empty() {
        return format!("{n} = 1");
    }
    if f.factors.len() == 1 && f.factors[0].1 == 1 {
        let steps = f
            .certifications
            .first()
            .map(|c| format!(" (i = {})", c.iterations))
            .unwrap_or_default();
        return format!("{n} is prime{steps}");
    }
    let mut line = format!("{n} = {}", render_product(&f.factors));
    if f.splits.len() == 1 {
        line.push_str(&format!(" (i = {})", f.splits[0].iterations));
    }
    line
}

fn runs_json(runs: &[factorize::RunLog]) -> serde_json::Value {
    runs.iter()
        .map(|r| {
            serde_json::json!({
                "input": r.input.to_string(),
                "p": r.p.to_string(),
                "q": r.q.to_string(),
                "iterations": r.iterations,
            })
        })
        .collect()
}

fn factor_json(n: &BigUint, f: &Factorization) -> serde_json::Value {
    serde_json::json!({
        "n": n.to_string(),
        "complete": f.complete,
        "factors": f
            .factors
            .iter()
            .map(|(p, e)| serde_json::json!({"prime": p.to_string(), "exponent": e}))
            .collect::<Vec<_>>(),
        "pending": f.pending.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "splits": runs_json(&f.splits),
        "certifications": runs_json(&f.certifications),
        "total_iterations": f.total_iterations(),
    })
}

fn cmd_factor(args: FactorArgs) -> Result<ExitCode, String> {
    let n = parse_integer(&args.n, args.hex)?;
    let f = factorize::full_factorization(&n, args.budget).map_err(|e| e.to_string())?;
    let code = if f.complete {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    };
    if args.json {
        println!("{}", factor_json(&n, &f));
        return Ok(code);
    }
    if !f.complete {
        let cap = args.budget.expect("only a budget can leave work pending");
        println!("budget of {cap} steps exhausted");
        if !f.factors.is_empty() {
            println!("certified: {}", render_product(&f.factors));
        }
        let pending: Vec<String> = f.pending.iter().map(ToString::to_string).collect();
        println!("unresolved: {}", pending.join(" · "));
        return Ok(code);
    }
    println!("{}", summary_line(&n, &f));
    if f.splits.len() > 1 {
        for s in &f.splits {
            println!("  {} = {} · {} (i = {})", s.input, s.p, s.q, s.iterations);
        }
    }
    if args.verbose {
        println!("runs:");
        for s in &f.splits {
            println!("  {} -> {} · {} (i = {})", s.input, s.p, s.q, s.iterations);
        }
        for c in &f.certifications {
            println!("  {} is prime (i = {})", c.input, c.iterations);
        }
    }
    Ok(code)
}

fn cmd_prime(args: PrimeArgs) -> Result<ExitCode, String> {
    let n = parse_integer(&args.n, args.hex)?;
    let cert = factorize::certify_prime(&n, None).map_err(|e| e.to_string())?;
    if cert.is_prime {
        println!("{n} is prime (i = {})", cert.iterations);
        Ok(ExitCode::SUCCESS)
    } else {
        let (p, q) = cert.witness.expect("a composite verdict carries its split");
        println!("{n} = {p} · {q} (i = {})", cert.iterations);
        Ok(ExitCode::from(3))
    }
}

fn cmd_trace(args: TraceArgs) -> Result<ExitCode, String> {
    let n = parse_integer(&args.n, args.hex)?;
    let odd = OddInteger::new(n).map_err(|e| e.to_string())?;
    let mut ctx = AuditContext::new();
    let rows = engine::trace(&mut ctx, &odd, args.limit);
    let mut lines = vec![TRACE_HEADER.to_string()];
    lines.extend(
        rows.iter()
            .map(|r| format!("{},{},{},{},{}", r.k, r.b, r.c, r.y, r.branch)),
    );
    emit_lines(&lines, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, String> {
    if args.rows > 9 {
        return Err("--rows must be between 0 and 9".into());
    }
    let mut pairs: Vec<(u64, u64)> = bench::REFERENCE_PRIMES[..args.rows as usize].to_vec();
    if args.extra {
        pairs.push(bench::REFERENCE_EXTRA);
    }
    let mut lines = vec![TABLE_HEADER.to_string()];
    let mut exceeded = false;
    for (p, q) in pairs {
        let predicted = bench::predict_iterations(p, q).map_err(|e| e.to_string())?;
        if !args.all && predicted > LONG_ROW_CUTOFF {
            continue;
        }
        let odd = OddInteger::new(BigUint::from(p as u128 * q as u128))
            .expect("products of odd primes are odd");
        let mut ctx = AuditContext::new();
        let res = engine::run(&mut ctx, &odd, args.budget);
        let steps = match res.status {
            RunStatus::BudgetExceeded => {
                exceeded = true;
                "exceeded".to_string()
            }
            _ => res.iterations.to_string(),
        };
        let st = &res.state;
        let n_check = &res.p * &res.q;
        lines.push(format!(
            "{},{},{},{},{},{},{},{}",
            odd,
            st.a(),
            st.b(),
            st.c(),
            res.p,
            res.q,
            n_check,
            steps
        ));
    }
    emit_lines(&lines, args.out.as_deref())?;
    Ok(if exceeded {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

/// Describe, per ratio key populated at two or more sizes, how the mean
/// growth exponent moves with size. Goes to standard error so the CSV on
/// standard output stays clean.
fn report_trend(records: &[BenchRecord]) {
    let summary = bench::summarize(records);
    let mut gaps: Vec<u32> = summary.cells.iter().map(|c| c.gap).collect();
    gaps.sort_unstable();
    gaps.dedup();
    for gap in gaps {
        let exponents: Vec<f64> = summary
            .cells
            .iter()
            .filter(|c| c.gap == gap)
            .filter_map(|c| c.mean_h_est)
            .collect();
        if exponents.len() < 2 {
            continue;
        }
        let rising = exponents.windows(2).all(|w| w[0] < w[1]);
        let trend = if rising { "rises" } else { "is not monotone" };
        eprintln!(
            "gap {gap}: mean h_est {trend} from {:.6} to {:.6} across {} sizes",
            exponents.first().unwrap(),
            exponents.last().unwrap(),
            exponents.len()
        );
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let budget = Some(args.budget);
    let records = if args.reference {
        bench::measure_pairs(&bench::reference_pairs(), budget).map_err(|e| e.to_string())?
    } else if args.bits.is_empty() {
        Vec::new()
    } else {
        let cfg = SweepConfig {
            bits: args.bits,
            gaps: args.gaps,
            per_cell: args.samples,
            seed: args.seed,
            budget,
        };
        bench::sweep(&cfg).map_err(|e| e.to_string())?
    };
    let mut lines = vec![bench::CSV_HEADER.to_string()];
    lines.extend(records.iter().map(BenchRecord::csv_row));
    emit_lines(&lines, args.out.as_deref())?;
    report_trend(&records);
    Ok(ExitCode::SUCCESS)
}

fn counts_line(c: &OpCounts) -> String {
    format!(
        "adds = {}, subs = {}, shifts = {}, cmps = {}, muls = {}, divs = {}",
        c.adds, c.subs, c.shifts, c.cmps, c.muls, c.divs
    )
}

fn cmd_audit(args: AuditArgs) -> Result<ExitCode, String> {
    let n = parse_integer(&args.n, args.hex)?;
    let odd = OddInteger::new(n).map_err(|e| e.to_string())?;
    let mut ctx = AuditContext::new();
    let st = engine::init(&mut ctx, &odd);
    let at_init = ctx.report();
    let res = engine::resume(&mut ctx, st, None);
    let total = ctx.report();
    let in_loop = total.since(&at_init);
    println!("n = {odd}");
    println!("init:  {}", counts_line(&at_init));
    println!("loop:  {}", counts_line(&in_loop));
    println!("total: {}", counts_line(&total));
    println!("result: p = {}, q = {}, i = {}", res.p, res.q, res.iterations);
    Ok(ExitCode::SUCCESS)
}
