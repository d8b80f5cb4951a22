//! `ffiter` — code lookup tables for fast-forward iteration, evaluate
//! iterates, generate instance families, and run the descent experiment.
//!
//! Data goes to stdout (or the requested output file), diagnostics to
//! stderr. Exit codes: 0 success, 2 validation error, 3 I/O error, 4
//! check mismatch.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ffiter::codec::{build_code, CodeKind, FastForwardCode, IndexMode};
use ffiter::decompose::{descent_bound, DecompositionStrategy};
use ffiter::experiment::{
    emit_csv, emit_detail_csv, run_experiment_detailed, DescentStats, DEFAULT_SEED,
};
use ffiter::generators::{
    anti_chain_function, chain_function, random_function, random_permutation, staircase_function,
};
use ffiter::oracle::oracle_iterate;
use ffiter::{io as ffio, Error};

#[derive(Parser)]
#[command(
    name = "ffiter",
    version,
    about = "Fast-forward evaluation of iterated lookup-table functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read a table file, code it, and write the code file
    Build {
        /// Table file to code
        #[arg(long)]
        input: PathBuf,
        /// Destination code file
        #[arg(long)]
        output: PathBuf,
        /// Decomposition strategy; `cycle` requires a permutation
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        /// Component index representation
        #[arg(long, value_enum, default_value_t = IndexArg::Dense)]
        index: IndexArg,
    },
    /// Evaluate f^m(x) from a code file; prints `value descents table_reads`
    Eval {
        /// Code file produced by `build`
        #[arg(long)]
        code: PathBuf,
        /// Point to iterate from
        #[arg(long)]
        x: usize,
        /// Iterate count
        #[arg(long)]
        m: u64,
        /// Re-derive the value from this table with the brute-force oracle
        /// and fail (exit 4) on mismatch
        #[arg(long)]
        check: Option<PathBuf>,
        /// Log every descent (component index and remaining count) to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Write a table file from one of the named families
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Domain size
        #[arg(long)]
        n: usize,
        /// Generator seed (random families only)
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the descent-statistics experiment and write a CSV
    Stats {
        /// Smallest domain exponent (n = 2^min_exp)
        #[arg(long = "min-exp")]
        min_exp: u32,
        /// Largest domain exponent
        #[arg(long = "max-exp")]
        max_exp: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        /// CSV destination; `-` writes to stdout
        #[arg(long)]
        out: PathBuf,
        /// Optional per-sample detail CSV
        #[arg(long)]
        detail: Option<PathBuf>,
    },
    /// Summarize a code file: sizes, orbit kinds, and descent depths
    Inspect {
        #[arg(long)]
        code: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Ordered,
    Greedy,
    Cycle,
}

impl From<StrategyArg> for DecompositionStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Ordered => DecompositionStrategy::OrderedOrbit,
            StrategyArg::Greedy => DecompositionStrategy::GreedyOrbit,
            StrategyArg::Cycle => DecompositionStrategy::OrderedCycle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IndexArg {
    Dense,
    Bsearch,
}

impl From<IndexArg> for IndexMode {
    fn from(i: IndexArg) -> Self {
        match i {
            IndexArg::Dense => IndexMode::Dense,
            IndexArg::Bsearch => IndexMode::BinarySearch,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Random,
    Perm,
    Chain,
    Antichain,
    Staircase,
}

enum AppError {
    Lib(Error),
    BadArgs(String),
    CheckMismatch {
        x: usize,
        m: u64,
        expected: usize,
        actual: usize,
    },
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Lib(e)
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Lib(e) => write!(f, "{}: {e}", error_name(e)),
            AppError::BadArgs(msg) => write!(f, "BadArgs: {msg}"),
            AppError::CheckMismatch {
                x,
                m,
                expected,
                actual,
            } => write!(
                f,
                "CheckMismatch: code evaluates f^{m}({x}) = {actual} but the oracle says {expected}"
            ),
        }
    }
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Lib(Error::Io(_)) => 3,
            AppError::Lib(_) | AppError::BadArgs(_) => 2,
            AppError::CheckMismatch { .. } => 4,
        }
    }
}

fn error_name(e: &Error) -> &'static str {
    match e {
        Error::OutOfRange { .. } => "OutOfRange",
        Error::LengthMismatch { .. } => "LengthMismatch",
        Error::EmptyDomain => "EmptyDomain",
        Error::NotInjective { .. } => "NotInjective",
        Error::XOutOfRange { .. } => "XOutOfRange",
        Error::ParseError { .. } => "ParseError",
        Error::BadMagic(_) => "BadMagic",
        Error::InvariantViolation(_) => "InvariantViolation",
        Error::Io(_) => "Io",
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(command: Command) -> Result<(), AppError> {
    match command {
        Command::Build {
            input,
            output,
            strategy,
            index,
        } => cmd_build(&input, &output, strategy.into(), index.into()),
        Command::Eval {
            code,
            x,
            m,
            check,
            trace,
        } => cmd_eval(&code, x, m, check.as_deref(), trace),
        Command::Gen {
            family,
            n,
            seed,
            output,
        } => cmd_gen(family, n, seed, &output),
        Command::Stats {
            min_exp,
            max_exp,
            samples,
            seed,
            strategy,
            out,
            detail,
        } => cmd_stats(
            min_exp,
            max_exp,
            samples,
            seed,
            strategy.into(),
            &out,
            detail.as_deref(),
        ),
        Command::Inspect { code } => cmd_inspect(&code),
    }
}

fn open(path: &Path) -> Result<File, AppError> {
    File::open(path).map_err(|e| AppError::Lib(e.into()))
}

fn create(path: &Path) -> Result<BufWriter<File>, AppError> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| AppError::Lib(Error::from(e)))?,
    ))
}

fn cmd_build(
    input: &Path,
    output: &Path,
    strategy: DecompositionStrategy,
    index: IndexMode,
) -> Result<(), AppError> {
    let table = ffio::read_table(open(input)?)?;
    let started = Instant::now();
    let code = build_code(&table, strategy, index)?;
    let elapsed = started.elapsed();
    ffio::write_code(&code, create(output)?)?;
    let bound = match strategy {
        DecompositionStrategy::OrderedCycle => 0,
        DecompositionStrategy::GreedyOrbit => descent_bound(table.n()),
        DecompositionStrategy::OrderedOrbit => table.n() - 1,
    };
    println!(
        "components={} bound={} build_ms={:.3}",
        code.num_components(),
        bound,
        elapsed.as_secs_f64() * 1e3
    );
    Ok(())
}

fn cmd_eval(
    code_path: &Path,
    x: usize,
    m: u64,
    check: Option<&Path>,
    trace: bool,
) -> Result<(), AppError> {
    let code = ffio::read_code(open(code_path)?)?;
    let result = if trace {
        code.iterate_with_trace(x, m, |component, remaining| {
            eprintln!("descend component={component} r={remaining}");
        })?
    } else {
        code.iterate(x, m)?
    };
    println!(
        "{} {} {}",
        result.value, result.descents, result.table_reads
    );
    if let Some(table_path) = check {
        let table = ffio::read_table(open(table_path)?)?;
        let expected = oracle_iterate(&table, x, m)?;
        if expected != result.value {
            return Err(AppError::CheckMismatch {
                x,
                m,
                expected,
                actual: result.value,
            });
        }
        eprintln!("check ok: oracle agrees");
    }
    Ok(())
}

fn cmd_gen(family: FamilyArg, n: usize, seed: u64, output: &Path) -> Result<(), AppError> {
    if n == 0 {
        return Err(AppError::Lib(Error::EmptyDomain));
    }
    let table = match family {
        FamilyArg::Random => random_function(n, seed),
        FamilyArg::Perm => random_permutation(n, seed).into_table(),
        FamilyArg::Chain => chain_function(n),
        FamilyArg::Antichain => anti_chain_function(n),
        FamilyArg::Staircase => {
            let s = staircase_function(n);
            eprintln!("staircase depth={} core_size={}", s.depth, s.core_size);
            s.table
        }
    };
    ffio::write_table(&table, create(output)?)?;
    Ok(())
}

fn cmd_stats(
    min_exp: u32,
    max_exp: u32,
    samples: usize,
    seed: u64,
    strategy: DecompositionStrategy,
    out: &Path,
    detail: Option<&Path>,
) -> Result<(), AppError> {
    if min_exp < 1 || min_exp > max_exp || max_exp > 62 {
        return Err(AppError::BadArgs(format!(
            "need 1 <= min-exp <= max-exp <= 62, got {min_exp}..{max_exp}"
        )));
    }
    if samples == 0 {
        return Err(AppError::BadArgs("need at least one sample".into()));
    }

    let run = || run_experiment_detailed(min_exp, max_exp, samples, seed, strategy);
    let (stats, details) = match thread_cap() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| AppError::BadArgs(format!("cannot build thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    for s in &stats {
        eprintln!("{}", summary_line(s));
    }
    if out == Path::new("-") {
        emit_csv(&stats, std::io::stdout().lock())?;
    } else {
        emit_csv(&stats, create(out)?)?;
    }
    if let Some(path) = detail {
        emit_detail_csv(&details, create(path)?)?;
    }
    Ok(())
}

fn thread_cap() -> Option<usize> {
    std::env::var("FFITER_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&k| k >= 1)
}

fn summary_line(s: &DescentStats) -> String {
    format!(
        "n={} samples={} max={} avg={:.3} bound={} elapsed_ms={}",
        s.n,
        s.samples,
        s.max_descents,
        s.avg_descents,
        s.bound,
        s.elapsed.as_millis()
    )
}

fn cmd_inspect(code_path: &Path) -> Result<(), AppError> {
    let code = ffio::read_code(open(code_path)?)?;
    let depths = code.descent_depths();
    let rho = (0..code.num_components())
        .filter(|&i| code.aux()[i] >= code.starts()[i])
        .count();

    println!("n={}", code.n());
    println!(
        "kind={}",
        match code.kind() {
            CodeKind::Permutation => "perm",
            CodeKind::General => "func",
        }
    );
    println!("components={}", code.num_components());
    println!("rho_orbits={}", rho);
    println!("descent_orbits={}", code.num_components() - rho);
    println!(
        "structure_histogram={}",
        histogram(component_sizes(&code).into_iter())
    );
    println!("depth_histogram={}", histogram(depths.iter().copied()));
    println!("worst_descents={}", depths.iter().max().copied().unwrap_or(0));
    if code.num_components() <= 64 {
        let rendered: Vec<String> = depths.iter().map(usize::to_string).collect();
        println!("component_depths={}", rendered.join(" "));
    }
    Ok(())
}

fn component_sizes(code: &FastForwardCode) -> Vec<usize> {
    code.starts().windows(2).map(|w| w[1] - w[0]).collect()
}

/// `value:count` pairs sorted by value, space separated.
fn histogram(values: impl Iterator<Item = usize>) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(v, c)| format!("{v}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}
