mod subprocess;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use interval_conform::adapters::{Builtin, Evaluator, Naive32};
use interval_conform::conformance::{
    render_records, render_table, run_suite, Claim, Level, Report, SuiteOptions,
};
use interval_conform::oracle::{self, OracleConfig};
use interval_conform::pairgen::{self, gen_function_suite, SuiteSpec};
use interval_conform::protocol;
use interval_conform::selftest::{self, SelfTestOptions};
use interval_conform::{Format, FunctionId};

use subprocess::SubprocessAdapter;

/// Overrides the oracle's precision cap, in bits.
const Q_MAX_ENV: &str = "IVCONFORM_Q_MAX";

const EXIT_CLAIM: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_ADAPTER: u8 = 3;

#[derive(Parser)]
#[command(name = "ivconform", version, about = "Interval library conformance harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Builtin,
    Naive32,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportStyle {
    Table,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    OffByOne,
    FlushToZero,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pair file for one function and format.
    Gen {
        #[arg(long = "fn", value_parser = clap::value_parser!(FunctionId))]
        function: FunctionId,
        #[arg(long, default_value = "b64")]
        format: Format,
        /// Number of random pairs.
        #[arg(long, default_value_t = pairgen::DEFAULT_RANDOM_PAIRS)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_specials: bool,
    },
    /// Evaluate a pair file with a target and grade the results.
    Check {
        #[arg(long)]
        pairs: PathBuf,
        /// In-process evaluator.
        #[arg(long, conflicts_with = "adapter")]
        target: Option<Target>,
        /// Adapter command line, split on whitespace.
        #[arg(long)]
        adapter: Option<String>,
        /// Claimed mode; defaults to the modes the target declares.
        #[arg(long)]
        claim: Option<Level>,
        #[arg(long, value_enum, default_value = "table")]
        report: ReportStyle,
        /// Per-request timeout in seconds.
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
        /// Faults tolerated before the run is abandoned.
        #[arg(long, default_value_t = 5)]
        fault_budget: usize,
    },
    /// Serve a built-in evaluator over the adapter protocol on stdin/stdout.
    Serve {
        #[arg(value_enum)]
        target: Target,
    },
    /// Check the harness itself.
    Selftest {
        #[arg(long, default_value_t = SelfTestOptions::default().n_random)]
        n_random: usize,
        #[arg(long, default_value_t = SelfTestOptions::default().seed)]
        seed: u64,
        /// Run with deliberately broken neighbour functions.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
}

fn oracle_config() -> Result<OracleConfig, String> {
    let mut cfg = OracleConfig::default();
    if let Ok(v) = std::env::var(Q_MAX_ENV) {
        cfg.q_max = v.trim().parse().map_err(|_| format!("{Q_MAX_ENV}: not an integer: `{v}`"))?;
    }
    Ok(cfg)
}

fn cmd_gen(
    function: FunctionId,
    format: Format,
    n: usize,
    seed: u64,
    out: Option<PathBuf>,
    no_specials: bool,
) -> ExitCode {
    let cfg = match oracle_config().and_then(|c| c.validate(format).map(|_| c).map_err(|e| e.to_string())) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let spec = SuiteSpec {
        n_random: n,
        seed,
        include_specials: !no_specials,
        ..SuiteSpec::new(function, format)
    };
    oracle::reset_precision_stats();
    let pairs = match gen_function_suite(&spec, &cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let written = match &out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            pairgen::write_pairs(&mut w, &pairs, Some(seed))?;
            w.flush()
        }),
        None => pairgen::write_pairs(&mut io::stdout().lock(), &pairs, Some(seed)),
    };
    if let Err(e) = written {
        eprintln!("error: writing pairs: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    let stats = oracle::precision_stats();
    eprintln!(
        "{} pairs for {function} {format}{}",
        pairs.len(),
        out.map(|p| format!(" written to {}", p.display())).unwrap_or_default()
    );
    eprintln!(
        "oracle: {} endpoints certified, {} precision increases, largest precision {} bits (start {}, cap {})",
        stats.certified,
        stats.escalations,
        stats.max_q,
        cfg.start(format),
        cfg.q_max
    );
    ExitCode::SUCCESS
}

fn exit_for(report: &Report) -> ExitCode {
    if report.aborted {
        ExitCode::from(EXIT_ADAPTER)
    } else if report.claim_upheld {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CLAIM)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    pairs: PathBuf,
    target: Option<Target>,
    adapter: Option<String>,
    claim: Option<Level>,
    report: ReportStyle,
    timeout: f64,
    fault_budget: usize,
) -> ExitCode {
    let file = match File::open(&pairs)
        .map_err(|e| e.to_string())
        .and_then(|f| pairgen::read_pairs(BufReader::new(f)).map_err(|e| e.to_string()))
    {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", pairs.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let timeout = Duration::from_secs_f64(timeout.max(0.001));
    let mut evaluator: Box<dyn FnMut(FunctionId, &[interval_conform::Interval]) -> Result<_, String>>;
    let declared;
    match (target, adapter) {
        (_, Some(cmd)) => {
            let words: Vec<String> = cmd.split_whitespace().map(String::from).collect();
            let mut a = match SubprocessAdapter::launch(words, timeout) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_ADAPTER);
                }
            };
            declared = a.capabilities().modes.clone();
            evaluator = Box::new(move |f, args| a.evaluate(f, args));
        }
        (t, None) => {
            let mut e: Box<dyn Evaluator> = match t.unwrap_or(Target::Builtin) {
                Target::Builtin => Box::new(Builtin),
                Target::Naive32 => Box::new(Naive32),
            };
            declared = e.capabilities().modes;
            evaluator = Box::new(move |f, args| e.evaluate(f, args));
        }
    }
    let options = SuiteOptions {
        claim: claim.map_or(Claim::PerFunction(declared), Claim::Uniform),
        fault_budget: Some(fault_budget),
    };
    let result = run_suite(&file.pairs, |p| evaluator(p.f, &p.args), &options);
    let text = match report {
        ReportStyle::Table => render_table(&result),
        ReportStyle::Records => render_records(&result),
    };
    print!("{text}");
    exit_for(&result)
}

fn cmd_serve(target: Target) -> ExitCode {
    let mut e: Box<dyn Evaluator> = match target {
        Target::Builtin => Box::new(Builtin),
        Target::Naive32 => Box::new(Naive32),
    };
    match protocol::serve(e.as_mut(), io::stdin().lock(), io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn cmd_selftest(n_random: usize, seed: u64, mutate: Option<Mutation>) -> ExitCode {
    let opts = SelfTestOptions { n_random, seed };
    let report = match mutate {
        None => selftest::run_selftest(&selftest::Standard, &opts),
        Some(Mutation::OffByOne) => selftest::run_selftest(&selftest::OffByOne, &opts),
        Some(Mutation::FlushToZero) => selftest::run_selftest(&selftest::FlushToZero, &opts),
    };
    print!("{}", report.render());
    if report.passed() {
        println!("selftest passed");
        ExitCode::SUCCESS
    } else {
        println!("selftest failed");
        ExitCode::from(EXIT_CLAIM)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Gen {
            function,
            format,
            n,
            seed,
            out,
            no_specials,
        } => cmd_gen(function, format, n, seed, out, no_specials),
        Command::Check {
            pairs,
            target,
            adapter,
            claim,
            report,
            timeout,
            fault_budget,
        } => cmd_check(pairs, target, adapter, claim, report, timeout, fault_budget),
        Command::Serve { target } => cmd_serve(target),
        Command::Selftest {
            n_random,
            seed,
            mutate,
        } => cmd_selftest(n_random, seed, mutate),
    }
}
