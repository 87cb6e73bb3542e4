//! The `tarski` command line: solve, gen, bench, verify.
//!
//! Exit codes: 0 on success, 2 on usage/parse/capacity/io errors, 3 when `F`
//! turns out not to be monotone (or a benchmark answer fails verification),
//! 1 for internal failures.

pub mod bench;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use tarski_core::levelset::{solve_with, NoObserver, SolveOptions};
use tarski_core::oracle::{self, TraceRecord};
use tarski_core::{baseline, CountedOracle, Error, Instance, Point};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("answer failed verification: {0}")]
    Unverified(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Violation(_)) | CliError::Unverified(_) => 3,
            CliError::Core(Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Levelset,
    Dqy,
    Brute,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Levelset => "levelset",
            Algo::Dqy => "dqy",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// `F(x) = x + sign(target - x)`, unique fixed point
    Target,
    /// running-max random table
    Random,
    /// nonnegative affine map plus monotone noise (3D)
    Affine,
    /// perturbed coordinate rotation (3D)
    Rotation,
}

#[derive(Debug, Parser)]
#[command(name = "tarski", version, about = "Fixed points of monotone functions on integer grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find a fixed point and report the number of distinct queries
    Solve {
        #[arg(long, conflicts_with_all = ["shape", "target"])]
        instance: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', requires = "target")]
        shape: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', requires = "shape", allow_negative_numbers = true)]
        target: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value = "levelset")]
        algo: Algo,
        /// Write one tab-separated record per distinct query
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Query every point certified only by monotonicity
        #[arg(long)]
        verify_certificates: bool,
    },
    /// Write an instance file
    Gen {
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<i64>,
        #[arg(long, value_enum, default_value = "target")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed point for `--kind target`; sampled from the seed when omitted
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        target: Option<Vec<i64>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Query counts over cube sides, as CSV
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sides: Vec<i64>,
        #[arg(long, value_enum, default_value = "target")]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "levelset,dqy")]
        algos: Vec<Algo>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Report 0 for wall time, making the CSV byte-reproducible
        #[arg(long)]
        no_wall_time: bool,
    },
    /// Check monotonicity and list every fixed point
    Verify {
        #[arg(long)]
        instance: PathBuf,
    },
}

/// Result of one solver run.
#[derive(Clone, Debug)]
pub struct SolveRun {
    pub fixed_point: Point,
    pub queries: u64,
    pub trace: Option<Vec<TraceRecord>>,
}

pub fn solve_instance(inst: &Instance, algo: Algo, verify: bool, trace: bool) -> Result<SolveRun, CliError> {
    let mut o = CountedOracle::new(inst);
    if trace {
        o = o.with_trace();
    }
    let fixed_point = match algo {
        Algo::Levelset => solve_with(&mut o, &SolveOptions { verify_certificates: verify }, &mut NoObserver)?.fixed_point,
        Algo::Dqy => baseline::dqy_solve(&mut o, &inst.grid(), verify)?.fixed_point,
        Algo::Brute => baseline::brute_solve(&mut o, &inst.grid())?,
    };
    // re-verified through the oracle; cached, so the count does not change
    if o.query(&fixed_point)? != fixed_point {
        return Err(CliError::Unverified(format!("{fixed_point} is not fixed")));
    }
    Ok(SolveRun { fixed_point, queries: o.distinct_queries(), trace: o.transcript().map(<[_]>::to_vec) })
}

fn output(path: &Option<PathBuf>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(out),
    }
}

fn write_trace(path: &Path, records: &[TraceRecord]) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()?;
    Ok(())
}

fn report_violation(err: &CliError, stderr: &mut dyn Write) {
    let Some(report) = (match err {
        CliError::Core(e) => e.violation(),
        _ => None,
    }) else {
        return;
    };
    let _ = writeln!(stderr, "step: {}", report.step);
    match &report.witness {
        Some(w) => {
            let _ = writeln!(stderr, "witness: {w}");
        }
        None => {
            let _ = writeln!(stderr, "witness: none found among the implicated queries");
        }
    }
    let _ = writeln!(stderr, "implicated queries:");
    for (x, fx) in &report.queries {
        let _ = writeln!(stderr, "  F{x} = {fx}");
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { instance, shape, target, algo, trace, verify_certificates } => {
            let inst = match (instance, shape, target) {
                (Some(path), _, _) => oracle::load(path)?,
                (None, Some(shape), Some(target)) => Instance::target(&shape, Point::new(target))?,
                _ => return Err(CliError::Usage("give --instance or both --shape and --target".into())),
            };
            let run = solve_instance(&inst, algo, verify_certificates, trace.is_some())?;
            if let (Some(path), Some(records)) = (&trace, &run.trace) {
                write_trace(path, records)?;
            }
            writeln!(out, "fixed_point = {}", run.fixed_point)?;
            writeln!(out, "queries = {}", run.queries)?;
        }
        Command::Gen { shape, kind, seed, target, output: path } => {
            let inst = match (kind, target) {
                (Kind::Target, Some(t)) => Instance::target(&shape, Point::new(t))?,
                (_, Some(_)) => return Err(CliError::Usage("--target only applies to --kind target".into())),
                (kind, None) => bench::instance_for(kind, &shape, seed)?,
            };
            let text = oracle::to_text(&inst);
            output(&path, out, |w| Ok(w.write_all(text.as_bytes())?))?;
        }
        Command::Bench { sides, kind, reps, seed, algos, output: path, no_wall_time } => {
            let cfg = bench::BenchConfig { sides, kind, reps, seed, algos, wall_time: !no_wall_time };
            let rows = bench::run_bench(&cfg)?;
            output(&path, out, |w| bench::write_csv(&rows, w))?;
        }
        Command::Verify { instance } => {
            let inst = oracle::load(instance)?;
            let witness = oracle::verify_monotone(&inst)?;
            match &witness {
                None => writeln!(out, "monotone: yes")?,
                Some(w) => {
                    writeln!(out, "monotone: no")?;
                    writeln!(out, "witness: {w}")?;
                }
            }
            let fixed = oracle::fixed_points_bruteforce(&inst)?;
            writeln!(out, "fixed_points = {}", fixed.len())?;
            for p in fixed {
                writeln!(out, "{p}")?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(out, "{text}") };
            return e.exit_code();
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            report_violation(&e, stderr);
            e.exit_code()
        }
    }
}
