//! `qea-sim`: run, benchmark, compare and model circuits on the QEA emulator.

mod commands;
mod io;

use std::io::{BufWriter, ErrorKind, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qea_core::engine::{with_workers, Arithmetic};
use qea_core::generators::Topology;
use qea_core::pe_model::PEConfig;

#[derive(Parser, Debug)]
#[command(name = "qea-sim", version, about = "Fixed-point quantum emulator and accelerator model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute one circuit and write the final state dump.
    Run(RunArgs),
    /// Benchmark circuits: accuracy, wall time and modeled time.
    Bench(BenchArgs),
    /// Fixed-point vs double-precision accuracy table.
    Compare(CompareArgs),
    /// Memory footprint and cycle estimates.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PeArgs {
    /// Number of processing elements (power of two).
    #[arg(long, default_value_t = 4)]
    pub pes: usize,
    /// Special units per PE.
    #[arg(long, default_value_t = 2)]
    pub sus: usize,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 2.5e8)]
    pub freq: f64,
    /// Cycles charged per cross-PE pair access.
    #[arg(long, default_value_t = 1)]
    pub penalty: u64,
    /// Fixed cycles charged per gate.
    #[arg(long, default_value_t = 0)]
    pub overhead: u64,
}

impl PeArgs {
    pub fn config(&self) -> PEConfig {
        PEConfig {
            num_pes: self.pes,
            sus_per_pe: self.sus,
            freq_hz: self.freq,
            cross_pe_penalty_cycles: self.penalty,
            per_gate_overhead_cycles: self.overhead,
            ..PEConfig::default()
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Circuit file (text format or JSON IR).
    pub file: Option<PathBuf>,
    /// Generator spec, e.g. `qft:17` or `chain:8:3:1`.
    #[arg(long, value_name = "SPEC")]
    pub generate: Option<String>,
    #[arg(long, default_value_t = Arithmetic::Fixed)]
    pub arith: Arithmetic,
    /// State dump destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the run statistics as JSON.
    #[arg(long, value_name = "PATH")]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(subcommand)]
    pub suite: BenchSuite,
    /// JSON-lines report destination.
    #[arg(long, global = true, default_value = "bench.jsonl")]
    pub out: PathBuf,
    /// Timed runs per circuit; the median is reported.
    #[arg(long, global = true, default_value_t = 5)]
    pub repeats: usize,
    /// Run suite entries concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(flatten)]
    pub pe: PeArgs,
}

#[derive(Subcommand, Debug)]
pub enum BenchSuite {
    /// QFT over a qubit range.
    Qft {
        #[arg(long, value_parser = io::parse_qubit_range)]
        qubits: RangeInclusive<usize>,
    },
    /// One topology template over a qubit range.
    Template {
        #[arg(long)]
        topology: Topology,
        #[arg(long, value_parser = io::parse_qubit_range)]
        qubits: RangeInclusive<usize>,
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Circuit files and generator specs.
    Circuits {
        files: Vec<PathBuf>,
        #[arg(long, value_name = "SPEC")]
        generate: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub files: Vec<PathBuf>,
    #[arg(long, value_name = "SPEC")]
    pub generate: Vec<String>,
    /// Add the 19-template suite.
    #[arg(long)]
    pub suite: bool,
    /// Qubit count for the template suite.
    #[arg(long, default_value_t = 8)]
    pub qubits: usize,
    /// Seed for the template suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Qubit range for the memory table.
    #[arg(long, value_parser = io::parse_qubit_range)]
    pub qubits: Option<RangeInclusive<usize>>,
    /// Gate count assumed by the memory table.
    #[arg(long, default_value_t = 0)]
    pub gates: usize,
    /// Circuit for a cycle report.
    pub file: Option<PathBuf>,
    #[arg(long, value_name = "SPEC")]
    pub generate: Option<String>,
    /// Fit the per-gate overhead so the circuit takes this many seconds.
    #[arg(long, value_name = "SECONDS")]
    pub calibrate: Option<f64>,
    /// Also write the estimates as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pe: PeArgs,
}

fn worker_cap() -> Result<Option<usize>> {
    match std::env::var("QEA_SIM_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| format!("QEA_SIM_THREADS=`{v}` is not a count"))?;
            Ok(Some(n.max(1)))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context("QEA_SIM_THREADS"),
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    let mut out = BufWriter::new(std::io::stdout().lock());
    let ok = match cli.command {
        Command::Run(a) => commands::run(&a, &mut out),
        Command::Bench(a) => commands::bench(&a, &mut out),
        Command::Compare(a) => commands::compare(&a, &mut out),
        Command::Estimate(a) => commands::estimate(&a, &mut out),
    }?;
    out.flush()?;
    Ok(ok)
}

/// A reader that closed the pipe early is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().filter_map(|c| c.downcast_ref::<std::io::Error>()).any(|io| io.kind() == ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = worker_cap().and_then(|cap| match cap {
        Some(workers) => with_workers(workers, || dispatch(cli))?,
        None => dispatch(cli),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
