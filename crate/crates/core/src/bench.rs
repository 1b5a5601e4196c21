//! Benchmark harness: runs each circuit on the Q2.30 engine and the `f64`
//! reference, then assembles accuracy, timing, cycle and memory figures.
//!
//! Wall time and modeled time are reported side by side and never mixed.

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{transpile, Circuit, ClassCounts, TranspiledCircuit};
use crate::engine::{reference_run, run_circuit, EngineError, FixedState, FloatState};
use crate::metrics::{fidelity, mse, ngs, norm_error, MetricsError};
use crate::pe_model::{
    estimate_cycles, estimate_memory_matmul, estimate_memory_qea, CycleReport, ModelError, PEConfig,
};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedCircuit {
    pub name: String,
    pub circuit: Circuit,
}

impl NamedCircuit {
    pub fn new(name: impl Into<String>, circuit: Circuit) -> Self {
        Self { name: name.into(), circuit }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    /// Timed fixed-point runs per circuit; the median is reported.
    pub repeats: usize,
    /// Run suite entries concurrently. Timings then compete for cores.
    pub parallel_entries: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { repeats: 5, parallel_entries: false }
    }
}

/// Fixed-point run checked against the double-precision reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub fidelity: f64,
    pub mse: f64,
    /// `Σ|α|² − 1` of the fixed-point result.
    pub norm_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub name: String,
    pub n: usize,
    pub gates_source: ClassCounts,
    pub gates_transpiled: ClassCounts,
    pub global_phase: f64,
    pub fidelity: f64,
    pub mse: f64,
    pub norm_error: f64,
    /// Median wall time of the fixed-point gate loop.
    pub wall_time_s: f64,
    pub wall_time_runs: usize,
    pub ngs_wall: f64,
    pub modeled_cycles: u64,
    pub modeled_time_s: f64,
    pub ngs_modeled: f64,
    pub cross_pe_accesses: u64,
    pub memory_qea_bytes: u128,
    pub memory_matmul_bytes: u128,
    pub memory_ratio: f64,
}

impl BenchReport {
    pub fn gates(&self) -> usize {
        self.gates_transpiled.total()
    }
}

/// Runs `circuit` in Q2.30 and in `f64` from `|0…0⟩` and compares them.
pub fn compare(circuit: &TranspiledCircuit) -> Result<Comparison, BenchError> {
    let (fixed, _) = run_circuit(circuit, FixedState::zero_state(circuit.n)?)?;
    let reference = reference_run(circuit, &FloatState::zero_state(circuit.n)?)?;
    compare_states(&fixed, &reference)
}

fn compare_states(fixed: &FixedState, reference: &FloatState) -> Result<Comparison, BenchError> {
    // Both sides ran the same transpiled gates, so no phase separates them.
    Ok(Comparison {
        fidelity: fidelity(fixed, reference, 0.0)?,
        mse: mse(fixed, reference, 0.0)?,
        norm_error: norm_error(fixed),
    })
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

pub fn bench_one(entry: &NamedCircuit, cfg: &PEConfig, opts: &BenchOptions) -> Result<BenchReport, BenchError> {
    let tc = transpile(&entry.circuit);
    let n = tc.n;
    let cycles: CycleReport = estimate_cycles(&tc, cfg)?;

    let mut samples = Vec::with_capacity(opts.repeats.max(1));
    let mut fixed = None;
    for _ in 0..opts.repeats.max(1) {
        let (state, stats) = run_circuit(&tc, FixedState::zero_state(n)?)?;
        samples.push(stats.wall_time);
        fixed = Some(state);
    }
    let fixed = fixed.expect("at least one run");
    let reference = reference_run(&tc, &FloatState::zero_state(n)?)?;
    let cmp = compare_states(&fixed, &reference)?;

    let wall = median(samples).as_secs_f64();
    let gates = tc.len();
    let (ngs_wall, ngs_modeled) =
        if gates == 0 { (0.0, 0.0) } else { (ngs(wall, gates, n)?, ngs(cycles.modeled_time_s, gates, n)?) };
    let memory_qea_bytes = estimate_memory_qea(n, gates);
    let memory_matmul_bytes = estimate_memory_matmul(n);

    Ok(BenchReport {
        name: entry.name.clone(),
        n,
        gates_source: ClassCounts::of(&entry.circuit),
        gates_transpiled: tc.class_counts(),
        global_phase: tc.global_phase,
        fidelity: cmp.fidelity,
        mse: cmp.mse,
        norm_error: cmp.norm_error,
        wall_time_s: wall,
        wall_time_runs: opts.repeats.max(1),
        ngs_wall,
        modeled_cycles: cycles.total_cycles,
        modeled_time_s: cycles.modeled_time_s,
        ngs_modeled,
        cross_pe_accesses: cycles.cross_pe_accesses,
        memory_qea_bytes,
        memory_matmul_bytes,
        memory_ratio: memory_matmul_bytes as f64 / memory_qea_bytes as f64,
    })
}

/// One result per suite entry, in suite order. A failing entry does not
/// stop the others.
pub fn run_benchmark(
    suite: &[NamedCircuit],
    cfg: &PEConfig,
    opts: &BenchOptions,
) -> Vec<Result<BenchReport, BenchError>> {
    if opts.parallel_entries {
        suite.par_iter().map(|e| bench_one(e, cfg, opts)).collect()
    } else {
        suite.iter().map(|e| bench_one(e, cfg, opts)).collect()
    }
}

/// One JSON object per line.
pub fn to_jsonl(reports: &[BenchReport]) -> String {
    reports.iter().map(|r| serde_json::to_string(r).expect("report serializes") + "\n").collect()
}

pub fn from_jsonl(text: &str) -> Result<Vec<BenchReport>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}
