//! Analytical cycle and memory model of the accelerator core.
//!
//! The state vector is split into `num_pes` contiguous, equal blocks. Each PE
//! has `sus_per_pe` special units (two complex multipliers and one complex
//! adder each), so one unit produces one output amplitude of a dense update.
//! Per gate, with `W = num_pes · sus_per_pe` units in total:
//!
//! * dense: `ceil(2^n / W)` output batches, `dense_amp_cycles` each;
//! * sparse: `ceil(2^n / W)` batches, `sparse_amp_cycles` each;
//! * CX: `ceil(2^(n-2) / W)` swap cycles.
//!
//! A pair whose two indices live on different PEs costs an extra
//! `cross_pe_penalty_cycles`, and every gate pays `per_gate_overhead_cycles`.
//! Sparse updates never read a partner amplitude, so they have no cross-PE
//! traffic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{classify, CircuitError, Gate, GateClass, TranspiledCircuit};

/// Size of the controller context counted in [`estimate_memory_qea`].
pub const CONTROLLER_CONTEXT_BYTES: u128 = 1024;
/// Bytes of gate memory per gate: four complex entries of two 32-bit words.
pub const GATE_BYTES: u128 = 32;
/// Bytes per state amplitude: two 32-bit words.
pub const AMPLITUDE_BYTES: u128 = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid PE configuration: {0}")]
    Config(String),
    #[error("{n} qubits give {amps} amplitudes, fewer than {pes} PEs")]
    TooFewAmplitudes { n: usize, amps: usize, pes: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("calibration target {0} s is below the overhead-free model time {1} s")]
    Calibration(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PEConfig {
    pub num_pes: usize,
    pub sus_per_pe: usize,
    pub freq_hz: f64,
    pub cross_pe_penalty_cycles: u64,
    pub per_gate_overhead_cycles: u64,
    /// Cycles one SU spends on one output amplitude of a dense update.
    pub dense_amp_cycles: u64,
    /// Cycles one SU spends on one sparse amplitude update.
    pub sparse_amp_cycles: u64,
}

impl Default for PEConfig {
    fn default() -> Self {
        Self {
            num_pes: 4,
            sus_per_pe: 2,
            freq_hz: 2.5e8,
            cross_pe_penalty_cycles: 1,
            per_gate_overhead_cycles: 0,
            dense_amp_cycles: 2,
            sparse_amp_cycles: 1,
        }
    }
}

impl PEConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |m: &str| Err(ModelError::Config(m.to_string()));
        if !self.num_pes.is_power_of_two() {
            return fail("num_pes must be a power of two");
        }
        if self.sus_per_pe == 0 || self.dense_amp_cycles == 0 || self.sparse_amp_cycles == 0 {
            return fail("unit counts and rates must be at least 1");
        }
        if !(self.freq_hz.is_finite() && self.freq_hz > 0.0) {
            return fail("freq_hz must be positive");
        }
        Ok(())
    }

    fn units(&self) -> u64 {
        (self.num_pes * self.sus_per_pe) as u64
    }
}

/// Contiguous equal split of `2^n` amplitudes over the PEs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryLayout {
    pub n: usize,
    pub num_pes: usize,
    pub block_size: usize,
}

impl MemoryLayout {
    /// PE holding amplitude `index`.
    pub fn owner(&self, index: usize) -> usize {
        index / self.block_size
    }

    /// Index range held by `pe`.
    pub fn block(&self, pe: usize) -> std::ops::Range<usize> {
        pe * self.block_size..(pe + 1) * self.block_size
    }

    /// Whether pairs at distance `stride` straddle two PEs.
    pub fn is_cross_pe(&self, stride: usize) -> bool {
        stride >= self.block_size
    }
}

pub fn partition_state(n: usize, cfg: &PEConfig) -> Result<MemoryLayout, ModelError> {
    cfg.validate()?;
    let amps = 1usize
        .checked_shl(n as u32)
        .filter(|_| n < usize::BITS as usize)
        .ok_or(ModelError::TooFewAmplitudes { n, amps: 0, pes: cfg.num_pes })?;
    if amps < cfg.num_pes {
        return Err(ModelError::TooFewAmplitudes { n, amps, pes: cfg.num_pes });
    }
    Ok(MemoryLayout { n, num_pes: cfg.num_pes, block_size: amps / cfg.num_pes })
}

/// Modeled cost of one gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCost {
    pub class: GateClass,
    pub compute_cycles: u64,
    pub cross_pe_accesses: u64,
    pub penalty_cycles: u64,
    pub overhead_cycles: u64,
}

impl GateCost {
    pub fn total(&self) -> u64 {
        self.compute_cycles + self.penalty_cycles + self.overhead_cycles
    }
}

pub fn gate_cost(gate: &Gate, layout: &MemoryLayout, cfg: &PEConfig) -> Result<GateCost, ModelError> {
    let n = layout.n;
    let units = cfg.units();
    let amps = 1u64 << n;
    let class = classify(gate)?;
    let stride = |q: usize| 1usize << (n - 1 - q);
    let (compute_cycles, cross_pe_accesses) = match class {
        GateClass::Dense => {
            let pairs = amps / 2;
            let cross = if layout.is_cross_pe(stride(gate.qubits[0])) { pairs } else { 0 };
            (amps.div_ceil(units) * cfg.dense_amp_cycles, cross)
        }
        GateClass::Sparse => (amps.div_ceil(units) * cfg.sparse_amp_cycles, 0),
        GateClass::Cx => {
            let swaps = amps / 4;
            let cross = if layout.is_cross_pe(stride(gate.qubits[1])) { swaps } else { 0 };
            (swaps.div_ceil(units), cross)
        }
    };
    Ok(GateCost {
        class,
        compute_cycles,
        cross_pe_accesses,
        penalty_cycles: cross_pe_accesses * cfg.cross_pe_penalty_cycles,
        overhead_cycles: cfg.per_gate_overhead_cycles,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassCycles {
    pub gates: usize,
    pub cycles: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub n: usize,
    pub sparse: ClassCycles,
    pub dense: ClassCycles,
    pub cx: ClassCycles,
    /// Cycles added by cross-PE accesses (already inside the class totals).
    pub penalty_cycles: u64,
    /// Fixed per-gate cycles (already inside the class totals).
    pub overhead_cycles: u64,
    pub total_cycles: u64,
    pub cross_pe_accesses: u64,
    pub freq_hz: f64,
    pub modeled_time_s: f64,
}

pub fn estimate_cycles(circuit: &TranspiledCircuit, cfg: &PEConfig) -> Result<CycleReport, ModelError> {
    let layout = partition_state(circuit.n, cfg)?;
    let mut report = CycleReport {
        n: circuit.n,
        sparse: ClassCycles::default(),
        dense: ClassCycles::default(),
        cx: ClassCycles::default(),
        penalty_cycles: 0,
        overhead_cycles: 0,
        total_cycles: 0,
        cross_pe_accesses: 0,
        freq_hz: cfg.freq_hz,
        modeled_time_s: 0.0,
    };
    for gate in &circuit.gates {
        let cost = gate_cost(gate, &layout, cfg)?;
        let bucket = match cost.class {
            GateClass::Sparse => &mut report.sparse,
            GateClass::Dense => &mut report.dense,
            GateClass::Cx => &mut report.cx,
        };
        bucket.gates += 1;
        bucket.cycles += cost.total();
        report.penalty_cycles += cost.penalty_cycles;
        report.overhead_cycles += cost.overhead_cycles;
        report.cross_pe_accesses += cost.cross_pe_accesses;
    }
    report.total_cycles = report.sparse.cycles + report.dense.cycles + report.cx.cycles;
    report.modeled_time_s = modeled_time(&report);
    Ok(report)
}

/// `total_cycles / freq_hz`.
pub fn modeled_time(report: &CycleReport) -> f64 {
    report.total_cycles as f64 / report.freq_hz
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub target_time_s: f64,
    pub per_gate_overhead_cycles: u64,
    pub raw_time_s: f64,
    pub calibrated_time_s: f64,
    pub config: PEConfig,
}

/// Fits `per_gate_overhead_cycles` so the modeled time of `circuit` matches
/// `target_time_s` as closely as whole cycles allow.
pub fn calibrate_overhead(
    circuit: &TranspiledCircuit,
    cfg: &PEConfig,
    target_time_s: f64,
) -> Result<Calibration, ModelError> {
    let base_cfg = PEConfig { per_gate_overhead_cycles: 0, ..*cfg };
    let raw = estimate_cycles(circuit, &base_cfg)?;
    let target_cycles = target_time_s * cfg.freq_hz;
    let gap = target_cycles - raw.total_cycles as f64;
    if gap < 0.0 || circuit.is_empty() {
        return Err(ModelError::Calibration(target_time_s, raw.modeled_time_s));
    }
    let overhead = (gap / circuit.len() as f64).round() as u64;
    let config = PEConfig { per_gate_overhead_cycles: overhead, ..*cfg };
    let calibrated = estimate_cycles(circuit, &config)?;
    Ok(Calibration {
        target_time_s,
        per_gate_overhead_cycles: overhead,
        raw_time_s: raw.modeled_time_s,
        calibrated_time_s: calibrated.modeled_time_s,
        config,
    })
}

/// Accelerator footprint: the state (two words per amplitude), 32 bytes of
/// gate memory per gate, and a fixed controller context.
pub fn estimate_memory_qea(n: usize, num_gates: usize) -> u128 {
    (1u128 << n) * AMPLITUDE_BYTES + num_gates as u128 * GATE_BYTES + CONTROLLER_CONTEXT_BYTES
}

/// Naive matrix-multiplication footprint: one full `2^n × 2^n` complex
/// operator in single precision plus input and output vectors.
pub fn estimate_memory_matmul(n: usize) -> u128 {
    let dim = 1u128 << n;
    dim * dim * AMPLITUDE_BYTES + 2 * dim * AMPLITUDE_BYTES
}

pub fn memory_ratio(n: usize, num_gates: usize) -> f64 {
    estimate_memory_matmul(n) as f64 / estimate_memory_qea(n, num_gates) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc(n: usize, gates: Vec<Gate>) -> TranspiledCircuit {
        TranspiledCircuit { n, gates, global_phase: 0.0 }
    }

    #[test]
    fn partition_examples() {
        let cfg = PEConfig::default();
        let l = partition_state(4, &cfg).unwrap();
        assert_eq!(l.block_size, 4);
        for pe in 0..4 {
            assert!(l.block(pe).all(|i| l.owner(i) == pe));
        }
        assert_eq!(l.block(3), 12..16);
        assert_eq!(l.owner(13), 3);
        assert_eq!(partition_state(2, &cfg).unwrap().block_size, 1);
        assert!(matches!(partition_state(1, &cfg), Err(ModelError::TooFewAmplitudes { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(PEConfig { num_pes: 3, ..Default::default() }.validate().is_err());
        assert!(PEConfig { sus_per_pe: 0, ..Default::default() }.validate().is_err());
        assert!(PEConfig { freq_hz: 0.0, ..Default::default() }.validate().is_err());
        assert!(PEConfig::default().validate().is_ok());
    }

    #[test]
    fn golden_gate_costs_n4() {
        // 16 outputs over 8 SUs is two batches of 2 cycles; on qubit 0 the
        // stride (8) reaches the block size (4), so all 8 pairs pay the penalty.
        let cfg = PEConfig::default();
        let l = partition_state(4, &cfg).unwrap();
        let local = gate_cost(&Gate::h(3), &l, &cfg).unwrap();
        assert_eq!((local.compute_cycles, local.cross_pe_accesses, local.total()), (4, 0, 4));
        let remote = gate_cost(&Gate::h(0), &l, &cfg).unwrap();
        assert_eq!((remote.compute_cycles, remote.cross_pe_accesses, remote.total()), (4, 8, 12));
        let sparse = gate_cost(&Gate::rz(0.1, 0), &l, &cfg).unwrap();
        assert_eq!((sparse.total(), sparse.cross_pe_accesses), (2, 0));
        let cx = gate_cost(&Gate::cx(2, 3), &l, &cfg).unwrap();
        assert_eq!(cx.total(), 1);
        let cx_remote = gate_cost(&Gate::cx(3, 1), &l, &cfg).unwrap();
        assert_eq!((cx_remote.cross_pe_accesses, cx_remote.total()), (4, 5));
    }

    #[test]
    fn sparse_is_half_dense() {
        let cfg = PEConfig::default();
        for n in 2..=20 {
            let l = partition_state(n, &cfg).unwrap();
            let d = gate_cost(&Gate::h(n - 1), &l, &cfg).unwrap();
            let s = gate_cost(&Gate::rz(0.2, n - 1), &l, &cfg).unwrap();
            assert_eq!(2 * s.compute_cycles, d.compute_cycles, "n={n}");
        }
    }

    #[test]
    fn cross_pe_iff_stride_reaches_block() {
        let cfg = PEConfig::default();
        for n in 2..=10 {
            let l = partition_state(n, &cfg).unwrap();
            for q in 0..n {
                let c = gate_cost(&Gate::ry(1.0, q), &l, &cfg).unwrap();
                let stride = 1usize << (n - 1 - q);
                let want = if stride >= l.block_size { 1u64 << (n - 1) } else { 0 };
                assert_eq!(c.cross_pe_accesses, want, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn report_totals_and_time() {
        let cfg = PEConfig { per_gate_overhead_cycles: 3, ..Default::default() };
        let r = estimate_cycles(&tc(5, vec![Gate::h(0), Gate::s(4), Gate::cx(0, 1), Gate::rz(1.0, 2)]), &cfg).unwrap();
        assert_eq!(r.total_cycles, r.sparse.cycles + r.dense.cycles + r.cx.cycles);
        assert_eq!(r.overhead_cycles, 12);
        assert_eq!((r.sparse.gates, r.dense.gates, r.cx.gates), (2, 1, 1));
        assert_eq!(r.modeled_time_s, r.total_cycles as f64 / 2.5e8);

        let empty = estimate_cycles(&tc(5, vec![]), &PEConfig::default()).unwrap();
        assert_eq!((empty.total_cycles, empty.modeled_time_s), (0, 0.0));
    }

    #[test]
    fn modeled_time_of_one_second() {
        let r = CycleReport {
            n: 3,
            sparse: ClassCycles::default(),
            dense: ClassCycles::default(),
            cx: ClassCycles::default(),
            penalty_cycles: 0,
            overhead_cycles: 0,
            total_cycles: 250_000_000,
            cross_pe_accesses: 0,
            freq_hz: 2.5e8,
            modeled_time_s: 0.0,
        };
        assert_eq!(modeled_time(&r), 1.0);
    }

    #[test]
    fn rejects_composites() {
        assert!(matches!(
            estimate_cycles(&tc(3, vec![Gate::swap(0, 1)]), &PEConfig::default()),
            Err(ModelError::Circuit(_))
        ));
    }

    #[test]
    fn memory_formulas() {
        assert_eq!(estimate_memory_qea(7, 0), 2048);
        assert_eq!(estimate_memory_qea(7, 11) - estimate_memory_qea(7, 10), 32);
        assert_eq!(estimate_memory_qea(13, 0) - CONTROLLER_CONTEXT_BYTES, 65536);
        assert_eq!(estimate_memory_matmul(1), 64);
        assert_eq!(estimate_memory_matmul(7), 133_120);
    }

    #[test]
    fn memory_ratio_doubles_asymptotically() {
        let r = |n| memory_ratio(n, 100);
        let step = r(29) / r(28);
        assert!((step - 2.0).abs() < 1e-3, "{step}");
    }

    #[test]
    fn calibration_hits_target() {
        let gates = (0..50).map(|i| Gate::h(i % 6)).collect();
        let c = tc(6, gates);
        let cal = calibrate_overhead(&c, &PEConfig::default(), 1e-3).unwrap();
        // Whole-cycle rounding leaves at most half a cycle per gate.
        assert!((cal.calibrated_time_s - 1e-3).abs() <= 50.0 * 0.5 / 2.5e8);
        assert!(cal.raw_time_s < cal.calibrated_time_s);
        assert!(calibrate_overhead(&c, &PEConfig::default(), 1e-12).is_err());
    }
}
