//! Fixtures shared by the criterion benches.

use qea_core::prelude::*;

/// Transpiled QFT on `n` qubits.
pub fn qft(n: usize) -> TranspiledCircuit {
    transpile(&generate_qft(n).expect("valid qubit count"))
}

/// A dense, non-trivial state: one layer of the chain template applied to
/// `|0…0⟩`.
pub fn busy_state(n: usize) -> FloatState {
    let c = transpile(&generate_template(Topology::Chain, n, 1, 1).expect("n >= 2"));
    let (s, _) = run_circuit(&c, FloatState::zero_state(n).expect("valid n")).expect("runs");
    s
}

pub fn dense_gate<A: Amplitude>(target: usize) -> GateApplication<A> {
    let m = gate_matrix(&Gate::ry(0.7, target)).expect("single-qubit gate");
    GateApplication::from_matrix(&m, target, ApplyMode::Dense).expect("valid target")
}

pub fn sparse_gate<A: Amplitude>(target: usize) -> GateApplication<A> {
    let m = gate_matrix(&Gate::rz(0.7, target)).expect("single-qubit gate");
    GateApplication::from_matrix(&m, target, ApplyMode::Sparse).expect("diagonal")
}
