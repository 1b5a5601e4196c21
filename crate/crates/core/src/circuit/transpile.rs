use super::{Circuit, Gate, GateKind, TranspiledCircuit};

/// Rewrites `CP` and `SWAP` into {H, S, Rx, Ry, Rz, CX}.
///
/// `CP(θ)` on (control c, target t) becomes
/// `Rz(θ/2) c; CX c,t; Rz(-θ/2) t; CX c,t; Rz(θ/2) t`, which equals
/// `e^{-iθ/4}·CP(θ)`, so the global phase grows by `θ/4`.
/// `SWAP(a, b)` becomes `CX a,b; CX b,a; CX a,b`. Everything else is copied.
pub fn transpile(circuit: &Circuit) -> TranspiledCircuit {
    let mut gates = Vec::with_capacity(circuit.gates.len());
    let mut global_phase = 0.0;
    for gate in &circuit.gates {
        match gate.kind {
            GateKind::Cp(theta) => {
                let (c, t) = (gate.qubits[0], gate.qubits[1]);
                gates.extend([
                    Gate::rz(theta / 2.0, c),
                    Gate::cx(c, t),
                    Gate::rz(-theta / 2.0, t),
                    Gate::cx(c, t),
                    Gate::rz(theta / 2.0, t),
                ]);
                global_phase += theta / 4.0;
            }
            GateKind::Swap => {
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                gates.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
            }
            _ => gates.push(gate.clone()),
        }
    }
    TranspiledCircuit { n: circuit.n, gates, global_phase }
}
