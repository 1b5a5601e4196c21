//! Software model of the QEA quantum-emulation accelerator.
//!
//! * [`fixedpoint`]: bit-exact signed Q2.30 scalar and complex arithmetic.
//! * [`circuit`]: gate IR, text parser, and the transpiler to
//!   {H, S, Rx, Ry, Rz, CX} with global-phase tracking.
//! * [`engine`]: in-place state-vector execution in fixed or double
//!   precision, stride-based single-qubit kernels and the CX swapper.
//! * [`pe_model`]: 4-PE cycle and memory estimates.
//! * [`metrics`], [`generators`], [`bench`]: fidelity/MSE/NGS, benchmark
//!   circuits, and the harness tying everything together.
//!
//! ```
//! use qea_core::prelude::*;
//!
//! let tc = transpile(&generate_qft(4).unwrap());
//! let (state, _) = run_circuit(&tc, FixedState::zero_state(4).unwrap()).unwrap();
//! let reference = reference_run(&tc, &FloatState::zero_state(4).unwrap()).unwrap();
//! assert!(fidelity(&state, &reference, 0.0).unwrap() > 0.999999);
//! ```

pub mod bench;
pub mod circuit;
pub mod engine;
pub mod fixedpoint;
pub mod generators;
pub mod metrics;
pub mod pe_model;

pub mod prelude {
    pub use crate::bench::{compare, run_benchmark, BenchOptions, BenchReport, Comparison, NamedCircuit};
    pub use crate::circuit::{
        classify, gate_matrix, parse_circuit, transpile, Circuit, Gate, GateClass, GateKind, TranspiledCircuit,
    };
    pub use crate::engine::{
        apply_1q, apply_cx, reference_run, run_circuit, Amplitude, AnyState, ApplyMode, Arithmetic, FixedState,
        FloatState, GateApplication, RunStats, StateVector,
    };
    pub use crate::fixedpoint::{FixedComplex, FixedQ2_30};
    pub use crate::generators::{generate_qft, generate_template, GeneratorSpec, Topology};
    pub use crate::metrics::{fidelity, mse, ngs};
    pub use crate::pe_model::{
        estimate_cycles, estimate_memory_matmul, estimate_memory_qea, partition_state, CycleReport, PEConfig,
    };
}
