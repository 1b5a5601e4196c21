//! State-vector execution of transpiled circuits.
//!
//! Gates are applied one after another to a single in-place amplitude array.
//! Single-qubit gates use the stride kernel: for target qubit `j` on `n`
//! qubits the stride is `2^(n-j-1)` and the state splits into disjoint pairs
//! `(i, i + stride)`. CX never touches arithmetic and is a pure permutation.
//!
//! Both kernels are generic over [`Amplitude`] so the same code runs the
//! Q2.30 device arithmetic and the `f64` reference.

mod dump;
mod kernels;

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{classify, gate_matrix, CircuitError, GateClass, TranspiledCircuit, MAX_QUBITS};
use crate::fixedpoint::FixedComplex;

pub use dump::{read_dump, write_dump, AnyState, DumpError};
pub use kernels::{apply_1q, apply_1q_flag_loop, apply_cx};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("qubit count {0} is outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("control and target are both qubit {0}")]
    SameControlTarget(usize),
    #[error("sparse mode requires a diagonal matrix")]
    SparseOffDiagonal,
    #[error("circuit has {circuit} qubits but the state has {state}")]
    Mismatch { circuit: usize, state: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

/// Number representation used by a state vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Signed Q2.30, as on the accelerator.
    Fixed,
    /// IEEE double precision.
    Float,
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmetic::Fixed => "fixed",
            Arithmetic::Float => "float",
        })
    }
}

impl std::str::FromStr for Arithmetic {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed" => Ok(Arithmetic::Fixed),
            "float" => Ok(Arithmetic::Float),
            _ => Err(format!("unknown arithmetic `{s}` (expected fixed or float)")),
        }
    }
}

/// Complex scalar the engine can run on.
pub trait Amplitude: Copy + Send + Sync + PartialEq + fmt::Debug + 'static {
    const ARITHMETIC: Arithmetic;

    fn zero() -> Self;
    fn one() -> Self;
    /// Nearest representable value; fixed point saturates.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn mul(self, rhs: Self) -> Self;
    fn add(self, rhs: Self) -> Self;
}

impl Amplitude for FixedComplex {
    const ARITHMETIC: Arithmetic = Arithmetic::Fixed;

    #[inline]
    fn zero() -> Self {
        FixedComplex::ZERO
    }
    #[inline]
    fn one() -> Self {
        FixedComplex::ONE
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        FixedComplex::from_c64_saturating(z)
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        FixedComplex::to_c64(self)
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.cmul(rhs)
    }
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.cadd(rhs)
    }
}

impl Amplitude for Complex64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Float;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_c64(z: Complex64) -> Self {
        z
    }
    #[inline]
    fn to_c64(self) -> Complex64 {
        self
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
}

/// `2^n` amplitudes; bit `n-1-q` of an index holds qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<A> {
    n: usize,
    amps: Vec<A>,
}

pub type FixedState = StateVector<FixedComplex>;
pub type FloatState = StateVector<Complex64>;

impl<A: Amplitude> StateVector<A> {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self, EngineError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(EngineError::QubitCount(n));
        }
        let mut amps = vec![A::zero(); 1 << n];
        amps[0] = A::one();
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<A>) -> Result<Self, EngineError> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(EngineError::QubitCount(len.checked_ilog2().unwrap_or(0) as usize));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(EngineError::QubitCount(n));
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[A] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [A] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<A> {
        self.amps
    }

    /// Index mask of qubit `q` under the MSB-first convention.
    pub fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// `Σ|α_i|²` evaluated in double precision.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.to_c64().norm_sqr()).sum()
    }

    pub fn to_float(&self) -> FloatState {
        StateVector { n: self.n, amps: self.amps.iter().map(|a| a.to_c64()).collect() }
    }

    /// Saturating conversion to Q2.30.
    pub fn to_fixed(&self) -> FixedState {
        StateVector {
            n: self.n,
            amps: self.amps.iter().map(|a| FixedComplex::from_c64_saturating(a.to_c64())).collect(),
        }
    }
}

/// Execution mode of a single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApplyMode {
    Sparse,
    Dense,
}

/// A 2×2 matrix already converted to the engine's arithmetic, bound to a
/// target qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateApplication<A> {
    pub u: [[A; 2]; 2],
    pub target: usize,
    pub mode: ApplyMode,
}

impl<A: Amplitude> GateApplication<A> {
    pub fn new(u: [[A; 2]; 2], target: usize, mode: ApplyMode) -> Result<Self, EngineError> {
        if mode == ApplyMode::Sparse && (u[0][1] != A::zero() || u[1][0] != A::zero()) {
            return Err(EngineError::SparseOffDiagonal);
        }
        Ok(Self { u, target, mode })
    }

    /// Converts a double-precision matrix once, ahead of the amplitude sweep.
    pub fn from_matrix(m: &[[Complex64; 2]; 2], target: usize, mode: ApplyMode) -> Result<Self, EngineError> {
        let conv = |z: Complex64| A::from_c64(z);
        let u = [[conv(m[0][0]), conv(m[0][1])], [conv(m[1][0]), conv(m[1][1])]];
        Self::new(u, target, mode)
    }
}

/// Per-run counters. `wall_time` covers the gate loop only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub sparse: usize,
    pub dense: usize,
    pub cx: usize,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
}

impl RunStats {
    pub fn gates(&self) -> usize {
        self.sparse + self.dense + self.cx
    }
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

/// Applies every gate of `circuit` to `state` in order.
pub fn run_circuit<A: Amplitude>(
    circuit: &TranspiledCircuit,
    mut state: StateVector<A>,
) -> Result<(StateVector<A>, RunStats), EngineError> {
    if circuit.n != state.n {
        return Err(EngineError::Mismatch { circuit: circuit.n, state: state.n });
    }
    let mut stats = RunStats::default();
    let start = Instant::now();
    for gate in &circuit.gates {
        match classify(gate)? {
            GateClass::Cx => {
                apply_cx(&mut state, gate.qubits[0], gate.qubits[1])?;
                stats.cx += 1;
            }
            class => {
                let mode = if class == GateClass::Sparse { ApplyMode::Sparse } else { ApplyMode::Dense };
                let app = GateApplication::<A>::from_matrix(&gate_matrix(gate)?, gate.qubits[0], mode)?;
                apply_1q(&mut state, &app)?;
                match mode {
                    ApplyMode::Sparse => stats.sparse += 1,
                    ApplyMode::Dense => stats.dense += 1,
                }
            }
        }
    }
    stats.wall_time = start.elapsed();
    Ok((state, stats))
}

/// Double-precision run used as the accuracy reference.
pub fn reference_run(circuit: &TranspiledCircuit, initial: &FloatState) -> Result<FloatState, EngineError> {
    run_circuit(circuit, initial.clone()).map(|(state, _)| state)
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R, EngineError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}
