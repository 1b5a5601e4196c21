//! Circuit IR over the Clifford+R universal set plus the composite `CP` and
//! `SWAP` kinds that only exist before transpilation.
//!
//! Qubits are numbered MSB-first: qubit 0 owns the most significant bit of a
//! basis-state index, so on `n` qubits its stride is `2^(n-1)`.

mod parse;
mod transpile;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_circuit, ParseError};
pub use transpile::transpile;

/// Largest register the software engine accepts.
pub const MAX_QUBITS: usize = 30;
/// Register sizes the hardware model was built for.
pub const DEVICE_QUBITS: std::ops::RangeInclusive<usize> = 3..=17;

/// Dense 2×2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {kind} expects {expected} qubit operand(s), got {got}")]
    Arity { kind: &'static str, expected: usize, got: usize },
    #[error("qubit {qubit} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate {kind} uses qubit {qubit} twice")]
    DuplicateOperand { kind: &'static str, qubit: usize },
    #[error("qubit count {0} is outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("angle {0} is not finite")]
    BadAngle(f64),
    #[error("{0} is not in the universal gate set")]
    NotUniversal(&'static str),
    #[error("{0} has no 2x2 matrix form")]
    NoMatrix(&'static str),
    #[error("malformed structured circuit: {0}")]
    Json(String),
}

/// Gate kinds, with the rotation angle (radians) carried by the variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "theta", rename_all = "lowercase")]
pub enum GateKind {
    H,
    S,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cx,
    Cp(f64),
    Swap,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Cx => "cx",
            GateKind::Cp(_) => "cp",
            GateKind::Swap => "swap",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cp(_) | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Cp(t) => Some(t),
            _ => None,
        }
    }

    /// Composite kinds must be expanded by [`transpile`] before execution.
    pub fn is_composite(&self) -> bool {
        matches!(self, GateKind::Cp(_) | GateKind::Swap)
    }
}

/// How the engine executes a universal-set gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateClass {
    /// Diagonal 2×2 matrix: one multiply per amplitude.
    Sparse,
    /// Full 2×2 matrix: pairwise combine.
    Dense,
    /// Controlled-NOT, executed as a permutation.
    Cx,
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateClass::Sparse => "sparse",
            GateClass::Dense => "dense",
            GateClass::Cx => "cx",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(flatten)]
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    /// Builds a gate, checking arity, distinct operands and a finite angle.
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Self, CircuitError> {
        let gate = Self { kind, qubits };
        gate.check_shape()?;
        Ok(gate)
    }

    fn check_shape(&self) -> Result<(), CircuitError> {
        let expected = self.kind.arity();
        if self.qubits.len() != expected {
            return Err(CircuitError::Arity { kind: self.kind.name(), expected, got: self.qubits.len() });
        }
        if expected == 2 && self.qubits[0] == self.qubits[1] {
            return Err(CircuitError::DuplicateOperand { kind: self.kind.name(), qubit: self.qubits[0] });
        }
        if let Some(theta) = self.kind.angle() {
            if !theta.is_finite() {
                return Err(CircuitError::BadAngle(theta));
            }
        }
        Ok(())
    }

    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, qubits: vec![q] }
    }

    pub fn s(q: usize) -> Self {
        Self { kind: GateKind::S, qubits: vec![q] }
    }

    pub fn rx(theta: f64, q: usize) -> Self {
        Self { kind: GateKind::Rx(theta), qubits: vec![q] }
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self { kind: GateKind::Ry(theta), qubits: vec![q] }
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self { kind: GateKind::Rz(theta), qubits: vec![q] }
    }

    /// # Panics
    /// If `control == target`.
    pub fn cx(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "cx operands must differ");
        Self { kind: GateKind::Cx, qubits: vec![control, target] }
    }

    /// # Panics
    /// If `control == target`.
    pub fn cp(theta: f64, control: usize, target: usize) -> Self {
        assert_ne!(control, target, "cp operands must differ");
        Self { kind: GateKind::Cp(theta), qubits: vec![control, target] }
    }

    /// # Panics
    /// If `a == b`.
    pub fn swap(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "swap operands must differ");
        Self { kind: GateKind::Swap, qubits: vec![a, b] }
    }

    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gate without operands")
    }

    pub fn class(&self) -> Result<GateClass, CircuitError> {
        classify(self)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(theta) = self.kind.angle() {
            write!(f, " {theta}")?;
        }
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Sparse for S and Rz, dense for H, Rx, Ry, and `Cx` for CX. Composite
/// kinds are rejected.
pub fn classify(gate: &Gate) -> Result<GateClass, CircuitError> {
    match gate.kind {
        GateKind::S | GateKind::Rz(_) => Ok(GateClass::Sparse),
        GateKind::H | GateKind::Rx(_) | GateKind::Ry(_) => Ok(GateClass::Dense),
        GateKind::Cx => Ok(GateClass::Cx),
        GateKind::Cp(_) | GateKind::Swap => Err(CircuitError::NotUniversal(gate.kind.name())),
    }
}

/// Double-precision unitary of a single-qubit gate.
pub fn gate_matrix(gate: &Gate) -> Result<Matrix2, CircuitError> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let zero = c(0.0, 0.0);
    let m = match gate.kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::S => [[c(1.0, 0.0), zero], [zero, c(0.0, 1.0)]],
        GateKind::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz(t) => [[Complex64::cis(-t / 2.0), zero], [zero, Complex64::cis(t / 2.0)]],
        GateKind::Cx | GateKind::Cp(_) | GateKind::Swap => return Err(CircuitError::NoMatrix(gate.kind.name())),
    };
    Ok(m)
}

/// An ordered gate list over `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self, CircuitError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(CircuitError::QubitCount(n));
        }
        Ok(Self { n, gates: Vec::new() })
    }

    /// Appends `gate` after checking its operands against the register.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        check_gate(&gate, self.n)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(CircuitError::QubitCount(self.n));
        }
        self.gates.iter().try_for_each(|g| check_gate(g, self.n))
    }

    /// Whether the register size is within what the accelerator supports.
    pub fn fits_device(&self) -> bool {
        DEVICE_QUBITS.contains(&self.n)
    }

    /// Renders the circuit in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.n);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let c: Circuit = serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

fn check_gate(gate: &Gate, n: usize) -> Result<(), CircuitError> {
    gate.check_shape()?;
    match gate.qubits.iter().find(|&&q| q >= n) {
        Some(&qubit) => Err(CircuitError::QubitOutOfRange { qubit, n }),
        None => Ok(()),
    }
}

/// Output of [`transpile`]: universal-set gates only, plus the scalar phase
/// the expansion introduced. `e^{i·global_phase}` times the product of
/// `gates` equals the source circuit's unitary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranspiledCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub global_phase: f64,
}

impl TranspiledCircuit {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gate counts per execution class.
    pub fn class_counts(&self) -> ClassCounts {
        let mut counts = ClassCounts::default();
        for g in &self.gates {
            match classify(g) {
                Ok(GateClass::Sparse) => counts.sparse += 1,
                Ok(GateClass::Dense) => counts.dense += 1,
                Ok(GateClass::Cx) => counts.cx += 1,
                Err(_) => counts.composite += 1,
            }
        }
        counts
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        self.as_circuit().validate()?;
        self.gates.iter().try_for_each(|g| classify(g).map(drop))
    }

    /// Drops the phase and views the gate list as a plain circuit.
    pub fn as_circuit(&self) -> Circuit {
        Circuit { n: self.n, gates: self.gates.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let tc: TranspiledCircuit = serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        tc.validate()?;
        Ok(tc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub sparse: usize,
    pub dense: usize,
    pub cx: usize,
    /// CP/SWAP gates; nonzero only before transpilation.
    pub composite: usize,
}

impl ClassCounts {
    pub fn of(circuit: &Circuit) -> Self {
        TranspiledCircuit { n: circuit.n, gates: circuit.gates.clone(), global_phase: 0.0 }.class_counts()
    }

    pub fn total(&self) -> usize {
        self.sparse + self.dense + self.cx + self.composite
    }
}
