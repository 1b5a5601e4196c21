//! Benchmark circuit generators.
//!
//! [`GeneratorSpec`] gives every generator a compact `name:params` form so a
//! benchmark definition fits on a command line:
//!
//! | spec                                  | circuit                              |
//! |---------------------------------------|--------------------------------------|
//! | `qft:<n>`                             | quantum Fourier transform            |
//! | `<topology>:<n>[:<layers>[:<seed>]]`  | seeded topology template             |
//! | `template:<id>:<n>[:<seed>]`          | entry `id` (1–19) of [`template_suite`] |
//! | `random:<n>:<gates>[:<seed>]`         | uniformly random gate list           |

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("unknown topology `{0}` (expected chain, alternating, all_to_all or rotation)")]
    UnknownTopology(String),
    #[error("topology {0} needs at least 2 qubits")]
    TooFewQubits(Topology),
    #[error("template id {0} is outside 1..=19")]
    UnknownTemplate(usize),
    #[error("bad generator spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Standard QFT: for each qubit `q`, `H` on `q` followed by
/// `CP(π / 2^(k-q))` controlled by every later qubit `k`, then `⌊n/2⌋` SWAPs
/// reversing the qubit order.
pub fn generate_qft(n: usize) -> Result<Circuit, GeneratorError> {
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.push(Gate::h(q))?;
        for k in q + 1..n {
            c.push(Gate::cp(PI / (1u64 << (k - q)) as f64, k, q))?;
        }
    }
    for q in 0..n / 2 {
        c.push(Gate::swap(q, n - 1 - q))?;
    }
    Ok(c)
}

/// Gate count of a transpiled QFT: `n` H, five gates per CP, three CX per SWAP.
pub fn qft_transpiled_gate_count(n: usize) -> usize {
    n + 5 * n * (n.saturating_sub(1)) / 2 + 3 * (n / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// CX between neighbours `q, q+1`.
    Chain,
    /// CX on the even pairs `(0,1), (2,3), …`, then the odd pairs `(1,2), …`.
    Alternating,
    /// CX on every pair `a < b`.
    AllToAll,
    /// Rotations only, no entanglement.
    Rotation,
}

impl Topology {
    pub const ALL: [Topology; 4] = [Topology::Chain, Topology::Alternating, Topology::AllToAll, Topology::Rotation];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Chain => "chain",
            Topology::Alternating => "alternating",
            Topology::AllToAll => "all_to_all",
            Topology::Rotation => "rotation",
        }
    }

    fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Topology::Chain => (0..n - 1).map(|q| (q, q + 1)).collect(),
            Topology::Alternating => (0..n - 1).step_by(2).chain((1..n - 1).step_by(2)).map(|q| (q, q + 1)).collect(),
            Topology::AllToAll => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
            Topology::Rotation => Vec::new(),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = GeneratorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "chain" => Ok(Topology::Chain),
            "alternating" => Ok(Topology::Alternating),
            "all_to_all" | "alltoall" => Ok(Topology::AllToAll),
            "rotation" => Ok(Topology::Rotation),
            _ => Err(GeneratorError::UnknownTopology(s.to_string())),
        }
    }
}

fn random_rotation(rng: &mut ChaCha8Rng, q: usize) -> Gate {
    let theta = rng.gen_range(0.0..TAU);
    match rng.gen_range(0..3) {
        0 => Gate::rx(theta, q),
        1 => Gate::ry(theta, q),
        _ => Gate::rz(theta, q),
    }
}

/// `layers` repetitions of: a random `R_x|y|z(θ)` on every qubit, then the
/// topology's CX pattern. Axis and angle come from a ChaCha8 stream seeded
/// with `seed`.
pub fn generate_template(topology: Topology, n: usize, layers: usize, seed: u64) -> Result<Circuit, GeneratorError> {
    if n < 2 && topology != Topology::Rotation {
        return Err(GeneratorError::TooFewQubits(topology));
    }
    let mut c = Circuit::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = topology.pairs(n);
    for _ in 0..layers {
        for q in 0..n {
            c.push(random_rotation(&mut rng, q))?;
        }
        for &(a, b) in &pairs {
            c.push(Gate::cx(a, b))?;
        }
    }
    Ok(c)
}

/// One entry of the 19-circuit parameterized suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub id: usize,
    pub topology: Topology,
    pub layers: usize,
}

/// Nineteen topology/depth combinations standing in for the expressibility
/// circuit family: ids 1–12 sweep all four topologies at 1–3 layers, ids
/// 13–19 deepen the entangling topologies.
pub fn template_suite() -> Vec<TemplateSpec> {
    use Topology::*;
    let table = [
        (Rotation, 1),
        (Chain, 1),
        (Alternating, 1),
        (AllToAll, 1),
        (Rotation, 2),
        (Chain, 2),
        (Alternating, 2),
        (AllToAll, 2),
        (Rotation, 3),
        (Chain, 3),
        (Alternating, 3),
        (AllToAll, 3),
        (Chain, 4),
        (Alternating, 4),
        (AllToAll, 4),
        (Chain, 5),
        (Alternating, 5),
        (AllToAll, 5),
        (Chain, 6),
    ];
    table.into_iter().enumerate().map(|(i, (topology, layers))| TemplateSpec { id: i + 1, topology, layers }).collect()
}

pub fn generate_suite_template(id: usize, n: usize, seed: u64) -> Result<Circuit, GeneratorError> {
    let spec = template_suite().into_iter().find(|t| t.id == id).ok_or(GeneratorError::UnknownTemplate(id))?;
    generate_template(spec.topology, n, spec.layers, seed)
}

/// `gates` gates drawn uniformly from {H, S, Rx, Ry, Rz, CX, CP, SWAP} with
/// random operands and angles in `[0, 2π)`.
pub fn generate_random(n: usize, gates: usize, seed: u64) -> Result<Circuit, GeneratorError> {
    let mut c = Circuit::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n >= 2 { 8 } else { 5 };
    for _ in 0..gates {
        let q = rng.gen_range(0..n);
        let gate = match rng.gen_range(0..kinds) {
            0 => Gate::h(q),
            1 => Gate::s(q),
            2 => Gate::rx(rng.gen_range(0.0..TAU), q),
            3 => Gate::ry(rng.gen_range(0.0..TAU), q),
            4 => Gate::rz(rng.gen_range(0.0..TAU), q),
            5 => Gate::cx(q, other_qubit(&mut rng, n, q)),
            6 => {
                let t = other_qubit(&mut rng, n, q);
                Gate::cp(rng.gen_range(0.0..TAU), q, t)
            }
            _ => Gate::swap(q, other_qubit(&mut rng, n, q)),
        };
        c.push(gate)?;
    }
    Ok(c)
}

fn other_qubit(rng: &mut ChaCha8Rng, n: usize, q: usize) -> usize {
    let o = rng.gen_range(0..n - 1);
    if o >= q {
        o + 1
    } else {
        o
    }
}

/// Parsed `name:params` generator reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Qft { n: usize },
    Topology { topology: Topology, n: usize, layers: usize, seed: u64 },
    Template { id: usize, n: usize, seed: u64 },
    Random { n: usize, gates: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Circuit, GeneratorError> {
        match *self {
            GeneratorSpec::Qft { n } => generate_qft(n),
            GeneratorSpec::Topology { topology, n, layers, seed } => generate_template(topology, n, layers, seed),
            GeneratorSpec::Template { id, n, seed } => generate_suite_template(id, n, seed),
            GeneratorSpec::Random { n, gates, seed } => generate_random(n, gates, seed),
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            GeneratorSpec::Qft { n }
            | GeneratorSpec::Topology { n, .. }
            | GeneratorSpec::Template { n, .. }
            | GeneratorSpec::Random { n, .. } => n,
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Qft { n } => write!(f, "qft:{n}"),
            GeneratorSpec::Topology { topology, n, layers, seed } => write!(f, "{topology}:{n}:{layers}:{seed}"),
            GeneratorSpec::Template { id, n, seed } => write!(f, "template:{id}:{n}:{seed}"),
            GeneratorSpec::Random { n, gates, seed } => write!(f, "random:{n}:{gates}:{seed}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GeneratorError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| GeneratorError::Spec { spec: spec.to_string(), reason: reason.to_string() };
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |i: usize, what: &str| -> Result<u64, GeneratorError> {
            parts
                .get(i)
                .ok_or_else(|| fail(&format!("missing {what}")))?
                .parse::<u64>()
                .map_err(|_| fail(&format!("{what} must be a non-negative integer")))
        };
        let opt = |i: usize, what: &str, default: u64| {
            if i < parts.len() {
                num(i, what)
            } else {
                Ok(default)
            }
        };
        let arity = |max: usize| {
            if parts.len() > max {
                Err(fail("too many fields"))
            } else {
                Ok(())
            }
        };
        match parts[0] {
            "qft" => {
                arity(2)?;
                Ok(GeneratorSpec::Qft { n: num(1, "qubit count")? as usize })
            }
            "template" => {
                arity(4)?;
                Ok(GeneratorSpec::Template {
                    id: num(1, "template id")? as usize,
                    n: num(2, "qubit count")? as usize,
                    seed: opt(3, "seed", 0)?,
                })
            }
            "random" => {
                arity(4)?;
                Ok(GeneratorSpec::Random {
                    n: num(1, "qubit count")? as usize,
                    gates: num(2, "gate count")? as usize,
                    seed: opt(3, "seed", 0)?,
                })
            }
            name => {
                let topology: Topology = name.parse()?;
                arity(4)?;
                Ok(GeneratorSpec::Topology {
                    topology,
                    n: num(1, "qubit count")? as usize,
                    layers: opt(2, "layer count", 1)? as usize,
                    seed: opt(3, "seed", 0)?,
                })
            }
        }
    }
}
