//! Dense-matrix oracle shared by the integration tests.
//!
//! Builds full `2^n × 2^n` operators from Kronecker products with its own
//! textbook gate definitions, so it shares no code path with the engine.

#![allow(dead_code)]

use num_complex::Complex64;
use qea_core::circuit::{Circuit, Gate, GateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Row-major square matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Dense {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn from_2x2(m: [[C; 2]; 2]) -> Self {
        Self { dim: 2, data: vec![m[0][0], m[0][1], m[1][0], m[1][1]] }
    }

    pub fn get(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    pub fn kron(&self, other: &Dense) -> Dense {
        let dim = self.dim * other.dim;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        data[(r1 * other.dim + r2) * dim + c1 * other.dim + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        Dense { dim, data }
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        let dim = self.dim;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for col in 0..dim {
                    data[r * dim + col] += a * other.get(k, col);
                }
            }
        }
        Dense { dim, data }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim).map(|r| (0..self.dim).map(|k| self.get(r, k) * v[k]).sum()).collect()
    }

    pub fn scale(&self, s: C) -> Dense {
        Dense { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn max_diff(&self, other: &Dense) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Textbook single-qubit matrices.
pub fn single_qubit_matrix(kind: GateKind) -> [[C; 2]; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        GateKind::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        GateKind::Rx(t) => {
            [[c((t / 2.0).cos(), 0.0), c(0.0, -(t / 2.0).sin())], [c(0.0, -(t / 2.0).sin()), c((t / 2.0).cos(), 0.0)]]
        }
        GateKind::Ry(t) => {
            [[c((t / 2.0).cos(), 0.0), c(-(t / 2.0).sin(), 0.0)], [c((t / 2.0).sin(), 0.0), c((t / 2.0).cos(), 0.0)]]
        }
        GateKind::Rz(t) => {
            [[c((t / 2.0).cos(), -(t / 2.0).sin()), c(0.0, 0.0)], [c(0.0, 0.0), c((t / 2.0).cos(), (t / 2.0).sin())]]
        }
        other => panic!("{other:?} is not single-qubit"),
    }
}

/// `I^{⊗q} ⊗ U ⊗ I^{⊗(n-q-1)}`: qubit 0 is the leftmost factor.
pub fn embed(n: usize, q: usize, u: [[C; 2]; 2]) -> Dense {
    let left = Dense::identity(1 << q);
    let right = Dense::identity(1 << (n - q - 1));
    left.kron(&Dense::from_2x2(u)).kron(&right)
}

fn bit(n: usize, index: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

/// Permutation matrix with `out[f(i)] = in[i]`.
pub fn permutation(n: usize, f: impl Fn(usize) -> usize) -> Dense {
    let dim = 1 << n;
    let mut m = Dense { dim, data: vec![c(0.0, 0.0); dim * dim] };
    for i in 0..dim {
        m.data[f(i) * dim + i] = c(1.0, 0.0);
    }
    m
}

pub fn cx_matrix(n: usize, control: usize, target: usize) -> Dense {
    permutation(n, |i| if bit(n, i, control) == 1 { i ^ (1 << (n - 1 - target)) } else { i })
}

pub fn swap_matrix(n: usize, a: usize, b: usize) -> Dense {
    permutation(n, |i| if bit(n, i, a) != bit(n, i, b) { i ^ (1 << (n - 1 - a)) ^ (1 << (n - 1 - b)) } else { i })
}

pub fn cp_matrix(n: usize, a: usize, b: usize, theta: f64) -> Dense {
    let mut m = Dense::identity(1 << n);
    for i in 0..1 << n {
        if bit(n, i, a) == 1 && bit(n, i, b) == 1 {
            m.data[i * m.dim + i] = C::cis(theta);
        }
    }
    m
}

pub fn gate_operator(n: usize, g: &Gate) -> Dense {
    match g.kind {
        GateKind::Cx => cx_matrix(n, g.qubits[0], g.qubits[1]),
        GateKind::Swap => swap_matrix(n, g.qubits[0], g.qubits[1]),
        GateKind::Cp(t) => cp_matrix(n, g.qubits[0], g.qubits[1], t),
        kind => embed(n, g.qubits[0], single_qubit_matrix(kind)),
    }
}

/// Product `G_last ⋯ G_1`.
pub fn circuit_operator(n: usize, gates: &[Gate]) -> Dense {
    gates.iter().fold(Dense::identity(1 << n), |acc, g| gate_operator(n, g).matmul(&acc))
}

pub fn circuit_unitary(c: &Circuit) -> Dense {
    circuit_operator(c.n, &c.gates)
}

/// Unit-norm random state.
pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Vec<C> {
    let v: Vec<C> = (0..1 << n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_amp_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
