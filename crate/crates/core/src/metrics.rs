//! State comparison metrics and Normalized Gate Speed.

use num_complex::Complex64;
use thiserror::Error;

use crate::engine::{Amplitude, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("state sizes differ: {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("normalized gate speed needs at least one gate")]
    ZeroGates,
}

fn paired<'a, A: Amplitude, B: Amplitude>(
    a: &'a StateVector<A>,
    b: &'a StateVector<B>,
) -> Result<impl Iterator<Item = (Complex64, Complex64)> + 'a, MetricsError> {
    if a.n() != b.n() {
        return Err(MetricsError::DimensionMismatch(a.n(), b.n()));
    }
    Ok(a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x.to_c64(), y.to_c64())))
}

/// `|⟨a|e^{iφ}b⟩|² / (‖a‖²‖b‖²)`, evaluated in double precision.
///
/// Normalizing by both norms keeps fixed-point norm drift out of the overlap;
/// report it separately with [`norm_error`].
pub fn fidelity<A: Amplitude, B: Amplitude>(
    a: &StateVector<A>,
    b: &StateVector<B>,
    phase: f64,
) -> Result<f64, MetricsError> {
    let rot = Complex64::cis(phase);
    let (mut inner, mut na, mut nb) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
    for (x, y) in paired(a, b)? {
        let y = rot * y;
        inner += x.conj() * y;
        na += x.norm_sqr();
        nb += y.norm_sqr();
    }
    if na == 0.0 || nb == 0.0 {
        return Err(MetricsError::ZeroNorm);
    }
    // The ratio is at most 1 exactly; rounding can overshoot by an ulp.
    Ok((inner.norm_sqr() / (na * nb)).min(1.0))
}

/// `(1/2^n) · Σ|a_i − e^{iφ} b_i|²`.
pub fn mse<A: Amplitude, B: Amplitude>(
    a: &StateVector<A>,
    b: &StateVector<B>,
    phase: f64,
) -> Result<f64, MetricsError> {
    let rot = Complex64::cis(phase);
    let len = a.len() as f64;
    let sum: f64 = paired(a, b)?.map(|(x, y)| (x - rot * y).norm_sqr()).sum();
    Ok(sum / len)
}

/// `Σ|α_i|² − 1`.
pub fn norm_error<A: Amplitude>(state: &StateVector<A>) -> f64 {
    state.norm_sqr() - 1.0
}

/// Normalized Gate Speed: `time / (gates · 2^n)`, in seconds per gate per
/// amplitude.
pub fn ngs(time_s: f64, gates: usize, n: usize) -> Result<f64, MetricsError> {
    if gates == 0 {
        return Err(MetricsError::ZeroGates);
    }
    Ok(time_s / (gates as f64 * (n as f64).exp2()))
}
