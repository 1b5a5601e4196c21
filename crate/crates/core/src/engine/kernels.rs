use rayon::prelude::*;

use super::{Amplitude, ApplyMode, EngineError, GateApplication, StateVector};

/// Below this many amplitudes the sweep stays on the calling thread.
const PAR_MIN_AMPS: usize = 1 << 12;
/// Smallest unit of work handed to a worker.
const PAR_MIN_LEN: usize = 1 << 10;

#[inline]
fn combine<A: Amplitude>(u: &[[A; 2]; 2], lo: &mut A, hi: &mut A) {
    let (a, b) = (*lo, *hi);
    *lo = u[0][0].mul(a).add(u[0][1].mul(b));
    *hi = u[1][0].mul(a).add(u[1][1].mul(b));
}

#[inline]
fn scale<A: Amplitude>(u: &[[A; 2]; 2], lo: &mut A, hi: &mut A) {
    *lo = u[0][0].mul(*lo);
    *hi = u[1][1].mul(*hi);
}

/// Applies a single-qubit gate in place by pair enumeration.
///
/// Every pair `(i, i + stride)` with the target bit of `i` clear is updated
/// atomically: both old values are read before either is written. Pairs are
/// disjoint, so the result is the same for any number of workers.
pub fn apply_1q<A: Amplitude>(state: &mut StateVector<A>, app: &GateApplication<A>) -> Result<(), EngineError> {
    let n = state.n;
    if app.target >= n {
        return Err(EngineError::QubitOutOfRange { qubit: app.target, n });
    }
    if app.mode == ApplyMode::Sparse && (app.u[0][1] != A::zero() || app.u[1][0] != A::zero()) {
        return Err(EngineError::SparseOffDiagonal);
    }
    let stride = 1usize << (n - app.target - 1);
    let u = app.u;
    let op: fn(&[[A; 2]; 2], &mut A, &mut A) = match app.mode {
        ApplyMode::Dense => combine,
        ApplyMode::Sparse => scale,
    };

    if state.amps.len() < PAR_MIN_AMPS {
        for block in state.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().zip(hi.iter_mut()).for_each(|(a, b)| op(&u, a, b));
        }
    } else {
        state.amps.par_chunks_exact_mut(2 * stride).for_each(|block| {
            let (lo, hi) = block.split_at_mut(stride);
            lo.par_iter_mut().zip(hi.par_iter_mut()).with_min_len(PAR_MIN_LEN).for_each(|(a, b)| op(&u, a, b));
        });
    }
    Ok(())
}

/// Single-qubit application written as a flag-toggling sweep over
/// `i = 0..2^n`: the flag is set while `i` sits in the lower half of its
/// stride group and flips every `stride` indices.
///
/// Lower-half writes would clobber values the upper half still needs, so
/// the old lower-half amplitudes of the current group are kept in a buffer
/// of `stride` entries. Produces exactly the same bits as [`apply_1q`].
pub fn apply_1q_flag_loop<A: Amplitude>(
    state: &mut StateVector<A>,
    app: &GateApplication<A>,
) -> Result<(), EngineError> {
    let n = state.n;
    if app.target >= n {
        return Err(EngineError::QubitOutOfRange { qubit: app.target, n });
    }
    if app.mode == ApplyMode::Sparse && (app.u[0][1] != A::zero() || app.u[1][0] != A::zero()) {
        return Err(EngineError::SparseOffDiagonal);
    }
    let stride = 1usize << (n - app.target - 1);
    let u = &app.u;
    let psi = &mut state.amps;
    let mut saved = vec![A::zero(); stride];
    let mut lower = true;

    for i in 0..psi.len() {
        let slot = i % stride;
        if lower {
            match app.mode {
                ApplyMode::Sparse => psi[i] = u[0][0].mul(psi[i]),
                ApplyMode::Dense => {
                    saved[slot] = psi[i];
                    psi[i] = u[0][0].mul(psi[i]).add(u[0][1].mul(psi[i + stride]));
                }
            }
        } else {
            match app.mode {
                ApplyMode::Sparse => psi[i] = u[1][1].mul(psi[i]),
                ApplyMode::Dense => psi[i] = u[1][0].mul(saved[slot]).add(u[1][1].mul(psi[i])),
            }
        }
        if slot == stride - 1 {
            lower = !lower;
        }
    }
    Ok(())
}

/// Controlled-NOT as an in-place permutation.
///
/// Each index with the control bit set and the target bit clear is swapped
/// with its partner that has the target bit set, so every affected pair is
/// exchanged exactly once. No arithmetic touches the amplitudes.
pub fn apply_cx<A: Amplitude>(state: &mut StateVector<A>, control: usize, target: usize) -> Result<(), EngineError> {
    let n = state.n;
    for q in [control, target] {
        if q >= n {
            return Err(EngineError::QubitOutOfRange { qubit: q, n });
        }
    }
    if control == target {
        return Err(EngineError::SameControlTarget(control));
    }
    let cmask = state.mask(control);
    let tmask = state.mask(target);
    // Blocks of twice the larger mask contain both members of every pair,
    // and block-local indices keep the control and target bits.
    let block = 2 * cmask.max(tmask);
    let swap_block = |chunk: &mut [A]| {
        for i in 0..chunk.len() {
            if i & cmask != 0 && i & tmask == 0 {
                chunk.swap(i, i | tmask);
            }
        }
    };
    let len = state.amps.len();
    if len < PAR_MIN_AMPS {
        state.amps.chunks_exact_mut(block).for_each(swap_block);
    } else if block < len {
        state.amps.par_chunks_exact_mut(block).with_min_len((PAR_MIN_LEN / block).max(1)).for_each(swap_block);
    } else {
        // Qubit 0 is involved, so a single block would span the whole state.
        swap_split(&mut state.amps, cmask, tmask);
    }
    Ok(())
}

/// Parallel CX for the case where the outer block is the whole state.
fn swap_split<A: Amplitude>(amps: &mut [A], cmask: usize, tmask: usize) {
    let half = amps.len() / 2;
    let (lo, hi) = amps.split_at_mut(half);
    if cmask == half {
        // Control is qubit 0: only the upper half is affected, and within it
        // the target pairs sit in blocks of 2·tmask.
        hi.par_chunks_exact_mut(2 * tmask).with_min_len((PAR_MIN_LEN / (2 * tmask)).max(1)).for_each(|c| {
            let (a, b) = c.split_at_mut(tmask);
            a.swap_with_slice(b);
        });
    } else {
        // Target is qubit 0: partners are i and i + half for i with the
        // control bit set.
        lo.par_iter_mut().zip(hi.par_iter_mut()).enumerate().with_min_len(PAR_MIN_LEN).for_each(|(i, (a, b))| {
            if i & cmask != 0 {
                std::mem::swap(a, b);
            }
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_matrix, Gate};
    use crate::engine::{FixedState, FloatState};
    use crate::fixedpoint::FixedComplex;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn basis(n: usize, idx: usize) -> FloatState {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[idx] = Complex64::new(1.0, 0.0);
        FloatState::from_amplitudes(amps).unwrap()
    }

    fn app(g: &Gate, mode: ApplyMode) -> GateApplication<Complex64> {
        GateApplication::from_matrix(&gate_matrix(g).unwrap(), g.qubits[0], mode).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = basis(1, 0);
        apply_1q(&mut s, &app(&Gate::h(0), ApplyMode::Dense)).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-16 && a.im == 0.0);
        }
    }

    #[test]
    fn rz_on_basis_states_adds_phase() {
        let theta = 0.9;
        for idx in 0..8 {
            for q in 0..3 {
                let mut s = basis(3, idx);
                apply_1q(&mut s, &app(&Gate::rz(theta, q), ApplyMode::Sparse)).unwrap();
                let bit = (idx >> (2 - q)) & 1;
                let phase = if bit == 1 { theta / 2.0 } else { -theta / 2.0 };
                let want = Complex64::cis(phase);
                for (i, a) in s.amplitudes().iter().enumerate() {
                    if i == idx {
                        assert!((a - want).norm() < 1e-15);
                    } else {
                        assert_eq!(a.norm(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn cx_defining_action() {
        let mut s = basis(2, 0b10);
        apply_cx(&mut s, 0, 1).unwrap();
        assert_eq!(s, basis(2, 0b11));
        let mut s = basis(2, 0b01);
        apply_cx(&mut s, 0, 1).unwrap();
        assert_eq!(s, basis(2, 0b01));
    }

    #[test]
    fn cx_errors() {
        let mut s = basis(2, 0);
        assert_eq!(apply_cx(&mut s, 1, 1), Err(EngineError::SameControlTarget(1)));
        assert_eq!(apply_cx(&mut s, 0, 2), Err(EngineError::QubitOutOfRange { qubit: 2, n: 2 }));
    }

    #[test]
    fn target_out_of_range() {
        let mut s = basis(2, 0);
        let a = GateApplication::from_matrix(&gate_matrix(&Gate::h(0)).unwrap(), 2, ApplyMode::Dense).unwrap();
        assert_eq!(apply_1q(&mut s, &a), Err(EngineError::QubitOutOfRange { qubit: 2, n: 2 }));
        assert!(apply_1q_flag_loop(&mut s, &a).is_err());
    }

    #[test]
    fn sparse_off_diagonal_rejected_at_apply() {
        let mut s = basis(2, 0);
        let bad = GateApplication {
            u: [
                [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
            target: 0,
            mode: ApplyMode::Sparse,
        };
        assert_eq!(apply_1q(&mut s, &bad), Err(EngineError::SparseOffDiagonal));
    }

    #[test]
    fn parallel_paths_match_serial() {
        // 13 qubits crosses the parallel threshold; compare every target and
        // every CX orientation involving qubit 0 against a serial sweep.
        let n = 13;
        let amps: Vec<FixedComplex> = (0..1usize << n)
            .map(|i| FixedComplex::from_raw((i as i32).wrapping_mul(7919) >> 8, (i as i32).wrapping_mul(104729) >> 9))
            .collect();
        let base = FixedState::from_amplitudes(amps).unwrap();
        let g = Gate::ry(0.77, 0);
        let m = gate_matrix(&g).unwrap();
        for q in 0..n {
            let a = GateApplication::<FixedComplex>::from_matrix(&m, q, ApplyMode::Dense).unwrap();
            let mut par = base.clone();
            apply_1q(&mut par, &a).unwrap();
            let mut ser = base.clone();
            apply_1q_flag_loop(&mut ser, &a).unwrap();
            assert_eq!(par, ser, "target {q}");
        }
        for (c, t) in [(0, 5), (5, 0), (0, 12), (12, 0), (3, 9), (9, 3)] {
            let mut par = base.clone();
            apply_cx(&mut par, c, t).unwrap();
            let mut want = base.clone().into_amplitudes();
            let (cm, tm) = (1 << (n - 1 - c), 1 << (n - 1 - t));
            for i in 0..want.len() {
                if i & cm != 0 && i & tm == 0 {
                    want.swap(i, i | tm);
                }
            }
            assert_eq!(par.amplitudes(), &want[..], "cx {c},{t}");
        }
    }
}
