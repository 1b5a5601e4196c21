//! Plain-text state dumps.
//!
//! ```text
//! # qea-state n=2 arith=fixed
//! 0 2d413ccd 00000000 0.7071067806 0
//! 1 00000000 00000000 0 0
//! ...
//! ```
//!
//! Each line is `index re_hex im_hex re_float im_float`. Fixed-point dumps
//! carry the 8-digit two's complement Q2.30 words; float dumps carry the
//! 16-digit IEEE-754 bit patterns. The hex columns are authoritative, the
//! float columns are for reading.

use std::io::{self, BufRead, Write};

use num_complex::Complex64;
use thiserror::Error;

use super::{Arithmetic, EngineError, FixedState, FloatState, StateVector};
use crate::fixedpoint::{FixedComplex, FixedQ2_30};

const MAGIC: &str = "# qea-state";

#[derive(Debug, Error)]
pub enum DumpError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    State(#[from] EngineError),
}

/// A state vector in either arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyState {
    Fixed(FixedState),
    Float(FloatState),
}

impl AnyState {
    pub fn arithmetic(&self) -> Arithmetic {
        match self {
            AnyState::Fixed(_) => Arithmetic::Fixed,
            AnyState::Float(_) => Arithmetic::Float,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyState::Fixed(s) => s.n(),
            AnyState::Float(s) => s.n(),
        }
    }

    pub fn to_float(&self) -> FloatState {
        match self {
            AnyState::Fixed(s) => s.to_float(),
            AnyState::Float(s) => s.clone(),
        }
    }
}

impl From<FixedState> for AnyState {
    fn from(s: FixedState) -> Self {
        AnyState::Fixed(s)
    }
}

impl From<FloatState> for AnyState {
    fn from(s: FloatState) -> Self {
        AnyState::Float(s)
    }
}

pub fn write_dump<W: Write>(out: &mut W, state: &AnyState) -> io::Result<()> {
    writeln!(out, "{MAGIC} n={} arith={}", state.n(), state.arithmetic())?;
    match state {
        AnyState::Fixed(s) => {
            for (i, a) in s.amplitudes().iter().enumerate() {
                writeln!(out, "{i} {} {} {} {}", a.re.to_hex(), a.im.to_hex(), a.re, a.im)?;
            }
        }
        AnyState::Float(s) => {
            for (i, a) in s.amplitudes().iter().enumerate() {
                writeln!(out, "{i} {:016x} {:016x} {} {}", a.re.to_bits(), a.im.to_bits(), a.re, a.im)?;
            }
        }
    }
    Ok(())
}

pub fn read_dump<R: BufRead>(input: R) -> Result<AnyState, DumpError> {
    let mut lines = input.lines().enumerate();
    let bad = |line: usize, msg: String| DumpError::Format { line: line + 1, msg };

    let (_, header) = lines.next().ok_or_else(|| bad(0, "empty dump".into()))?;
    let header = header?;
    let rest = header.strip_prefix(MAGIC).ok_or_else(|| bad(0, format!("expected `{MAGIC}` header")))?;
    let mut n = None;
    let mut arith = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("arith", v)) => arith = v.parse::<Arithmetic>().ok(),
            _ => return Err(bad(0, format!("unknown header field `{field}`"))),
        }
    }
    let n = n.ok_or_else(|| bad(0, "missing or invalid n".into()))?;
    let arith = arith.ok_or_else(|| bad(0, "missing or invalid arith".into()))?;
    if n == 0 || n > crate::circuit::MAX_QUBITS {
        return Err(EngineError::QubitCount(n).into());
    }

    let len = 1usize << n;
    let mut words: Vec<(u64, u64)> = Vec::with_capacity(len);
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 5 {
            return Err(bad(idx, format!("expected 5 columns, found {}", cols.len())));
        }
        let index: usize = cols[0].parse().map_err(|_| bad(idx, format!("bad index `{}`", cols[0])))?;
        if index != words.len() {
            return Err(bad(idx, format!("expected index {}, found {index}", words.len())));
        }
        let width = match arith {
            Arithmetic::Fixed => 8,
            Arithmetic::Float => 16,
        };
        let word = |s: &str| {
            (s.len() == width)
                .then(|| u64::from_str_radix(s, 16).ok())
                .flatten()
                .ok_or_else(|| bad(idx, format!("bad {width}-digit hex word `{s}`")))
        };
        words.push((word(cols[1])?, word(cols[2])?));
    }
    if words.len() != len {
        return Err(bad(0, format!("expected {len} amplitudes, found {}", words.len())));
    }

    Ok(match arith {
        Arithmetic::Fixed => AnyState::Fixed(StateVector::from_amplitudes(
            words
                .into_iter()
                .map(|(re, im)| {
                    FixedComplex::new(FixedQ2_30::from_raw(re as u32 as i32), FixedQ2_30::from_raw(im as u32 as i32))
                })
                .collect(),
        )?),
        Arithmetic::Float => AnyState::Float(StateVector::from_amplitudes(
            words.into_iter().map(|(re, im)| Complex64::new(f64::from_bits(re), f64::from_bits(im))).collect(),
        )?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{transpile, Circuit, Gate};
    use crate::engine::run_circuit;

    fn sample() -> (FixedState, FloatState) {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::h(0)).unwrap().push(Gate::cp(0.7, 0, 2)).unwrap().push(Gate::rx(-1.3, 1)).unwrap();
        let tc = transpile(&c);
        let fixed = run_circuit(&tc, FixedState::zero_state(3).unwrap()).unwrap().0;
        let float = run_circuit(&tc, FloatState::zero_state(3).unwrap()).unwrap().0;
        (fixed, float)
    }

    #[test]
    fn round_trips_both_arithmetics() {
        let (fixed, float) = sample();
        for state in [AnyState::from(fixed), AnyState::from(float)] {
            let mut buf = Vec::new();
            write_dump(&mut buf, &state).unwrap();
            assert_eq!(read_dump(&buf[..]).unwrap(), state);
        }
    }

    #[test]
    fn fixed_layout() {
        let mut buf = Vec::new();
        write_dump(&mut buf, &AnyState::Fixed(FixedState::zero_state(1).unwrap())).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# qea-state n=1 arith=fixed\n0 40000000 00000000 1 0\n1 00000000 00000000 0 0\n"
        );
    }

    #[test]
    fn rejects_malformed() {
        let cases = [
            "",
            "hello\n",
            "# qea-state n=1\n0 40000000 00000000 1 0\n1 00000000 00000000 0 0\n",
            "# qea-state n=1 arith=fixed\n0 40000000 00000000 1 0\n",
            "# qea-state n=1 arith=fixed\n0 40000000 00000000 1 0\n2 00000000 00000000 0 0\n",
            "# qea-state n=1 arith=fixed\n0 4000000 00000000 1 0\n1 00000000 00000000 0 0\n",
            "# qea-state n=1 arith=float\n0 40000000 00000000 1 0\n1 00000000 00000000 0 0\n",
        ];
        for text in cases {
            assert!(read_dump(text.as_bytes()).is_err(), "{text:?}");
        }
    }
}
