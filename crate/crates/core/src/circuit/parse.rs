use std::fmt;

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind, MAX_QUBITS};

/// A parse failure with its 1-based source position.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    MissingHeader,
    DuplicateHeader,
    Syntax(String),
    UnknownGate(String),
    Arity { gate: String, expected: usize, got: usize },
    QubitOutOfRange { qubit: usize, n: usize },
    DuplicateOperand(usize),
    InvalidAngle(String),
    InvalidQubitCount(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MissingHeader => write!(f, "expected `qubits <n>` header before any gate"),
            Self::DuplicateHeader => write!(f, "duplicate `qubits` header"),
            Self::Syntax(msg) => write!(f, "syntax error: {msg}"),
            Self::UnknownGate(name) => write!(f, "unknown gate `{name}`"),
            Self::Arity { gate, expected, got } => {
                write!(f, "`{gate}` takes {expected} qubit operand(s), got {got}")
            }
            Self::QubitOutOfRange { qubit, n } => {
                write!(f, "qubit {qubit} out of range for {n} qubits")
            }
            Self::DuplicateOperand(q) => write!(f, "duplicate operand: qubit {q} used twice"),
            Self::InvalidAngle(tok) => write!(f, "missing or invalid angle `{tok}`"),
            Self::InvalidQubitCount(tok) => {
                write!(f, "invalid qubit count `{tok}` (expected 1..={MAX_QUBITS})")
            }
        }
    }
}

/// Token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token { text: &code[s..i], column: s + 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &code[s..], column: s + 1 });
    }
    tokens
}

/// Parses the line-oriented circuit format:
///
/// ```text
/// # comment
/// qubits 3
/// h 0
/// rz 0.25 1
/// cp 1.5707963 0 2
/// swap 0 2
/// ```
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw_line);
        let Some(head) = tokens.first() else { continue };
        let err = |column: usize, kind| ParseError { line, column, kind };

        if head.text.eq_ignore_ascii_case("qubits") {
            if circuit.is_some() {
                return Err(err(head.column, ParseErrorKind::DuplicateHeader));
            }
            let [_, count] = tokens.as_slice() else {
                return Err(err(head.column, ParseErrorKind::Syntax("expected `qubits <n>`".into())));
            };
            let n = count
                .text
                .parse::<usize>()
                .ok()
                .and_then(|n| Circuit::new(n).ok())
                .ok_or_else(|| err(count.column, ParseErrorKind::InvalidQubitCount(count.text.into())))?;
            circuit = Some(n);
            continue;
        }

        let Some(c) = circuit.as_mut() else {
            return Err(err(head.column, ParseErrorKind::MissingHeader));
        };
        let name = head.text.to_ascii_lowercase();
        let (parameterized, arity) = match name.as_str() {
            "h" | "s" => (false, 1),
            "rx" | "ry" | "rz" => (true, 1),
            "cx" | "swap" => (false, 2),
            "cp" => (true, 2),
            _ => return Err(err(head.column, ParseErrorKind::UnknownGate(head.text.into()))),
        };

        let mut rest = &tokens[1..];
        let mut theta = 0.0;
        if parameterized {
            let Some(tok) = rest.first() else {
                let col = head.column + head.text.len();
                return Err(err(col, ParseErrorKind::InvalidAngle(String::new())));
            };
            theta = tok
                .text
                .parse::<f64>()
                .ok()
                .filter(|t| t.is_finite())
                .ok_or_else(|| err(tok.column, ParseErrorKind::InvalidAngle(tok.text.into())))?;
            rest = &rest[1..];
        }
        if rest.len() != arity {
            let column = rest.get(arity).map_or(head.column, |t| t.column);
            return Err(err(column, ParseErrorKind::Arity { gate: name, expected: arity, got: rest.len() }));
        }
        let mut qubits = Vec::with_capacity(arity);
        for tok in rest {
            let q: usize = tok.text.parse().map_err(|_| {
                err(tok.column, ParseErrorKind::Syntax(format!("expected qubit index, found `{}`", tok.text)))
            })?;
            if q >= c.n {
                return Err(err(tok.column, ParseErrorKind::QubitOutOfRange { qubit: q, n: c.n }));
            }
            if qubits.contains(&q) {
                return Err(err(tok.column, ParseErrorKind::DuplicateOperand(q)));
            }
            qubits.push(q);
        }

        let kind = match name.as_str() {
            "h" => GateKind::H,
            "s" => GateKind::S,
            "rx" => GateKind::Rx(theta),
            "ry" => GateKind::Ry(theta),
            "rz" => GateKind::Rz(theta),
            "cx" => GateKind::Cx,
            "cp" => GateKind::Cp(theta),
            _ => GateKind::Swap,
        };
        c.push(Gate::new(kind, qubits).map_err(|e| err(head.column, from_circuit_error(e)))?)
            .map_err(|e| err(head.column, from_circuit_error(e)))?;
    }

    circuit.ok_or(ParseError { line: 1, column: 1, kind: ParseErrorKind::MissingHeader })
}

fn from_circuit_error(e: CircuitError) -> ParseErrorKind {
    match e {
        CircuitError::QubitOutOfRange { qubit, n } => ParseErrorKind::QubitOutOfRange { qubit, n },
        CircuitError::DuplicateOperand { qubit, .. } => ParseErrorKind::DuplicateOperand(qubit),
        other => ParseErrorKind::Syntax(other.to_string()),
    }
}
