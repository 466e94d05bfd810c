//! Line-oriented circuit text format.
//!
//! ```text
//! # name: bell
//! qubits 2
//! h 0
//! cx 0 1
//! cp(0.7853981634) 0 1
//! measure 0
//! measure 1
//! ```
//!
//! `#` starts a comment; a comment of the form `# name: <label>` sets the
//! circuit name. Angles are written with 10 significant digits and snapped
//! back to the nearest dyadic multiple of π on parse, so builder circuits
//! round-trip exactly.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Circuit, CircuitError, GateInstance, GateKind};

const SNAP_MAX_LOG2_DENOM: u32 = 16;
const SNAP_TOL: f64 = 5e-10;

/// `π · p / 2^k`, the one place dyadic angles are computed.
pub fn dyadic_angle(p: i64, k: u32) -> f64 {
    PI * (p as f64 / (1u64 << k) as f64)
}

/// Replaces `theta` with `π·p/2^k` (smallest `k ≤ 16`) when within `5e-10`; otherwise returns it unchanged.
pub fn snap_angle(theta: f64) -> f64 {
    for k in 0..=SNAP_MAX_LOG2_DENOM {
        let p = (theta / PI * (1u64 << k) as f64).round() as i64;
        let candidate = dyadic_angle(p, k);
        if (candidate - theta).abs() <= SNAP_TOL {
            return candidate;
        }
    }
    theta
}

/// Ten significant digits, fixed-point.
pub fn format_angle(theta: f64) -> String {
    if theta == 0.0 {
        return "0.000000000".into();
    }
    let magnitude = theta.abs().log10().floor() as i32 + 1;
    let decimals = (10 - magnitude).max(0) as usize;
    format!("{theta:.decimals$}")
}

fn syntax(line: usize, token: &str, message: &str) -> CircuitError {
    CircuitError::Syntax { line, token: token.to_string(), message: message.to_string() }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    let mut name = String::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(label) = comment.and_then(|c| c.trim().strip_prefix("name:")) {
            name = label.trim().to_string();
        }
        let mut tokens = body.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        let args: Vec<&str> = tokens.collect();

        let Some(c) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(syntax(line_no, head, "expected `qubits <n>` first"));
            }
            let [n] = args.as_slice() else {
                return Err(syntax(line_no, head, "expected exactly one qubit count"));
            };
            let n: usize = n.parse().map_err(|_| syntax(line_no, n, "qubit count must be a positive integer"))?;
            if n == 0 {
                return Err(syntax(line_no, "0", "qubit count must be positive"));
            }
            circuit = Some(Circuit::new(n, String::new()));
            continue;
        };

        let (kind_token, angle) = match head.split_once('(') {
            Some((k, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| syntax(line_no, head, "unclosed `(`"))?;
                let a: f64 = inner.trim().parse().map_err(|_| syntax(line_no, inner, "invalid angle"))?;
                if !a.is_finite() {
                    return Err(syntax(line_no, inner, "angle must be finite"));
                }
                (k, Some(snap_angle(a)))
            }
            None => (head, None),
        };
        let kind: GateKind = kind_token.parse().map_err(|_| syntax(line_no, kind_token, "unknown gate"))?;
        match (kind, angle) {
            (GateKind::Cp, None) => return Err(CircuitError::AngleMissing { line: line_no }),
            (k, Some(_)) if k != GateKind::Cp => return Err(syntax(line_no, head, "only cp takes an angle")),
            _ => {}
        }
        if args.len() != kind.arity() {
            return Err(syntax(
                line_no,
                head,
                &format!("{kind} takes {} qubit(s), found {}", kind.arity(), args.len()),
            ));
        }
        let mut qubits = Vec::with_capacity(args.len());
        for a in &args {
            let q: usize = a.parse().map_err(|_| syntax(line_no, a, "qubit index must be a non-negative integer"))?;
            if q >= c.n_qubits {
                return Err(CircuitError::QubitOutOfRange { line: line_no, qubit: q, n_qubits: c.n_qubits });
            }
            qubits.push(q);
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(syntax(line_no, args[1], "two-qubit gate needs distinct qubits"));
        }
        if kind != GateKind::Measure && c.gates.last().is_some_and(|g| g.kind == GateKind::Measure) {
            return Err(syntax(line_no, head, "measurements must be the trailing lines"));
        }
        c.gates.push(GateInstance { kind, qubits, angle });
    }

    let mut c = circuit.ok_or_else(|| syntax(0, "", "missing `qubits <n>` line"))?;
    c.name = name;
    Ok(c)
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    if !c.name.is_empty() {
        writeln!(out, "# name: {}", c.name).unwrap();
    }
    writeln!(out, "qubits {}", c.n_qubits).unwrap();
    for g in &c.gates {
        match g.angle {
            Some(a) => write!(out, "{}({})", g.kind, format_angle(a)).unwrap(),
            None => out.push_str(g.kind.name()),
        }
        for q in &g.qubits {
            write!(out, " {q}").unwrap();
        }
        out.push('\n');
    }
    out
}
