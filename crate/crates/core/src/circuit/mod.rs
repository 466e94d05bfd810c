//! Circuit representation, text format and unitary construction.
//!
//! Conventions, fixed crate-wide: qubit 0 is the least significant bit of a
//! basis index; two-qubit gates list the control first; gates apply in file
//! order, so a circuit `g1; g2; ...; gm` has unitary `U_m ··· U_1`.

mod builders;
mod format;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{build_benchmark, default_grover_iterations, random_clifford_circuit, BenchmarkSpec};
pub use format::{format_angle, parse_circuit, serialize_circuit, snap_angle};

use crate::gates;
use crate::linalg::{CMatrix, UnitaryMatrix, C};
use crate::scalar::Real;

/// Widest register for which dense unitaries are built.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("line {line}: syntax error at `{token}`: {message}")]
    Syntax { line: usize, token: String, message: String },
    #[error("line {line}: qubit {qubit} out of range for a {n_qubits}-qubit circuit")]
    QubitOutOfRange { line: usize, qubit: usize, n_qubits: usize },
    #[error("line {line}: cp requires an angle, written cp(<radians>)")]
    AngleMissing { line: usize },
    #[error("circuit has {n_qubits} qubits; at most {max} are supported here")]
    TooWide { n_qubits: usize, max: usize },
    #[error("measurement gates have no unitary")]
    MeasurementInUnitary,
    #[error("invalid benchmark specification: {0}")]
    InvalidSpec(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Cx,
    Cz,
    Cp,
    Swap,
    Measure,
}

impl GateKind {
    pub const ALL: [GateKind; 13] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Cp,
        GateKind::Swap,
        GateKind::Measure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Cp => "cp",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz | GateKind::Cp | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Member of the Clifford subset handled by the tableau simulator.
    pub fn is_clifford(self) -> bool {
        matches!(
            self,
            GateKind::H
                | GateKind::S
                | GateKind::Sdg
                | GateKind::X
                | GateKind::Y
                | GateKind::Z
                | GateKind::Cx
                | GateKind::Cz
                | GateKind::Swap
                | GateKind::Measure
        )
    }
}

impl FromStr for GateKind {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        GateKind::ALL.iter().copied().find(|k| k.name() == s).ok_or(())
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateInstance {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Radians; present exactly for `cp`.
    pub angle: Option<f64>,
}

impl GateInstance {
    pub fn new(kind: GateKind, qubits: Vec<usize>, angle: Option<f64>) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::InvalidGate(format!("{kind} takes {} qubit(s)", kind.arity())));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::InvalidGate(format!("{kind} qubits must be distinct")));
        }
        if (kind == GateKind::Cp) != angle.is_some() {
            return Err(CircuitError::InvalidGate("angle is required for cp and only for cp".into()));
        }
        Ok(Self { kind, qubits, angle })
    }

    pub fn one(kind: GateKind, q: usize) -> Self {
        Self::new(kind, vec![q], None).expect("single-qubit gate")
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        Self::new(kind, vec![a, b], None).expect("two-qubit gate")
    }

    pub fn cp(angle: f64, control: usize, target: usize) -> Self {
        Self::new(GateKind::Cp, vec![control, target], Some(angle)).expect("cp gate")
    }

    /// Local matrix (`2x2` or `4x4`); `None` for measurement.
    pub fn matrix<T: Real>(&self) -> Option<UnitaryMatrix<T>> {
        Some(match self.kind {
            GateKind::H => gates::h(),
            GateKind::X => gates::x(),
            GateKind::Y => gates::y(),
            GateKind::Z => gates::z(),
            GateKind::S => gates::s(),
            GateKind::Sdg => gates::sdg(),
            GateKind::T => gates::t(),
            GateKind::Tdg => gates::tdg(),
            GateKind::Cx => gates::cx(),
            GateKind::Cz => gates::cz(),
            GateKind::Cp => gates::cp(self.angle.expect("cp carries an angle")),
            GateKind::Swap => gates::swap(),
            GateKind::Measure => return None,
        })
    }
}

/// Ordered gate list over `n_qubits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<GateInstance>,
    pub name: String,
}

impl Circuit {
    pub fn new(n_qubits: usize, name: impl Into<String>) -> Self {
        Self { n_qubits, gates: Vec::new(), name: name.into() }
    }

    /// Appends a gate after checking qubit range and the trailing-measurement rule.
    pub fn push(&mut self, gate: GateInstance) -> Result<&mut Self, CircuitError> {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(CircuitError::QubitOutOfRange { line: 0, qubit: q, n_qubits: self.n_qubits });
        }
        if gate.kind != GateKind::Measure && self.gates.last().is_some_and(|g| g.kind == GateKind::Measure) {
            return Err(CircuitError::InvalidGate("measurements must form a trailing suffix".into()));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub(crate) fn gate(&mut self, kind: GateKind, q: usize) -> &mut Self {
        self.push(GateInstance::one(kind, q)).expect("builder gate in range")
    }

    pub(crate) fn gate2(&mut self, kind: GateKind, a: usize, b: usize) -> &mut Self {
        self.push(GateInstance::two(kind, a, b)).expect("builder gate in range")
    }

    /// Gates before the measurement suffix.
    pub fn unitary_gates(&self) -> &[GateInstance] {
        let end = self.gates.iter().position(|g| g.kind == GateKind::Measure).unwrap_or(self.gates.len());
        &self.gates[..end]
    }

    pub fn measurement_suffix(&self) -> &[GateInstance] {
        &self.gates[self.unitary_gates().len()..]
    }

    /// The circuit without its measurements.
    pub fn unitary_part(&self) -> Circuit {
        Circuit { n_qubits: self.n_qubits, gates: self.unitary_gates().to_vec(), name: self.name.clone() }
    }

    /// Measured qubits in ascending order, deduplicated.
    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self.measurement_suffix().iter().map(|g| g.qubits[0]).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of layers when every gate (measurements included) occupies one time step on its qubits.
    pub fn depth(&self) -> usize {
        let mut frontier = vec![0usize; self.n_qubits];
        for g in &self.gates {
            let layer = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                frontier[q] = layer;
            }
        }
        frontier.into_iter().max().unwrap_or(0)
    }

    /// Widens the register, leaving gate indices untouched.
    pub fn padded(&self, n_qubits: usize) -> Circuit {
        assert!(n_qubits >= self.n_qubits);
        Circuit { n_qubits, gates: self.gates.clone(), name: self.name.clone() }
    }
}

/// Applies a `2x2` or `4x4` gate to `targets` of a state vector in place.
pub(crate) fn apply_matrix<T: Real>(amps: &mut [C<T>], m: &CMatrix<T>, targets: &[usize]) {
    match targets {
        [q] => {
            let bit = 1usize << q;
            let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            for i in 0..amps.len() {
                if i & bit != 0 {
                    continue;
                }
                let j = i | bit;
                let (a, b) = (amps[i], amps[j]);
                amps[i] = m00 * a + m01 * b;
                amps[j] = m10 * a + m11 * b;
            }
        }
        [q0, q1] => {
            let (b0, b1) = (1usize << q0, 1usize << q1);
            for i in 0..amps.len() {
                if i & (b0 | b1) != 0 {
                    continue;
                }
                let idx = [i, i | b0, i | b1, i | b0 | b1];
                let v = idx.map(|k| amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    amps[k] = (0..4).fold(C::<T>::zero(), |acc, col| acc + m.get(r, col) * v[col]);
                }
            }
        }
        _ => unreachable!("gates act on one or two qubits"),
    }
}

/// Dense unitary of a measurement-free circuit.
pub fn circuit_unitary<T: Real>(c: &Circuit) -> Result<UnitaryMatrix<T>, CircuitError> {
    if c.n_qubits > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooWide { n_qubits: c.n_qubits, max: MAX_UNITARY_QUBITS });
    }
    if c.gates.iter().any(|g| g.kind == GateKind::Measure) {
        return Err(CircuitError::MeasurementInUnitary);
    }
    let dim = 1usize << c.n_qubits;
    let mats: Vec<CMatrix<T>> = c.gates.iter().map(|g| g.matrix::<T>().expect("measure-free").into_matrix()).collect();
    let mut out = CMatrix::<T>::zeros(dim);
    let mut column = vec![C::<T>::zero(); dim];
    for k in 0..dim {
        column.iter_mut().for_each(|z| *z = C::zero());
        column[k] = Complex::new(T::one(), T::zero());
        for (g, m) in c.gates.iter().zip(&mats) {
            apply_matrix(&mut column, m, &g.qubits);
        }
        for (r, &z) in column.iter().enumerate() {
            out.set(r, k, z);
        }
    }
    Ok(UnitaryMatrix::new_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Circuit {
        parse_circuit(s).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = circuit_unitary::<f64>(&parse("qubits 1\n")).unwrap();
        assert_eq!(u.max_abs_diff(&CMatrix::identity(2)), 0.0);
    }

    #[test]
    fn hadamard_unitary() {
        let u = circuit_unitary::<f64>(&parse("qubits 1\nh 0\n")).unwrap();
        assert!(u.max_abs_diff(gates::h::<f64>().matrix()) < 1e-15);
    }

    #[test]
    fn self_inverse_sequence_is_identity() {
        let u = circuit_unitary::<f64>(&parse("qubits 2\nh 0\ncx 0 1\ncx 0 1\nh 0\n")).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn gate_order_is_left_to_right() {
        // s then h: U = H·S.
        let u = circuit_unitary::<f64>(&parse("qubits 1\ns 0\nh 0\n")).unwrap();
        let expect = gates::h::<f64>().compose(&gates::s());
        assert!(u.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn unitary_matches_embedding_oracle() {
        let c = parse("qubits 3\nh 2\ncx 2 0\ncp(0.7853981634) 1 2\nswap 0 1\nt 1\ncz 0 2\n");
        let u = circuit_unitary::<f64>(&c).unwrap();
        let mut expect = CMatrix::<f64>::identity(8);
        for g in &c.gates {
            let e = gates::embed(g.matrix::<f64>().unwrap().matrix(), &g.qubits, 3);
            expect = e.matmul(&expect);
        }
        assert!(u.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn measurement_and_width_errors() {
        let c = parse("qubits 1\nh 0\nmeasure 0\n");
        assert_eq!(circuit_unitary::<f64>(&c).unwrap_err(), CircuitError::MeasurementInUnitary);
        let wide = Circuit::new(13, "");
        assert!(matches!(circuit_unitary::<f64>(&wide), Err(CircuitError::TooWide { .. })));
    }

    #[test]
    fn depth_counts_layers() {
        let c = parse("qubits 3\nh 0\nh 1\ncx 0 1\nh 2\nmeasure 0\n");
        assert_eq!(c.depth(), 3);
        assert_eq!(c.measured_qubits(), vec![0]);
    }
}
