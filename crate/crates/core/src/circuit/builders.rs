//! Reference circuits for the benchmark suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::format::dyadic_angle;
use super::{Circuit, CircuitError, GateInstance, GateKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BenchmarkSpec {
    /// Bernstein–Vazirani; the rightmost character of `secret` is qubit 0.
    Bv { secret: String },
    /// Quantum Fourier transform with final swaps.
    Qft { width: usize },
    /// Grover search for `marked` over `n` qubits; iterations default to `round(π/4·√2ⁿ)`.
    Grover { n: usize, marked: u64, iterations: Option<usize> },
    /// Fixed seeded hardware-style ansatz: per-qubit gates from `{h, s, t}` then a `cx` ladder.
    /// A unitary workload only; no observable or parameter loop is attached.
    Vqe { n: usize, layers: usize, seed: u64 },
}

pub fn default_grover_iterations(n: usize) -> usize {
    (std::f64::consts::FRAC_PI_4 * ((1u64 << n) as f64).sqrt()).round() as usize
}

pub fn build_benchmark(spec: &BenchmarkSpec) -> Result<Circuit, CircuitError> {
    match spec {
        BenchmarkSpec::Bv { secret } => bernstein_vazirani(secret),
        BenchmarkSpec::Qft { width } => qft(*width),
        BenchmarkSpec::Grover { n, marked, iterations } => {
            grover(*n, *marked, iterations.unwrap_or_else(|| default_grover_iterations(*n)))
        }
        BenchmarkSpec::Vqe { n, layers, seed } => vqe_ansatz(*n, *layers, *seed),
    }
}

fn bernstein_vazirani(secret: &str) -> Result<Circuit, CircuitError> {
    if secret.is_empty() || !secret.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(CircuitError::InvalidSpec(format!("secret must be a non-empty bit string, got {secret:?}")));
    }
    let n = secret.len();
    let bits: Vec<bool> = secret.chars().rev().map(|ch| ch == '1').collect();
    let ancilla = n;
    let mut c = Circuit::new(n + 1, format!("bv-{secret}"));
    c.gate(GateKind::X, ancilla).gate(GateKind::H, ancilla);
    for q in 0..n {
        c.gate(GateKind::H, q);
    }
    for (q, &b) in bits.iter().enumerate() {
        if b {
            c.gate2(GateKind::Cx, q, ancilla);
        }
    }
    for q in 0..n {
        c.gate(GateKind::H, q);
    }
    c.gate(GateKind::H, ancilla);
    for q in 0..n {
        c.gate(GateKind::Measure, q);
    }
    Ok(c)
}

fn qft(width: usize) -> Result<Circuit, CircuitError> {
    if width == 0 {
        return Err(CircuitError::InvalidSpec("qft width must be positive".into()));
    }
    let mut c = Circuit::new(width, format!("qft-{width}"));
    for j in (0..width).rev() {
        c.gate(GateKind::H, j);
        for k in (0..j).rev() {
            c.push(GateInstance::cp(dyadic_angle(1, (j - k) as u32), j, k)).expect("in range");
        }
    }
    for i in 0..width / 2 {
        c.gate2(GateKind::Swap, i, width - 1 - i);
    }
    Ok(c)
}

/// Controlled phase `e^{iθ}` on the all-ones state of `controls ∪ {target}`,
/// from `cp` and `cx` only.
fn multi_controlled_phase(c: &mut Circuit, controls: &[usize], target: usize, theta: f64) {
    match controls {
        [] => unreachable!("at least one control"),
        [q] => {
            if theta == std::f64::consts::PI {
                c.gate2(GateKind::Cz, *q, target);
            } else {
                c.push(GateInstance::cp(theta, *q, target)).expect("in range");
            }
        }
        [rest @ .., last] => {
            let half = theta / 2.0;
            c.push(GateInstance::cp(half, *last, target)).expect("in range");
            multi_controlled_x(c, rest, *last);
            c.push(GateInstance::cp(-half, *last, target)).expect("in range");
            multi_controlled_x(c, rest, *last);
            multi_controlled_phase(c, rest, target, half);
        }
    }
}

fn multi_controlled_x(c: &mut Circuit, controls: &[usize], target: usize) {
    if let [q] = controls {
        c.gate2(GateKind::Cx, *q, target);
    } else {
        c.gate(GateKind::H, target);
        multi_controlled_phase(c, controls, target, std::f64::consts::PI);
        c.gate(GateKind::H, target);
    }
}

/// Phase flip of `|1…1⟩` over all `n` qubits.
fn all_ones_phase_flip(c: &mut Circuit, n: usize) {
    if n == 1 {
        c.gate(GateKind::Z, 0);
    } else {
        let controls: Vec<usize> = (0..n - 1).collect();
        multi_controlled_phase(c, &controls, n - 1, std::f64::consts::PI);
    }
}

fn grover(n: usize, marked: u64, iterations: usize) -> Result<Circuit, CircuitError> {
    if n == 0 || n > 20 {
        return Err(CircuitError::InvalidSpec(format!("grover width must be in 1..=20, got {n}")));
    }
    if marked >= 1u64 << n {
        return Err(CircuitError::InvalidSpec(format!("marked item {marked} does not fit in {n} qubits")));
    }
    let mut c = Circuit::new(n, format!("grover-{n}-m{marked}-i{iterations}"));
    for q in 0..n {
        c.gate(GateKind::H, q);
    }
    for _ in 0..iterations {
        let zeros: Vec<usize> = (0..n).filter(|&q| marked >> q & 1 == 0).collect();
        for &q in &zeros {
            c.gate(GateKind::X, q);
        }
        all_ones_phase_flip(&mut c, n);
        for &q in &zeros {
            c.gate(GateKind::X, q);
        }
        for q in 0..n {
            c.gate(GateKind::H, q);
            c.gate(GateKind::X, q);
        }
        all_ones_phase_flip(&mut c, n);
        for q in 0..n {
            c.gate(GateKind::X, q);
            c.gate(GateKind::H, q);
        }
    }
    Ok(c)
}

fn vqe_ansatz(n: usize, layers: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if n == 0 || layers == 0 {
        return Err(CircuitError::InvalidSpec("vqe needs at least one qubit and one layer".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n, format!("vqe-ansatz-standin-{n}x{layers}-s{seed}"));
    for _ in 0..layers {
        for q in 0..n {
            let kind = [GateKind::H, GateKind::S, GateKind::T][rng.random_range(0..3)];
            c.gate(kind, q);
        }
        for q in 0..n.saturating_sub(1) {
            c.gate2(GateKind::Cx, q, q + 1);
        }
    }
    Ok(c)
}

/// Seeded circuit of `n_gates` gates drawn uniformly from the Clifford kinds.
pub fn random_clifford_circuit(n_qubits: usize, n_gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|&k| k.is_clifford() && k != GateKind::Measure && (k.arity() == 1 || n_qubits > 1))
        .collect();
    let mut c = Circuit::new(n_qubits, format!("clifford-{n_qubits}x{n_gates}-s{seed}"));
    for _ in 0..n_gates {
        let kind = kinds[rng.random_range(0..kinds.len())];
        if kind.arity() == 1 {
            c.gate(kind, rng.random_range(0..n_qubits));
        } else {
            let a = rng.random_range(0..n_qubits);
            let b = (a + rng.random_range(1..n_qubits)) % n_qubits;
            c.gate2(kind, a, b);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::circuit_unitary;
    use num_complex::Complex;

    #[test]
    fn bv_gate_count_formula() {
        for secret in ["1", "01", "101", "1011", "111111", "000000"] {
            let c = build_benchmark(&BenchmarkSpec::Bv { secret: secret.into() }).unwrap();
            let n = secret.len();
            let pop = secret.chars().filter(|&ch| ch == '1').count();
            assert_eq!(c.gate_count(), 2 * (n + 1) + pop + 1 + n, "{secret}");
            assert_eq!(c.n_qubits, n + 1);
        }
    }

    #[test]
    fn qft_width_one_is_hadamard() {
        let c = build_benchmark(&BenchmarkSpec::Qft { width: 1 }).unwrap();
        assert_eq!(c.gates, vec![GateInstance::one(GateKind::H, 0)]);
    }

    #[test]
    fn qft_matches_dft_matrix() {
        for w in 1..=4 {
            let c = build_benchmark(&BenchmarkSpec::Qft { width: w }).unwrap();
            let u = circuit_unitary::<f64>(&c).unwrap();
            let n = 1usize << w;
            let norm = 1.0 / (n as f64).sqrt();
            for y in 0..n {
                for x in 0..n {
                    let phase = 2.0 * std::f64::consts::PI * (x * y) as f64 / n as f64;
                    let expect = Complex::from_polar(norm, phase);
                    assert!((u.get(y, x) - expect).norm() < 1e-12, "w={w} y={y} x={x}");
                }
            }
        }
    }

    #[test]
    fn multi_controlled_phase_is_diagonal_flip() {
        for n in 2..=5 {
            let mut c = Circuit::new(n, "");
            all_ones_phase_flip(&mut c, n);
            let u = circuit_unitary::<f64>(&c).unwrap();
            let dim = 1 << n;
            for r in 0..dim {
                for col in 0..dim {
                    let expect = if r != col {
                        0.0
                    } else if r == dim - 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    assert!((u.get(r, col) - Complex::new(expect, 0.0)).norm() < 1e-12, "n={n}");
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(build_benchmark(&BenchmarkSpec::Bv { secret: "10a".into() }).is_err());
        assert!(build_benchmark(&BenchmarkSpec::Qft { width: 0 }).is_err());
        assert!(build_benchmark(&BenchmarkSpec::Grover { n: 2, marked: 4, iterations: None }).is_err());
        assert!(build_benchmark(&BenchmarkSpec::Vqe { n: 0, layers: 1, seed: 0 }).is_err());
    }

    #[test]
    fn vqe_is_seed_deterministic() {
        let a = build_benchmark(&BenchmarkSpec::Vqe { n: 4, layers: 3, seed: 5 }).unwrap();
        let b = build_benchmark(&BenchmarkSpec::Vqe { n: 4, layers: 3, seed: 5 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.gate_count(), 3 * (4 + 3));
    }
}
