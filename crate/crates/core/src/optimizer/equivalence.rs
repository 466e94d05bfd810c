use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_unitary, Circuit, CircuitError, MAX_UNITARY_QUBITS};
use crate::sim::{PauliString, SimError, StateVector, MAX_SV_QUBITS};

pub const INPUT_STATES: usize = 8;
pub const PAULI_OBSERVABLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceConfig {
    pub shots: u64,
    pub seed: u64,
    pub tv_tol: f64,
    pub obs_tol: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        Self { shots: 100_000, seed: 42, tv_tol: 0.02, obs_tol: 1e-7 }
    }
}

/// Outcome of the sampled equivalence test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub max_tv_distance: f64,
    pub max_observable_deviation: f64,
    pub tv_tol: f64,
    pub obs_tol: f64,
    pub shots: u64,
    pub input_states: usize,
    pub observables: usize,
    /// How the narrower circuit was embedded, when the widths differ.
    pub ancilla_padding: Option<String>,
}

/// Random single-qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex<f64>, Complex<f64>) {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.random_range(0.0..2.0 * std::f64::consts::PI);
    (Complex::new((theta / 2.0).cos(), 0.0), Complex::from_polar((theta / 2.0).sin(), phi))
}

/// Seeded input product states: `|0…0⟩`, three random basis states, then four with random
/// single-qubit states. Qubits at or above `active` stay in `|0⟩`.
fn input_states(n: usize, active: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<(Complex<f64>, Complex<f64>)>> {
    let zero = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    let one = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
    (0..INPUT_STATES)
        .map(|s| {
            (0..n)
                .map(|q| {
                    if q >= active || s == 0 {
                        zero
                    } else if s < 4 {
                        if rng.random::<bool>() {
                            one
                        } else {
                            zero
                        }
                    } else {
                        random_qubit(rng)
                    }
                })
                .collect()
        })
        .collect()
}

/// Compares two circuits by measurement histograms and Pauli expectations on seeded inputs.
///
/// Only the unitary parts are compared and every qubit is measured. The narrower circuit is
/// widened with ancillas in `|0⟩`, which also stay `|0⟩` in every input state.
pub fn equivalence_check(a: &Circuit, b: &Circuit, cfg: &EquivalenceConfig) -> Result<EquivalenceVerdict, SimError> {
    let n = a.n_qubits.max(b.n_qubits);
    let active = a.n_qubits.min(b.n_qubits);
    if n > MAX_SV_QUBITS {
        return Err(SimError::TooWide { n_qubits: n, max: MAX_SV_QUBITS });
    }
    let ancilla_padding = (a.n_qubits != b.n_qubits).then(|| {
        let (narrow, label) = if a.n_qubits < b.n_qubits { (a, "first") } else { (b, "second") };
        format!(
            "{label} circuit widened from {} to {n} qubits; ancillas {}..{} prepared in |0>",
            narrow.n_qubits,
            narrow.n_qubits,
            n - 1
        )
    });
    let (a, b) = (a.unitary_part().padded(n), b.unitary_part().padded(n));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inputs = input_states(n, active, &mut rng);
    let paulis: Vec<PauliString> = (0..PAULI_OBSERVABLES).map(|_| PauliString::random(n, &mut rng)).collect();
    let all: Vec<usize> = (0..n).collect();

    let mut max_tv = 0.0f64;
    let mut max_dev = 0.0f64;
    for (s, input) in inputs.iter().enumerate() {
        let mut sa = StateVector::<f64>::product_state(input)?;
        let mut sb = sa.clone();
        sa.apply_circuit(&a);
        sb.apply_circuit(&b);
        // Identical streams for both circuits couple the samples, so equal distributions give TV 0.
        let stream = cfg.seed.wrapping_add(1 + s as u64);
        let ha = sa.sample(&all, cfg.shots, &mut ChaCha8Rng::seed_from_u64(stream));
        let hb = sb.sample(&all, cfg.shots, &mut ChaCha8Rng::seed_from_u64(stream));
        max_tv = max_tv.max(ha.tv_distance(&hb));
        for p in &paulis {
            let ea = p.expectation(sa.amplitudes()).re;
            let eb = p.expectation(sb.amplitudes()).re;
            max_dev = max_dev.max((ea - eb).abs());
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: max_tv <= cfg.tv_tol && max_dev <= cfg.obs_tol,
        max_tv_distance: max_tv,
        max_observable_deviation: max_dev,
        tv_tol: cfg.tv_tol,
        obs_tol: cfg.obs_tol,
        shots: cfg.shots,
        input_states: INPUT_STATES,
        observables: PAULI_OBSERVABLES,
        ancilla_padding,
    })
}

/// Largest entry difference between the two circuit unitaries after removing a global phase.
pub fn unitary_distance_up_to_phase(a: &Circuit, b: &Circuit) -> Result<f64, CircuitError> {
    let n = a.n_qubits.max(b.n_qubits);
    if n > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooWide { n_qubits: n, max: MAX_UNITARY_QUBITS });
    }
    let ua = circuit_unitary::<f64>(&a.unitary_part().padded(n))?;
    let ub = circuit_unitary::<f64>(&b.unitary_part().padded(n))?;
    Ok(ua.phase_aligned_diff(ub.matrix()))
}
