use num_complex::Complex;
use num_traits::Zero;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bitstring, MeasurementHistogram, Observable, SimError};
use crate::circuit::{apply_matrix, Circuit, GateInstance};
use crate::linalg::C;
use crate::scalar::Real;

pub const MAX_SV_QUBITS: usize = 22;

/// Dense `2ⁿ` amplitude vector; bit `q` of a basis index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits > MAX_SV_QUBITS {
            return Err(SimError::TooWide { n_qubits, max: MAX_SV_QUBITS });
        }
        let mut amps = vec![C::<T>::zero(); 1 << n_qubits];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps })
    }

    /// `⊗_q (a_q|0⟩ + b_q|1⟩)` with `states[q] = (a_q, b_q)`.
    pub fn product_state(states: &[(C<T>, C<T>)]) -> Result<Self, SimError> {
        let mut sv = Self::new(states.len())?;
        for (i, amp) in sv.amps.iter_mut().enumerate() {
            *amp = states
                .iter()
                .enumerate()
                .fold(Complex::new(T::one(), T::zero()), |acc, (q, &(a, b))| acc * if i >> q & 1 == 1 { b } else { a });
        }
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    /// Applies one unitary gate; measurements are ignored.
    pub fn apply_gate(&mut self, g: &GateInstance) {
        if let Some(m) = g.matrix::<T>() {
            apply_matrix(&mut self.amps, m.matrix(), &g.qubits);
        }
    }

    /// Applies the unitary prefix of `c`.
    pub fn apply_circuit(&mut self, c: &Circuit) {
        for g in c.unitary_gates() {
            self.apply_gate(g);
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().as_f64()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr().as_f64()).collect()
    }

    /// Outcome distribution over `measured` (bit `k` of the index = `measured[k]`).
    pub fn marginal(&self, measured: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << measured.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let key = measured.iter().enumerate().fold(0usize, |acc, (k, &q)| acc | (i >> q & 1) << k);
            out[key] += a.norm_sqr().as_f64();
        }
        out
    }

    /// Draws `shots` outcomes over `measured` by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(&self, measured: &[usize], shots: u64, rng: &mut R) -> MeasurementHistogram {
        let probs = self.marginal(measured);
        let mut counts = vec![0u64; probs.len()];
        if shots > 0 {
            let dist = WeightedIndex::new(&probs).expect("normalized state has positive mass");
            for _ in 0..shots {
                counts[dist.sample(rng)] += 1;
            }
        }
        let mut hist = MeasurementHistogram { shots, ..Default::default() };
        for (k, &n) in counts.iter().enumerate() {
            if n > 0 {
                hist.counts.insert(bitstring(k, measured.len()), n);
            }
        }
        hist
    }

    pub fn expectation(&self, obs: &Observable<T>) -> C<T> {
        obs.expectation(&self.amps)
    }
}

/// Measured qubits, or every qubit when the circuit has no measurements.
pub(crate) fn sampled_qubits(c: &Circuit) -> Vec<usize> {
    let measured = c.measured_qubits();
    if measured.is_empty() {
        (0..c.n_qubits).collect()
    } else {
        measured
    }
}

/// Samples the measured qubits of `c` (all qubits when it has no measurements).
pub fn sv_run(c: &Circuit, shots: u64, seed: u64) -> Result<MeasurementHistogram, SimError> {
    sv_run_with_rng::<f64, _>(c, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sv_run_with_rng<T: Real, R: Rng + ?Sized>(
    c: &Circuit,
    shots: u64,
    rng: &mut R,
) -> Result<MeasurementHistogram, SimError> {
    let mut sv = StateVector::<T>::new(c.n_qubits)?;
    sv.apply_circuit(c);
    Ok(sv.sample(&sampled_qubits(c), shots, rng))
}

/// `⟨0…0|U† O U|0…0⟩` for the unitary prefix of `c`.
pub fn sv_expectation<T: Real>(c: &Circuit, obs: &Observable<T>) -> Result<f64, SimError> {
    obs.check(c.n_qubits)?;
    let mut sv = StateVector::<T>::new(c.n_qubits)?;
    sv.apply_circuit(c);
    let e = sv.expectation(obs);
    let im = e.im.as_f64();
    if im.abs() > 1e-9_f64.max(T::CHECK_TOL.as_f64()) {
        return Err(SimError::ComplexExpectation { im });
    }
    Ok(e.re.as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_benchmark, parse_circuit, BenchmarkSpec};
    use crate::sim::PauliString;

    #[test]
    fn hadamard_coin_within_three_sigma() {
        let c = parse_circuit("qubits 1\nh 0\nmeasure 0\n").unwrap();
        let shots = 100_000u64;
        let h = sv_run(&c, shots, 7).unwrap();
        let ones = h.counts.get("1").copied().unwrap_or(0) as f64;
        let sigma = (shots as f64 * 0.25).sqrt();
        assert!((ones - shots as f64 / 2.0).abs() <= 3.0 * sigma, "{ones}");
        assert_eq!(h.shots, shots);
    }

    #[test]
    fn bernstein_vazirani_recovers_secret() {
        let c = build_benchmark(&BenchmarkSpec::Bv { secret: "1011".into() }).unwrap();
        let h = sv_run(&c, 1000, 1).unwrap();
        assert_eq!(h.counts.len(), 1);
        assert_eq!(h.counts["1011"], 1000);
    }

    #[test]
    fn seeds_reproduce() {
        let c = parse_circuit("qubits 3\nh 0\nh 1\ncx 1 2\nt 2\nh 2\n").unwrap();
        assert_eq!(sv_run(&c, 500, 3).unwrap(), sv_run(&c, 500, 3).unwrap());
    }

    #[test]
    fn unmeasured_circuit_samples_all_qubits() {
        let c = parse_circuit("qubits 2\nx 1\n").unwrap();
        let h = sv_run(&c, 10, 0).unwrap();
        assert_eq!(h.counts["10"], 10);
    }

    #[test]
    fn expectation_of_z_after_x() {
        let c = parse_circuit("qubits 1\nx 0\n").unwrap();
        let e = sv_expectation::<f64>(&c, &Observable::Pauli(PauliString::z(1, 0))).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_is_normalized() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sv = StateVector::<f64>::product_state(&[
            (Complex::new(s, 0.0), Complex::new(0.0, s)),
            (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
        ])
        .unwrap();
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((sv.amplitudes()[1] - Complex::new(0.0, s)).norm() < 1e-12);
    }

    #[test]
    fn too_wide() {
        assert!(matches!(StateVector::<f64>::new(23), Err(SimError::TooWide { .. })));
    }
}
