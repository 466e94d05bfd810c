use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use super::SimError;
use crate::linalg::{CMatrix, C};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Real multiple of a tensor product of Pauli letters.
///
/// `letters[q]` acts on qubit `q`; the text form lists qubit 0 last, like outcome bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub letters: Vec<Pauli>,
    pub coeff: f64,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, coeff: f64) -> Self {
        Self { letters, coeff }
    }

    /// Single-qubit `Z` on `qubit` of an `n`-qubit register.
    pub fn z(n: usize, qubit: usize) -> Self {
        Self::single(n, qubit, Pauli::Z)
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[qubit] = p;
        Self { letters, coeff: 1.0 }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let letters = (0..n).map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)]).collect();
        Self { letters, coeff: 1.0 }
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    fn masks(&self) -> (usize, usize, u32) {
        let (mut flip, mut sign, mut ys) = (0usize, 0usize, 0u32);
        for (q, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    ys += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        (flip, sign, ys)
    }

    /// `⟨ψ|P|ψ⟩` without materializing the operator.
    pub fn expectation<T: Real>(&self, amps: &[C<T>]) -> C<T> {
        // P|i⟩ = i^{#Y} (-1)^{|i ∧ (Y∨Z)|} |i ⊕ (X∨Y)⟩.
        let (flip, sign, ys) = self.masks();
        let base: C<T> = match ys % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::i(),
            2 => Complex::new(-T::one(), T::zero()),
            _ => -Complex::i(),
        };
        let mut acc = C::<T>::zero();
        for (i, &a) in amps.iter().enumerate() {
            let j = i ^ flip;
            let term = amps[j].conj() * a;
            if (i & sign).count_ones() % 2 == 1 {
                acc = acc - term;
            } else {
                acc = acc + term;
            }
        }
        acc * base * T::lit(self.coeff)
    }

    pub fn to_matrix<T: Real>(&self) -> CMatrix<T> {
        let dim = 1usize << self.n_qubits();
        let (flip, sign, ys) = self.masks();
        let mut base: C<T> = Complex::new(T::lit(self.coeff), T::zero());
        for _ in 0..ys {
            base = base * Complex::i();
        }
        let mut m = CMatrix::<T>::zeros(dim);
        for col in 0..dim {
            let mut phase = base;
            if (col & sign).count_ones() % 2 == 1 {
                phase = -phase;
            }
            m.set(col ^ flip, col, phase);
        }
        m
    }
}

impl FromStr for PauliString {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let letters = s
            .chars()
            .rev()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(format!("invalid Pauli letter `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if letters.is_empty() {
            return Err("empty Pauli string".into());
        }
        Ok(Self { letters, coeff: 1.0 })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.letters.iter().rev() {
            let ch = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Hermitian observable, dense or as a Pauli string.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable<T> {
    Matrix(CMatrix<T>),
    Pauli(PauliString),
}

impl<T: Real> Observable<T> {
    /// Validates Hermiticity of a dense observable.
    pub fn matrix(m: CMatrix<T>) -> Result<Self, SimError> {
        let residual = m.hermiticity_residual().as_f64();
        if residual > 1e-9 {
            return Err(SimError::NotHermitian { residual });
        }
        Ok(Self::Matrix(m))
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Observable::Matrix(m) => m.dim().trailing_zeros() as usize,
            Observable::Pauli(p) => p.n_qubits(),
        }
    }

    pub(crate) fn check(&self, n_qubits: usize) -> Result<(), SimError> {
        if let Observable::Matrix(m) = self {
            let residual = m.hermiticity_residual().as_f64();
            if residual > 1e-9 {
                return Err(SimError::NotHermitian { residual });
            }
            if m.dim() != 1 << n_qubits {
                return Err(SimError::ObservableWidth { expected: n_qubits, found: self.n_qubits() });
            }
        }
        if self.n_qubits() != n_qubits {
            return Err(SimError::ObservableWidth { expected: n_qubits, found: self.n_qubits() });
        }
        Ok(())
    }

    /// `⟨ψ|O|ψ⟩` (complex; callers check the imaginary part).
    pub fn expectation(&self, amps: &[C<T>]) -> C<T> {
        match self {
            Observable::Pauli(p) => p.expectation(amps),
            Observable::Matrix(m) => {
                let ov = m.mul_vec(amps);
                amps.iter().zip(&ov).fold(C::<T>::zero(), |acc, (a, b)| acc + a.conj() * *b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p: PauliString = "XZI".parse().unwrap();
        assert_eq!(p.letters, vec![Pauli::I, Pauli::Z, Pauli::X]);
        assert_eq!(p.to_string(), "XZI");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn y_matrix_matches_definition() {
        let y: CMatrix<f64> = PauliString::single(1, 0, Pauli::Y).to_matrix();
        assert_eq!(y.get(0, 1), Complex::new(0.0, -1.0));
        assert_eq!(y.get(1, 0), Complex::new(0.0, 1.0));
    }

    #[test]
    fn pauli_expectation_matches_dense() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = PauliString::random(3, &mut rng);
            let amps: Vec<C<f64>> =
                (0..8).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let dense = Observable::Matrix(p.to_matrix::<f64>()).expectation(&amps);
            let fast = p.expectation(&amps);
            assert!((dense - fast).norm() < 1e-12, "{p}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::<f64>::from_pairs(&[&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]);
        assert!(matches!(Observable::matrix(m), Err(SimError::NotHermitian { .. })));
    }
}
