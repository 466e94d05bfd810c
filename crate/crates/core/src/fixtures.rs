//! Small named groups used throughout the tests, the claims report and the CLI.

use num_complex::Complex;

use crate::gates;
use crate::group::{close_group, ClosureConfig, FiniteMatrixGroup};
use crate::linalg::UnitaryMatrix;
use crate::scalar::Real;

fn close<T: Real>(gens: &[UnitaryMatrix<T>]) -> FiniteMatrixGroup<T> {
    close_group(gens, &ClosureConfig::default()).expect("fixture groups close within the default cap")
}

fn i_times<T: Real>(m: UnitaryMatrix<T>) -> UnitaryMatrix<T> {
    UnitaryMatrix::new_unchecked(m.scale(Complex::i()))
}

/// Order 1, as 2x2 matrices so it acts on one qubit.
pub fn trivial<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::identity(2)])
}

/// `⟨X⟩`, order 2.
pub fn c2<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::x()])
}

/// `⟨X⊗I, I⊗X⟩` on two qubits, order 4.
pub fn c2xc2<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::embed(gates::x::<T>().matrix(), &[0], 2), gates::embed(gates::x::<T>().matrix(), &[1], 2)])
}

/// Symmetric group on three letters as 3x3 permutation matrices.
pub fn s3<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::permutation_matrix(&[1, 0, 2]), gates::permutation_matrix(&[1, 2, 0])])
}

/// Dihedral group of order 8, `⟨X, Z⟩`.
pub fn d4<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::x(), gates::z()])
}

/// Quaternion group, `⟨iX, iY⟩`.
pub fn q8<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[i_times(gates::x()), i_times(gates::y())])
}

/// Single-qubit Pauli group with phases, `⟨X, Z, iI⟩`, order 16.
pub fn pauli1<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::x(), gates::z(), gates::scalar(2, Complex::i())])
}

/// Single-qubit Clifford group with its phase subgroup, `⟨H, S⟩`, order 192.
pub fn clifford1<T: Real>() -> FiniteMatrixGroup<T> {
    close(&[gates::h(), gates::s()])
}

pub const NAMES: [&str; 8] = ["trivial", "c2", "c2xc2", "s3", "d4", "q8", "pauli1", "clifford1"];

/// Builds a fixture by name.
pub fn by_name<T: Real>(name: &str) -> Option<FiniteMatrixGroup<T>> {
    Some(match name {
        "trivial" => trivial(),
        "c2" => c2(),
        "c2xc2" => c2xc2(),
        "s3" => s3(),
        "d4" => d4(),
        "q8" => q8(),
        "pauli1" => pauli1(),
        "clifford1" => clifford1(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_orders() {
        let orders: Vec<usize> = NAMES.iter().map(|n| by_name::<f64>(n).unwrap().order()).collect();
        assert_eq!(orders, vec![1, 2, 4, 6, 8, 8, 16, 192]);
    }

    #[test]
    fn fixtures_close_in_single_precision() {
        let orders: Vec<usize> = NAMES.iter().map(|n| by_name::<f32>(n).unwrap().order()).collect();
        assert_eq!(orders, vec![1, 2, 4, 6, 8, 8, 16, 192]);
    }
}
