//! Standard gate matrices and their embedding into multi-qubit registers.
//!
//! Little-endian throughout: qubit 0 is the least significant bit of a basis
//! index. For two-qubit gates the local basis index is `b(q0) + 2·b(q1)` where
//! `q0` is the first listed qubit (the control for `cx`/`cp`).

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::linalg::{CMatrix, UnitaryMatrix, C};
use crate::scalar::Real;

fn u<T: Real>(m: CMatrix<T>) -> UnitaryMatrix<T> {
    UnitaryMatrix::new_unchecked(m)
}

fn diag<T: Real>(entries: &[C<T>]) -> UnitaryMatrix<T> {
    u(CMatrix::diagonal(entries))
}

fn phase<T: Real>(theta: f64) -> C<T> {
    Complex::from_polar(T::one(), T::lit(theta))
}

pub fn identity<T: Real>(dim: usize) -> UnitaryMatrix<T> {
    UnitaryMatrix::identity(dim)
}

pub fn x<T: Real>() -> UnitaryMatrix<T> {
    u(CMatrix::from_pairs(&[&[(0.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]))
}

pub fn y<T: Real>() -> UnitaryMatrix<T> {
    u(CMatrix::from_pairs(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]]))
}

pub fn z<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), -C::one()])
}

pub fn h<T: Real>() -> UnitaryMatrix<T> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    u(CMatrix::from_pairs(&[&[(r, 0.0), (r, 0.0)], &[(r, 0.0), (-r, 0.0)]]))
}

pub fn s<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), C::i()])
}

pub fn sdg<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), -C::i()])
}

pub fn t<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), phase(std::f64::consts::FRAC_PI_4)])
}

pub fn tdg<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), phase(-std::f64::consts::FRAC_PI_4)])
}

fn permutation<T: Real>(perm: &[usize]) -> UnitaryMatrix<T> {
    let n = perm.len();
    u(CMatrix::from_fn(n, |r, col| if perm[col] == r { C::one() } else { C::zero() }))
}

/// Controlled-NOT with the first local qubit as control.
pub fn cx<T: Real>() -> UnitaryMatrix<T> {
    permutation(&[0, 3, 2, 1])
}

pub fn cz<T: Real>() -> UnitaryMatrix<T> {
    diag(&[C::one(), C::one(), C::one(), -C::one()])
}

pub fn cp<T: Real>(theta: f64) -> UnitaryMatrix<T> {
    diag(&[C::one(), C::one(), C::one(), phase(theta)])
}

pub fn swap<T: Real>() -> UnitaryMatrix<T> {
    permutation(&[0, 2, 1, 3])
}

/// Scalar multiple of the identity.
pub fn scalar<T: Real>(dim: usize, z: C<T>) -> UnitaryMatrix<T> {
    u(CMatrix::identity(dim).scale(z))
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
pub fn permutation_matrix<T: Real>(perm: &[usize]) -> UnitaryMatrix<T> {
    permutation(perm)
}

/// Embeds a `2^k`-dimensional gate acting on `targets` (local order) into an
/// `n`-qubit register.
pub fn embed<T: Real>(gate: &CMatrix<T>, targets: &[usize], n: usize) -> UnitaryMatrix<T> {
    assert_eq!(gate.dim(), 1 << targets.len(), "gate arity does not match targets");
    let mask: usize = targets.iter().map(|&q| 1usize << q).sum();
    let local = |idx: usize| -> usize { targets.iter().enumerate().map(|(bit, &q)| ((idx >> q) & 1) << bit).sum() };
    u(CMatrix::from_fn(
        1 << n,
        |r, col| {
            if r & !mask != col & !mask {
                C::zero()
            } else {
                gate.get(local(r), local(col))
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_gates_are_unitary() {
        let gates: Vec<UnitaryMatrix<f64>> =
            vec![x(), y(), z(), h(), s(), sdg(), t(), tdg(), cx(), cz(), cp(0.3), swap()];
        for g in gates {
            assert!(g.unitarity_residual() < 1e-14);
        }
    }

    #[test]
    fn s_squared_is_z_and_t_squared_is_s() {
        assert!(s::<f64>().compose(&s()).max_abs_diff(&z()) < 1e-15);
        assert!(t::<f64>().compose(&t()).max_abs_diff(&s()) < 1e-15);
        assert!(s::<f64>().compose(&sdg()).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn embed_cx_control_high_qubit() {
        // cx with control qubit 1, target qubit 0 on two qubits: |10> (index 2) -> |11> (index 3).
        let m = embed(cx::<f64>().matrix(), &[1, 0], 2);
        assert_eq!(m.get(3, 2), C::one());
        assert_eq!(m.get(2, 3), C::one());
        assert_eq!(m.get(1, 1), C::one());
    }

    #[test]
    fn embed_single_qubit_matches_kron() {
        // x on qubit 1 of 2: X ⊗ I in big-endian Kronecker order.
        let m = embed(x::<f64>().matrix(), &[1], 2);
        let k = x::<f64>().kron(&CMatrix::identity(2));
        assert_eq!(m.max_abs_diff(&k), 0.0);
    }
}
