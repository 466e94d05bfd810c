//! Dense complex matrices, unitarity checks and a Hermitian eigensolver.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::Real;

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Square dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("matrix is not unitary (max |U U^dag - I| = {residual:e})")]
pub struct NotUnitary {
    pub residual: f64,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for col in 0..dim {
                data.push(f(r, col));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major data. Panics unless `data.len()` is a perfect square.
    pub fn from_vec(data: Vec<C<T>>) -> Self {
        let dim = (data.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, data.len(), "matrix data is not square");
        Self { dim, data }
    }

    /// Builds a matrix from `(re, im)` pairs given in `f64`.
    pub fn from_pairs(rows: &[&[(f64, f64)]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must have equal length");
            data.extend(row.iter().map(|&(re, im)| c::<T>(re, im)));
        }
        Self { dim, data }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = z;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, col: usize) -> C<T> {
        self.data[r * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, r: usize, col: usize, z: C<T>) {
        self.data[r * self.dim + col] = z;
    }

    #[inline]
    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [C<T>] {
        &mut self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = vec![C::zero(); n * n];
        for r in 0..n {
            let row = &self.data[r * n..(r + 1) * n];
            let dst = &mut out[r * n..(r + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let orow = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = *d + a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, col| self.get(col, r).conj())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |r, col| self.get(r / b, col / b) * other.get(r % b, col % b))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).map(|i| self.get(i, i)).fold(C::zero(), |acc, z| acc + z)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim].iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// `max |U U^dag - I|`.
    pub fn unitarity_residual(&self) -> T {
        self.matmul(&self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn hermiticity_residual(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    /// Rescales by a unit phase so that the first entry (row-major) with
    /// magnitude above `eps` becomes positive real.
    pub fn canonical_phase(&self, eps: T) -> Self {
        match self.data.iter().find(|z| z.norm() > eps) {
            Some(&z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }

    /// Max-abs distance after optimal alignment of global phase.
    ///
    /// The phase is taken from `tr(self^dag other)`; for matrices equal up to
    /// phase this is exact, and it never underestimates the aligned distance
    /// by more than rounding.
    pub fn phase_aligned_diff(&self, other: &Self) -> T {
        let overlap = self.data.iter().zip(&other.data).fold(C::zero(), |acc: C<T>, (a, b)| acc + a.conj() * *b);
        let phase = if overlap.norm() > T::epsilon() { overlap / overlap.norm() } else { C::one() };
        self.scale(phase).max_abs_diff(other)
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect() }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect() }
    }
}

/// A matrix validated as unitary at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T>(CMatrix<T>);

impl<T: Real> UnitaryMatrix<T> {
    pub fn new(m: CMatrix<T>, tol: T) -> Result<Self, NotUnitary> {
        assert!(m.dim() >= 1, "unitary must have dim >= 1");
        let residual = m.unitarity_residual();
        if residual <= tol {
            Ok(Self(m))
        } else {
            Err(NotUnitary { residual: residual.as_f64() })
        }
    }

    /// Wraps a matrix known to be unitary by construction.
    pub fn new_unchecked(m: CMatrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Product `self · other`, unitary by closure.
    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.matmul(&other.0))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }
}

impl<T> std::ops::Deref for UnitaryMatrix<T> {
    type Target = CMatrix<T>;
    fn deref(&self) -> &CMatrix<T> {
        &self.0
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub fn hermitian_eigen<T: Real>(a: &CMatrix<T>) -> (Vec<T>, CMatrix<T>) {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = CMatrix::<T>::identity(n);
    let scale = m.frobenius_norm().max(T::min_positive_value());
    let eps = T::epsilon() * scale;

    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|r| (0..n).filter(move |&col| col != r).map(move |col| (r, col)))
            .map(|(r, col)| m.get(r, col).norm_sqr())
            .sum();
        if off.sqrt() <= eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / mag;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let two = T::lit(2.0);
                let tau = (aqq - app) / (two * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // Rotation J with J_pp = c, J_pq = s, J_qp = -s e^{-i phi}, J_qq = c e^{-i phi}.
                let jpp = C::new(cs, T::zero());
                let jpq = C::new(sn, T::zero());
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp * jpp + akq * jqp);
                    m.set(k, q, akp * jpq + akq * jqq);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * jpp + vkq * jqp);
                    v.set(k, q, vkp * jpq + vkq * jqq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
                    m.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
                }
                m.set(p, q, C::zero());
                m.set(q, p, C::zero());
                let dp = m.get(p, p).re;
                let dq = m.get(q, q).re;
                m.set(p, p, C::new(dp, T::zero()));
                m.set(q, q, C::new(dq, T::zero()));
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.partial_cmp(&m.get(j, j).re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(n, |r, col| v.get(r, order[col]));
    (values, vectors)
}
