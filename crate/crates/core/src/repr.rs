//! Character tables via class matrices (Burnside's method), central
//! idempotents and isotypic projectors in the defining representation.
//!
//! The class sums `K_j` span the center of the group algebra and multiply as
//! `K_j K_l = Σ_m a_{jlm} K_m`. Every irrep `i` induces an algebra morphism
//! `ω_i(K_j) = |C_j| χ_i(C_j) / d_i`, so the vectors `(ω_i(K_m))_m` are the
//! common eigenvectors of the class matrices. In the orthonormal basis
//! `K_l / sqrt|C_l|` multiplication by `K_j` is a normal operator `N_j` whose
//! adjoint is `N_{j*}` (the inverse class); a random complex combination
//! `Σ c_j N_j + h.c.` is therefore Hermitian, and its simple eigenvectors are
//! exactly the common eigenvectors. Central characters are read back as
//! Rayleigh quotients `v^† N_j v`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{FiniteMatrixGroup, GroupElement};
use crate::linalg::{hermitian_eigen, CMatrix, C};
use crate::scalar::Real;

const MAX_RETRIES: u64 = 20;
const COLLISION_GAP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReprError {
    #[error("eigenvalues of the random class-matrix combination collided after {retries} retries")]
    DegenerateSpectrum { retries: u64 },
    #[error("irrep {irrep} has non-integral degree {raw}")]
    NonIntegralDegree { irrep: usize, raw: f64 },
    #[error("squared degrees sum to {sum}, expected the group order {order}")]
    DegreeSumMismatch { sum: usize, order: usize },
}

/// Structure constants of multiplication by class sum `C_class`:
/// `C_class · C_l = Σ_m a[l][m] C_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    pub class: usize,
    k: usize,
    entries: Vec<u64>,
}

impl ClassMatrix {
    #[inline]
    pub fn get(&self, l: usize, m: usize) -> u64 {
        self.entries[l * self.k + m]
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Exact class-multiplication coefficients from the Cayley table.
///
/// For a fixed representative `z ∈ C_m`, `a_{jlm} = #{x ∈ C_j : x⁻¹ z ∈ C_l}`.
pub fn class_matrices<T: Real>(group: &FiniteMatrixGroup<T>) -> Vec<ClassMatrix> {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    let n = group.order();
    let mut a = vec![0u64; k * k * k];
    for (m, class) in classes.classes.iter().enumerate() {
        let z = class[0];
        for x in 0..n {
            let y = group.mul_idx(group.inverses()[x], z);
            let j = classes.class_of[x];
            let l = classes.class_of[y];
            a[(j * k + l) * k + m] += 1;
        }
    }
    (0..k).map(|j| ClassMatrix { class: j, k, entries: a[j * k * k..(j + 1) * k * k].to_vec() }).collect()
}

/// Irreducible characters of a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable<T> {
    pub degrees: Vec<usize>,
    /// `values[i][j]` is `χ_i` on class `j`.
    pub values: Vec<Vec<C<T>>>,
    pub class_sizes: Vec<usize>,
    pub group_order: usize,
}

impl<T: Real> CharacterTable<T> {
    /// Number of classes, equal to the number of irreps.
    pub fn k(&self) -> usize {
        self.degrees.len()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `χ_i(g)` for a group element.
    pub fn character(&self, group: &FiniteMatrixGroup<T>, irrep: usize, g: GroupElement) -> C<T> {
        self.values[irrep][group.class_of(g)]
    }

    /// CSV rendering: a `class_size` header, then `d_i` and `a±bi` values per irrep.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_size");
        for s in &self.class_sizes {
            write!(out, ",{s}").unwrap();
        }
        out.push('\n');
        for (d, row) in self.degrees.iter().zip(&self.values) {
            write!(out, "{d}").unwrap();
            for z in row {
                out.push(',');
                out.push_str(&format_complex(*z));
            }
            out.push('\n');
        }
        out
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 5e-10 {
        0.0
    } else {
        x
    }
}

/// `a+bi` / `a-bi` with nine decimals.
pub fn format_complex<T: Real>(z: C<T>) -> String {
    let re = clean(z.re.as_f64());
    let im = clean(z.im.as_f64());
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{re:.9}{sign}{:.9}i", im.abs())
}

fn canonical_order<T: Real>(a: &(usize, Vec<C<T>>), b: &(usize, Vec<C<T>>)) -> Ordering {
    let round = |x: T| (x.as_f64() * 1e4).round() as i64;
    a.0.cmp(&b.0)
        .then_with(|| {
            // Descending, so the trivial character leads its degree block.
            let ra = a.1.iter().map(|z| round(z.re));
            let rb = b.1.iter().map(|z| round(z.re));
            rb.cmp(ra)
        })
        .then_with(|| {
            let ia = a.1.iter().map(|z| round(z.im));
            let ib = b.1.iter().map(|z| round(z.im));
            ib.cmp(ia)
        })
}

/// Computes the character table with the seeded class-matrix method.
pub fn character_table<T: Real>(group: &FiniteMatrixGroup<T>, seed: u64) -> Result<CharacterTable<T>, ReprError> {
    let classes = group.conjugacy_classes();
    let k = classes.len();
    let sizes = classes.sizes();
    let order = group.order();
    let cms = class_matrices(group);

    // Inverse class of each class, for the adjoint of N_j.
    let inverse_class: Vec<usize> = classes.classes.iter().map(|c| classes.class_of[group.inverses()[c[0]]]).collect();

    // [N_j]_{m,l} = a_{jlm} sqrt(|C_m| / |C_l|).
    let normal_ops: Vec<CMatrix<T>> = cms
        .iter()
        .map(|cm| {
            CMatrix::from_fn(k, |m, l| {
                let a = cm.get(l, m) as f64;
                Complex::new(T::lit(a * (sizes[m] as f64 / sizes[l] as f64).sqrt()), T::zero())
            })
        })
        .collect();

    let mut eigvecs = None;
    for attempt in 0..=MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let coeffs: Vec<C<T>> = (0..k)
            .map(|_| Complex::new(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0))))
            .collect();
        let mut herm = CMatrix::<T>::zeros(k);
        for (j, &cj) in coeffs.iter().enumerate() {
            // c_j N_j + conj(c_j) N_j^† with N_j^† = N_{j*}.
            let nj = &normal_ops[j];
            let nstar = &normal_ops[inverse_class[j]];
            for r in 0..k {
                for col in 0..k {
                    let v = herm.get(r, col) + nj.get(r, col) * cj + nstar.get(r, col) * cj.conj();
                    herm.set(r, col, v);
                }
            }
        }
        let (vals, vecs) = hermitian_eigen(&herm);
        let collided = vals.windows(2).any(|w| (w[1] - w[0]).as_f64() < COLLISION_GAP);
        if !collided {
            eigvecs = Some(vecs);
            break;
        }
    }
    let vecs = eigvecs.ok_or(ReprError::DegenerateSpectrum { retries: MAX_RETRIES })?;

    let mut rows: Vec<(usize, Vec<C<T>>)> = Vec::with_capacity(k);
    for i in 0..k {
        let v: Vec<C<T>> = (0..k).map(|r| vecs.get(r, i)).collect();
        let omega: Vec<C<T>> = normal_ops
            .iter()
            .map(|nj| {
                let nv = nj.mul_vec(&v);
                v.iter().zip(&nv).fold(C::<T>::zero(), |acc, (a, b)| acc + a.conj() * *b)
            })
            .collect();
        let norm: f64 = omega.iter().zip(&sizes).map(|(w, &s)| w.norm_sqr().as_f64() / s as f64).sum();
        let raw = (order as f64 / norm).sqrt();
        let d = raw.round();
        if (raw - d).abs() > T::DEGREE_TOL || d < 1.0 {
            return Err(ReprError::NonIntegralDegree { irrep: i, raw });
        }
        let chi = omega.iter().zip(&sizes).map(|(w, &s)| *w * T::lit(d / s as f64)).collect();
        rows.push((d as usize, chi));
    }
    let sum: usize = rows.iter().map(|(d, _)| d * d).sum();
    if sum != order {
        return Err(ReprError::DegreeSumMismatch { sum, order });
    }
    rows.sort_by(canonical_order);

    Ok(CharacterTable {
        degrees: rows.iter().map(|r| r.0).collect(),
        values: rows.into_iter().map(|r| r.1).collect(),
        class_sizes: sizes,
        group_order: order,
    })
}

/// Residuals of the orthogonality relations and of `Σ d_i² = |G|`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OrthogonalityReport {
    pub row_residual: f64,
    pub column_residual: f64,
    pub degree_sum_residual: f64,
}

impl OrthogonalityReport {
    pub fn max(&self) -> f64 {
        self.row_residual.max(self.column_residual).max(self.degree_sum_residual)
    }
}

pub fn verify_orthogonality<T: Real>(table: &CharacterTable<T>) -> OrthogonalityReport {
    let k = table.k();
    let g = table.group_order as f64;
    let mut row_residual = 0.0f64;
    for i in 0..k {
        for l in 0..k {
            let s = (0..k).fold(C::<T>::zero(), |acc, j| {
                acc + table.values[i][j] * table.values[l][j].conj() * T::lit(table.class_sizes[j] as f64)
            });
            let expect = if i == l { g } else { 0.0 };
            row_residual = row_residual.max((s - Complex::new(T::lit(expect), T::zero())).norm().as_f64());
        }
    }
    let mut column_residual = 0.0f64;
    for j in 0..k {
        for m in 0..k {
            let s = (0..k).fold(C::<T>::zero(), |acc, i| acc + table.values[i][j] * table.values[i][m].conj());
            let expect = if j == m { g / table.class_sizes[j] as f64 } else { 0.0 };
            column_residual = column_residual.max((s - Complex::new(T::lit(expect), T::zero())).norm().as_f64());
        }
    }
    let sum: usize = table.degrees.iter().map(|d| d * d).sum();
    OrthogonalityReport { row_residual, column_residual, degree_sum_residual: (sum as f64 - g).abs() }
}

/// Primitive central idempotent `e_i = (d_i/|G|) Σ_g χ_i(g⁻¹) g`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralIdempotent<T> {
    pub irrep: usize,
    pub coeffs: Vec<C<T>>,
}

pub fn central_idempotents<T: Real>(
    group: &FiniteMatrixGroup<T>,
    table: &CharacterTable<T>,
) -> Vec<CentralIdempotent<T>> {
    let order = group.order();
    let class_of = &group.conjugacy_classes().class_of;
    (0..table.k())
        .map(|i| {
            let scale = T::lit(table.degrees[i] as f64 / order as f64);
            let coeffs = (0..order).map(|g| table.values[i][class_of[group.inverses()[g]]] * scale).collect();
            CentralIdempotent { irrep: i, coeffs }
        })
        .collect()
}

/// Image of `e_i` in the defining representation.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotypicProjector<T> {
    pub irrep: usize,
    pub matrix: CMatrix<T>,
}

pub fn isotypic_projectors<T: Real>(
    group: &FiniteMatrixGroup<T>,
    table: &CharacterTable<T>,
) -> Vec<IsotypicProjector<T>> {
    central_idempotents(group, table)
        .into_iter()
        .map(|e| IsotypicProjector { irrep: e.irrep, matrix: represent(group, &e.coeffs) })
        .collect()
}

/// `Σ_g coeffs[g] · U(g)`.
pub fn represent<T: Real>(group: &FiniteMatrixGroup<T>, coeffs: &[C<T>]) -> CMatrix<T> {
    let dim = group.dim();
    let mut acc = CMatrix::<T>::zeros(dim);
    for (c, u) in coeffs.iter().zip(group.elements()) {
        if c.is_zero() {
            continue;
        }
        for (dst, src) in acc.as_mut_slice().iter_mut().zip(u.as_slice()) {
            *dst = *dst + *src * *c;
        }
    }
    acc
}

/// Checks the projector identities: idempotency, mutual orthogonality,
/// completeness and commutation with the group. Returns the largest residual.
pub fn projector_residual<T: Real>(group: &FiniteMatrixGroup<T>, projectors: &[IsotypicProjector<T>]) -> f64 {
    let dim = group.dim();
    let mut worst = 0.0f64;
    let mut total = CMatrix::<T>::zeros(dim);
    for (i, p) in projectors.iter().enumerate() {
        total = &total + &p.matrix;
        for (j, q) in projectors.iter().enumerate() {
            let pq = &p.matrix * &q.matrix;
            let expect = if i == j { p.matrix.clone() } else { CMatrix::zeros(dim) };
            worst = worst.max(pq.max_abs_diff(&expect).as_f64());
        }
        for &g in group.generators() {
            let u = group.elements()[g].matrix();
            worst = worst.max((&p.matrix * u).max_abs_diff(&(u * &p.matrix)).as_f64());
        }
    }
    worst.max(total.max_abs_diff(&CMatrix::identity(dim)).as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn order_two_table() {
        let g = fixtures::c2::<f64>();
        let t = character_table(&g, 1).unwrap();
        assert_eq!(t.degrees, vec![1, 1]);
        let re: Vec<Vec<f64>> = t.values.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
        assert!((re[0][0] - 1.0).abs() < 1e-12 && (re[0][1] - 1.0).abs() < 1e-12);
        assert!((re[1][0] - 1.0).abs() < 1e-12 && (re[1][1] + 1.0).abs() < 1e-12);
        let rep = verify_orthogonality(&t);
        assert!(rep.max() < 1e-12);
    }

    #[test]
    fn order_two_class_matrices() {
        let g = fixtures::c2::<f64>();
        let cms = class_matrices(&g);
        // Class {X} times class {X} is class {I}.
        assert_eq!(cms[1].get(1, 0), 1);
        assert_eq!(cms[1].get(1, 1), 0);
        assert_eq!(cms[1].get(0, 1), 1);
        assert_eq!(cms[0].get(1, 1), 1);
    }

    #[test]
    fn d4_x_class_squares_to_center() {
        let g = fixtures::d4::<f64>();
        let classes = g.conjugacy_classes();
        let x_idx = g.generators()[0];
        let j = classes.class_of[x_idx];
        let cms = class_matrices(&g);
        let identity_class = 0;
        let minus_i = g.element_of(&CMatrix::identity(2).scale(Complex::new(-1.0, 0.0))).unwrap().unwrap();
        let minus_class = classes.class_of[minus_i.0];
        // {±X}·{±X} = 2·{I} + 2·{-I}; weighted by class sizes the multiplicities sum to 4.
        assert_eq!(cms[j].get(j, identity_class), 2);
        assert_eq!(cms[j].get(j, minus_class), 2);
        let total: u64 = (0..cms.len()).map(|m| cms[j].get(j, m) * classes.classes[m].len() as u64).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn corrupted_table_is_detected() {
        let g = fixtures::c2::<f64>();
        let mut t = character_table(&g, 1).unwrap();
        t.values[1][1] += Complex::new(0.1, 0.0);
        assert!(verify_orthogonality(&t).row_residual >= 0.01);
    }

    #[test]
    fn csv_rendering() {
        let g = fixtures::c2::<f64>();
        let t = character_table(&g, 1).unwrap();
        assert_eq!(
            t.to_csv(),
            "class_size,1,1\n1,1.000000000+0.000000000i,1.000000000+0.000000000i\n\
             1,1.000000000+0.000000000i,-1.000000000+0.000000000i\n"
        );
    }

    #[test]
    fn c2_projectors_are_plus_minus() {
        let g = fixtures::c2::<f64>();
        let t = character_table(&g, 1).unwrap();
        let ps = isotypic_projectors(&g, &t);
        let half = CMatrix::<f64>::from_pairs(&[&[(0.5, 0.0), (0.5, 0.0)], &[(0.5, 0.0), (0.5, 0.0)]]);
        let minus = CMatrix::<f64>::from_pairs(&[&[(0.5, 0.0), (-0.5, 0.0)], &[(-0.5, 0.0), (0.5, 0.0)]]);
        assert!(ps[0].matrix.max_abs_diff(&half) < 1e-12);
        assert!(ps[1].matrix.max_abs_diff(&minus) < 1e-12);
    }

    #[test]
    fn d4_defining_rep_is_irreducible() {
        let g = fixtures::d4::<f64>();
        let t = character_table(&g, 3).unwrap();
        let ps = isotypic_projectors(&g, &t);
        let nonzero: Vec<_> = ps.iter().filter(|p| p.matrix.max_abs() > 1e-9).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(t.degrees[nonzero[0].irrep], 2);
        assert!(nonzero[0].matrix.max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn idempotents_sum_to_identity_delta() {
        let g = fixtures::s3::<f64>();
        let t = character_table(&g, 9).unwrap();
        let es = central_idempotents(&g, &t);
        for h in 0..g.order() {
            let s: C<f64> = es.iter().map(|e| e.coeffs[h]).sum();
            let expect = if h == 0 { 1.0 } else { 0.0 };
            assert!((s - Complex::new(expect, 0.0)).norm() < 1e-12);
        }
    }
}
