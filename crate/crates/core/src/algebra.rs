//! The group algebra `ℂ[G]`: convolution and character decomposition.
//!
//! The authoritative decomposition is `u = Σ_i e_i ⋆ u`, which holds for every
//! `u` because the central idempotents sum to the unit. The closed form
//! `Σ_i (χ_i(u)/d_i) Σ_g χ_i(g⁻¹) g` is central, so it cannot reconstruct a
//! general element; it is exposed only as a measured residual.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{close_group, ClosureConfig, FiniteMatrixGroup, GroupElement, GroupError};
use crate::linalg::{CMatrix, UnitaryMatrix, C};
use crate::repr::{
    central_idempotents, character_table, isotypic_projectors, represent, verify_orthogonality, CentralIdempotent,
    CharacterTable, IsotypicProjector, ReprError,
};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("coefficient vector has length {found}, group order is {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Repr(#[from] ReprError),
}

/// Element of `ℂ[G]` as a dense coefficient vector indexed by group element.
#[derive(Debug, Clone)]
pub struct AlgebraElement<'g, T> {
    group: &'g FiniteMatrixGroup<T>,
    coeffs: Vec<C<T>>,
}

impl<'g, T: Real> AlgebraElement<'g, T> {
    pub fn new(group: &'g FiniteMatrixGroup<T>, coeffs: Vec<C<T>>) -> Result<Self, AlgebraError> {
        if coeffs.len() != group.order() {
            return Err(AlgebraError::LengthMismatch { expected: group.order(), found: coeffs.len() });
        }
        Ok(Self { group, coeffs })
    }

    pub fn zero(group: &'g FiniteMatrixGroup<T>) -> Self {
        Self { group, coeffs: vec![C::zero(); group.order()] }
    }

    pub fn delta(group: &'g FiniteMatrixGroup<T>, g: GroupElement) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[g.0] = Complex::new(T::one(), T::zero());
        e
    }

    /// Coefficients drawn uniformly from the complex unit square `[-1, 1]²`.
    pub fn random<R: Rng + ?Sized>(group: &'g FiniteMatrixGroup<T>, rng: &mut R) -> Self {
        let coeffs = (0..group.order())
            .map(|_| Complex::new(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0))))
            .collect();
        Self { group, coeffs }
    }

    pub fn from_idempotent(group: &'g FiniteMatrixGroup<T>, e: &CentralIdempotent<T>) -> Self {
        Self { group, coeffs: e.coeffs.clone() }
    }

    pub fn group(&self) -> &'g FiniteMatrixGroup<T> {
        self.group
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    fn same_group(&self, other: &Self) -> Result<(), AlgebraError> {
        if std::ptr::eq(self.group, other.group) {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| *a + *b).collect();
        Ok(Self { group: self.group, coeffs })
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self { group: self.group, coeffs: self.coeffs.iter().map(|&z| z * s).collect() }
    }

    /// Max-abs coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, AlgebraError> {
        self.same_group(other)?;
        Ok(max_abs_diff(&self.coeffs, &other.coeffs))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr().as_f64()).sum::<f64>().sqrt()
    }

    /// Image `Σ_g u[g] U(g)` in the defining representation.
    pub fn represent(&self) -> CMatrix<T> {
        represent(self.group, &self.coeffs)
    }
}

fn max_abs_diff<T: Real>(a: &[C<T>], b: &[C<T>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm().as_f64()).fold(0.0, f64::max)
}

/// `(a⋆b)[h] = Σ_{g1·g2 = h} a[g1] b[g2]`, exact over the Cayley table.
pub fn convolve<'g, T: Real>(
    a: &AlgebraElement<'g, T>,
    b: &AlgebraElement<'g, T>,
) -> Result<AlgebraElement<'g, T>, AlgebraError> {
    a.same_group(b)?;
    let group = a.group;
    let n = group.order();
    let table = group.cayley();
    let mut out = vec![C::<T>::zero(); n];
    for (g1, &x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let row = &table[g1 * n..(g1 + 1) * n];
        for (&y, &h) in b.coeffs.iter().zip(row) {
            out[h as usize] = out[h as usize] + x * y;
        }
    }
    Ok(AlgebraElement { group, coeffs: out })
}

/// Result of `u = Σ_i e_i ⋆ u`.
#[derive(Debug, Clone)]
pub struct DecompositionResult<'g, T> {
    pub components: Vec<AlgebraElement<'g, T>>,
    /// Max-abs coefficient of `Σ_i u_i − u`.
    pub reconstruction_residual: f64,
    /// `P_i · ρ(u)` when projectors were supplied.
    pub matrix_components: Vec<CMatrix<T>>,
    /// Max-abs entry of `Σ_i P_i ρ(u) − ρ(u)`, zero when no projectors were supplied.
    pub matrix_residual: f64,
}

impl<T: Real> DecompositionResult<'_, T> {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn component_norms(&self) -> Vec<f64> {
        self.components.iter().map(AlgebraElement::l2_norm).collect()
    }
}

pub fn decompose_element<'g, T: Real>(
    u: &AlgebraElement<'g, T>,
    idempotents: &[CentralIdempotent<T>],
    projectors: Option<&[IsotypicProjector<T>]>,
) -> Result<DecompositionResult<'g, T>, AlgebraError> {
    let group = u.group;
    let mut components = Vec::with_capacity(idempotents.len());
    let mut total = AlgebraElement::zero(group);
    for e in idempotents {
        if e.coeffs.len() != group.order() {
            return Err(AlgebraError::GroupMismatch);
        }
        let ui = convolve(&AlgebraElement::from_idempotent(group, e), u)?;
        total = total.add(&ui)?;
        components.push(ui);
    }
    let reconstruction_residual = total.max_abs_diff(u)?;

    let (matrix_components, matrix_residual) = match projectors {
        Some(ps) => {
            let image = u.represent();
            if ps.iter().any(|p| p.matrix.dim() != image.dim()) {
                return Err(AlgebraError::GroupMismatch);
            }
            let comps: Vec<CMatrix<T>> = ps.iter().map(|p| &p.matrix * &image).collect();
            let sum = comps.iter().fold(CMatrix::zeros(image.dim()), |acc, m| &acc + m);
            let residual = sum.max_abs_diff(&image).as_f64();
            (comps, residual)
        }
        None => (Vec::new(), 0.0),
    };

    Ok(DecompositionResult { components, reconstruction_residual, matrix_components, matrix_residual })
}

/// `χ_i(u) = Σ_g u[g] χ_i(g)` for every irrep.
pub fn characters_of<T: Real>(u: &AlgebraElement<'_, T>, table: &CharacterTable<T>) -> Result<Vec<C<T>>, AlgebraError> {
    if table.group_order != u.group.order() {
        return Err(AlgebraError::GroupMismatch);
    }
    let class_of = &u.group.conjugacy_classes().class_of;
    Ok((0..table.k())
        .map(|i| {
            u.coeffs.iter().enumerate().fold(C::<T>::zero(), |acc, (g, &c)| acc + c * table.values[i][class_of[g]])
        })
        .collect())
}

/// Evaluates `Σ_i (χ_i(u)/d_i) (|G|/d_i) e_i`, the closed-form character
/// expansion evaluated in the group algebra.
pub fn statement_formula<'g, T: Real>(
    u: &AlgebraElement<'g, T>,
    table: &CharacterTable<T>,
    idempotents: &[CentralIdempotent<T>],
) -> Result<AlgebraElement<'g, T>, AlgebraError> {
    let chars = characters_of(u, table)?;
    let order = table.group_order as f64;
    let mut total = AlgebraElement::zero(u.group);
    for (i, e) in idempotents.iter().enumerate() {
        let d = table.degrees[i] as f64;
        let weight = chars[i] * T::lit(order / (d * d));
        total = total.add(&AlgebraElement::from_idempotent(u.group, e).scale(weight))?;
    }
    Ok(total)
}

/// Max-abs coefficient of the closed-form expansion minus `u`.
pub fn statement_formula_residual<T: Real>(
    u: &AlgebraElement<'_, T>,
    table: &CharacterTable<T>,
    idempotents: &[CentralIdempotent<T>],
) -> Result<f64, AlgebraError> {
    statement_formula(u, table, idempotents)?.max_abs_diff(u)
}

/// Same expansion with component `i` reweighted by `d_i/|G|`, i.e.
/// `Σ_i (χ_i(u)/d_i) e_i`. This reconstructs exactly the central elements.
pub fn weighted_statement_residual<T: Real>(
    u: &AlgebraElement<'_, T>,
    table: &CharacterTable<T>,
    idempotents: &[CentralIdempotent<T>],
) -> Result<f64, AlgebraError> {
    let chars = characters_of(u, table)?;
    let mut total = AlgebraElement::zero(u.group);
    for (i, e) in idempotents.iter().enumerate() {
        let weight = chars[i] / T::lit(table.degrees[i] as f64);
        total = total.add(&AlgebraElement::from_idempotent(u.group, e).scale(weight))?;
    }
    total.max_abs_diff(u)
}

/// Outcome of the finite-group condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteGroupCondition {
    pub passed: bool,
    pub group_order: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposabilityReport {
    pub condition1_finite_group: FiniteGroupCondition,
    pub condition2_orthogonality_residual: Option<f64>,
    pub condition3_reconstruction_residual: Option<f64>,
    pub verdict: bool,
}

/// Runs the three decomposability conditions for a circuit unitary over a gate set.
///
/// A closure that exceeds the cap, or a unitary outside the generated group,
/// fails the first condition; that is reported, not raised.
pub fn check_decomposability<T: Real>(
    circuit_unitary: &UnitaryMatrix<T>,
    gate_set: &[UnitaryMatrix<T>],
    cfg: &ClosureConfig<T>,
    seed: u64,
) -> Result<DecomposabilityReport, AlgebraError> {
    let fail = |detail: String, order: Option<usize>| DecomposabilityReport {
        condition1_finite_group: FiniteGroupCondition { passed: false, group_order: order, detail },
        condition2_orthogonality_residual: None,
        condition3_reconstruction_residual: None,
        verdict: false,
    };
    let group = match close_group(gate_set, cfg) {
        Ok(g) => g,
        Err(e @ GroupError::OrderCapExceeded { .. }) => return Ok(fail(e.to_string(), None)),
        Err(e) => return Ok(fail(e.to_string(), None)),
    };
    let element = match group.element_of(circuit_unitary.matrix()) {
        Ok(Some(g)) => g,
        Ok(None) => {
            return Ok(fail("circuit unitary is not an element of the generated group".into(), Some(group.order())))
        }
        Err(e) => return Ok(fail(e.to_string(), Some(group.order()))),
    };

    let table = character_table(&group, seed)?;
    let orth = verify_orthogonality(&table).max();
    let idempotents = central_idempotents(&group, &table);
    let projectors = isotypic_projectors(&group, &table);
    let u = AlgebraElement::delta(&group, element);
    let dec = decompose_element(&u, &idempotents, Some(&projectors))?;
    let recon = dec.reconstruction_residual.max(dec.matrix_residual);
    let tol = T::CHECK_TOL;
    Ok(DecomposabilityReport {
        condition1_finite_group: FiniteGroupCondition {
            passed: true,
            group_order: Some(group.order()),
            detail: format!("closed to a group of order {}", group.order()),
        },
        condition2_orthogonality_residual: Some(orth),
        condition3_reconstruction_residual: Some(recon),
        verdict: orth <= tol && recon <= tol,
    })
}

/// JSON summary of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub k: usize,
    pub reconstruction_residual: f64,
    pub matrix_residual: f64,
    pub component_norms: Vec<f64>,
    pub statement_formula_residual: f64,
}

/// Decomposes `δ_g` with matrix components and the closed-form residual.
pub fn summarize_element<T: Real>(
    group: &FiniteMatrixGroup<T>,
    table: &CharacterTable<T>,
    g: GroupElement,
) -> Result<DecompositionSummary, AlgebraError> {
    let idempotents = central_idempotents(group, table);
    let projectors = isotypic_projectors(group, table);
    let u = AlgebraElement::delta(group, g);
    let dec = decompose_element(&u, &idempotents, Some(&projectors))?;
    Ok(DecompositionSummary {
        k: dec.k(),
        reconstruction_residual: dec.reconstruction_residual,
        matrix_residual: dec.matrix_residual,
        component_norms: dec.component_norms(),
        statement_formula_residual: statement_formula_residual(&u, table, &idempotents)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fixtures, gates};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn delta_identity_is_unit() {
        let g = fixtures::s3::<f64>();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = AlgebraElement::random(&g, &mut rng);
        let one = AlgebraElement::delta(&g, g.identity());
        assert!(convolve(&one, &u).unwrap().max_abs_diff(&u).unwrap() < 1e-15);
        assert!(convolve(&u, &one).unwrap().max_abs_diff(&u).unwrap() < 1e-15);
    }

    #[test]
    fn x_squared_is_identity_in_algebra() {
        let g = fixtures::c2::<f64>();
        let dx = AlgebraElement::delta(&g, GroupElement(1));
        let sq = convolve(&dx, &dx).unwrap();
        assert_eq!(sq.coeffs()[0], Complex::new(1.0, 0.0));
        assert_eq!(sq.coeffs()[1], Complex::new(0.0, 0.0));
    }

    #[test]
    fn convolution_matches_matrix_product_lookup() {
        let g = fixtures::d4::<f64>();
        let x = GroupElement(g.generators()[0]);
        let z = GroupElement(g.generators()[1]);
        let prod = convolve(&AlgebraElement::delta(&g, x), &AlgebraElement::delta(&g, z)).unwrap();
        let xz = gates::x::<f64>().compose(&gates::z());
        let target = g.element_of(xz.matrix()).unwrap().unwrap();
        let expect = AlgebraElement::delta(&g, target);
        assert_eq!(prod.max_abs_diff(&expect).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_groups_rejected() {
        let a = fixtures::c2::<f64>();
        let b = fixtures::c2::<f64>();
        let ua = AlgebraElement::delta(&a, a.identity());
        let ub = AlgebraElement::delta(&b, b.identity());
        assert_eq!(convolve(&ua, &ub).unwrap_err(), AlgebraError::GroupMismatch);
    }

    #[test]
    fn statement_residual_examples() {
        let g = fixtures::c2::<f64>();
        let t = character_table(&g, 0).unwrap();
        let es = central_idempotents(&g, &t);
        let one = AlgebraElement::delta(&g, g.identity());
        let r = statement_formula_residual(&one, &t, &es).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "residual {r}");

        let triv = fixtures::trivial::<f64>();
        let t1 = character_table(&triv, 0).unwrap();
        let e1 = central_idempotents(&triv, &t1);
        let u = AlgebraElement::delta(&triv, triv.identity());
        assert!(statement_formula_residual(&u, &t1, &e1).unwrap() < 1e-15);

        let d4 = fixtures::d4::<f64>();
        let t4 = character_table(&d4, 0).unwrap();
        let e4 = central_idempotents(&d4, &t4);
        let dx = AlgebraElement::delta(&d4, GroupElement(d4.generators()[0]));
        assert!(statement_formula_residual(&dx, &t4, &e4).unwrap() > 0.1);
    }

    #[test]
    fn idempotent_decomposes_to_itself() {
        let g = fixtures::s3::<f64>();
        let t = character_table(&g, 2).unwrap();
        let es = central_idempotents(&g, &t);
        let u = AlgebraElement::from_idempotent(&g, &es[0]);
        let dec = decompose_element(&u, &es, None).unwrap();
        assert!(dec.components[0].max_abs_diff(&u).unwrap() < 1e-12);
        for c in &dec.components[1..] {
            assert!(c.l2_norm() < 1e-12);
        }
    }

    #[test]
    fn characters_of_delta_is_table_column() {
        let g = fixtures::s3::<f64>();
        let t = character_table(&g, 2).unwrap();
        let one = characters_of(&AlgebraElement::delta(&g, g.identity()), &t).unwrap();
        for (c, d) in one.iter().zip(&t.degrees) {
            assert!((c - Complex::new(*d as f64, 0.0)).norm() < 1e-12);
        }
        let h = GroupElement(2);
        let col = characters_of(&AlgebraElement::delta(&g, h), &t).unwrap();
        for (i, c) in col.iter().enumerate() {
            assert_eq!(*c, t.values[i][g.class_of(h)]);
        }
    }

    #[test]
    fn decomposability_examples() {
        let id = UnitaryMatrix::<f64>::identity(2);
        let rep = check_decomposability(&id, &[gates::x()], &ClosureConfig::default(), 0).unwrap();
        assert!(rep.verdict);
        assert!(rep.condition2_orthogonality_residual.unwrap() < 1e-12);
        assert!(rep.condition3_reconstruction_residual.unwrap() < 1e-12);

        let ht =
            check_decomposability(&id, &[gates::h(), gates::t()], &ClosureConfig::default().with_max_order(2000), 0)
                .unwrap();
        assert!(!ht.verdict);
        assert!(!ht.condition1_finite_group.passed);
    }
}
