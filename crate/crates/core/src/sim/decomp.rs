use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::{Observable, SimError};
use crate::circuit::{circuit_unitary, Circuit};
use crate::group::{FiniteMatrixGroup, GroupElement, GroupError};
use crate::linalg::C;
use crate::repr::{character_table, isotypic_projectors, CharacterTable, IsotypicProjector, ReprError};
use crate::scalar::Real;

/// A group together with its character table and isotypic projectors.
#[derive(Debug)]
pub struct GroupArtifacts<T> {
    pub group: FiniteMatrixGroup<T>,
    pub table: CharacterTable<T>,
    pub projectors: Vec<IsotypicProjector<T>>,
}

impl<T: Real> GroupArtifacts<T> {
    pub fn build(group: FiniteMatrixGroup<T>, seed: u64) -> Result<Self, ReprError> {
        let table = character_table(&group, seed)?;
        let projectors = isotypic_projectors(&group, &table);
        Ok(Self { group, table, projectors })
    }

    fn locate(&self, c: &Circuit) -> Result<GroupElement, SimError> {
        let dim = 1usize << c.n_qubits;
        if dim != self.group.dim() {
            return Err(GroupError::DimensionMismatch { expected: self.group.dim(), found: dim }.into());
        }
        let u = circuit_unitary::<T>(&c.unitary_part())?.into_matrix();
        self.group.element_of(&u)?.ok_or(SimError::ElementNotInGroup)
    }
}

/// `⟨ψ|O|ψ⟩` with `|ψ⟩ = Σ_i P_i U |0…0⟩`, summing the isotypic components of the circuit unitary.
pub fn decomp_expectation<T: Real>(
    c: &Circuit,
    obs: &Observable<T>,
    artifacts: &GroupArtifacts<T>,
) -> Result<f64, SimError> {
    obs.check(c.n_qubits)?;
    let g = artifacts.locate(c)?;
    element_expectation(g, obs, artifacts)
}

/// [`decomp_expectation`] for a group element given directly.
pub fn element_expectation<T: Real>(
    g: GroupElement,
    obs: &Observable<T>,
    artifacts: &GroupArtifacts<T>,
) -> Result<f64, SimError> {
    let u = artifacts.group.matrix(g).matrix();
    let dim = u.dim();
    obs.check(dim.trailing_zeros() as usize)?;
    let mut psi = vec![C::<T>::zero(); dim];
    for p in &artifacts.projectors {
        let col = (&p.matrix * u).mul_vec(&basis_zero(dim));
        for (acc, z) in psi.iter_mut().zip(col) {
            *acc = *acc + z;
        }
    }
    let e = obs.expectation(&psi);
    let im = e.im.as_f64();
    if im.abs() > T::CHECK_TOL.as_f64() {
        return Err(SimError::ComplexExpectation { im });
    }
    Ok(e.re.as_f64())
}

fn basis_zero<T: Real>(dim: usize) -> Vec<C<T>> {
    let mut v = vec![C::<T>::zero(); dim];
    v[0] = Complex::new(T::one(), T::zero());
    v
}

/// Closed-form character expression `|G|² ⟨0|O|0⟩ Σ_i |χ_i(U)|² / d_i²` next to the simulated value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormComparison {
    pub closed_form: f64,
    pub simulated: f64,
    pub deviation: f64,
}

pub fn closed_form_expectation<T: Real>(
    c: &Circuit,
    obs: &Observable<T>,
    artifacts: &GroupArtifacts<T>,
) -> Result<ClosedFormComparison, SimError> {
    obs.check(c.n_qubits)?;
    let g = artifacts.locate(c)?;
    closed_form_for_element(g, obs, artifacts)
}

pub fn closed_form_for_element<T: Real>(
    g: GroupElement,
    obs: &Observable<T>,
    artifacts: &GroupArtifacts<T>,
) -> Result<ClosedFormComparison, SimError> {
    let dim = artifacts.group.dim();
    let order = artifacts.group.order() as f64;
    let o00 = obs.expectation(&basis_zero(dim)).re.as_f64();
    let class = artifacts.group.class_of(g);
    let weight: f64 = (0..artifacts.table.k())
        .map(|i| {
            let d = artifacts.table.degrees[i] as f64;
            artifacts.table.values[i][class].norm_sqr().as_f64() / (d * d)
        })
        .sum();
    let closed_form = order * order * o00 * weight;
    let simulated = element_expectation(g, obs, artifacts)?;
    Ok(ClosedFormComparison { closed_form, simulated, deviation: (closed_form - simulated).abs() })
}
