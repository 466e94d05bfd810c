//! Mechanical checks of the character-decomposition formulas against
//! brute-force evaluation on small fixture groups.
//!
//! Each claim is evaluated on every applicable fixture and reported with its
//! measured residual; a failing claim carries the input that produced the
//! largest residual.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    decompose_element, statement_formula_residual, weighted_statement_residual, AlgebraElement, AlgebraError,
};
use crate::fixtures;
use crate::group::{FiniteMatrixGroup, GroupElement};
use crate::linalg::CMatrix;
use crate::repr::{central_idempotents, represent, ReprError};
use crate::scalar::Real;
use crate::sim::{closed_form_for_element, GroupArtifacts, Observable, PauliString, SimError};

/// Random algebra elements drawn per fixture for the identity checks.
pub const RANDOM_ELEMENTS: usize = 5;
/// Group elements sampled per fixture for the expectation check.
pub const EXPECTATION_ELEMENTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Holds,
    Fails,
    HoldsConditionally,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimInstance {
    pub fixture: String,
    pub input: String,
    pub residual: f64,
    /// Whether the instance falls under the claim's condition, when it has one.
    pub in_condition: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub location: String,
    pub description: String,
    pub status: ClaimStatus,
    /// Largest residual over all instances.
    pub residual: f64,
    pub condition: Option<String>,
    /// Instance with the largest residual, when the claim does not hold everywhere.
    pub witness: Option<String>,
    pub instances: Vec<ClaimInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub seed: u64,
    pub fixtures: Vec<String>,
    pub tolerance: f64,
    pub claims: Vec<ClaimResult>,
}

#[derive(Debug, Error)]
pub enum ClaimsError {
    #[error("claims need at least one abelian and one non-abelian fixture")]
    InsufficientFixtures,
    #[error("fixture `{fixture}`: {source}")]
    Repr { fixture: String, source: ReprError },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// The default fixture set, by name.
pub fn default_fixtures<T: Real>() -> Vec<(String, FiniteMatrixGroup<T>)> {
    fixtures::NAMES.iter().map(|&n| (n.to_string(), fixtures::by_name(n).expect("registered fixture"))).collect()
}

struct Fixture<T> {
    name: String,
    art: GroupArtifacts<T>,
}

fn finish(
    id: &str,
    location: &str,
    description: &str,
    condition: Option<&str>,
    instances: Vec<ClaimInstance>,
    tol: f64,
) -> ClaimResult {
    let worst = instances.iter().max_by(|a, b| a.residual.total_cmp(&b.residual));
    let residual = worst.map_or(0.0, |w| w.residual);
    let holds_all = instances.iter().all(|i| i.residual <= tol);
    let holds_in_condition = condition.is_some()
        && instances.iter().filter(|i| i.in_condition == Some(true)).all(|i| i.residual <= tol)
        && instances.iter().any(|i| i.in_condition == Some(true));
    let status = if holds_all {
        ClaimStatus::Holds
    } else if holds_in_condition {
        ClaimStatus::HoldsConditionally
    } else {
        ClaimStatus::Fails
    };
    let witness = (!holds_all).then(|| {
        let w = worst.expect("a failing instance exists");
        format!("{}: {}", w.fixture, w.input)
    });
    ClaimResult {
        claim_id: id.to_string(),
        location: location.to_string(),
        description: description.to_string(),
        status,
        residual,
        condition: condition.map(str::to_string),
        witness,
        instances,
    }
}

fn instance(fixture: &str, input: impl Into<String>, residual: f64) -> ClaimInstance {
    ClaimInstance { fixture: fixture.to_string(), input: input.into(), residual, in_condition: None, note: None }
}

/// Seeded random algebra elements, preceded by `δ_identity`.
fn test_elements<'g, T: Real>(
    group: &'g FiniteMatrixGroup<T>,
    rng: &mut ChaCha8Rng,
) -> Vec<(String, AlgebraElement<'g, T>)> {
    let mut out = vec![("delta_identity".to_string(), AlgebraElement::delta(group, group.identity()))];
    for r in 0..RANDOM_ELEMENTS {
        out.push((format!("random_{r}"), AlgebraElement::random(group, rng)));
    }
    out
}

fn claim_reconstruction<T: Real>(fx: &[Fixture<T>], seed: u64, tol: f64) -> Result<ClaimResult, ClaimsError> {
    let mut instances = Vec::new();
    for (f_idx, f) in fx.iter().enumerate() {
        let g = &f.art.group;
        let idem = central_idempotents(g, &f.art.table);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(f_idx as u64));
        for (label, u) in test_elements(g, &mut rng) {
            let dec = decompose_element(&u, &idem, None)?;
            instances.push(instance(&f.name, label, dec.reconstruction_residual));
        }
    }
    Ok(finish(
        "C1",
        "decomposition identity, proof form u = 1·u = Σ_i e_i·u",
        "every algebra element equals the sum of its isotypic components e_i ⋆ u",
        None,
        instances,
        tol,
    ))
}

fn claim_statement_formula<T: Real>(fx: &[Fixture<T>], seed: u64, tol: f64) -> Result<ClaimResult, ClaimsError> {
    let mut instances = Vec::new();
    for (f_idx, f) in fx.iter().enumerate() {
        let g = &f.art.group;
        let idem = central_idempotents(g, &f.art.table);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(100 + f_idx as u64));
        for (label, u) in test_elements(g, &mut rng) {
            let residual = statement_formula_residual(&u, &f.art.table, &idem)?;
            let mut inst = instance(&f.name, label.clone(), residual);
            if label == "delta_identity" {
                let aux = weighted_statement_residual(&u, &f.art.table, &idem)?;
                inst.note = Some(format!("reweighted by d_i/|G|: residual {aux:e}"));
            }
            instances.push(inst);
        }
    }
    Ok(finish(
        "C2",
        "decomposition identity, stated form",
        "u equals Σ_i (χ_i(u)/d_i)(|G|/d_i) e_i",
        None,
        instances,
        tol,
    ))
}

fn claim_multiplicativity<T: Real>(fx: &[Fixture<T>], tol: f64) -> ClaimResult {
    let mut instances = Vec::new();
    for f in fx {
        let g = &f.art.group;
        let t = &f.art.table;
        let class_of = &g.conjugacy_classes().class_of;
        for i in 0..t.k() {
            let chi = |x: usize| t.values[i][class_of[x]];
            let mut worst = 0.0f64;
            let mut worst_pair = (0, 0);
            for a in 0..g.order() {
                for b in 0..g.order() {
                    let ab = g.mul(GroupElement(a), GroupElement(b)).index();
                    let r = (chi(ab) - chi(a) * chi(b)).norm().as_f64();
                    if r > worst {
                        worst = r;
                        worst_pair = (a, b);
                    }
                }
            }
            let mut inst = instance(&f.name, format!("irrep {i} (degree {})", t.degrees[i]), worst);
            inst.in_condition = Some(t.degrees[i] == 1);
            if worst > tol {
                inst.note = Some(format!("largest on elements ({}, {})", worst_pair.0, worst_pair.1));
            }
            instances.push(inst);
        }
    }
    finish(
        "C3",
        "character of a gate product, step 1",
        "χ_i(gh) = χ_i(g) χ_i(h) for every pair of group elements",
        Some("degree-1 irreps"),
        instances,
        tol,
    )
}

fn claim_scalar_sum<T: Real>(fx: &[Fixture<T>], tol: f64) -> ClaimResult {
    let mut instances = Vec::new();
    for f in fx {
        let g = &f.art.group;
        let t = &f.art.table;
        let class_of = &g.conjugacy_classes().class_of;
        for (i, p) in f.art.projectors.iter().enumerate() {
            let coeffs: Vec<_> = (0..g.order()).map(|x| t.values[i][class_of[g.inverses()[x]]]).collect();
            let s: CMatrix<T> = represent(g, &coeffs);
            let scale = T::lit(g.order() as f64 / t.degrees[i] as f64);
            let r1 = s.max_abs_diff(&p.matrix.scale_real(scale)).as_f64();
            let r2 = (&s * &s).max_abs_diff(&s.scale_real(scale)).as_f64();
            instances.push(instance(&f.name, format!("irrep {i} (degree {})", t.degrees[i]), r1.max(r2)));
        }
    }
    finish(
        "C4",
        "character-weighted group sum, step 2",
        "S_i = Σ_g χ_i(g⁻¹) U(g) equals (|G|/d_i) P_i and satisfies S_i² = (|G|/d_i) S_i",
        None,
        instances,
        tol,
    )
}

fn claim_degree_sum<T: Real>(fx: &[Fixture<T>], tol: f64) -> ClaimResult {
    let instances = fx
        .iter()
        .map(|f| {
            let sum: usize = f.art.table.degrees.iter().map(|d| d * d).sum();
            instance(&f.name, "all irreps", (sum as f64 / f.art.group.order() as f64 - 1.0).abs())
        })
        .collect();
    finish("C5", "degree identity, step 3", "Σ_i d_i² / |G| = 1", None, instances, tol)
}

fn claim_closed_form<T: Real>(fx: &[Fixture<T>], seed: u64, tol: f64) -> Result<ClaimResult, ClaimsError> {
    use rand::Rng;
    let mut instances = Vec::new();
    for (f_idx, f) in fx.iter().enumerate() {
        let g = &f.art.group;
        if !g.dim().is_power_of_two() {
            continue;
        }
        let n = g.dim().trailing_zeros() as usize;
        let obs = Observable::Pauli(PauliString::z(n, 0));
        let elements: Vec<usize> = if g.order() <= EXPECTATION_ELEMENTS {
            (0..g.order()).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(200 + f_idx as u64));
            (0..EXPECTATION_ELEMENTS).map(|_| rng.random_range(0..g.order())).collect()
        };
        for e in elements {
            let cmp = closed_form_for_element(GroupElement(e), &obs, &f.art)?;
            let mut inst = instance(&f.name, format!("element {e}, O = {}", PauliString::z(n, 0)), cmp.deviation);
            inst.note = Some(format!("closed form {}, simulated {}", cmp.closed_form, cmp.simulated));
            instances.push(inst);
        }
    }
    Ok(finish(
        "C6",
        "expectation value, step 3",
        "⟨ψ|U†OU|ψ⟩ equals |G|² ⟨ψ|O|ψ⟩ Σ_i |χ_i(U)|²/d_i² for ψ = |0…0⟩",
        None,
        instances,
        tol,
    ))
}

fn claim_degree_bound<T: Real>(fx: &[Fixture<T>], tol: f64) -> ClaimResult {
    let instances = fx
        .iter()
        .map(|f| {
            let k = f.art.table.k();
            let d = f.art.table.max_degree();
            let order = f.art.group.order();
            let mut inst = instance(&f.name, format!("k = {k}, D = {d}, |G| = {order}"), 0.0);
            inst.residual = (order as f64 - (k * d * d) as f64).max(0.0);
            inst
        })
        .collect();
    finish("C7", "cost bound", "k·D² ≥ |G| with D the largest irrep degree", None, instances, tol)
}

/// Evaluates claims C1–C7 over `fixtures`.
pub fn run_claims<T: Real>(
    fixtures: Vec<(String, FiniteMatrixGroup<T>)>,
    seed: u64,
) -> Result<ClaimsReport, ClaimsError> {
    let any_abelian = fixtures.iter().any(|(_, g)| g.is_abelian());
    let any_nonabelian = fixtures.iter().any(|(_, g)| !g.is_abelian());
    if !any_abelian || !any_nonabelian {
        return Err(ClaimsError::InsufficientFixtures);
    }
    let names: Vec<String> = fixtures.iter().map(|(n, _)| n.clone()).collect();
    let fx: Vec<Fixture<T>> = fixtures
        .into_iter()
        .map(|(name, group)| {
            GroupArtifacts::build(group, seed)
                .map(|art| Fixture { name: name.clone(), art })
                .map_err(|source| ClaimsError::Repr { fixture: name, source })
        })
        .collect::<Result<_, _>>()?;
    let tol = T::CHECK_TOL.as_f64();
    let claims = vec![
        claim_reconstruction(&fx, seed, tol)?,
        claim_statement_formula(&fx, seed, tol)?,
        claim_multiplicativity(&fx, tol),
        claim_scalar_sum(&fx, tol),
        claim_degree_sum(&fx, tol),
        claim_closed_form(&fx, seed, tol)?,
        claim_degree_bound(&fx, tol),
    ];
    Ok(ClaimsReport { seed, fixtures: names, tolerance: tol, claims })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> ClaimsReport {
        run_claims(default_fixtures::<f64>(), 42).unwrap()
    }

    fn find<'a>(c: &'a ClaimResult, fixture: &str, input: &str) -> &'a ClaimInstance {
        c.instances.iter().find(|i| i.fixture == fixture && i.input.starts_with(input)).unwrap()
    }

    #[test]
    fn expected_statuses() {
        let r = report();
        let ids: Vec<&str> = r.claims.iter().map(|c| c.claim_id.as_str()).collect();
        assert_eq!(ids, ["C1", "C2", "C3", "C4", "C5", "C6", "C7"]);
        let status: Vec<ClaimStatus> = r.claims.iter().map(|c| c.status).collect();
        use ClaimStatus::*;
        assert_eq!(status, [Holds, Fails, HoldsConditionally, Holds, Holds, Fails, Holds]);
        assert_eq!(r.claims[4].residual, 0.0);
    }

    #[test]
    fn statement_formula_on_c2_identity() {
        let r = report();
        let inst = find(&r.claims[1], "c2", "delta_identity");
        assert!((inst.residual - 1.0).abs() < 1e-12);
        assert_eq!(find(&r.claims[1], "trivial", "delta_identity").residual, 0.0);
    }

    #[test]
    fn multiplicativity_fails_on_d4_two_dim_irrep() {
        let r = report();
        let c3 = &r.claims[2];
        assert_eq!(c3.condition.as_deref(), Some("degree-1 irreps"));
        let d4 = find(c3, "d4", "irrep 4 (degree 2)");
        assert!(d4.residual > 0.1);
        assert!(c3.instances.iter().filter(|i| i.in_condition == Some(true)).all(|i| i.residual <= 1e-8));
    }

    #[test]
    fn closed_form_deviation_for_x_in_c2() {
        let r = report();
        let g = fixtures::c2::<f64>();
        let x = g.generators()[0];
        let inst = find(&r.claims[5], "c2", &format!("element {x},"));
        assert!((inst.residual - 9.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_json() {
        let a = serde_json::to_string(&report().claims).unwrap();
        let b = serde_json::to_string(&report().claims).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn needs_mixed_fixtures() {
        let only_abelian = vec![("c2".to_string(), fixtures::c2::<f64>())];
        assert!(matches!(run_claims(only_abelian, 0), Err(ClaimsError::InsufficientFixtures)));
    }
}
