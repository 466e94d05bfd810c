//! Segment rewriting: circuit runs are closed into finite groups, analysed
//! through their character tables, and replaced by shortest generator words.
//!
//! Passes, per segment:
//! 1. translate a maximal run of gates into an element of the group its gates generate;
//! 2. compute that group's character table;
//! 3. decompose the element into isotypic components (recorded, not used for rewriting);
//! 4. replace the run by the shortest word for the element;
//! 5. drop runs whose element is the identity.

mod equivalence;
mod words;

use std::cell::OnceCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

pub use equivalence::{
    equivalence_check, unitary_distance_up_to_phase, EquivalenceConfig, EquivalenceVerdict, INPUT_STATES,
    PAULI_OBSERVABLES,
};
pub use words::WordTable;

use crate::algebra::{summarize_element, DecompositionSummary};
use crate::circuit::{Circuit, GateInstance, GateKind};
use crate::gates::embed;
use crate::group::{close_group, ClosureConfig, FiniteMatrixGroup, GroupElement};
use crate::linalg::UnitaryMatrix;
use crate::repr::{character_table, CharacterTable};
use crate::sim::SimError;

pub const PASS_NAMES: [&str; 5] =
    ["circuit-to-group-element", "character-table", "decomposition", "shortest-word-rewrite", "identity-elision"];

const PHASE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeConfig {
    /// Closure cap per segment; runs whose gates generate a larger group are split.
    pub max_order: usize,
    /// Treat matrices equal up to global phase as the same element when choosing words.
    pub phase_insensitive: bool,
    /// Largest number of qubits a segment may touch.
    pub max_support: usize,
    /// Character tables and decompositions are only computed for segment groups up to this order.
    pub analysis_max_order: usize,
    pub seed: u64,
    /// Sampled equivalence check of input against output; `None` skips it.
    pub verify: Option<EquivalenceConfig>,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            max_order: 20_000,
            phase_insensitive: true,
            max_support: 3,
            analysis_max_order: 192,
            seed: 42,
            verify: Some(EquivalenceConfig { shots: 20_000, ..Default::default() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassLog {
    pub name: String,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub round: usize,
    /// Gate range `[start, end)` in that round's input circuit.
    pub start: usize,
    pub end: usize,
    pub qubits: Vec<usize>,
    pub generators: usize,
    pub group_order: usize,
    pub abelian: bool,
    /// Irrep count, known when the table was computed or the group is abelian.
    pub irreps: Option<usize>,
    pub max_degree: Option<usize>,
    pub gates_before: usize,
    pub gates_after: usize,
    pub dropped: bool,
    pub analysis: Option<DecompositionSummary>,
    pub analysis_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedGate {
    pub round: usize,
    pub index: usize,
    pub gate: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub passes: Vec<PassLog>,
    pub segments: Vec<SegmentRecord>,
    pub skipped: Vec<SkippedGate>,
    pub gates_before: usize,
    pub gates_after: usize,
    pub depth_before: usize,
    pub depth_after: usize,
    pub rounds: usize,
    pub phase_insensitive: bool,
    pub max_order: usize,
    pub equivalence: Option<EquivalenceVerdict>,
}

/// A closed segment group with its lazily built word and character tables.
struct ClosedGroup {
    group: FiniteMatrixGroup<f64>,
    words: OnceCell<WordTable>,
    table: OnceCell<Result<CharacterTable<f64>, String>>,
}

type LocalGate = (GateKind, Vec<usize>, Option<u64>);

/// Closures keyed by support size and generators relabelled onto the support, so repeated
/// gate patterns are closed once per `optimize` call. Cap failures are cached too.
#[derive(Default)]
struct ClosureCache {
    groups: HashMap<(usize, Vec<LocalGate>), Option<Rc<ClosedGroup>>>,
}

/// Group generated by a run of gates, embedded over the run's qubit support.
struct SegmentGroup {
    qubits: Vec<usize>,
    generators: Vec<GateInstance>,
    closed: Rc<ClosedGroup>,
}

impl SegmentGroup {
    fn group(&self) -> &FiniteMatrixGroup<f64> {
        &self.closed.group
    }
}

fn close_segment(
    generators: &[GateInstance],
    qubits: &BTreeSet<usize>,
    max_order: usize,
    cache: &mut ClosureCache,
) -> Option<SegmentGroup> {
    let qubits: Vec<usize> = qubits.iter().copied().collect();
    let local = |q: usize| qubits.binary_search(&q).expect("gate inside support");
    let key: Vec<LocalGate> = generators
        .iter()
        .map(|g| (g.kind, g.qubits.iter().map(|&q| local(q)).collect(), g.angle.map(f64::to_bits)))
        .collect();
    let closed = cache
        .groups
        .entry((qubits.len(), key))
        .or_insert_with_key(|(n, key)| {
            let mats: Vec<UnitaryMatrix<f64>> = key
                .iter()
                .zip(generators)
                .map(|((_, targets, _), g)| embed(g.matrix::<f64>().expect("unitary gate").matrix(), targets, *n))
                .collect();
            let cfg = ClosureConfig::<f64>::default().with_max_order(max_order);
            close_group(&mats, &cfg)
                .ok()
                .map(|group| Rc::new(ClosedGroup { group, words: OnceCell::new(), table: OnceCell::new() }))
        })
        .clone()?;
    Some(SegmentGroup { qubits, generators: generators.to_vec(), closed })
}

/// Grows a run from `start` while its gates still close within the caps.
fn grow_segment(
    gates: &[GateInstance],
    start: usize,
    cfg: &OptimizeConfig,
    cache: &mut ClosureCache,
) -> (usize, Option<SegmentGroup>) {
    let mut best: Option<SegmentGroup> = None;
    let mut end = start;
    while end < gates.len() {
        let g = &gates[end];
        if let Some(seg) = &best {
            if seg.generators.contains(g) {
                end += 1;
                continue;
            }
        }
        let mut qubits: BTreeSet<usize> = best.as_ref().map(|s| s.qubits.iter().copied().collect()).unwrap_or_default();
        qubits.extend(g.qubits.iter().copied());
        if qubits.len() > cfg.max_support {
            break;
        }
        let mut generators = best.as_ref().map(|s| s.generators.clone()).unwrap_or_default();
        generators.push(g.clone());
        match close_segment(&generators, &qubits, cfg.max_order, cache) {
            Some(seg) => {
                best = Some(seg);
                end += 1;
            }
            None => break,
        }
    }
    (end, best)
}

fn segment_element(seg: &SegmentGroup, run: &[GateInstance]) -> GroupElement {
    // The run's matrix is U_m ··· U_1, so right-multiply starting from the last gate.
    let mut a = seg.group().identity().index();
    for g in run.iter().rev() {
        let j = seg.generators.iter().position(|x| x == g).expect("gate is a generator");
        a = seg.group().right_mul(a, j);
    }
    GroupElement(a)
}

/// Elements whose matrices agree with `target`'s, exactly or up to global phase.
fn phase_class(group: &FiniteMatrixGroup<f64>, target: GroupElement, phase_insensitive: bool) -> Vec<GroupElement> {
    if !phase_insensitive {
        return vec![target];
    }
    let canon = group.matrix(target).canonical_phase(PHASE_EPS);
    (0..group.order())
        .map(GroupElement)
        .filter(|&g| group.matrix(g).canonical_phase(PHASE_EPS).max_abs_diff(&canon) <= group.tol())
        .collect()
}

#[derive(Default)]
struct RoundStats {
    segments: usize,
    analysed: usize,
    analysis_skipped: usize,
    rewritten: usize,
    dropped: usize,
    gates_removed: usize,
}

fn optimize_round(
    c: &Circuit,
    cfg: &OptimizeConfig,
    round: usize,
    report: &mut OptimizationReport,
    stats: &mut RoundStats,
    cache: &mut ClosureCache,
) -> Circuit {
    let gates = c.unitary_gates();
    let mut out = Circuit::new(c.n_qubits, c.name.clone());
    let mut i = 0;
    while i < gates.len() {
        let (end, seg) = grow_segment(gates, i, cfg, cache);
        let Some(seg) = seg else {
            report.skipped.push(SkippedGate {
                round,
                index: i,
                gate: gates[i].kind.name().to_string(),
                reason: format!("gate does not close into a group of order at most {}", cfg.max_order),
            });
            out.gates.push(gates[i].clone());
            i += 1;
            continue;
        };
        let run = &gates[i..end];
        stats.segments += 1;
        let element = segment_element(&seg, run);

        let group = seg.group();
        let abelian = group.is_abelian();
        let mut irreps = abelian.then_some((group.order(), 1));
        let (analysis, analysis_note) = if group.order() <= cfg.analysis_max_order {
            let table = seg.closed.table.get_or_init(|| character_table(group, cfg.seed).map_err(|e| e.to_string()));
            match table.as_ref().map_err(Clone::clone).and_then(|t| {
                irreps = Some((t.k(), t.max_degree()));
                summarize_element(group, t, element).map_err(|e| e.to_string())
            }) {
                Ok(s) => {
                    stats.analysed += 1;
                    (Some(s), None)
                }
                Err(e) => {
                    stats.analysis_skipped += 1;
                    (None, Some(format!("analysis failed: {e}")))
                }
            }
        } else {
            stats.analysis_skipped += 1;
            (None, Some(format!("group order {} above analysis limit {}", group.order(), cfg.analysis_max_order)))
        };

        let table = seg.closed.words.get_or_init(|| WordTable::build(group));
        let word = phase_class(group, element, cfg.phase_insensitive)
            .into_iter()
            .map(|g| table.word(g))
            .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
            .expect("class contains the element")
            .to_vec();

        let replacement: Vec<GateInstance> = if word.len() < run.len() {
            // Word [j1, …, jL] is g_{j1}···g_{jL}: apply jL first.
            word.iter().rev().map(|&j| seg.generators[j].clone()).collect()
        } else {
            run.to_vec()
        };
        let dropped = replacement.is_empty();
        if dropped {
            stats.dropped += 1;
        } else if replacement.len() < run.len() {
            stats.rewritten += 1;
        }
        stats.gates_removed += run.len() - replacement.len();
        report.segments.push(SegmentRecord {
            round,
            start: i,
            end,
            qubits: seg.qubits.clone(),
            generators: seg.generators.len(),
            group_order: group.order(),
            abelian,
            irreps: irreps.map(|(k, _)| k),
            max_degree: irreps.map(|(_, d)| d),
            gates_before: run.len(),
            gates_after: replacement.len(),
            dropped,
            analysis,
            analysis_note,
        });
        out.gates.extend(replacement);
        i = end;
    }
    out.gates.extend(c.measurement_suffix().iter().cloned());
    out
}

/// Rewrites `c` until a round stops reducing the gate count.
///
/// The measurement suffix is kept verbatim. The result of the last improving round is
/// returned, so optimizing the output again leaves its gate count unchanged.
pub fn optimize(c: &Circuit, cfg: &OptimizeConfig) -> Result<(Circuit, OptimizationReport), SimError> {
    let mut report = OptimizationReport {
        passes: Vec::new(),
        segments: Vec::new(),
        skipped: Vec::new(),
        gates_before: c.gate_count(),
        gates_after: c.gate_count(),
        depth_before: c.depth(),
        depth_after: c.depth(),
        rounds: 0,
        phase_insensitive: cfg.phase_insensitive,
        max_order: cfg.max_order,
        equivalence: None,
    };
    let mut stats = RoundStats::default();
    let mut cache = ClosureCache::default();
    let mut current = c.clone();
    loop {
        report.rounds += 1;
        let next = optimize_round(&current, cfg, report.rounds, &mut report, &mut stats, &mut cache);
        if next.gate_count() < current.gate_count() {
            current = next;
        } else {
            break;
        }
    }

    let summaries = [
        format!("{} segments closed, {} gates skipped", stats.segments, report.skipped.len()),
        format!("{} segments with a character table, {} without", stats.analysed, stats.analysis_skipped),
        format!("{} segment elements decomposed", stats.analysed),
        format!("{} segments shortened", stats.rewritten),
        format!("{} identity segments dropped, {} gates removed in total", stats.dropped, stats.gates_removed),
    ];
    report.passes =
        PASS_NAMES.iter().zip(summaries).map(|(name, summary)| PassLog { name: name.to_string(), summary }).collect();
    report.gates_after = current.gate_count();
    report.depth_after = current.depth();
    if let Some(eq) = &cfg.verify {
        report.equivalence = Some(equivalence_check(c, &current, eq)?);
    }
    Ok((current, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_benchmark, parse_circuit, BenchmarkSpec};

    fn fast() -> OptimizeConfig {
        OptimizeConfig { verify: Some(EquivalenceConfig { shots: 5_000, ..Default::default() }), ..Default::default() }
    }

    #[test]
    fn double_hadamard_vanishes() {
        let (out, report) = optimize(&parse_circuit("qubits 1\nh 0\nh 0\n").unwrap(), &fast()).unwrap();
        assert_eq!(out.gate_count(), 0);
        assert_eq!(report.gates_after, 0);
        assert!(report.segments[0].dropped);
        assert_eq!(report.passes.len(), 5);
        assert!(report.equivalence.unwrap().equivalent);
    }

    #[test]
    fn minus_identity_vanishes_only_when_phase_insensitive() {
        let c = parse_circuit("qubits 1\nx 0\nz 0\nx 0\nz 0\n").unwrap();
        let (out, _) = optimize(&c, &fast()).unwrap();
        assert_eq!(out.gate_count(), 0);
        let exact = OptimizeConfig { phase_insensitive: false, ..fast() };
        let (out, _) = optimize(&c, &exact).unwrap();
        assert_eq!(out.gate_count(), 4);
    }

    #[test]
    fn measurement_suffix_is_kept() {
        let c = parse_circuit("qubits 2\nh 0\nh 0\nx 1\nmeasure 0\nmeasure 1\n").unwrap();
        let (out, _) = optimize(&c, &fast()).unwrap();
        assert_eq!(out.measurement_suffix(), c.measurement_suffix());
        assert_eq!(out.unitary_gates(), &[GateInstance::one(crate::circuit::GateKind::X, 1)]);
    }

    #[test]
    fn infinite_order_gate_is_skipped() {
        let c = parse_circuit("qubits 2\ncp(0.3) 0 1\n").unwrap();
        let (out, report) = optimize(&c, &fast()).unwrap();
        assert_eq!(out, c);
        assert_eq!(report.skipped.len(), 1);
    }

    #[test]
    fn benchmarks_are_sound() {
        for spec in [
            BenchmarkSpec::Bv { secret: "1011".into() },
            BenchmarkSpec::Qft { width: 3 },
            BenchmarkSpec::Grover { n: 3, marked: 5, iterations: Some(2) },
        ] {
            let c = build_benchmark(&spec).unwrap();
            let (out, report) = optimize(&c, &fast()).unwrap();
            assert!(out.gate_count() <= c.gate_count());
            assert!(unitary_distance_up_to_phase(&c, &out).unwrap() < 1e-8, "{spec:?}");
            assert!(report.equivalence.unwrap().equivalent, "{spec:?}");
            let (again, _) = optimize(&out, &fast()).unwrap();
            assert_eq!(again.gate_count(), out.gate_count());
        }
    }
}
