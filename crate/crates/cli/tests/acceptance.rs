//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use charforge::algebra::{convolve, decompose_element, AlgebraElement};
use charforge::circuit::{build_benchmark, random_clifford_circuit, BenchmarkSpec, Circuit};
use charforge::claims::{default_fixtures, run_claims, ClaimResult, ClaimStatus};
use charforge::complexity::{estimate_cost, CostCase, CostParams};
use charforge::fixtures;
use charforge::group::GroupElement;
use charforge::optimizer::{
    equivalence_check, optimize, unitary_distance_up_to_phase, EquivalenceConfig, OptimizeConfig,
};
use charforge::repr::{central_idempotents, character_table, isotypic_projectors, verify_orthogonality};
use charforge::sim::{sv_run, tableau_run};
use charforge::GroupF64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;
const TABLE_FIXTURES: [&str; 7] = ["c2", "c2xc2", "s3", "d4", "q8", "pauli1", "clifford1"];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn fixture(name: &str) -> GroupF64 {
    fixtures::by_name(name).expect("known fixture")
}

fn character_tables() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut degree_sums_exact = true;
    let mut q8_degrees = Vec::new();
    for name in TABLE_FIXTURES {
        let g = fixture(name);
        let t = character_table(&g, 42).expect("table");
        let o = verify_orthogonality(&t);
        worst = worst.max(o.row_residual).max(o.column_residual);
        degree_sums_exact &= t.degrees.iter().map(|d| d * d).sum::<usize>() == g.order();
        if name == "q8" {
            q8_degrees = t.degrees.clone();
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= TOL && degree_sums_exact && q8_degrees == [1, 1, 1, 1, 2] && secs < 5.0;
    verdict(
        pass,
        format!(
            "max orthogonality residual {worst:.2e} (<= 1e-8), degree sums exact: {degree_sums_exact}, \
             q8 degrees {q8_degrees:?}, {secs:.2}s (< 5s)"
        ),
    )
}

fn idempotent_algebra() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for name in fixtures::NAMES {
        let g = fixture(name);
        let t = character_table(&g, 42).expect("table");
        let es: Vec<AlgebraElement<'_, f64>> =
            central_idempotents(&g, &t).iter().map(|e| AlgebraElement::from_idempotent(&g, e)).collect();
        let zero = AlgebraElement::zero(&g);
        for (i, ei) in es.iter().enumerate() {
            for (j, ej) in es.iter().enumerate() {
                let prod = convolve(ei, ej).unwrap();
                let expected = if i == j { ei } else { &zero };
                worst = worst.max(prod.max_abs_diff(expected).unwrap());
            }
        }
        let sum = es.iter().fold(zero.clone(), |acc, e| acc.add(e).unwrap());
        worst = worst.max(sum.max_abs_diff(&AlgebraElement::delta(&g, g.identity())).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(worst <= TOL && secs < 10.0, format!("max residual {worst:.2e} (<= 1e-8), {secs:.2}s (< 10s)"))
}

fn decomposition_identity() -> Verdict {
    let mut worst_algebra = 0.0f64;
    for name in fixtures::NAMES {
        let g = fixture(name);
        let t = character_table(&g, 42).expect("table");
        let es = central_idempotents(&g, &t);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let u = AlgebraElement::random(&g, &mut rng);
            worst_algebra = worst_algebra.max(decompose_element(&u, &es, None).unwrap().reconstruction_residual);
        }
    }
    let mut worst_matrix = 0.0f64;
    for name in ["d4", "clifford1"] {
        let g = fixture(name);
        let t = character_table(&g, 42).expect("table");
        let es = central_idempotents(&g, &t);
        let ps = isotypic_projectors(&g, &t);
        for e in 0..g.order() {
            let u = AlgebraElement::delta(&g, GroupElement(e));
            worst_matrix = worst_matrix.max(decompose_element(&u, &es, Some(&ps)).unwrap().matrix_residual);
        }
    }
    verdict(
        worst_algebra <= TOL && worst_matrix <= TOL,
        format!(
            "50 random u per fixture: {worst_algebra:.2e}; Σ P_i U = U on d4, clifford1: {worst_matrix:.2e} (<= 1e-8)"
        ),
    )
}

fn instance_residual(c: &ClaimResult, fixture: &str, input: &str) -> Option<f64> {
    c.instances.iter().find(|i| i.fixture == fixture && i.input.starts_with(input)).map(|i| i.residual)
}

fn claims_report() -> Verdict {
    let report = run_claims(default_fixtures::<f64>(), 42).expect("claims");
    let claim = |id: &str| report.claims.iter().find(|c| c.claim_id == id).expect("claim present");
    let (c2, c3, c5, c6) = (claim("C2"), claim("C3"), claim("C5"), claim("C6"));

    let c2_res = instance_residual(c2, "c2", "delta_identity").unwrap_or(f64::NAN);
    let c2_ok = c2.status == ClaimStatus::Fails && (c2_res - 1.0).abs() <= 1e-12;

    let linear_ok =
        c3.instances.iter().filter(|i| i.in_condition == Some(true)).all(|i| i.residual <= report.tolerance);
    let d4_res = c3
        .instances
        .iter()
        .find(|i| i.fixture == "d4" && i.input.contains("(degree 2)"))
        .map_or(f64::NAN, |i| i.residual);
    let c3_ok = linear_ok && d4_res > 0.1;

    let c5_ok = c5.status == ClaimStatus::Holds && c5.residual == 0.0;

    let x = fixtures::c2::<f64>().generators()[0];
    let c6_dev = instance_residual(c6, "c2", &format!("element {x},")).unwrap_or(f64::NAN);
    let c6_ok = (c6_dev - 9.0).abs() <= 1e-9;

    verdict(
        c2_ok && c3_ok && c5_ok && c6_ok,
        format!(
            "C2 residual on (c2, delta_identity) {c2_res}; C3 degree-1 holds {linear_ok}, d4 degree-2 residual {d4_res:.3}; \
             C5 residual {}; C6 deviation {c6_dev}",
            c5.residual
        ),
    )
}

/// Longest prefix of a seeded random Clifford circuit whose depth is at most `depth`.
fn clifford_of_depth(n: usize, depth: usize, seed: u64) -> Circuit {
    let long = random_clifford_circuit(n, depth * n, seed);
    let mut c = Circuit::new(n, long.name.clone());
    for g in long.gates {
        c.push(g).unwrap();
        if c.depth() > depth {
            c.gates.pop();
            break;
        }
    }
    c
}

fn stabilizer_vs_statevector() -> Verdict {
    let start = Instant::now();
    let shots = 100_000;
    let mut worst = 0.0f64;
    let mut depths = Vec::new();
    for i in 0..20u64 {
        let n = 2 + (i as usize % 5);
        let c = clifford_of_depth(n, 50, 1000 + i);
        depths.push(c.depth());
        let a = tableau_run(&c, shots, 2 * i).unwrap();
        let b = sv_run(&c, shots, 2 * i + 1).unwrap();
        worst = worst.max(a.tv_distance(&b));
    }
    let secs = start.elapsed().as_secs_f64();
    let all_depth_50 = depths.iter().all(|&d| d == 50);
    verdict(
        worst <= 0.02 && all_depth_50 && secs < 60.0,
        format!("20 circuits, n in 2..=6, depth 50: {all_depth_50}; max TV {worst:.4} (<= 0.02); {secs:.2}s (< 60s)"),
    )
}

fn optimizer_soundness() -> Verdict {
    let mut specs: Vec<BenchmarkSpec> =
        ["11", "101", "1011", "10110", "110101"].iter().map(|s| BenchmarkSpec::Bv { secret: s.to_string() }).collect();
    specs.push(BenchmarkSpec::Qft { width: 3 });
    specs.push(BenchmarkSpec::Grover { n: 4, marked: 11, iterations: None });
    let cfg = OptimizeConfig { verify: None, ..Default::default() };
    let eq = EquivalenceConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in &specs {
        let c = build_benchmark(spec).unwrap();
        let (out, report) = optimize(&c, &cfg).unwrap();
        let dist = unitary_distance_up_to_phase(&c, &out).unwrap();
        let v = equivalence_check(&c, &out, &eq).unwrap();
        let ok = dist <= TOL && report.gates_after <= report.gates_before && v.equivalent && v.max_tv_distance <= 0.02;
        pass &= ok;
        parts.push(format!(
            "{} {}->{} gates, dist {dist:.1e}, TV {:.4}{}",
            c.name,
            report.gates_before,
            report.gates_after,
            v.max_tv_distance,
            if ok { "" } else { " FAILED" }
        ));
    }
    verdict(pass, parts.join("; "))
}

fn cost_model() -> Verdict {
    let p = |case, k, m, order, dmax, g_cost| CostParams { case, k, m, n: 1, order, dmax, g_cost };
    let v = |p: CostParams| estimate_cost(&p).unwrap().value;
    let main = v(p(CostCase::Abelian, 4, 10, 4, 1, None));
    let smallest = v(p(CostCase::Abelian, 1, 1, 1, 1, None));
    let general = v(p(CostCase::General, 4, 10, 4, 1, Some(1.0)));
    let mut bound_ok = true;
    for name in fixtures::NAMES {
        let g = fixture(name);
        let t = character_table(&g, 42).unwrap();
        bound_ok &= t.k() * t.max_degree().pow(2) >= g.order();
    }
    verdict(
        main == 1340.0 && smallest == 5.0 && general == main && bound_ok,
        format!("abelian(4,10,4,1) = {main}; abelian(1,1,1,1) = {smallest}; general g=1 = {general}; kD^2 >= |G| on all fixtures: {bound_ok}"),
    )
}

fn run_twice(args: &[&str], files: &[&Path]) -> Result<(), String> {
    let mut captures = Vec::new();
    for _ in 0..2 {
        let o = Command::new(env!("CARGO_BIN_EXE_charforge")).args(args).output().map_err(|e| e.to_string())?;
        if !o.status.success() {
            return Err(format!("{args:?} exited with {:?}", o.status.code()));
        }
        let mut bytes = o.stdout;
        for f in files {
            bytes.extend(std::fs::read(f).map_err(|e| format!("{}: {e}", f.display()))?);
        }
        captures.push(bytes);
    }
    if captures[0] == captures[1] {
        Ok(())
    } else {
        Err(format!("{args:?} differs between runs"))
    }
}

/// Bench CSV with the three timing columns blanked.
fn strip_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.drain(3..6);
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let circ = d.join("grover.circ");
    let other = d.join("qft.circ");
    let optimized = d.join("grover.opt.circ");
    let report = d.join("report.json");
    let save = |p: &Path, spec: BenchmarkSpec| {
        std::fs::write(p, charforge::circuit::serialize_circuit(&build_benchmark(&spec).unwrap())).unwrap()
    };
    save(&circ, BenchmarkSpec::Grover { n: 3, marked: 5, iterations: None });
    save(&other, BenchmarkSpec::Qft { width: 3 });
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let (circ_s, other_s, opt_s, rep_s) = (s(&circ), s(&other), s(&optimized), s(&report));

    let commands: Vec<(Vec<&str>, Vec<&Path>)> = vec![
        (vec!["group", "--fixture", "clifford1", "--seed", "7"], vec![]),
        (vec!["chartab", "--fixture", "pauli1", "--seed", "7"], vec![]),
        (vec!["decompose", "--fixture", "s3", "--random", "--seed", "7"], vec![]),
        (
            vec!["optimize", "--in", &circ_s, "--out", &opt_s, "--report", &rep_s, "--seed", "7"],
            vec![&optimized, &report],
        ),
        (vec!["equiv", "--in", &circ_s, "--other", &other_s, "--shots", "20000", "--seed", "7"], vec![]),
        (vec!["simulate", "--in", &circ_s, "--shots", "20000", "--seed", "7"], vec![]),
        (vec!["simulate", "--in", &other_s, "--engine", "sv", "--shots", "20000", "--seed", "7"], vec![]),
        (vec!["claims", "--seed", "7"], vec![]),
        (
            vec![
                "cost",
                "--case",
                "symmetric",
                "--k",
                "3",
                "--m",
                "5",
                "--n",
                "2",
                "--order",
                "6",
                "--dmax",
                "2",
                "--seed",
                "7",
            ],
            vec![],
        ),
    ];
    let mut failures = Vec::new();
    for (args, files) in &commands {
        if let Err(e) = run_twice(args, files) {
            failures.push(e);
        }
    }

    let mut bench_outputs = Vec::new();
    for run in 0..2 {
        let csv = d.join(format!("bench{run}.csv"));
        let hist = d.join(format!("hist{run}"));
        let o = Command::new(env!("CARGO_BIN_EXE_charforge"))
            .args(["bench", "--suite", "bv,qft,grover,vqe", "--min-qubits", "2", "--max-qubits", "4"])
            .args(["--repeats", "2", "--shots", "5000", "--seed", "7"])
            .args(["--out", csv.to_str().unwrap(), "--hist-dir", hist.to_str().unwrap()])
            .output()
            .unwrap();
        if !o.status.success() {
            failures.push(format!("bench run {run} exited with {:?}", o.status.code()));
            continue;
        }
        let mut text = strip_timing(&std::fs::read_to_string(&csv).unwrap());
        let mut names: Vec<_> = std::fs::read_dir(&hist).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        for p in names {
            text.push_str(&std::fs::read_to_string(&p).unwrap());
        }
        bench_outputs.push(text);
    }
    if bench_outputs.len() == 2 && bench_outputs[0] != bench_outputs[1] {
        failures.push("bench non-timing outputs differ".into());
    }
    let n = commands.len() + 1;
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{n} seeded commands byte-identical across two runs (bench compared without timing columns)")
        } else {
            failures.join("; ")
        },
    )
}

type Check = fn() -> Verdict;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("character tables", character_tables),
        ("idempotent algebra", idempotent_algebra),
        ("decomposition identity", decomposition_identity),
        ("claims report", claims_report),
        ("stabilizer vs state vector", stabilizer_vs_statevector),
        ("optimizer soundness", optimizer_soundness),
        ("cost model", cost_model),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("criterion {} [{}] {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
