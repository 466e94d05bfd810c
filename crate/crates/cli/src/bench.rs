//! Benchmark harness: builds reference circuits, optimizes them and times the state-vector
//! simulator on both variants.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use charforge::circuit::{build_benchmark, BenchmarkSpec, Circuit};
use charforge::complexity::{estimate_cost, CostCase, CostParams};
use charforge::optimizer::{optimize, OptimizationReport, OptimizeConfig};
use charforge::sim::{sv_run, MeasurementHistogram, MAX_SV_QUBITS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const CSV_HEADER: &str = "suite,n_qubits,variant,mean_ms,median_ms,stddev_ms,gates,depth,tv_distance,cost_model";

/// Ansatz depth used for the `vqe` suite.
pub const VQE_LAYERS: usize = 2;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bv,
    Qft,
    Grover,
    Vqe,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Bv, Suite::Qft, Suite::Grover, Suite::Vqe];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bv => "bv",
            Suite::Qft => "qft",
            Suite::Grover => "grover",
            Suite::Vqe => "vqe",
        }
    }

    /// Supported total widths; the `bv` width includes its ancilla.
    pub fn qubit_limits(self) -> (usize, usize) {
        match self {
            Suite::Bv => (2, MAX_SV_QUBITS),
            Suite::Qft | Suite::Vqe => (1, MAX_SV_QUBITS),
            Suite::Grover => (1, 20),
        }
    }

    /// Seeded reference circuit of total width `n`.
    pub fn circuit(self, n: usize, seed: u64) -> Result<Circuit, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let spec = match self {
            Suite::Bv => {
                let mut bits: Vec<bool> = (0..n - 1).map(|_| rng.random::<bool>()).collect();
                if bits.iter().all(|b| !b) {
                    bits[0] = true;
                }
                BenchmarkSpec::Bv { secret: bits.iter().map(|&b| if b { '1' } else { '0' }).collect() }
            }
            Suite::Qft => BenchmarkSpec::Qft { width: n },
            Suite::Grover => BenchmarkSpec::Grover { n, marked: rng.random_range(0..1u64 << n), iterations: None },
            Suite::Vqe => BenchmarkSpec::Vqe { n, layers: VQE_LAYERS, seed },
        };
        build_benchmark(&spec).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected bv, qft, grover or vqe)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Optimized,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Optimized => "optimized",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub suites: Vec<Suite>,
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub repeats: usize,
    pub shots: u64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { suites: Suite::ALL.to_vec(), min_qubits: 2, max_qubits: 8, repeats: 100, shots: 100_000, seed: 42 }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::InvalidConfig(m));
        if self.suites.is_empty() {
            return bad("at least one suite is required".into());
        }
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        if self.min_qubits > self.max_qubits {
            return bad(format!("empty qubit range {}..={}", self.min_qubits, self.max_qubits));
        }
        for s in &self.suites {
            let (lo, hi) = s.qubit_limits();
            if self.min_qubits < lo || self.max_qubits > hi {
                return bad(format!("suite {s} supports {lo}..={hi} qubits"));
            }
        }
        Ok(())
    }
}

/// One CSV row. `tv_distance` is set only on optimized rows; `cost_model` is empty when no
/// segment of the circuit had a known irrep count and degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub suite: Suite,
    pub n_qubits: usize,
    pub variant: Variant,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub stddev_ms: f64,
    pub gates: usize,
    pub depth: usize,
    pub tv_distance: Option<f64>,
    pub cost_model: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchResults {
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowFailure {
    pub suite: Suite,
    pub n_qubits: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub results: BenchResults,
    /// `(label, histogram)` per emitted row, labelled `<suite>-<n>-<variant>`.
    pub histograms: Vec<(String, MeasurementHistogram)>,
    pub failures: Vec<RowFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingStats {
    pub mean_ms: f64,
    pub median_ms: f64,
    pub stddev_ms: f64,
}

/// Sample standard deviation; zero for a single sample.
pub fn timing_stats(samples_ms: &[f64]) -> TimingStats {
    let n = samples_ms.len();
    assert!(n > 0, "at least one timing sample");
    let mean = samples_ms.iter().sum::<f64>() / n as f64;
    let mut sorted = samples_ms.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    let stddev =
        if n == 1 { 0.0 } else { (samples_ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() };
    TimingStats { mean_ms: mean, median_ms: median, stddev_ms: stddev }
}

/// Sum of the cost estimate over first-round segments whose irrep count and largest degree
/// are known. Abelian segments use the abelian case, others the general case with one
/// character evaluation costed as the segment dimension.
pub fn segment_cost(report: &OptimizationReport, variant: Variant) -> Option<f64> {
    let mut total = None;
    for s in report.segments.iter().filter(|s| s.round == 1) {
        let (Some(k), Some(dmax)) = (s.irreps, s.max_degree) else { continue };
        let m = match variant {
            Variant::Original => s.gates_before,
            Variant::Optimized => s.gates_after,
        };
        if m == 0 {
            continue;
        }
        let p = CostParams {
            case: if s.abelian { CostCase::Abelian } else { CostCase::General },
            k: k as u64,
            m: m as u64,
            n: s.qubits.len() as u64,
            order: s.group_order as u64,
            dmax: dmax as u64,
            g_cost: Some((1u64 << s.qubits.len()) as f64),
        };
        let value = estimate_cost(&p).expect("segment parameters are positive").value;
        total = Some(total.unwrap_or(0.0) + value);
    }
    total
}

struct Prepared {
    suite: Suite,
    n: usize,
    original: Circuit,
    optimized: Circuit,
    report: OptimizationReport,
}

fn prepare(suite: Suite, n: usize, seed: u64) -> Result<Prepared, String> {
    let original = suite.circuit(n, seed)?;
    let cfg = OptimizeConfig { seed, verify: None, ..Default::default() };
    let (optimized, report) = optimize(&original, &cfg).map_err(|e| e.to_string())?;
    Ok(Prepared { suite, n, original, optimized, report })
}

fn time_runs(c: &Circuit, cfg: &BenchConfig, seed: u64) -> Result<(TimingStats, MeasurementHistogram), String> {
    let mut samples = Vec::with_capacity(cfg.repeats);
    let mut hist = None;
    for _ in 0..cfg.repeats {
        let start = Instant::now();
        let h = sv_run(c, cfg.shots, seed).map_err(|e| e.to_string())?;
        samples.push(start.elapsed().as_secs_f64() * 1e3);
        hist.get_or_insert(h);
    }
    Ok((timing_stats(&samples), hist.expect("repeats >= 1")))
}

/// Builds and optimizes rows in parallel, then times them one at a time.
///
/// The optimized variant is sampled with `seed + 1`, so its TV distance to the original
/// reflects sampling noise as well as any difference in distributions.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    cfg.validate()?;
    let jobs: Vec<(Suite, usize)> =
        cfg.suites.iter().flat_map(|&s| (cfg.min_qubits..=cfg.max_qubits).map(move |n| (s, n))).collect();
    let prepared: Vec<Result<Prepared, RowFailure>> = jobs
        .par_iter()
        .map(|&(suite, n)| prepare(suite, n, cfg.seed).map_err(|error| RowFailure { suite, n_qubits: n, error }))
        .collect();

    let mut outcome = BenchOutcome { results: BenchResults::default(), histograms: Vec::new(), failures: Vec::new() };
    for p in prepared {
        let p = match p {
            Ok(p) => p,
            Err(f) => {
                outcome.failures.push(f);
                continue;
            }
        };
        let timed = time_runs(&p.original, cfg, cfg.seed)
            .and_then(|a| time_runs(&p.optimized, cfg, cfg.seed.wrapping_add(1)).map(|b| (a, b)));
        let ((t_orig, h_orig), (t_opt, h_opt)) = match timed {
            Ok(t) => t,
            Err(error) => {
                outcome.failures.push(RowFailure { suite: p.suite, n_qubits: p.n, error });
                continue;
            }
        };
        let tv = h_orig.tv_distance(&h_opt);
        for (variant, c, t, h, tv) in [
            (Variant::Original, &p.original, t_orig, h_orig, None),
            (Variant::Optimized, &p.optimized, t_opt, h_opt, Some(tv)),
        ] {
            outcome.results.rows.push(BenchRow {
                suite: p.suite,
                n_qubits: p.n,
                variant,
                mean_ms: t.mean_ms,
                median_ms: t.median_ms,
                stddev_ms: t.stddev_ms,
                gates: c.gate_count(),
                depth: c.depth(),
                tv_distance: tv,
                cost_model: segment_cost(&p.report, variant),
            });
            outcome.histograms.push((format!("{}-{}-{}", p.suite, p.n, variant.name()), h));
        }
    }
    Ok(outcome)
}

impl BenchResults {
    pub fn to_csv(&self) -> Result<String, BenchError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?)
            .expect("csv output is utf-8");
        Ok(format!("{CSV_HEADER}\n{body}"))
    }

    pub fn from_csv(text: &str) -> Result<Self, BenchError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<&str> = r.headers()?.iter().collect();
        if header.join(",") != CSV_HEADER {
            return Err(BenchError::InvalidConfig(format!("unexpected csv header `{}`", header.join(","))));
        }
        let rows = r.deserialize().collect::<Result<Vec<BenchRow>, _>>()?;
        Ok(Self { rows })
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), BenchError> {
    std::fs::write(path, contents).map_err(|source| BenchError::Io { path: path.display().to_string(), source })
}

/// Output locations; `None` skips that artifact.
#[derive(Debug, Clone, Default)]
pub struct OutputPaths<'a> {
    pub csv: Option<&'a Path>,
    pub svg: Option<&'a Path>,
    pub histogram_dir: Option<&'a Path>,
}

pub fn emit_outputs(outcome: &BenchOutcome, paths: &OutputPaths<'_>) -> Result<(), BenchError> {
    if outcome.results.rows.is_empty() {
        return Err(BenchError::InvalidConfig("no successful rows to emit".into()));
    }
    if let Some(p) = paths.csv {
        write_file(p, &outcome.results.to_csv()?)?;
    }
    if let Some(p) = paths.svg {
        write_file(p, &crate::svg::line_chart(&outcome.results))?;
    }
    if let Some(dir) = paths.histogram_dir {
        std::fs::create_dir_all(dir).map_err(|source| BenchError::Io { path: dir.display().to_string(), source })?;
        for (label, h) in &outcome.histograms {
            write_file(&dir.join(format!("{label}.csv")), &h.to_csv())?;
        }
    }
    Ok(())
}
