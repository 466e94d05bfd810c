//! Argument parsing and subcommand dispatch.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charforge::algebra::{
    decompose_element, statement_formula_residual, summarize_element, AlgebraElement, DecompositionSummary,
};
use charforge::circuit::{circuit_unitary, parse_circuit, serialize_circuit, Circuit};
use charforge::claims::{default_fixtures, run_claims};
use charforge::complexity::{estimate_cost, CostCase, CostError, CostParams};
use charforge::fixtures;
use charforge::gates::embed;
use charforge::group::{close_group, ClosureConfig, GroupElement};
use charforge::optimizer::{equivalence_check, optimize, EquivalenceConfig, OptimizeConfig};
use charforge::repr::{central_idempotents, character_table, isotypic_projectors};
use charforge::sim::{sv_expectation, sv_run, tableau_run, Observable, PauliString};
use charforge::{GroupF64, UnitaryMatrixF64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bench::{emit_outputs, run_bench, BenchConfig, OutputPaths, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn data<E: Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "charforge",
    version,
    about = "Character decomposition, simulation and optimization of small quantum circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random choice made by the command.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GroupSource {
    /// Named fixture group (trivial, c2, c2xc2, s3, d4, q8, pauli1, clifford1).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Circuit file; the group is generated by its distinct gates.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    /// Tableau for Clifford circuits, state vector otherwise.
    Auto,
    Sv,
    Tableau,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Close a group and print it as JSON.
    Group {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 20_000)]
        max_order: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print the character table as CSV.
    Chartab {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 20_000)]
        max_order: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a group element, or a seeded random algebra element, into isotypic components.
    Decompose {
        #[command(flatten)]
        source: GroupSource,
        #[arg(long, default_value_t = 20_000)]
        max_order: usize,
        /// Element index for fixtures; defaults to the identity.
        #[arg(long, conflicts_with = "random")]
        element: Option<usize>,
        /// Decompose a random element of the group algebra drawn from the seed.
        #[arg(long)]
        random: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Rewrite a circuit through its segment groups.
    Optimize {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        max_order: usize,
        /// Optimization report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Only merge words whose matrices agree exactly, not just up to global phase.
        #[arg(long)]
        phase_sensitive: bool,
        /// Shots for the equivalence check attached to the report; 0 skips it.
        #[arg(long, default_value_t = 20_000)]
        verify_shots: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled equivalence check of two circuits.
    Equiv {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        other: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0.02)]
        tv_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Sample a circuit and print the histogram CSV, or an expectation value.
    Simulate {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        /// Pauli string (qubit 0 rightmost); prints its exact expectation instead of sampling.
        #[arg(long)]
        observable: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the measured claims on the fixture groups and print them as JSON.
    Claims {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the operation-count model.
    Cost {
        #[arg(long)]
        case: CostCase,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        dmax: u64,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        g_cost: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Time original and optimized benchmark circuits; writes CSV, SVG and histograms.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = Suite::ALL.to_vec())]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 2)]
        min_qubits: usize,
        #[arg(long, default_value_t = 8)]
        max_qubits: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        /// Line chart of mean time per run.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Directory for per-row histogram CSVs.
        #[arg(long)]
        hist_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` and runs the command: exit 0 on success, 1 on usage errors, 2 on data errors.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Distinct gates of the circuit's unitary part, embedded over its full width.
fn gate_set(c: &Circuit) -> Result<Vec<UnitaryMatrixF64>, CliError> {
    let mut set: Vec<UnitaryMatrixF64> = Vec::new();
    for g in c.unitary_gates() {
        let m = embed(g.matrix::<f64>().expect("unitary gate").matrix(), &g.qubits, c.n_qubits);
        if !set.iter().any(|s| s.max_abs_diff(&m) < 1e-12) {
            set.push(m);
        }
    }
    if set.is_empty() {
        return Err(CliError::Data("circuit has no unitary gates to generate a group".into()));
    }
    Ok(set)
}

/// The source group and, for circuit input, the element given by the circuit unitary.
fn load_group(source: &GroupSource, max_order: usize) -> Result<(GroupF64, Option<GroupElement>), CliError> {
    if let Some(name) = &source.fixture {
        let g = fixtures::by_name(name).ok_or_else(|| {
            CliError::Usage(format!("unknown fixture `{name}`; known: {}", fixtures::NAMES.join(", ")))
        })?;
        return Ok((g, None));
    }
    let path = source.input.as_ref().expect("clap requires one source");
    let c = read_circuit(path)?;
    let set = gate_set(&c)?;
    let g = close_group(&set, &ClosureConfig::default().with_max_order(max_order)).map_err(data)?;
    let u = circuit_unitary::<f64>(&c.unitary_part()).map_err(data)?;
    let element = g.element_of(u.matrix()).map_err(data)?.expect("a product of generators lies in the group");
    Ok((g, Some(element)))
}

fn random_summary(g: &GroupF64, seed: u64) -> Result<DecompositionSummary, CliError> {
    let table = character_table(g, seed).map_err(data)?;
    let idempotents = central_idempotents(g, &table);
    let projectors = isotypic_projectors(g, &table);
    let u = AlgebraElement::random(g, &mut ChaCha8Rng::seed_from_u64(seed));
    let dec = decompose_element(&u, &idempotents, Some(&projectors)).map_err(data)?;
    Ok(DecompositionSummary {
        k: dec.k(),
        reconstruction_residual: dec.reconstruction_residual,
        matrix_residual: dec.matrix_residual,
        component_norms: dec.component_norms(),
        statement_formula_residual: statement_formula_residual(&u, &table, &idempotents).map_err(data)?,
    })
}

#[derive(Serialize)]
struct ExpectationOutput<'a> {
    observable: &'a str,
    expectation: f64,
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Group { source, max_order, common } => {
            let (g, _) = load_group(&source, max_order)?;
            emit(&common.out, &to_json(&g.dump()))
        }
        Command::Chartab { source, max_order, common } => {
            let (g, _) = load_group(&source, max_order)?;
            let table = character_table(&g, common.seed).map_err(data)?;
            emit(&common.out, &table.to_csv())
        }
        Command::Decompose { source, max_order, element, random, common } => {
            let (g, from_circuit) = load_group(&source, max_order)?;
            let summary = if random {
                random_summary(&g, common.seed)?
            } else {
                let e = match (element, from_circuit) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage("--element only applies to --fixture".into()));
                    }
                    (Some(i), None) if i >= g.order() => {
                        return Err(CliError::Usage(format!("element {i} out of range for order {}", g.order())));
                    }
                    (Some(i), None) => GroupElement(i),
                    (None, Some(e)) => e,
                    (None, None) => g.identity(),
                };
                let table = character_table(&g, common.seed).map_err(data)?;
                summarize_element(&g, &table, e).map_err(data)?
            };
            emit(&common.out, &to_json(&summary))
        }
        Command::Optimize { input, max_order, report, phase_sensitive, verify_shots, common } => {
            let c = read_circuit(&input)?;
            let cfg = OptimizeConfig {
                max_order,
                phase_insensitive: !phase_sensitive,
                seed: common.seed,
                verify: (verify_shots > 0).then(|| EquivalenceConfig {
                    shots: verify_shots,
                    seed: common.seed,
                    ..Default::default()
                }),
                ..Default::default()
            };
            let (out, rep) = optimize(&c, &cfg).map_err(data)?;
            if let Some(path) = &report {
                std::fs::write(path, to_json(&rep)).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            }
            emit(&common.out, &serialize_circuit(&out))
        }
        Command::Equiv { input, other, shots, tv_tol, common } => {
            let (a, b) = (read_circuit(&input)?, read_circuit(&other)?);
            let cfg = EquivalenceConfig { shots, seed: common.seed, tv_tol, ..Default::default() };
            let verdict = equivalence_check(&a, &b, &cfg).map_err(data)?;
            emit(&common.out, &to_json(&verdict))
        }
        Command::Simulate { input, shots, engine, observable, common } => {
            let c = read_circuit(&input)?;
            if let Some(text) = observable {
                if engine == Engine::Tableau {
                    return Err(CliError::Usage(
                        "--observable is evaluated on the state vector; drop --engine tableau".into(),
                    ));
                }
                let p: PauliString = text.parse().map_err(CliError::Usage)?;
                let value = sv_expectation::<f64>(&c, &Observable::Pauli(p)).map_err(data)?;
                return emit(&common.out, &to_json(&ExpectationOutput { observable: &text, expectation: value }));
            }
            let clifford = c.gates.iter().all(|g| g.kind.is_clifford());
            let hist = match engine {
                Engine::Tableau => tableau_run(&c, shots, common.seed),
                Engine::Auto if clifford => tableau_run(&c, shots, common.seed),
                Engine::Auto | Engine::Sv => sv_run(&c, shots, common.seed),
            }
            .map_err(data)?;
            emit(&common.out, &hist.to_csv())
        }
        Command::Claims { common } => {
            let report = run_claims(default_fixtures::<f64>(), common.seed).map_err(data)?;
            emit(&common.out, &to_json(&report.claims))
        }
        Command::Cost { case, k, m, order, dmax, n, g_cost, common } => {
            let est = estimate_cost(&CostParams { case, k, m, n, order, dmax, g_cost }).map_err(|e| match e {
                CostError::MissingGCost | CostError::InvalidParams(_) => CliError::Usage(e.to_string()),
                other => data(other),
            })?;
            match &common.out {
                Some(_) => emit(&common.out, &to_json(&est)),
                None => emit(&None, &format!("{}\n{}\n", est.value, est.formula_text)),
            }
        }
        Command::Bench { suite, min_qubits, max_qubits, repeats, shots, svg, hist_dir, common } => {
            let cfg = BenchConfig { suites: suite, min_qubits, max_qubits, repeats, shots, seed: common.seed };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let outcome = run_bench(&cfg).map_err(data)?;
            for f in &outcome.failures {
                eprintln!("row {} n={} failed: {}", f.suite, f.n_qubits, f.error);
            }
            if !outcome.results.rows.is_empty() {
                let paths =
                    OutputPaths { csv: common.out.as_deref(), svg: svg.as_deref(), histogram_dir: hist_dir.as_deref() };
                emit_outputs(&outcome, &paths).map_err(data)?;
                if common.out.is_none() {
                    print!("{}", outcome.results.to_csv().map_err(data)?);
                }
            }
            if outcome.failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Data(format!("{} benchmark row(s) failed", outcome.failures.len())))
            }
        }
    }
}
