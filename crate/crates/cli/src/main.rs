//! `qopt` command-line tool.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on runtime errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use qopt::bench::{self, BenchmarkConfig, PenaltyMode, SolverKind};
use qopt::encoding::Scheme;
use qopt::graph::{generate_random_graph, parse_graph, write_graph, WeightedGraph};
use qopt::model::{mwis_model, to_qubo_with};
use qopt::quantum::{self, AnnealSchedule, QaoaParams};
use qopt::qubo::{
    decode_mwis, ising_to_qubo, mwis_direct_qubo, parse_model, qubo_to_ising, write_ising, write_qubo, IsingModel,
    ModelFile, Qubo,
};
use qopt::rational;
use qopt::solvers::{self, AnnealingParams, SampleSet};

#[derive(Parser)]
#[command(name = "qopt", version, about = "MWIS to QUBO/Ising modeling, solvers and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random weighted graph.
    Gen(GenArgs),
    /// Turn a graph into a QUBO or Ising model file.
    Transform(TransformArgs),
    /// Solve a QUBO or Ising model file and write a sample set.
    Solve(SolveArgs),
    /// Check a sample set against the certified optimum of its graph.
    Verify(VerifyArgs),
    /// Run a benchmark configuration.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    k: usize,
    /// Edge probability.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, env = "QOPT_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TransformArgs {
    graph: PathBuf,
    /// Penalize each edge directly (default).
    #[arg(long, conflicts_with = "slack")]
    direct: bool,
    /// Route each edge constraint through a slack variable.
    #[arg(long)]
    slack: bool,
    /// `auto` or a positive value.
    #[arg(long, default_value = "auto")]
    penalty: String,
    /// Encoding for slack variables.
    #[arg(long, default_value = "binary")]
    encoding: String,
    /// `qubo` or `ising`.
    #[arg(long, default_value = "qubo")]
    format: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// QUBO or Ising model file.
    model: PathBuf,
    /// bruteforce, bnb, sa, anneal or qaoa.
    #[arg(long)]
    solver: String,
    /// Graph the model was built from; required for bnb, adds MWIS details otherwise.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// JSON file with solver settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, env = "QOPT_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    beta_start: Option<f64>,
    #[arg(long)]
    beta_end: Option<f64>,
    /// Total anneal time.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<u64>,
    /// Write a CSV trace (t, ground_state_population, norm) of the anneal.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Sample set output (standard output if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    samples: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    /// Model file to recompute the stored energies against.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
    /// Write zero timings so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

/// Solver settings file; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveConfig {
    seed: Option<u64>,
    shots: Option<u64>,
    sweeps: Option<usize>,
    beta_start: Option<f64>,
    beta_end: Option<f64>,
    time: Option<f64>,
    dt: Option<f64>,
    depth: Option<usize>,
    restarts: Option<usize>,
    max_iters: Option<u64>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_graph(&bytes).with_context(|| format!("{}", path.display()))
}

fn emit(output: Option<&Path>, data: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, data).with_context(|| format!("cannot write {}", path.display())),
        None => std::io::stdout().write_all(data).context("cannot write to standard output"),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let g = generate_random_graph(args.k, args.p, args.seed)?;
    emit(args.output.as_deref(), &write_graph(&g))?;
    eprintln!(
        "generated graph with {} vertices and {} edges (seed {})",
        g.vertex_count(),
        g.edge_count(),
        args.seed
    );
    Ok(())
}

fn transform(args: TransformArgs) -> Result<()> {
    let g = read_graph(&args.graph)?;
    let penalty = args.penalty.parse::<PenaltyMode>()?.resolve(&g);
    let scheme: Scheme = args.encoding.parse()?;
    let q = if args.slack {
        to_qubo_with(&mwis_model(&g), penalty, scheme)?.0
    } else {
        mwis_direct_qubo(&g, penalty)?
    };
    let text = match args.format.as_str() {
        "qubo" => write_qubo(&q),
        "ising" => write_ising(&qubo_to_ising(&q)),
        other => bail!("unknown format '{other}' (expected qubo or ising)"),
    };
    emit(args.output.as_deref(), text.as_bytes())?;
    eprintln!(
        "wrote {} model with {} qubits (penalty {})",
        args.format,
        q.num_qubits(),
        rational::format(&penalty)
    );
    Ok(())
}

fn solve(args: SolveArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => serde_json::from_str::<SolveConfig>(&read_text(path)?)
            .with_context(|| format!("invalid config {}", path.display()))?,
        None => SolveConfig::default(),
    };
    let solver: SolverKind = args.solver.parse()?;
    let model = parse_model(&read_text(&args.model)?).with_context(|| format!("{}", args.model.display()))?;
    let (qubo, ising): (Qubo, IsingModel) = match model {
        ModelFile::Qubo(q) => {
            let m = qubo_to_ising(&q);
            (q, m)
        }
        ModelFile::Ising(m) => (ising_to_qubo(&m), m),
    };
    let graph = args.graph.as_deref().map(read_graph).transpose()?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let shots = args.shots.or(file.shots).unwrap_or(1000);
    let sa_defaults = AnnealingParams::default();
    let schedule = AnnealSchedule {
        total_time: args.time.or(file.time).unwrap_or(AnnealSchedule::default().total_time),
        dt: args.dt.or(file.dt).unwrap_or(AnnealSchedule::default().dt),
    };

    let (samples, summary) = match solver {
        SolverKind::Bruteforce => {
            let r = solvers::brute_force_qubo(&qubo)?;
            let summary = format!(
                "solver=bruteforce value={} certified={} optima={}",
                rational::format(&r.value),
                r.certified,
                r.optimum_count
            );
            (solvers::exact_samples("bruteforce", &r, r.value), summary)
        }
        SolverKind::Bnb => {
            let Some(g) = &graph else {
                bail!("bnb needs --graph");
            };
            if g.vertex_count() != qubo.num_qubits() {
                bail!(
                    "bnb needs a direct-form model with one qubit per vertex ({} qubits, {} vertices)",
                    qubo.num_qubits(),
                    g.vertex_count()
                );
            }
            let r = solvers::mwis_branch_and_bound(g);
            let energy = qubo.evaluate(&r.assignment)?;
            let summary = format!(
                "solver=bnb weight={} certified={} optima={} nodes={}",
                rational::format(&r.value),
                r.certified,
                r.optimum_count,
                r.nodes.unwrap_or(0)
            );
            (solvers::exact_samples("bnb", &r, energy), summary)
        }
        SolverKind::Sa => {
            let params = AnnealingParams {
                sweeps: args.sweeps.or(file.sweeps).unwrap_or(sa_defaults.sweeps),
                beta_start: args.beta_start.or(file.beta_start).unwrap_or(sa_defaults.beta_start),
                beta_end: args.beta_end.or(file.beta_end).unwrap_or(sa_defaults.beta_end),
            };
            let set = solvers::simulated_annealing(&ising, params, shots, seed)?;
            let summary = sampler_summary(&set);
            (set, summary)
        }
        SolverKind::Anneal => {
            let set = match &args.trace {
                Some(path) => {
                    let diagonal = quantum::problem_diagonal(&ising)?;
                    let ground = quantum::ground_state_indices(&diagonal);
                    let mut trace = String::from("t,ground_state_population,norm\n");
                    let psi = quantum::anneal_evolve_with(&ising, schedule, |t, psi| {
                        trace.push_str(&format!("{t},{},{}\n", psi.population(&ground), psi.norm_sqr()));
                    })?;
                    fs::write(path, trace).with_context(|| format!("cannot write {}", path.display()))?;
                    let mut params = BTreeMap::new();
                    params.insert("total_time".into(), schedule.total_time.into());
                    params.insert("dt".into(), schedule.dt.into());
                    quantum::sample_assignments(&ising, &psi, "anneal", params, shots, seed)?
                }
                None => quantum::anneal_sample(&ising, schedule, shots, seed)?,
            };
            let summary = sampler_summary(&set);
            (set, summary)
        }
        SolverKind::Qaoa => {
            let defaults = QaoaParams::default();
            let params = QaoaParams {
                depth: args.depth.or(file.depth).unwrap_or(defaults.depth),
                restarts: args.restarts.or(file.restarts).unwrap_or(defaults.restarts),
                max_iters: args.max_iters.or(file.max_iters).unwrap_or(defaults.max_iters),
                shots,
            };
            let r = quantum::qaoa_optimize(&ising, params, seed)?;
            let summary = format!("{} expectation={:.6}", sampler_summary(&r.samples), r.expectation);
            (r.samples, summary)
        }
    };

    let mut summary = summary;
    if let Some(g) = &graph {
        let (best, lowest_feasible) = bench::best_feasible(&samples_for_graph(&samples, g)?, g)?;
        match best {
            Some(w) => summary.push_str(&format!(" best_feasible_weight={w}")),
            None => summary.push_str(" best_feasible_weight=none"),
        }
        summary.push_str(&format!(" lowest_energy_feasible={lowest_feasible}"));
    }
    let json = samples.to_json() + "\n";
    match &args.output {
        Some(path) => {
            emit(Some(path), json.as_bytes())?;
            println!("{summary}");
        }
        None => {
            emit(None, json.as_bytes())?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn sampler_summary(set: &SampleSet) -> String {
    let best = set.best().map(|e| rational::format(&e.energy)).unwrap_or_default();
    format!(
        "solver={} shots={} distinct={} best_energy={best}",
        set.solver,
        set.shots(),
        set.entries().len()
    )
}

/// Restricts samples to the first `vertex_count` bits, which hold the vertex
/// variables in both direct and slack models.
fn samples_for_graph(samples: &SampleSet, g: &WeightedGraph) -> Result<SampleSet> {
    let n = g.vertex_count();
    if samples.num_variables() < n {
        bail!(
            "samples have {} variables but the graph has {} vertices",
            samples.num_variables(),
            n
        );
    }
    if samples.num_variables() == n {
        return Ok(samples.clone());
    }
    // Energies of truncated samples are not meaningful; only bits are kept.
    let mut merged: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for e in samples.entries() {
        *merged.entry(e.bits[..n].to_vec()).or_default() += e.count;
    }
    let entries = merged.into_iter().map(|(bits, count)| solvers::SampleEntry {
        bits,
        energy: rational::int(0),
        count,
    });
    Ok(SampleSet::from_entries(samples.solver.clone(), samples.seed, BTreeMap::new(), entries)?)
}

fn verify(args: VerifyArgs) -> Result<()> {
    let samples = SampleSet::from_json(&read_text(&args.samples)?).with_context(|| format!("{}", args.samples.display()))?;
    let g = read_graph(&args.graph)?;
    if let Some(path) = &args.model {
        let q = parse_model(&read_text(path)?)
            .with_context(|| format!("{}", path.display()))?
            .into_qubo();
        if q.num_qubits() != samples.num_variables() {
            bail!(
                "model has {} qubits but samples have {} variables",
                q.num_qubits(),
                samples.num_variables()
            );
        }
        if !samples.energies_match(&q)? {
            bail!("stored energies do not match the model");
        }
    }
    let restricted = samples_for_graph(&samples, &g)?;
    let optimum = decode_mwis(&g, &solvers::mwis_branch_and_bound(&g).assignment)?.weight;
    let (best, _) = bench::best_feasible(&restricted, &g)?;
    let freq = bench::success_frequency(&restricted, optimum, &g)?;
    if let Some(w) = best {
        if w > optimum {
            bail!("best feasible weight {w} exceeds the certified optimum {optimum}");
        }
    }
    println!(
        "ok: best_feasible_weight={} certified_optimum={optimum} success_freq={}",
        best.map_or("none".to_string(), |w| w.to_string()),
        rational::format(&freq)
    );
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let config = BenchmarkConfig::from_json(&read_text(&args.config)?)
        .with_context(|| format!("invalid config {}", args.config.display()))?;
    let mut records = bench::run_benchmark(&config)?;
    if args.no_timing {
        bench::strip_timing(&mut records);
    }
    fs::create_dir_all(&args.output).with_context(|| format!("cannot create {}", args.output.display()))?;
    let write = |name: &str, data: &[u8]| {
        let path = args.output.join(name);
        fs::write(&path, data).with_context(|| format!("cannot write {}", path.display()))
    };
    write("records.csv", &bench::write_records(&records))?;
    write("records.json", (bench::write_records_json(&records) + "\n").as_bytes())?;
    let summary = bench::trend_summary(&records).unwrap_or_default();
    for (name, contents) in bench::plot_tables(&summary) {
        write(&name, contents.as_bytes())?;
    }
    let skipped = records.iter().filter(|r| !r.is_ok()).count();
    eprintln!(
        "wrote {} records ({skipped} skipped) to {}",
        records.len(),
        args.output.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Transform(args) => transform(args),
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
