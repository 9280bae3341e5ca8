//! Benchmark harness: random MWIS instances across sizes, every configured
//! solver per instance, results checked against the branch-and-bound optimum.
//!
//! `build_time_ms` covers graph to QUBO/Ising construction and
//! `solve_time_ms` the solver itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{generate_random_graph, WeightedGraph};
use crate::qubo::{decode_mwis, default_penalty, mwis_direct_qubo, qubo_to_ising, Qubo};
use crate::quantum::{self, anneal_sample, qaoa_optimize, AnnealSchedule, QaoaParams};
use crate::rational::{self, int, Rational};
use crate::solvers::{
    brute_force_qubo, mwis_branch_and_bound, simulated_annealing, AnnealingParams, SampleSet, BRUTE_FORCE_LIMIT,
};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "instance_id,size,seed,solver,build_time_ms,solve_time_ms,shots,best_value,optimal_value,gap,success_freq,feasible,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Bnb,
    Bruteforce,
    Sa,
    Anneal,
    Qaoa,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Bnb,
        SolverKind::Bruteforce,
        SolverKind::Sa,
        SolverKind::Anneal,
        SolverKind::Qaoa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Bnb => "bnb",
            SolverKind::Bruteforce => "bruteforce",
            SolverKind::Sa => "sa",
            SolverKind::Anneal => "anneal",
            SolverKind::Qaoa => "qaoa",
        }
    }

    /// Largest qubit count the solver accepts, if bounded.
    pub fn qubit_limit(self) -> Option<usize> {
        match self {
            SolverKind::Bnb | SolverKind::Sa => None,
            SolverKind::Bruteforce => Some(BRUTE_FORCE_LIMIT),
            SolverKind::Anneal | SolverKind::Qaoa => Some(quantum::STATE_VECTOR_LIMIT),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown solver '{s}'")))
    }
}

/// Penalty weight for the direct MWIS QUBO.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PenaltyMode {
    /// `max_weight * max_degree + 1`.
    #[default]
    Auto,
    Fixed(Rational),
}

impl PenaltyMode {
    pub fn resolve(&self, g: &WeightedGraph) -> Rational {
        match self {
            PenaltyMode::Auto => int(default_penalty(g) as i128),
            PenaltyMode::Fixed(p) => *p,
        }
    }
}

impl FromStr for PenaltyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(PenaltyMode::Auto);
        }
        let p = rational::parse(s)?;
        if p <= int(0) {
            return Err(Error::InvalidParameter(format!("penalty must be positive, got {s}")));
        }
        Ok(PenaltyMode::Fixed(p))
    }
}

impl fmt::Display for PenaltyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PenaltyMode::Auto => f.write_str("auto"),
            PenaltyMode::Fixed(p) => f.write_str(&rational::format(p)),
        }
    }
}

impl Serialize for PenaltyMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PenaltyMode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s,
            Raw::Number(n) => n.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Flat benchmark configuration; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub sizes: Vec<usize>,
    pub instances_per_size: usize,
    pub edge_probability: f64,
    pub seed: u64,
    pub solvers: Vec<SolverKind>,
    pub shots: u64,
    pub penalty: PenaltyMode,
    pub sa_sweeps: usize,
    pub sa_beta_start: f64,
    pub sa_beta_end: f64,
    pub anneal_time: f64,
    pub anneal_dt: f64,
    pub qaoa_depth: usize,
    pub qaoa_restarts: usize,
    pub qaoa_max_iters: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        let sa = AnnealingParams::default();
        let anneal = AnnealSchedule::default();
        let qaoa = QaoaParams::default();
        Self {
            sizes: vec![4, 6, 8, 10, 12],
            instances_per_size: 5,
            edge_probability: 0.5,
            seed: 0,
            solvers: vec![SolverKind::Bnb, SolverKind::Sa, SolverKind::Anneal],
            shots: 1000,
            penalty: PenaltyMode::Auto,
            sa_sweeps: sa.sweeps,
            sa_beta_start: sa.beta_start,
            sa_beta_end: sa.beta_end,
            anneal_time: anneal.total_time,
            anneal_dt: anneal.dt,
            qaoa_depth: qaoa.depth,
            qaoa_restarts: qaoa.restarts,
            qaoa_max_iters: qaoa.max_iters,
        }
    }
}

impl BenchmarkConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("sizes must be a non-empty list of positive integers".into());
        }
        if self.instances_per_size == 0 {
            return bad("instances_per_size must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return bad(format!("edge_probability {} outside [0, 1]", self.edge_probability));
        }
        if self.solvers.is_empty() {
            return bad("at least one solver is required".into());
        }
        if self.solvers.iter().collect::<BTreeSet<_>>().len() != self.solvers.len() {
            return bad("solvers must not repeat".into());
        }
        if self.shots == 0 {
            return bad("shots must be positive".into());
        }
        self.sa_params().validate()?;
        self.anneal_schedule().validate()?;
        if self.qaoa_depth == 0 || self.qaoa_restarts == 0 || self.qaoa_max_iters == 0 {
            return bad("qaoa_depth, qaoa_restarts and qaoa_max_iters must be positive".into());
        }
        Ok(())
    }

    pub fn sa_params(&self) -> AnnealingParams {
        AnnealingParams {
            sweeps: self.sa_sweeps,
            beta_start: self.sa_beta_start,
            beta_end: self.sa_beta_end,
        }
    }

    pub fn anneal_schedule(&self) -> AnnealSchedule {
        AnnealSchedule {
            total_time: self.anneal_time,
            dt: self.anneal_dt,
        }
    }

    pub fn qaoa_params(&self) -> QaoaParams {
        QaoaParams {
            depth: self.qaoa_depth,
            restarts: self.qaoa_restarts,
            max_iters: self.qaoa_max_iters,
            shots: self.shots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkRecord {
    /// Index of the instance within its size.
    pub instance_id: usize,
    pub size: usize,
    /// Seed of the instance graph.
    pub seed: u64,
    pub solver: String,
    pub build_time_ms: u64,
    pub solve_time_ms: u64,
    pub shots: u64,
    /// Heaviest feasible set among the samples, `None` when skipped.
    pub best_value: Option<u64>,
    pub optimal_value: u64,
    pub gap: Option<u64>,
    pub success_freq: Option<Rational>,
    /// Whether the lowest-energy sample is an independent set.
    pub feasible: Option<bool>,
    pub status: String,
}

impl BenchmarkRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn sort_key(&self) -> (usize, usize, String) {
        (self.size, self.instance_id, self.solver.clone())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Graph seed for instance `index` of size `size`.
pub fn instance_seed(base: u64, size: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ size as u64) ^ index as u64)
}

/// Sampler seed for one solver on one instance.
pub fn solver_seed(instance_seed: u64, solver: SolverKind) -> u64 {
    splitmix64(instance_seed ^ splitmix64(solver as u64 + 1))
}

/// Fraction of shots decoding to an independent set of weight `target`.
pub fn success_frequency(samples: &SampleSet, target: u64, g: &WeightedGraph) -> Result<Rational> {
    if samples.shots() == 0 {
        return Err(Error::InvalidParameter("sample set has no shots".into()));
    }
    let mut hits: u64 = 0;
    for entry in samples.entries() {
        let sol = decode_mwis(g, &entry.bits)?;
        if sol.feasible && sol.weight == target {
            hits += entry.count;
        }
    }
    Ok(Rational::new(hits as i128, samples.shots() as i128))
}

/// Best feasible weight among samples, and feasibility of the lowest-energy sample.
pub fn best_feasible(samples: &SampleSet, g: &WeightedGraph) -> Result<(Option<u64>, bool)> {
    let mut best = None;
    for entry in samples.entries() {
        let sol = decode_mwis(g, &entry.bits)?;
        if sol.feasible {
            best = best.max(Some(sol.weight));
        }
    }
    let lowest_feasible = match samples.best() {
        Some(e) => decode_mwis(g, &e.bits)?.feasible,
        None => false,
    };
    Ok((best, lowest_feasible))
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

struct Instance {
    size: usize,
    index: usize,
    seed: u64,
    graph: WeightedGraph,
    optimum: u64,
}

fn run_cell(config: &BenchmarkConfig, inst: &Instance, solver: SolverKind) -> Result<BenchmarkRecord> {
    let mut record = BenchmarkRecord {
        instance_id: inst.index,
        size: inst.size,
        seed: inst.seed,
        solver: solver.name().to_string(),
        build_time_ms: 0,
        solve_time_ms: 0,
        shots: 0,
        best_value: None,
        optimal_value: inst.optimum,
        gap: None,
        success_freq: None,
        feasible: None,
        status: "ok".into(),
    };
    let qubits = inst.graph.vertex_count();
    if let Some(limit) = solver.qubit_limit() {
        if qubits > limit {
            record.status = format!("skipped: size guard ({solver} supports at most {limit} qubits, instance has {qubits})");
            return Ok(record);
        }
    }
    let g = &inst.graph;
    let seed = solver_seed(inst.seed, solver);

    if solver == SolverKind::Bnb {
        let start = Instant::now();
        let result = mwis_branch_and_bound(g);
        record.solve_time_ms = elapsed_ms(start);
        let weight = decode_mwis(g, &result.assignment)?.weight;
        record.shots = 1;
        record.best_value = Some(weight);
        record.gap = Some(inst.optimum - weight);
        record.success_freq = Some(int(1));
        record.feasible = Some(true);
        return Ok(record);
    }

    let start = Instant::now();
    let q: Qubo = mwis_direct_qubo(g, config.penalty.resolve(g))?;
    let ising = (solver != SolverKind::Bruteforce).then(|| qubo_to_ising(&q));
    record.build_time_ms = elapsed_ms(start);

    let start = Instant::now();
    let samples = match solver {
        SolverKind::Bruteforce => {
            let result = brute_force_qubo(&q)?;
            crate::solvers::exact_samples("bruteforce", &result, result.value)
        }
        SolverKind::Sa => simulated_annealing(ising.as_ref().expect("built"), config.sa_params(), config.shots, seed)?,
        SolverKind::Anneal => {
            anneal_sample(ising.as_ref().expect("built"), config.anneal_schedule(), config.shots, seed)?
        }
        SolverKind::Qaoa => qaoa_optimize(ising.as_ref().expect("built"), config.qaoa_params(), seed)?.samples,
        SolverKind::Bnb => unreachable!("handled above"),
    };
    record.solve_time_ms = elapsed_ms(start);

    let (best, lowest_feasible) = best_feasible(&samples, g)?;
    let best_value = best.unwrap_or(0);
    if best_value > inst.optimum {
        return Err(Error::InvalidModel(format!(
            "{solver} found weight {best_value} above the certified optimum {}",
            inst.optimum
        )));
    }
    record.shots = samples.shots();
    record.best_value = Some(best_value);
    record.gap = Some(inst.optimum - best_value);
    record.success_freq = Some(success_frequency(&samples, inst.optimum, g)?);
    record.feasible = Some(lowest_feasible);
    Ok(record)
}

/// Runs every configured solver on every instance.
///
/// Records come back sorted by (size, instance_id, solver). Apart from the
/// two timing fields they depend only on `config`.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<Vec<BenchmarkRecord>> {
    config.validate()?;
    let instances: Vec<Instance> = config
        .sizes
        .iter()
        .flat_map(|&size| (0..config.instances_per_size).map(move |index| (size, index)))
        .map(|(size, index)| {
            let seed = instance_seed(config.seed, size, index);
            let graph = generate_random_graph(size, config.edge_probability, seed)?;
            let optimum = decode_mwis(&graph, &mwis_branch_and_bound(&graph).assignment)?.weight;
            Ok(Instance {
                size,
                index,
                seed,
                graph,
                optimum,
            })
        })
        .collect::<Result<_>>()?;
    let cells: Vec<(&Instance, SolverKind)> = instances
        .iter()
        .flat_map(|inst| config.solvers.iter().map(move |&s| (inst, s)))
        .collect();
    let mut records = cells
        .into_par_iter()
        .map(|(inst, solver)| run_cell(config, inst, solver))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(BenchmarkRecord::sort_key);
    Ok(records)
}

/// Sets both timing fields to zero.
pub fn strip_timing(records: &mut [BenchmarkRecord]) {
    for r in records {
        r.build_time_ms = 0;
        r.solve_time_ms = 0;
    }
}

fn opt_string<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// CSV with [`CSV_HEADER`]; rows are sorted by (size, instance_id, solver).
pub fn write_records(records: &[BenchmarkRecord]) -> Vec<u8> {
    let mut sorted: Vec<&BenchmarkRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.sort_key());
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer
        .write_record(CSV_HEADER.split(','))
        .expect("writing to memory");
    for r in sorted {
        writer
            .write_record([
                r.instance_id.to_string(),
                r.size.to_string(),
                r.seed.to_string(),
                r.solver.clone(),
                r.build_time_ms.to_string(),
                r.solve_time_ms.to_string(),
                r.shots.to_string(),
                opt_string(&r.best_value),
                r.optimal_value.to_string(),
                opt_string(&r.gap),
                r.success_freq.as_ref().map(rational::format).unwrap_or_default(),
                opt_string(&r.feasible),
                r.status.clone(),
            ])
            .expect("writing to memory");
    }
    writer.into_inner().expect("flushing to memory")
}

/// Parses CSV produced by [`write_records`].
pub fn read_records(data: &[u8]) -> Result<Vec<BenchmarkRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let header = reader.headers().map_err(|e| Error::Format(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::Format("unexpected CSV header".into()));
    }
    let mut records = Vec::new();
    for (k, row) in reader.records().enumerate() {
        let line = k + 2;
        let row = row.map_err(|e| Error::parse(line, e.to_string()))?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid number '{}'", field(i))))
        };
        let opt_num = |i: usize| -> Result<Option<u64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let success_freq = match field(10) {
            "" => None,
            text => {
                let v = rational::parse(text).map_err(|e| Error::parse(line, e.to_string()))?;
                if v < int(0) || v > int(1) {
                    return Err(Error::parse(line, "success_freq outside [0, 1]"));
                }
                Some(v)
            }
        };
        let feasible = match field(11) {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => return Err(Error::parse(line, format!("invalid flag '{other}'"))),
        };
        records.push(BenchmarkRecord {
            instance_id: num(0)? as usize,
            size: num(1)? as usize,
            seed: num(2)?,
            solver: field(3).to_string(),
            build_time_ms: num(4)?,
            solve_time_ms: num(5)?,
            shots: num(6)?,
            best_value: opt_num(7)?,
            optimal_value: num(8)?,
            gap: opt_num(9)?,
            success_freq,
            feasible,
            status: field(12).to_string(),
        });
    }
    Ok(records)
}

/// JSON array with the CSV columns as keys.
pub fn write_records_json(records: &[BenchmarkRecord]) -> String {
    let mut sorted: Vec<&BenchmarkRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.sort_key());
    let rows: Vec<serde_json::Value> = sorted
        .into_iter()
        .map(|r| {
            serde_json::json!({
                "instance_id": r.instance_id,
                "size": r.size,
                "seed": r.seed,
                "solver": r.solver,
                "build_time_ms": r.build_time_ms,
                "solve_time_ms": r.solve_time_ms,
                "shots": r.shots,
                "best_value": r.best_value,
                "optimal_value": r.optimal_value,
                "gap": r.gap,
                "success_freq": r.success_freq.as_ref().map(rational::format),
                "feasible": r.feasible,
                "status": r.status,
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("records always serialize")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub solver: String,
    pub size: usize,
    pub instances: usize,
    pub mean_success_frequency: f64,
    pub mean_gap: f64,
    pub mean_solve_time_ms: f64,
}

/// Per (solver, size) means over completed records; skipped records are ignored.
pub fn trend_summary(records: &[BenchmarkRecord]) -> Result<Vec<TrendRow>> {
    let mut groups: BTreeMap<(String, usize), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.is_ok()) {
        groups.entry((r.solver.clone(), r.size)).or_default().push(r);
    }
    if groups.is_empty() {
        return Err(Error::InvalidParameter("no completed records to summarize".into()));
    }
    Ok(groups
        .into_iter()
        .map(|((solver, size), rows)| {
            let n = rows.len() as f64;
            let mean = |f: &dyn Fn(&BenchmarkRecord) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
            TrendRow {
                solver,
                size,
                instances: rows.len(),
                mean_success_frequency: mean(&|r| r.success_freq.as_ref().map_or(0.0, rational::to_f64)),
                mean_gap: mean(&|r| r.gap.unwrap_or(r.optimal_value) as f64),
                mean_solve_time_ms: mean(&|r| r.solve_time_ms as f64),
            }
        })
        .collect())
}

/// Average ranks, ties sharing the mean of their positions.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end - 1) as f64 / 2.0 + 1.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation; `None` when either series is constant or
/// the lengths differ.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Two-column TSV tables per solver: `<solver>_success.tsv` (size vs mean
/// success frequency) and `<solver>_time.tsv` (size vs mean solve time).
pub fn plot_tables(summary: &[TrendRow]) -> Vec<(String, String)> {
    let mut by_solver: BTreeMap<&str, Vec<&TrendRow>> = BTreeMap::new();
    for row in summary {
        by_solver.entry(&row.solver).or_default().push(row);
    }
    let mut files = Vec::new();
    for (solver, rows) in by_solver {
        let mut success = String::from("size\tmean_success_frequency\n");
        let mut time = String::from("size\tmean_solve_time_ms\n");
        for r in rows {
            success.push_str(&format!("{}\t{:.6}\n", r.size, r.mean_success_frequency));
            time.push_str(&format!("{}\t{:.3}\n", r.size, r.mean_solve_time_ms));
        }
        files.push((format!("{solver}_success.tsv"), success));
        files.push((format!("{solver}_time.tsv"), time));
    }
    files
}
