//! Classical solvers and the shared sample container.
//!
//! * [`brute_force_qubo`]: exhaustive ground truth for up to 24 qubits.
//! * [`exact_block_elimination`]: exact minimum for larger QUBOs whose
//!   non-core qubits split into small independent blocks, such as slack qubits.
//! * [`mwis_branch_and_bound`]: certified maximum weight independent set.
//! * [`simulated_annealing`]: Metropolis single-spin-flip annealing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::WeightedGraph;
use crate::qubo::{bits_from_spins, IsingModel, Qubo};
use crate::rational::{self, common_denominator, int, scaled_integer, Rational};
use crate::{Error, Result};

/// Largest QUBO accepted by exhaustive enumeration.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleEntry {
    pub bits: Vec<bool>,
    pub energy: Rational,
    pub count: u64,
}

/// Multiset of measured assignments with exact energies.
///
/// Entries are unique by assignment and sorted by energy, then by bit string.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub solver: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, serde_json::Value>,
    entries: Vec<SampleEntry>,
    shots: u64,
}

impl SampleSet {
    /// Builds a sample set, merging repeated assignments.
    pub fn from_entries(
        solver: impl Into<String>,
        seed: Option<u64>,
        params: BTreeMap<String, serde_json::Value>,
        entries: impl IntoIterator<Item = SampleEntry>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Vec<bool>, (Rational, u64)> = BTreeMap::new();
        let mut width = None;
        for entry in entries {
            if entry.count == 0 {
                return Err(Error::Format("sample counts must be positive".into()));
            }
            if *width.get_or_insert(entry.bits.len()) != entry.bits.len() {
                return Err(Error::Format("samples have different lengths".into()));
            }
            match merged.get_mut(&entry.bits) {
                Some((energy, count)) => {
                    if *energy != entry.energy {
                        return Err(Error::Format(format!(
                            "assignment {} listed with two energies",
                            bit_string(&entry.bits)
                        )));
                    }
                    *count += entry.count;
                }
                None => {
                    merged.insert(entry.bits, (entry.energy, entry.count));
                }
            }
        }
        let mut entries: Vec<SampleEntry> = merged
            .into_iter()
            .map(|(bits, (energy, count))| SampleEntry { bits, energy, count })
            .collect();
        entries.sort_by(|a, b| {
            a.energy
                .cmp(&b.energy)
                .then_with(|| bit_string(&a.bits).cmp(&bit_string(&b.bits)))
        });
        let shots = entries.iter().map(|e| e.count).sum();
        Ok(Self {
            solver: solver.into(),
            seed,
            params,
            entries,
            shots,
        })
    }

    pub fn entries(&self) -> &[SampleEntry] {
        &self.entries
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn num_variables(&self) -> usize {
        self.entries.first().map_or(0, |e| e.bits.len())
    }

    /// Lowest-energy entry.
    pub fn best(&self) -> Option<&SampleEntry> {
        self.entries.first()
    }

    /// Checks every stored energy against `q`.
    pub fn energies_match(&self, q: &Qubo) -> Result<bool> {
        for entry in &self.entries {
            if q.evaluate(&entry.bits)? != entry.energy {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> String {
        let doc = SampleSetDoc {
            solver: self.solver.clone(),
            seed: self.seed,
            shots: self.shots,
            params: self.params.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryDoc {
                    bits: bit_string(&e.bits),
                    energy: rational::format(&e.energy),
                    count: e.count,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("sample sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SampleSetDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let entries = doc
            .entries
            .into_iter()
            .map(|e| {
                Ok(SampleEntry {
                    bits: parse_bit_string(&e.bits)?,
                    energy: rational::parse(&e.energy)?,
                    count: e.count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let set = Self::from_entries(doc.solver, doc.seed, doc.params, entries)?;
        if set.shots != doc.shots {
            return Err(Error::Format(format!(
                "shots field is {} but counts sum to {}",
                doc.shots, set.shots
            )));
        }
        Ok(set)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleSetDoc {
    solver: String,
    seed: Option<u64>,
    shots: u64,
    #[serde(default)]
    params: BTreeMap<String, serde_json::Value>,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    bits: String,
    energy: String,
    count: u64,
}

/// `'0'`/`'1'` per qubit, qubit 0 first.
pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bit_string(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Format(format!("invalid bit '{other}'"))),
        })
        .collect()
}

/// Certified optimum from an exact method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: Rational,
    pub assignment: Vec<bool>,
    pub optimum_count: u128,
    pub certified: bool,
    /// Search nodes explored (branch and bound only).
    pub nodes: Option<u64>,
}

/// Integer image of a QUBO: every coefficient multiplied by a common scale.
struct IntegerQubo {
    scale: i128,
    offset: i128,
    diagonal: Vec<i128>,
    neighbors: Vec<Vec<(usize, i128)>>,
}

impl IntegerQubo {
    fn new(q: &Qubo) -> Result<Self> {
        let offset = q.offset();
        let scale = common_denominator(q.terms().map(|(_, v)| v).chain(std::iter::once(&offset)))?;
        let n = q.num_qubits();
        let mut diagonal = vec![0i128; n];
        let mut neighbors = vec![Vec::new(); n];
        for ((i, j), v) in q.terms() {
            let c = scaled_integer(v, scale);
            if i == j {
                diagonal[i] = c;
            } else {
                neighbors[i].push((j, c));
                neighbors[j].push((i, c));
            }
        }
        Ok(Self {
            scale,
            offset: scaled_integer(&offset, scale),
            diagonal,
            neighbors,
        })
    }

    fn to_rational(&self, scaled: i128) -> Rational {
        Rational::new(scaled + self.offset, self.scale)
    }
}

/// Exhaustive minimum over all `2^n` assignments in exact arithmetic.
///
/// Ties are counted; the reported assignment is the lexicographically
/// smallest optimum (qubit 0 compared first, `0 < 1`).
pub fn brute_force_qubo(q: &Qubo) -> Result<ExactResult> {
    let n = q.num_qubits();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard {
            what: "exhaustive QUBO search",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let iq = IntegerQubo::new(q)?;
    // Gray-code walk: one bit flip per step, local fields kept incrementally.
    let mut field = vec![0i128; n];
    let mut x = vec![false; n];
    let mut energy: i128 = 0;
    let mut lex_key: u64 = 0;
    let mut best = (energy, lex_key);
    let mut count: u128 = 1;
    for step in 1..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        let delta = iq.diagonal[i] + field[i];
        let sign = if x[i] { -1 } else { 1 };
        energy += sign * delta;
        x[i] = !x[i];
        for &(j, c) in &iq.neighbors[i] {
            field[j] += sign * c;
        }
        lex_key ^= 1 << (n - 1 - i);
        if energy < best.0 {
            best = (energy, lex_key);
            count = 1;
        } else if energy == best.0 {
            count += 1;
            best.1 = best.1.min(lex_key);
        }
    }
    let assignment = (0..n).map(|i| (best.1 >> (n - 1 - i)) & 1 == 1).collect();
    Ok(ExactResult {
        value: iq.to_rational(best.0),
        assignment,
        optimum_count: count,
        certified: true,
        nodes: None,
    })
}

/// Exact minimum of a QUBO by enumerating the `core` qubits and, for each
/// core assignment, minimizing every connected block of the remaining
/// qubits independently.
///
/// Exact whenever blocks only couple to the core and within themselves,
/// which holds by construction of connected components. Both the core and
/// every block must fit the exhaustive limit.
pub fn exact_block_elimination(q: &Qubo, core: &[usize]) -> Result<ExactResult> {
    let n = q.num_qubits();
    let mut is_core = vec![false; n];
    for &c in core {
        if c >= n || std::mem::replace(&mut is_core[c], true) {
            return Err(Error::InvalidParameter(format!("invalid or repeated core qubit {c}")));
        }
    }
    if core.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeGuard {
            what: "block elimination core",
            size: core.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let iq = IntegerQubo::new(q)?;

    // Connected components of the non-core qubits.
    let mut block_of = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if is_core[start] || block_of[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut members = vec![start];
        block_of[start] = id;
        let mut k = 0;
        while k < members.len() {
            let v = members[k];
            for &(w, _) in &iq.neighbors[v] {
                if !is_core[w] && block_of[w] == usize::MAX {
                    block_of[w] = id;
                    members.push(w);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        if members.len() > BRUTE_FORCE_LIMIT {
            return Err(Error::SizeGuard {
                what: "block elimination block",
                size: members.len(),
                limit: BRUTE_FORCE_LIMIT,
            });
        }
        blocks.push(members);
    }

    let mut best: Option<(i128, Vec<bool>)> = None;
    let mut count: u128 = 0;
    let mut x = vec![false; n];
    for core_index in 0..(1u64 << core.len()) {
        for (k, &c) in core.iter().enumerate() {
            x[c] = (core_index >> k) & 1 == 1;
        }
        let mut energy: i128 = 0;
        for &c in core {
            if x[c] {
                energy += iq.diagonal[c];
                energy += iq.neighbors[c]
                    .iter()
                    .filter(|&&(j, _)| is_core[j] && j > c && x[j])
                    .map(|&(_, v)| v)
                    .sum::<i128>();
            }
        }
        let mut ties: u128 = 1;
        for members in &blocks {
            // Linear terms of block qubits given the core.
            let linear: Vec<i128> = members
                .iter()
                .map(|&v| {
                    iq.diagonal[v]
                        + iq.neighbors[v]
                            .iter()
                            .filter(|&&(j, _)| is_core[j] && x[j])
                            .map(|&(_, c)| c)
                            .sum::<i128>()
                })
                .collect();
            let mut block_best: Option<(i128, u64)> = None;
            let mut block_ties: u128 = 0;
            for pattern in 0..(1u64 << members.len()) {
                let mut e = 0i128;
                for (a, &v) in members.iter().enumerate() {
                    if (pattern >> a) & 1 == 1 {
                        e += linear[a];
                        for &(w, c) in &iq.neighbors[v] {
                            if w > v && !is_core[w] {
                                let b = members.binary_search(&w).expect("same block");
                                if (pattern >> b) & 1 == 1 {
                                    e += c;
                                }
                            }
                        }
                    }
                }
                match block_best {
                    Some((be, _)) if e > be => {}
                    Some((be, _)) if e == be => block_ties += 1,
                    _ => {
                        block_best = Some((e, pattern));
                        block_ties = 1;
                    }
                }
            }
            let (be, pattern) = block_best.expect("blocks are non-empty");
            energy += be;
            ties = ties.saturating_mul(block_ties);
            for (a, &v) in members.iter().enumerate() {
                x[v] = (pattern >> a) & 1 == 1;
            }
        }
        match &best {
            Some((be, _)) if energy > *be => {}
            Some((be, _)) if energy == *be => count = count.saturating_add(ties),
            _ => {
                best = Some((energy, x.clone()));
                count = ties;
            }
        }
    }
    let (energy, assignment) = best.expect("at least one core assignment");
    Ok(ExactResult {
        value: iq.to_rational(energy),
        assignment,
        optimum_count: count,
        certified: true,
        nodes: None,
    })
}

#[derive(Clone, PartialEq, Eq)]
struct VertexSet(Vec<u64>);

impl VertexSet {
    fn empty(n: usize) -> Self {
        VertexSet(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn intersection_len(&self, other: &VertexSet) -> u32 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn subtract(&mut self, other: &VertexSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }
}

struct BranchAndBound<'a> {
    graph: &'a WeightedGraph,
    neighborhoods: Vec<VertexSet>,
    best_weight: u64,
    best_set: Vec<usize>,
    optimum_count: u128,
    nodes: u64,
}

impl BranchAndBound<'_> {
    fn search(&mut self, mut undecided: VertexSet, mut weight: u64, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        let mark = chosen.len();
        // Vertices with no undecided neighbour are in every optimal extension.
        let isolated: Vec<usize> = undecided
            .iter()
            .filter(|&v| undecided.intersection_len(&self.neighborhoods[v]) == 0)
            .collect();
        for v in isolated {
            undecided.remove(v);
            weight += self.graph.weight(v);
            chosen.push(v);
        }

        let remaining: u64 = undecided.iter().map(|v| self.graph.weight(v)).sum();
        if weight + remaining < self.best_weight {
            chosen.truncate(mark);
            return;
        }
        if undecided.is_empty() {
            if weight > self.best_weight {
                self.best_weight = weight;
                self.best_set = chosen.clone();
                self.optimum_count = 1;
            } else if weight == self.best_weight {
                self.optimum_count += 1;
            }
            chosen.truncate(mark);
            return;
        }

        let pivot = undecided
            .iter()
            .max_by_key(|&v| (undecided.intersection_len(&self.neighborhoods[v]), std::cmp::Reverse(v)))
            .expect("non-empty");

        let mut with = undecided.clone();
        with.remove(pivot);
        with.subtract(&self.neighborhoods[pivot]);
        chosen.push(pivot);
        self.search(with, weight + self.graph.weight(pivot), chosen);
        chosen.pop();

        undecided.remove(pivot);
        self.search(undecided, weight, chosen);
        chosen.truncate(mark);
    }
}

/// Certified maximum weight independent set.
///
/// Bound: current weight plus the weight of all undecided vertices. Branches
/// on the undecided vertex with the most undecided neighbours (include it and
/// drop its neighbours, or exclude it). The returned `value` is the optimal
/// weight and `optimum_count` the number of optimal sets.
pub fn mwis_branch_and_bound(g: &WeightedGraph) -> ExactResult {
    let n = g.vertex_count();
    let neighborhoods = (0..n)
        .map(|v| {
            let mut s = VertexSet::empty(n);
            for &u in g.neighbors(v) {
                s.insert(u);
            }
            s
        })
        .collect();
    let mut solver = BranchAndBound {
        graph: g,
        neighborhoods,
        best_weight: 0,
        best_set: Vec::new(),
        optimum_count: 0,
        nodes: 0,
    };
    let mut chosen = Vec::new();
    solver.search(VertexSet::full(n), 0, &mut chosen);
    let mut assignment = vec![false; n];
    for &v in &solver.best_set {
        assignment[v] = true;
    }
    ExactResult {
        value: int(solver.best_weight as i128),
        assignment,
        optimum_count: solver.optimum_count,
        certified: true,
        nodes: Some(solver.nodes),
    }
}

/// Simulated annealing parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealingParams {
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
}

impl Default for AnnealingParams {
    fn default() -> Self {
        Self {
            sweeps: 100,
            beta_start: 0.1,
            beta_end: 10.0,
        }
    }
}

impl AnnealingParams {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be positive".into()));
        }
        let ok = |b: f64| b.is_finite() && b > 0.0;
        if !ok(self.beta_start) || !ok(self.beta_end) || self.beta_start > self.beta_end {
            return Err(Error::InvalidParameter(format!(
                "invalid beta schedule ({}, {}): need 0 < start <= end",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    /// Geometric interpolation from `beta_start` to `beta_end`, one value per sweep.
    pub fn schedule(&self) -> Vec<f64> {
        if self.sweeps == 1 {
            return vec![self.beta_end];
        }
        let ratio = self.beta_end / self.beta_start;
        (0..self.sweeps)
            .map(|k| self.beta_start * ratio.powf(k as f64 / (self.sweeps - 1) as f64))
            .collect()
    }
}

/// Random source for one shot, independent of how shots are scheduled.
pub(crate) fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Metropolis simulated annealing on an Ising model.
///
/// Each shot starts from uniformly random spins and runs `sweeps` in-order
/// passes of single-spin-flip Metropolis updates. Samples are reported as
/// bits `x = (s + 1)/2` with exact Ising energies.
pub fn simulated_annealing(
    m: &IsingModel,
    params: AnnealingParams,
    shots: u64,
    seed: u64,
) -> Result<SampleSet> {
    params.validate()?;
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    let n = m.num_spins();
    let h: Vec<f64> = m.h().iter().map(rational::to_f64).collect();
    let mut couplings = vec![Vec::new(); n];
    for ((i, j), v) in m.couplings() {
        let v = rational::to_f64(v);
        couplings[i].push((j, v));
        couplings[j].push((i, v));
    }
    let betas = params.schedule();

    let finals: Vec<Vec<i8>> = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let mut s: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
            for &beta in &betas {
                for i in 0..n {
                    let local: f64 = h[i] + couplings[i].iter().map(|&(j, c)| c * s[j] as f64).sum::<f64>();
                    let delta = 2.0 * s[i] as f64 * local;
                    if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                        s[i] = -s[i];
                    }
                }
            }
            s
        })
        .collect();

    let mut counts: BTreeMap<Vec<i8>, u64> = BTreeMap::new();
    for s in finals {
        *counts.entry(s).or_default() += 1;
    }
    let entries = counts
        .into_iter()
        .map(|(s, count)| {
            Ok(SampleEntry {
                energy: m.evaluate(&s)?,
                bits: bits_from_spins(&s),
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = BTreeMap::new();
    meta.insert("sweeps".into(), params.sweeps.into());
    meta.insert("beta_start".into(), params.beta_start.into());
    meta.insert("beta_end".into(), params.beta_end.into());
    SampleSet::from_entries("sa", Some(seed), meta, entries)
}

/// Wraps an exact result as a one-shot sample set.
pub fn exact_samples(solver: &str, result: &ExactResult, energy: Rational) -> SampleSet {
    let mut params = BTreeMap::new();
    params.insert("certified".into(), result.certified.into());
    params.insert("optimum_count".into(), result.optimum_count.to_string().into());
    if let Some(nodes) = result.nodes {
        params.insert("nodes".into(), nodes.into());
    }
    SampleSet::from_entries(
        solver,
        None,
        params,
        [SampleEntry {
            bits: result.assignment.clone(),
            energy,
            count: 1,
        }],
    )
    .expect("single entry is always valid")
}
