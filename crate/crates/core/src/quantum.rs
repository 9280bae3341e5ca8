//! Dense state-vector simulation of quantum annealing and QAOA.
//!
//! Conventions:
//! * bit `i` of a basis index is qubit `i`, and character `i` of a bit string is qubit `i`;
//! * basis bit 0 is spin `s = +1`, bit 1 is `s = -1`, so the QUBO assignment
//!   of a measured basis state is `x_i = 1 - b_i`;
//! * the driver is `H0 = -sum_i X_i`, whose ground state is the uniform superposition;
//! * the annealing Hamiltonian is `A(t) H0 + B(t) Hp` with `A = 1 - t/T`, `B = t/T`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qubo::{bits_from_index, IsingModel};
use crate::rational::{self, Rational};
use crate::solvers::{shot_rng, SampleEntry, SampleSet};
use crate::{Error, Result};

/// Largest model accepted by [`problem_diagonal`].
pub const DIAGONAL_LIMIT: usize = 20;
/// Largest model accepted by time evolution and QAOA.
pub const STATE_VECTOR_LIMIT: usize = 16;
/// Allowed deviation of the squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn uniform(n: usize) -> Result<Self> {
        guard("state vector", n, STATE_VECTOR_LIMIT)?;
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n,
            amplitudes: vec![amp; dim],
        })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        guard("state vector", n, STATE_VECTOR_LIMIT)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        guard("state vector", n, STATE_VECTOR_LIMIT)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                actual: amplitudes.len(),
            });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > NORM_TOLERANCE || drift.is_nan() {
            return Err(Error::NotNormalized(drift));
        }
        Ok(())
    }

    /// Total probability of the given basis states.
    pub fn population(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.amplitudes[i].norm_sqr()).sum()
    }

    /// `<psi| diag |psi>` for a diagonal observable.
    pub fn expectation(&self, diagonal: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(diagonal)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum()
    }

    /// Multiplies amplitude `k` by `exp(-i * scale * diagonal[k])`.
    fn apply_phase(&mut self, diagonal: &[f64], scale: f64) {
        for (a, &d) in self.amplitudes.iter_mut().zip(diagonal) {
            *a *= Complex64::cis(-scale * d);
        }
    }

    /// Applies `exp(i * theta * X)` to every qubit.
    fn apply_x_rotation(&mut self, theta: f64) {
        let (s, c) = theta.sin_cos();
        let is = Complex64::new(0.0, s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for base in (0..self.amplitudes.len()).step_by(stride << 1) {
                for lo in base..base + stride {
                    let hi = lo + stride;
                    let (u, v) = (self.amplitudes[lo], self.amplitudes[hi]);
                    self.amplitudes[lo] = u * c + v * is;
                    self.amplitudes[hi] = u * is + v * c;
                }
            }
        }
    }
}

fn guard(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::SizeGuard { what, size: n, limit });
    }
    Ok(())
}

/// Spin of qubit `i` in basis state `index`.
fn spin(index: usize, i: usize) -> f64 {
    if (index >> i) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Ising energy of every basis state, indexed by basis index.
pub fn problem_diagonal(m: &IsingModel) -> Result<Vec<f64>> {
    let n = m.num_spins();
    guard("problem diagonal", n, DIAGONAL_LIMIT)?;
    let h: Vec<f64> = m.h().iter().map(rational::to_f64).collect();
    let couplings: Vec<(usize, usize, f64)> = m
        .couplings()
        .map(|((i, j), v)| (i, j, rational::to_f64(v)))
        .collect();
    let offset = rational::to_f64(&m.offset());
    Ok((0..1usize << n)
        .map(|b| {
            let field: f64 = h.iter().enumerate().map(|(i, hi)| hi * spin(b, i)).sum();
            let coupling: f64 = couplings.iter().map(|&(i, j, v)| v * spin(b, i) * spin(b, j)).sum();
            offset - field - coupling
        })
        .collect())
}

/// Basis indices attaining the minimum of `diagonal`.
pub fn ground_state_indices(diagonal: &[f64]) -> Vec<usize> {
    let min = diagonal.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * min.abs().max(1.0);
    (0..diagonal.len()).filter(|&i| diagonal[i] - min <= tol).collect()
}

/// Linear annealing schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub total_time: f64,
    pub dt: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self { total_time: 50.0, dt: 0.01 }
    }
}

impl AnnealSchedule {
    pub fn new(total_time: f64, dt: f64) -> Result<Self> {
        let s = Self { total_time, dt };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.total_time.is_finite() && self.dt > 0.0 && self.dt <= self.total_time) {
            return Err(Error::InvalidParameter(format!(
                "invalid schedule T = {}, dt = {}: need 0 < dt <= T",
                self.total_time, self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps; the step length is `total_time / steps`.
    pub fn steps(&self) -> usize {
        ((self.total_time / self.dt).round() as usize).max(1)
    }

    pub fn a(&self, t: f64) -> f64 {
        1.0 - t / self.total_time
    }

    pub fn b(&self, t: f64) -> f64 {
        t / self.total_time
    }
}

/// Evolves `|+>^n` under the annealing Hamiltonian.
pub fn anneal_evolve(m: &IsingModel, schedule: AnnealSchedule) -> Result<StateVector> {
    anneal_evolve_with(m, schedule, |_, _| {})
}

/// [`anneal_evolve`] calling `observe(t, state)` after every step.
///
/// Each step is a Strang splitting: half a diagonal phase, the driver as
/// per-qubit X rotations, the other half phase, with `A` and `B` taken at
/// the step midpoint.
pub fn anneal_evolve_with(
    m: &IsingModel,
    schedule: AnnealSchedule,
    mut observe: impl FnMut(f64, &StateVector),
) -> Result<StateVector> {
    schedule.validate()?;
    guard("annealing", m.num_spins(), STATE_VECTOR_LIMIT)?;
    let diagonal = problem_diagonal(m)?;
    let mut psi = StateVector::uniform(m.num_spins())?;
    let steps = schedule.steps();
    let dt = schedule.total_time / steps as f64;
    for k in 0..steps {
        let mid = (k as f64 + 0.5) * dt;
        let (a, b) = (schedule.a(mid), schedule.b(mid));
        psi.apply_phase(&diagonal, 0.5 * dt * b);
        // exp(-i dt A H0) with H0 = -sum X
        psi.apply_x_rotation(dt * a);
        psi.apply_phase(&diagonal, 0.5 * dt * b);
        observe((k + 1) as f64 * dt, &psi);
    }
    psi.check_normalized()?;
    Ok(psi)
}

/// Draws `shots` basis indices from the Born distribution and counts them.
pub fn sample_indices(psi: &StateVector, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    psi.check_normalized()?;
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    let dist = WeightedIndex::new(psi.probabilities()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = shot_rng(seed, 0);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Samples measurement outcomes; entry bits are the measured basis bits and
/// energies come from `energy`.
pub fn sample_state(
    psi: &StateVector,
    shots: u64,
    seed: u64,
    energy: impl Fn(&[bool]) -> Result<Rational>,
) -> Result<SampleSet> {
    let entries = sample_indices(psi, shots, seed)?
        .into_iter()
        .map(|(index, count)| {
            let bits = bits_from_index(index as u64, psi.num_qubits());
            Ok(SampleEntry {
                energy: energy(&bits)?,
                bits,
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::from_entries("state", Some(seed), BTreeMap::new(), entries)
}

/// Samples `psi` as solutions of `m`: bits are `x = (s + 1)/2 = 1 - b`
/// with exact Ising energies.
pub fn sample_assignments(
    m: &IsingModel,
    psi: &StateVector,
    solver: &str,
    params: BTreeMap<String, serde_json::Value>,
    shots: u64,
    seed: u64,
) -> Result<SampleSet> {
    let entries = sample_indices(psi, shots, seed)?
        .into_iter()
        .map(|(index, count)| {
            let spins: Vec<i8> = (0..psi.num_qubits()).map(|i| spin(index, i) as i8).collect();
            Ok(SampleEntry {
                energy: m.evaluate(&spins)?,
                bits: spins.iter().map(|&s| s > 0).collect(),
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::from_entries(solver, Some(seed), params, entries)
}

/// Anneals `m` and measures the final state `shots` times.
pub fn anneal_sample(m: &IsingModel, schedule: AnnealSchedule, shots: u64, seed: u64) -> Result<SampleSet> {
    let psi = anneal_evolve(m, schedule)?;
    let mut params = BTreeMap::new();
    params.insert("total_time".into(), schedule.total_time.into());
    params.insert("dt".into(), schedule.dt.into());
    sample_assignments(m, &psi, "anneal", params, shots, seed)
}

/// `prod_k exp(-i beta_k sum X) exp(-i gamma_k Hp) |+>^n`.
pub fn qaoa_state(m: &IsingModel, gammas: &[f64], betas: &[f64]) -> Result<StateVector> {
    guard("QAOA", m.num_spins(), STATE_VECTOR_LIMIT)?;
    let diagonal = problem_diagonal(m)?;
    qaoa_state_from_diagonal(m.num_spins(), &diagonal, gammas, betas)
}

fn qaoa_state_from_diagonal(n: usize, diagonal: &[f64], gammas: &[f64], betas: &[f64]) -> Result<StateVector> {
    if gammas.is_empty() {
        return Err(Error::InvalidParameter("QAOA depth must be at least 1".into()));
    }
    if betas.len() != gammas.len() {
        return Err(Error::LengthMismatch {
            expected: gammas.len(),
            actual: betas.len(),
        });
    }
    let mut psi = StateVector::uniform(n)?;
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        psi.apply_phase(diagonal, gamma);
        psi.apply_x_rotation(-beta);
    }
    Ok(psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub depth: usize,
    /// Independent Nelder-Mead runs from seeded random starts.
    pub restarts: usize,
    /// Iteration cap per run.
    pub max_iters: u64,
    pub shots: u64,
}

impl Default for QaoaParams {
    fn default() -> Self {
        Self {
            depth: 1,
            restarts: 8,
            max_iters: 500,
            shots: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct QaoaResult {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub expectation: f64,
    pub state: StateVector,
    pub samples: SampleSet,
}

struct QaoaCost<'a> {
    n: usize,
    depth: usize,
    diagonal: &'a [f64],
    gamma_scale: f64,
}

impl CostFunction for QaoaCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let gammas: Vec<f64> = p[..self.depth].iter().map(|g| g / self.gamma_scale).collect();
        let psi = qaoa_state_from_diagonal(self.n, self.diagonal, &gammas, &p[self.depth..])?;
        Ok(psi.expectation(self.diagonal))
    }
}

/// Minimizes `<Hp>` over `(gamma, beta)` with Nelder-Mead, then samples the
/// optimized state.
///
/// The search runs on `Hp` rescaled to unit spectral radius, with starts drawn
/// uniformly from `gamma in [0, 2pi)`, `beta in [0, pi)`. Returned angles
/// apply to the unscaled model.
pub fn qaoa_optimize(m: &IsingModel, params: QaoaParams, seed: u64) -> Result<QaoaResult> {
    let n = m.num_spins();
    guard("QAOA", n, STATE_VECTOR_LIMIT)?;
    if params.depth == 0 || params.restarts == 0 || params.max_iters == 0 {
        return Err(Error::InvalidParameter("QAOA depth, restarts and max_iters must be positive".into()));
    }
    let p = params.depth;
    let diagonal = problem_diagonal(m)?;
    let radius = diagonal.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    let gamma_scale = if radius > 0.0 { radius } else { 1.0 };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for restart in 0..params.restarts {
        let mut rng = shot_rng(seed, restart as u64);
        let start: Vec<f64> = (0..2 * p)
            .map(|k| if k < p { rng.gen_range(0.0..2.0 * PI) } else { rng.gen_range(0.0..PI) })
            .collect();
        let mut simplex = vec![start.clone()];
        for k in 0..2 * p {
            let mut vertex = start.clone();
            vertex[k] += if k < p { 0.2 * PI } else { 0.1 * PI };
            simplex.push(vertex);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-10)
            .map_err(|e| Error::Optimizer(e.to_string()))?;
        let cost = QaoaCost {
            n,
            depth: p,
            diagonal: &diagonal,
            gamma_scale,
        };
        let run = Executor::new(cost, solver)
            .configure(|s| s.max_iters(params.max_iters))
            .run()
            .map_err(|e| Error::Optimizer(e.to_string()))?;
        let state = run.state();
        let value = state.get_best_cost();
        let point = state.get_best_param().cloned().unwrap_or(start);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, point));
        }
    }
    let (expectation, point) = best.expect("at least one restart");
    let gammas: Vec<f64> = point[..p].iter().map(|g| g / gamma_scale).collect();
    let betas = point[p..].to_vec();
    let state = qaoa_state_from_diagonal(n, &diagonal, &gammas, &betas)?;
    state.check_normalized()?;
    let mut meta = BTreeMap::new();
    meta.insert("depth".into(), p.into());
    meta.insert("restarts".into(), params.restarts.into());
    meta.insert("max_iters".into(), params.max_iters.into());
    meta.insert("gammas".into(), gammas.clone().into());
    meta.insert("betas".into(), betas.clone().into());
    meta.insert("expectation".into(), expectation.into());
    let samples = sample_assignments(m, &state, "qaoa", meta, params.shots, seed)?;
    Ok(QaoaResult {
        gammas,
        betas,
        expectation,
        state,
        samples,
    })
}
