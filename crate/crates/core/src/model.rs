//! Constrained optimization models and their reduction to QUBO.
//!
//! [`to_qubo`] chains three rewrites:
//!
//! 1. [`inequality_to_equality`] adds a bounded integer slack per `<=`/`>=`
//!    constraint (`lhs + y = rhs` and `lhs - y = rhs` respectively);
//! 2. [`equality_to_penalty`] folds each equality into the objective as
//!    `penalty * (lhs - rhs)^2`, signed so violations always hurt;
//! 3. [`discretize_variables`] replaces every integer by qubits.
//!
//! For a MWIS edge constraint `x_i + x_j <= 1` this gives the penalty
//! `(x_i + x_j + y_e - 1)^2`, which is zero exactly on the feasible
//! assignments with the matching slack value. The form
//! `(x_i + x_j - y_e - 1)^2` is sometimes quoted for the same purpose; it
//! accepts `x_i = x_j = y_e = 1` and penalizes the all-zero choice, so it is
//! not used here.

use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::{Signed, Zero};

use crate::encoding::{
    binary_bits_required, binary_decode, domain_wall_decode, domain_wall_encode, one_hot_decode,
    one_hot_encode, EncodingSpec, LinearForm, Scheme,
};
use crate::graph::WeightedGraph;
use crate::qubo::Qubo;
use crate::rational::{self, int, Rational};
use crate::{Error, Result};

/// Largest integer range accepted for discretization.
const MAX_INTEGER_RANGE: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Inclusive bounds.
    Integer { lo: i64, hi: i64 },
}

impl VarKind {
    pub fn bounds(&self) -> (i64, i64) {
        match *self {
            VarKind::Binary => (0, 1),
            VarKind::Integer { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Index of the constraint this slack variable was introduced for.
    pub slack_for: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintSense {
    LessEqual,
    Equal,
    GreaterEqual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Variable index to coefficient.
    pub lhs: BTreeMap<usize, Rational>,
    pub sense: ConstraintSense,
    pub rhs: Rational,
}

impl Constraint {
    fn lhs_value(&self, values: &[i64]) -> Rational {
        self.lhs
            .iter()
            .fold(Rational::zero(), |acc, (&v, c)| acc + c * int(values[v] as i128))
    }

    pub fn is_satisfied(&self, values: &[i64]) -> bool {
        let lhs = self.lhs_value(values);
        match self.sense {
            ConstraintSense::LessEqual => lhs <= self.rhs,
            ConstraintSense::Equal => lhs == self.rhs,
            ConstraintSense::GreaterEqual => lhs >= self.rhs,
        }
    }

    /// Smallest and largest value of the left-hand side over the variable bounds.
    fn lhs_range(&self, variables: &[Variable]) -> (Rational, Rational) {
        let mut low = Rational::zero();
        let mut high = Rational::zero();
        for (&v, c) in &self.lhs {
            let (lo, hi) = variables[v].kind.bounds();
            let (a, b) = (c * int(lo as i128), c * int(hi as i128));
            low += a.min(b);
            high += a.max(b);
        }
        (low, high)
    }
}

/// Linear plus quadratic objective with a constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub constant: Rational,
    pub linear: BTreeMap<usize, Rational>,
    /// Keys are `(a, b)` with `a <= b`; `(a, a)` is a square.
    pub quadratic: BTreeMap<(usize, usize), Rational>,
}

impl Objective {
    fn new(sense: Sense) -> Self {
        Self {
            sense,
            constant: Rational::zero(),
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
        }
    }

    fn add_linear(&mut self, var: usize, value: Rational) {
        accumulate(&mut self.linear, var, value);
    }

    fn add_quadratic(&mut self, a: usize, b: usize, value: Rational) {
        accumulate(&mut self.quadratic, (a.min(b), a.max(b)), value);
    }
}

fn accumulate<K: Ord + Copy>(map: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if value.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(Rational::zero);
    *entry += value;
    if entry.is_zero() {
        map.remove(&key);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemModel {
    variables: Vec<Variable>,
    objective: Objective,
    constraints: Vec<Constraint>,
}

impl ProblemModel {
    pub fn new(sense: Sense) -> Self {
        Self {
            variables: Vec::new(),
            objective: Objective::new(sense),
            constraints: Vec::new(),
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn sense(&self) -> Sense {
        self.objective.sense
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            kind: VarKind::Binary,
            slack_for: None,
        });
        self.variables.len() - 1
    }

    pub fn add_integer(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<usize> {
        if lo > hi {
            return Err(Error::InvalidModel(format!("integer bounds [{lo}, {hi}] are empty")));
        }
        self.variables.push(Variable {
            name: name.into(),
            kind: VarKind::Integer { lo, hi },
            slack_for: None,
        });
        Ok(self.variables.len() - 1)
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.variables.len() {
            return Err(Error::InvalidModel(format!("undeclared variable {var}")));
        }
        Ok(())
    }

    pub fn add_constant(&mut self, value: Rational) {
        self.objective.constant += value;
    }

    pub fn add_linear(&mut self, var: usize, coefficient: Rational) -> Result<()> {
        self.check_var(var)?;
        self.objective.add_linear(var, coefficient);
        Ok(())
    }

    pub fn add_quadratic(&mut self, a: usize, b: usize, coefficient: Rational) -> Result<()> {
        self.check_var(a)?;
        self.check_var(b)?;
        self.objective.add_quadratic(a, b, coefficient);
        Ok(())
    }

    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        sense: ConstraintSense,
        rhs: Rational,
    ) -> Result<usize> {
        let mut lhs = BTreeMap::new();
        for (var, c) in terms {
            self.check_var(var)?;
            accumulate(&mut lhs, var, c);
        }
        self.constraints.push(Constraint { lhs, sense, rhs });
        Ok(self.constraints.len() - 1)
    }

    /// Objective value of a full assignment (one value per variable).
    pub fn evaluate(&self, values: &[i64]) -> Result<Rational> {
        if values.len() != self.variables.len() {
            return Err(Error::LengthMismatch {
                expected: self.variables.len(),
                actual: values.len(),
            });
        }
        let v = |i: usize| int(values[i] as i128);
        let mut total = self.objective.constant;
        for (&i, c) in &self.objective.linear {
            total += c * v(i);
        }
        for (&(a, b), c) in &self.objective.quadratic {
            total += c * v(a) * v(b);
        }
        Ok(total)
    }

    /// Whether all bounds and constraints hold.
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(var, &x)| {
                let (lo, hi) = var.kind.bounds();
                (lo..=hi).contains(&x)
            })
            && self.constraints.iter().all(|c| c.is_satisfied(values))
    }
}

/// Maximize `sum a_i x_i` subject to `x_u + x_v <= 1` for every edge.
pub fn mwis_model(g: &WeightedGraph) -> ProblemModel {
    let mut model = ProblemModel::new(Sense::Maximize);
    for (i, &w) in g.weights().iter().enumerate() {
        let x = model.add_binary(format!("x{}", i + 1));
        model.objective.add_linear(x, int(w as i128));
    }
    for &(u, v) in g.edges() {
        model
            .add_constraint([(u, int(1)), (v, int(1))], ConstraintSense::LessEqual, int(1))
            .expect("edge endpoints are declared variables");
    }
    model
}

/// Rewrites every `<=`/`>=` constraint as an equality with a new integer
/// slack variable whose range is the constraint's largest possible slack.
pub fn inequality_to_equality(model: &ProblemModel) -> Result<ProblemModel> {
    let mut out = ProblemModel {
        variables: model.variables.clone(),
        objective: model.objective.clone(),
        constraints: Vec::with_capacity(model.constraints.len()),
    };
    for (index, constraint) in model.constraints.iter().enumerate() {
        if constraint.sense == ConstraintSense::Equal {
            out.constraints.push(constraint.clone());
            continue;
        }
        if !constraint.rhs.is_integer() || constraint.lhs.values().any(|c| !c.is_integer()) {
            return Err(Error::Transform(format!(
                "constraint {index} has non-integer coefficients; slack range is not integral"
            )));
        }
        let (low, high) = constraint.lhs_range(&model.variables);
        let (max_slack, sign) = match constraint.sense {
            ConstraintSense::LessEqual => (constraint.rhs - low, int(1)),
            _ => (high - constraint.rhs, int(-1)),
        };
        if max_slack.is_negative() {
            return Err(Error::Transform(format!(
                "constraint {index} cannot be satisfied within the variable bounds"
            )));
        }
        let max_slack = i64::try_from(max_slack.to_integer())
            .map_err(|_| Error::Transform(format!("constraint {index} has an unbounded slack range")))?;
        out.variables.push(Variable {
            name: format!("slack{}", index + 1),
            kind: VarKind::Integer { lo: 0, hi: max_slack },
            slack_for: Some(index),
        });
        let slack = out.variables.len() - 1;
        let mut lhs = constraint.lhs.clone();
        lhs.insert(slack, sign);
        out.constraints.push(Constraint {
            lhs,
            sense: ConstraintSense::Equal,
            rhs: constraint.rhs,
        });
    }
    Ok(out)
}

/// Moves every equality into the objective as `penalty * (lhs - rhs)^2`,
/// subtracted for maximization and added for minimization.
pub fn equality_to_penalty(model: &ProblemModel, penalty: Rational) -> Result<ProblemModel> {
    if !penalty.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "penalty must be positive, got {}",
            rational::format(&penalty)
        )));
    }
    if let Some(i) = model
        .constraints
        .iter()
        .position(|c| c.sense != ConstraintSense::Equal)
    {
        return Err(Error::Transform(format!("constraint {i} is not an equality")));
    }
    let scale = match model.sense() {
        Sense::Minimize => penalty,
        Sense::Maximize => -penalty,
    };
    let mut objective = model.objective.clone();
    for constraint in &model.constraints {
        let terms: Vec<(usize, Rational)> = constraint.lhs.iter().map(|(&v, &c)| (v, c)).collect();
        let r = constraint.rhs;
        objective.constant += scale * r * r;
        for (k, &(a, ca)) in terms.iter().enumerate() {
            objective.add_linear(a, scale * int(-2) * r * ca);
            objective.add_quadratic(a, a, scale * ca * ca);
            for &(b, cb) in &terms[k + 1..] {
                objective.add_quadratic(a, b, scale * int(2) * ca * cb);
            }
        }
    }
    Ok(ProblemModel {
        variables: model.variables.clone(),
        objective,
        constraints: Vec::new(),
    })
}

/// How a variable's value is read back from its qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoding {
    /// Binary variable on a single qubit.
    Identity,
    /// `lo + sum 2^k b_k`, clamped to `lo + max_offset`.
    Binary { lo: i64, max_offset: i64 },
    /// `lo + d` where `d` is the position of the set bit.
    OneHot { lo: i64 },
    /// `lo + d` where `d` is the number of leading ones.
    DomainWall { lo: i64 },
    /// Single-valued variable, no qubits.
    Fixed(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedVariable {
    pub name: String,
    pub slack: bool,
    pub qubits: Range<usize>,
    pub decoding: Decoding,
}

/// Records where every model variable lives in a QUBO and whether the QUBO
/// energy is the negated objective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableMap {
    variables: Vec<EncodedVariable>,
    num_qubits: usize,
    negated: bool,
}

impl VariableMap {
    pub fn variables(&self) -> &[EncodedVariable] {
        &self.variables
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// True when the QUBO minimizes the negated (originally maximized) objective.
    pub fn negated(&self) -> bool {
        self.negated
    }

    /// Converts a QUBO energy into the model's objective sense.
    pub fn objective_value(&self, energy: Rational) -> Rational {
        if self.negated {
            -energy
        } else {
            energy
        }
    }

    /// Values of all variables, slack included, in model order.
    pub fn decode(&self, x: &[bool]) -> Result<Vec<i64>> {
        if x.len() != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                actual: x.len(),
            });
        }
        Ok(self
            .variables
            .iter()
            .map(|var| {
                let bits = &x[var.qubits.clone()];
                match var.decoding {
                    Decoding::Identity => bits[0] as i64,
                    Decoding::Binary { lo, max_offset } => {
                        lo + binary_decode(bits, max_offset as usize + 1) as i64
                    }
                    Decoding::OneHot { lo } => lo + one_hot_decode(bits).0 as i64,
                    Decoding::DomainWall { lo } => {
                        lo + domain_wall_decode(bits).0 as i64
                    }
                    Decoding::Fixed(value) => value,
                }
            })
            .collect())
    }

    /// Values of the non-slack variables only.
    pub fn decode_original(&self, x: &[bool]) -> Result<Vec<i64>> {
        let all = self.decode(x)?;
        Ok(self
            .variables
            .iter()
            .zip(all)
            .filter(|(var, _)| !var.slack)
            .map(|(_, v)| v)
            .collect())
    }

    /// Qubit assignment for the given variable values.
    pub fn encode(&self, values: &[i64]) -> Result<Vec<bool>> {
        if values.len() != self.variables.len() {
            return Err(Error::LengthMismatch {
                expected: self.variables.len(),
                actual: values.len(),
            });
        }
        let mut x = vec![false; self.num_qubits];
        for (var, &value) in self.variables.iter().zip(values) {
            let start = var.qubits.start;
            let width = var.qubits.len();
            let out_of_range =
                || Error::InvalidParameter(format!("value {value} out of range for '{}'", var.name));
            let offset = match var.decoding {
                Decoding::Identity => value,
                Decoding::Binary { lo, .. } | Decoding::OneHot { lo } | Decoding::DomainWall { lo } => {
                    value - lo
                }
                Decoding::Fixed(fixed) => {
                    if value != fixed {
                        return Err(out_of_range());
                    }
                    continue;
                }
            };
            let bits = match var.decoding {
                Decoding::Identity if (0..=1).contains(&offset) => vec![offset == 1],
                Decoding::Binary { max_offset, .. } if (0..=max_offset).contains(&offset) => {
                    (0..width).map(|k| (offset >> k) & 1 == 1).collect()
                }
                Decoding::OneHot { .. } if (0..width as i64).contains(&offset) => {
                    one_hot_encode(offset as usize, width)?
                }
                Decoding::DomainWall { .. } if (0..=width as i64).contains(&offset) => {
                    domain_wall_encode(offset as usize, width + 1)?
                }
                _ => return Err(out_of_range()),
            };
            x[start..start + width].copy_from_slice(&bits);
        }
        Ok(x)
    }
}

/// [`discretize_variables_with`] using the binary encoding.
pub fn discretize_variables(model: &ProblemModel) -> Result<(ProblemModel, VariableMap)> {
    discretize_variables_with(model, Scheme::Binary, Rational::zero())
}

/// Replaces every integer variable with qubits under `scheme`.
///
/// Binary uses `floor(log2(hi - lo)) + 1` bits for the offset `v - lo`, and
/// out-of-range codewords decode clamped to `hi`. One-hot and domain-wall
/// add their validity terms scaled by `validity_weight` (ignored for
/// binary). Single-valued integers become constants.
pub fn discretize_variables_with(
    model: &ProblemModel,
    scheme: Scheme,
    validity_weight: Rational,
) -> Result<(ProblemModel, VariableMap)> {
    if !model.constraints.is_empty() {
        return Err(Error::Transform(
            "discretization expects an unconstrained model".into(),
        ));
    }
    if scheme != Scheme::Binary && !validity_weight.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "{scheme} encoding needs a positive validity weight"
        )));
    }

    let mut forms: Vec<LinearForm> = Vec::with_capacity(model.variables.len());
    let mut encoded = Vec::with_capacity(model.variables.len());
    let mut validity = Vec::new();
    let mut next = 0usize;
    for var in &model.variables {
        let start = next;
        let (form, decoding, width) = match var.kind {
            VarKind::Binary => (
                LinearForm {
                    constant: Rational::zero(),
                    terms: vec![(start, int(1))],
                },
                Decoding::Identity,
                1,
            ),
            VarKind::Integer { lo, hi } if lo == hi => (
                LinearForm {
                    constant: int(lo as i128),
                    terms: Vec::new(),
                },
                Decoding::Fixed(lo),
                0,
            ),
            VarKind::Integer { lo, hi } => {
                let span = hi.checked_sub(lo).filter(|s| *s <= MAX_INTEGER_RANGE).ok_or_else(|| {
                    Error::Transform(format!("range of '{}' is too large to encode", var.name))
                })?;
                let lo_value = int(lo as i128);
                match scheme {
                    Scheme::Binary => {
                        let bits = binary_bits_required(span as usize)?;
                        let form = LinearForm {
                            constant: lo_value,
                            terms: (0..bits).map(|k| (start + k, int(1i128 << k))).collect(),
                        };
                        (form, Decoding::Binary { lo, max_offset: span }, bits)
                    }
                    Scheme::OneHot | Scheme::DomainWall => {
                        let spec = EncodingSpec::new(scheme, span as usize + 1, start)?;
                        validity.push(spec);
                        let mut form = spec.value_form();
                        form.constant = lo_value;
                        let decoding = if scheme == Scheme::OneHot {
                            Decoding::OneHot { lo }
                        } else {
                            Decoding::DomainWall { lo }
                        };
                        (form, decoding, spec.qubit_count())
                    }
                }
            }
        };
        next += width;
        forms.push(form);
        encoded.push(EncodedVariable {
            name: var.name.clone(),
            slack: var.slack_for.is_some(),
            qubits: start..next,
            decoding,
        });
    }

    let mut poly = Qubo::new(next);
    poly.add_offset(model.objective.constant);
    for (&v, c) in &model.objective.linear {
        for &(q, a) in &forms[v].terms {
            poly.add(q, q, c * a);
        }
        poly.add_offset(c * forms[v].constant);
    }
    for (&(a, b), c) in &model.objective.quadratic {
        forms[a].add_product_into(&forms[b], *c, &mut poly);
    }
    let validity_scale = match model.sense() {
        Sense::Minimize => validity_weight,
        Sense::Maximize => -validity_weight,
    };
    for spec in &validity {
        poly.add_qubo(&spec.validity_terms().scaled(validity_scale))?;
    }

    let mut out = ProblemModel::new(model.sense());
    for var in &encoded {
        for k in 0..var.qubits.len() {
            if var.qubits.len() == 1 {
                out.add_binary(var.name.clone());
            } else {
                out.add_binary(format!("{}[{k}]", var.name));
            }
        }
    }
    out.objective.constant = poly.offset();
    for ((i, j), c) in poly.terms() {
        if i == j {
            out.objective.add_linear(i, *c);
        } else {
            out.objective.add_quadratic(i, j, *c);
        }
    }
    let map = VariableMap {
        variables: encoded,
        num_qubits: next,
        negated: false,
    };
    Ok((out, map))
}

/// Full pipeline with binary encoding of integers.
pub fn to_qubo(model: &ProblemModel, penalty: Rational) -> Result<(Qubo, VariableMap)> {
    to_qubo_with(model, penalty, Scheme::Binary)
}

/// Full pipeline; integer variables (slack included) use `scheme`, with
/// validity terms weighted by `penalty`. Maximization is negated so the
/// resulting QUBO is always minimized.
pub fn to_qubo_with(
    model: &ProblemModel,
    penalty: Rational,
    scheme: Scheme,
) -> Result<(Qubo, VariableMap)> {
    let equalities = inequality_to_equality(model)?;
    let unconstrained = equality_to_penalty(&equalities, penalty)?;
    let (binary, mut map) = discretize_variables_with(&unconstrained, scheme, penalty)?;
    let sign = match binary.sense() {
        Sense::Minimize => int(1),
        Sense::Maximize => int(-1),
    };
    let mut q = Qubo::new(binary.variables.len());
    q.set_offset(sign * binary.objective.constant);
    for (&i, c) in &binary.objective.linear {
        q.add(i, i, sign * c);
    }
    for (&(a, b), c) in &binary.objective.quadratic {
        q.add(a, b, sign * c);
    }
    map.negated = binary.sense() == Sense::Maximize;
    Ok((q, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::bits_from_index;

    fn r(n: i128) -> Rational {
        int(n)
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(vec![3, 5, 4], [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn path3() -> WeightedGraph {
        WeightedGraph::new(vec![2, 3, 2], [(0, 1), (1, 2)]).unwrap()
    }

    /// Exhaustive minimum of a small QUBO: (energy, first minimizer).
    fn brute_min(q: &Qubo) -> (Rational, Vec<bool>) {
        let n = q.num_qubits();
        (0..(1u64 << n))
            .map(|i| {
                let x = bits_from_index(i, n);
                (q.evaluate(&x).unwrap(), x)
            })
            .min_by(|a, b| a.0.cmp(&b.0))
            .unwrap()
    }

    #[test]
    fn mwis_model_shapes() {
        let m = mwis_model(&triangle());
        assert_eq!(m.variables().len(), 3);
        assert_eq!(m.constraints().len(), 3);
        assert_eq!(
            m.objective().linear.values().copied().collect::<Vec<_>>(),
            vec![r(3), r(5), r(4)]
        );
        assert_eq!(m.sense(), Sense::Maximize);

        let edgeless = WeightedGraph::new(vec![1, 2], []).unwrap();
        assert!(mwis_model(&edgeless).constraints().is_empty());

        let m = mwis_model(&path3());
        let lhs: Vec<Vec<usize>> = m.constraints().iter().map(|c| c.lhs.keys().copied().collect()).collect();
        assert_eq!(lhs, vec![vec![0, 1], vec![1, 2]]);
        assert!(m.constraints().iter().all(|c| c.rhs == r(1) && c.sense == ConstraintSense::LessEqual));
    }

    #[test]
    fn slack_for_edge_constraint() {
        let mut m = ProblemModel::new(Sense::Maximize);
        let a = m.add_binary("x1");
        let b = m.add_binary("x2");
        m.add_constraint([(a, r(1)), (b, r(1))], ConstraintSense::LessEqual, r(1)).unwrap();
        let eq = inequality_to_equality(&m).unwrap();
        assert_eq!(eq.variables()[2].kind, VarKind::Integer { lo: 0, hi: 1 });
        assert_eq!(eq.variables()[2].slack_for, Some(0));
        let c = &eq.constraints()[0];
        assert_eq!(c.sense, ConstraintSense::Equal);
        assert_eq!(c.lhs.get(&2), Some(&r(1)));
        assert_eq!(c.rhs, r(1));
    }

    #[test]
    fn slack_for_ge_constraint_is_fixed() {
        let mut m = ProblemModel::new(Sense::Minimize);
        let a = m.add_binary("x1");
        m.add_constraint([(a, r(1))], ConstraintSense::GreaterEqual, r(1)).unwrap();
        let eq = inequality_to_equality(&m).unwrap();
        assert_eq!(eq.variables()[1].kind, VarKind::Integer { lo: 0, hi: 0 });
        assert_eq!(eq.constraints()[0].lhs.get(&1), Some(&r(-1)));
    }

    #[test]
    fn slack_range_from_bounds() {
        let mut m = ProblemModel::new(Sense::Minimize);
        let a = m.add_binary("x1");
        let b = m.add_binary("x2");
        m.add_constraint([(a, r(2)), (b, r(3))], ConstraintSense::LessEqual, r(4)).unwrap();
        let eq = inequality_to_equality(&m).unwrap();
        assert_eq!(eq.variables()[2].kind, VarKind::Integer { lo: 0, hi: 4 });
    }

    #[test]
    fn slack_errors() {
        let mut m = ProblemModel::new(Sense::Minimize);
        let a = m.add_binary("x1");
        m.add_constraint([(a, Rational::new(1, 2))], ConstraintSense::LessEqual, r(1)).unwrap();
        assert!(matches!(inequality_to_equality(&m), Err(Error::Transform(_))));

        let mut m = ProblemModel::new(Sense::Minimize);
        let a = m.add_binary("x1");
        m.add_constraint([(a, r(1))], ConstraintSense::GreaterEqual, r(2)).unwrap();
        assert!(matches!(inequality_to_equality(&m), Err(Error::Transform(_))));
    }

    #[test]
    fn penalty_for_maximize() {
        let mut m = ProblemModel::new(Sense::Maximize);
        let a = m.add_binary("x1");
        let b = m.add_binary("x2");
        m.add_linear(a, r(3)).unwrap();
        m.add_constraint([(a, r(1)), (b, r(1))], ConstraintSense::Equal, r(1)).unwrap();
        let p = equality_to_penalty(&m, r(10)).unwrap();
        assert!(p.constraints().is_empty());
        for x1 in 0..=1 {
            for x2 in 0..=1 {
                let expected = r(3 * x1 as i128) - r(10) * r((x1 + x2 - 1) as i128).pow(2);
                assert_eq!(p.evaluate(&[x1, x2]).unwrap(), expected);
            }
        }
    }

    #[test]
    fn penalty_identity_and_minimize() {
        let mut m = ProblemModel::new(Sense::Minimize);
        let a = m.add_binary("x1");
        m.add_linear(a, r(1)).unwrap();
        assert_eq!(equality_to_penalty(&m, r(5)).unwrap(), m);

        m.add_constraint([(a, r(1))], ConstraintSense::Equal, r(1)).unwrap();
        let p = equality_to_penalty(&m, r(5)).unwrap();
        assert_eq!(p.evaluate(&[0]).unwrap(), r(5));
        assert_eq!(p.evaluate(&[1]).unwrap(), r(1));

        assert!(matches!(equality_to_penalty(&m, r(0)), Err(Error::InvalidParameter(_))));
        assert!(equality_to_penalty(&m, r(-1)).is_err());
    }

    #[test]
    fn penalty_requires_equalities() {
        let m = mwis_model(&triangle());
        assert!(matches!(equality_to_penalty(&m, r(1)), Err(Error::Transform(_))));
    }

    fn single_integer(lo: i64, hi: i64) -> ProblemModel {
        let mut m = ProblemModel::new(Sense::Minimize);
        let y = m.add_integer("y", lo, hi).unwrap();
        m.add_linear(y, r(1)).unwrap();
        m
    }

    #[test]
    fn discretize_single_bit() {
        let (binary, map) = discretize_variables(&single_integer(0, 1)).unwrap();
        assert_eq!(map.num_qubits(), 1);
        assert_eq!(binary.objective().linear.get(&0), Some(&r(1)));
        assert_eq!(map.decode(&[true]).unwrap(), vec![1]);
    }

    #[test]
    fn discretize_three_bits_with_clamp() {
        let (binary, map) = discretize_variables(&single_integer(0, 4)).unwrap();
        assert_eq!(map.num_qubits(), 3);
        let coefficients: Vec<_> = binary.objective().linear.values().copied().collect();
        assert_eq!(coefficients, vec![r(1), r(2), r(4)]);
        assert_eq!(map.decode(&[true, false, true]).unwrap(), vec![4]);
        assert_eq!(map.decode(&[true, true, true]).unwrap(), vec![4]);
        assert_eq!(map.decode(&[true, true, false]).unwrap(), vec![3]);
    }

    #[test]
    fn discretize_with_offset() {
        let (binary, map) = discretize_variables(&single_integer(2, 3)).unwrap();
        assert_eq!(map.num_qubits(), 1);
        assert_eq!(binary.objective().constant, r(2));
        assert_eq!(map.decode(&[false]).unwrap(), vec![2]);
        assert_eq!(map.decode(&[true]).unwrap(), vec![3]);
    }

    #[test]
    fn discretize_rejects_constraints() {
        assert!(discretize_variables(&mwis_model(&triangle())).is_err());
    }

    #[test]
    fn discretize_squares_integers() {
        // minimize (y - 3)^2 for y in [0, 5]
        let mut m = ProblemModel::new(Sense::Minimize);
        let y = m.add_integer("y", 0, 5).unwrap();
        m.add_quadratic(y, y, r(1)).unwrap();
        m.add_linear(y, r(-6)).unwrap();
        m.add_constant(r(9));
        for scheme in [Scheme::Binary, Scheme::OneHot, Scheme::DomainWall] {
            let (binary, map) = discretize_variables_with(&m, scheme, r(100)).unwrap();
            let n = map.num_qubits();
            let (value, _) = (0..(1u64 << n))
                .map(|i| {
                    let x = bits_from_index(i, n);
                    let vals: Vec<i64> = x.iter().map(|&b| b as i64).collect();
                    (binary.evaluate(&vals).unwrap(), x)
                })
                .min_by(|a, b| a.0.cmp(&b.0))
                .unwrap();
            assert_eq!(value, r(0), "{scheme}");
            for v in 0..=5 {
                let x = map.encode(&[v]).unwrap();
                let vals: Vec<i64> = x.iter().map(|&b| b as i64).collect();
                assert_eq!(binary.evaluate(&vals).unwrap(), r(((v - 3) * (v - 3)) as i128), "{scheme} {v}");
                assert_eq!(map.decode(&x).unwrap(), vec![v]);
            }
        }
    }

    #[test]
    fn to_qubo_triangle() {
        let (q, map) = to_qubo(&mwis_model(&triangle()), r(11)).unwrap();
        assert_eq!(q.num_qubits(), 6);
        assert_eq!(map.variables().iter().filter(|v| v.slack).count(), 3);
        let (energy, x) = brute_min(&q);
        assert_eq!(map.objective_value(energy), r(5));
        assert_eq!(map.decode_original(&x).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn to_qubo_unconstrained() {
        let mut m = ProblemModel::new(Sense::Maximize);
        let a = m.add_binary("x1");
        m.add_linear(a, r(3)).unwrap();
        let (q, map) = to_qubo(&m, r(1)).unwrap();
        assert_eq!(q.num_qubits(), 1);
        assert_eq!(q.get(0, 0), r(-3));
        assert!(map.negated());
    }

    #[test]
    fn to_qubo_path() {
        let (q, map) = to_qubo(&mwis_model(&path3()), r(7)).unwrap();
        assert_eq!(q.num_qubits(), 5);
        let (energy, x) = brute_min(&q);
        assert_eq!(map.objective_value(energy), r(4));
        assert_eq!(map.decode_original(&x).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn edge_penalty_is_feasibility_preserving() {
        // (x_i + x_j + y - 1)^2 minimized over y is zero iff x_i + x_j <= 1
        let g = WeightedGraph::new(vec![1, 1], [(0, 1)]).unwrap();
        let (q, map) = to_qubo(&mwis_model(&g), r(10)).unwrap();
        for xi in 0..=1 {
            for xj in 0..=1 {
                let best = (0..=1)
                    .map(|y| {
                        let x = map.encode(&[xi, xj, y]).unwrap();
                        map.objective_value(q.evaluate(&x).unwrap())
                    })
                    .max()
                    .unwrap();
                let expected = if xi + xj <= 1 { r((xi + xj) as i128) } else { r(2 - 10) };
                assert_eq!(best, expected, "x=({xi},{xj})");
            }
        }
    }

    #[test]
    fn alternative_encodings_agree() {
        let g = WeightedGraph::new(vec![2, 3, 2, 4], [(0, 1), (1, 2), (2, 3)]).unwrap();
        let model = mwis_model(&g);
        for scheme in [Scheme::Binary, Scheme::OneHot, Scheme::DomainWall] {
            let (q, map) = to_qubo_with(&model, r(9), scheme).unwrap();
            let (energy, x) = brute_min(&q);
            assert_eq!(map.objective_value(energy), r(7), "{scheme}");
            let chosen: Vec<bool> = map.decode_original(&x).unwrap().iter().map(|&v| v == 1).collect();
            let sol = crate::qubo::decode_mwis(&g, &chosen).unwrap();
            assert!(sol.feasible);
            assert_eq!(sol.weight, 7);
        }
    }

    #[test]
    fn pipeline_is_deterministic() {
        let g = crate::graph::generate_random_graph(8, 0.5, 3).unwrap();
        let a = to_qubo(&mwis_model(&g), r(17)).unwrap();
        let b = to_qubo(&mwis_model(&g), r(17)).unwrap();
        assert_eq!(a, b);
    }
}
