//! QUBO and Ising representations with exact energies.
//!
//! A [`Qubo`] is minimized: `E(x) = sum_{i<=j} Q_ij x_i x_j + offset` over
//! `x in {0,1}^n`, with diagonal entries acting as linear terms.
//!
//! An [`IsingModel`] uses `H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + offset`
//! over `s in {-1,+1}^n`. The two are related by `s_i = 2 x_i - 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::graph::WeightedGraph;
use crate::rational::{self, int, Rational};
use crate::{Error, Result};

/// Upper-triangular quadratic pseudo-boolean function, always minimized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qubo {
    n: usize,
    coefficients: BTreeMap<(usize, usize), Rational>,
    offset: Rational,
}

impl Qubo {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            coefficients: BTreeMap::new(),
            offset: Rational::zero(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> Rational {
        self.offset
    }

    pub fn set_offset(&mut self, offset: Rational) {
        self.offset = offset;
    }

    pub fn add_offset(&mut self, value: Rational) {
        self.offset += value;
    }

    /// Adds `value` to the `(i, j)` coefficient; order of `i` and `j` is irrelevant.
    ///
    /// Panics if either index is out of range.
    pub fn add(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i < self.n && j < self.n, "qubit index out of range");
        if value.is_zero() {
            return;
        }
        let key = (i.min(j), i.max(j));
        let entry = self.coefficients.entry(key).or_insert_with(Rational::zero);
        *entry += value;
        if entry.is_zero() {
            self.coefficients.remove(&key);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.coefficients
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    /// Non-zero coefficients in `(i, j)` order with `i <= j`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.coefficients.iter().map(|(&k, v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty() && self.offset.is_zero()
    }

    /// Adds every term of `other` into `self`. `other` may be smaller.
    pub fn add_qubo(&mut self, other: &Qubo) -> Result<()> {
        if other.n > self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        for ((i, j), v) in other.terms() {
            self.add(i, j, *v);
        }
        self.offset += other.offset;
        Ok(())
    }

    pub fn scaled(&self, factor: Rational) -> Qubo {
        let mut out = Qubo::new(self.n);
        for ((i, j), v) in self.terms() {
            out.add(i, j, v * factor);
        }
        out.offset = self.offset * factor;
        out
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(self
            .terms()
            .filter(|((i, j), _)| x[*i] && x[*j])
            .fold(self.offset, |acc, (_, v)| acc + v))
    }
}

/// `x^T Q x + offset` in exact arithmetic.
pub fn evaluate_qubo(q: &Qubo, x: &[bool]) -> Result<Rational> {
    q.evaluate(x)
}

/// Ising model with the sign convention `H = -sum J s s - sum h s + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingModel {
    h: Vec<Rational>,
    couplings: BTreeMap<(usize, usize), Rational>,
    offset: Rational,
}

impl IsingModel {
    pub fn new(n: usize) -> Self {
        Self {
            h: vec![Rational::zero(); n],
            couplings: BTreeMap::new(),
            offset: Rational::zero(),
        }
    }

    pub fn num_spins(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[Rational] {
        &self.h
    }

    pub fn offset(&self) -> Rational {
        self.offset
    }

    pub fn set_offset(&mut self, offset: Rational) {
        self.offset = offset;
    }

    pub fn add_field(&mut self, i: usize, value: Rational) {
        self.h[i] += value;
    }

    /// Adds to the coupling `J_ij`. Panics on `i == j` or out-of-range indices.
    pub fn add_coupling(&mut self, i: usize, j: usize, value: Rational) {
        assert!(i != j, "Ising models have no self-couplings");
        assert!(i < self.h.len() && j < self.h.len(), "spin index out of range");
        if value.is_zero() {
            return;
        }
        let key = (i.min(j), i.max(j));
        let entry = self.couplings.entry(key).or_insert_with(Rational::zero);
        *entry += value;
        if entry.is_zero() {
            self.couplings.remove(&key);
        }
    }

    pub fn coupling(&self, i: usize, j: usize) -> Rational {
        self.couplings
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    pub fn couplings(&self) -> impl Iterator<Item = ((usize, usize), &Rational)> {
        self.couplings.iter().map(|(&k, v)| (k, v))
    }

    pub fn evaluate(&self, s: &[i8]) -> Result<Rational> {
        if s.len() != self.h.len() {
            return Err(Error::LengthMismatch {
                expected: self.h.len(),
                actual: s.len(),
            });
        }
        if let Some(&bad) = s.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSpin(bad));
        }
        let mut energy = self.offset;
        for ((i, j), v) in self.couplings() {
            energy -= v * int((s[i] * s[j]) as i128);
        }
        for (hi, &si) in self.h.iter().zip(s) {
            energy -= hi * int(si as i128);
        }
        Ok(energy)
    }
}

pub fn evaluate_ising(m: &IsingModel, s: &[i8]) -> Result<Rational> {
    m.evaluate(s)
}

/// `s_i = 2 x_i - 1`.
pub fn spins_from_bits(x: &[bool]) -> Vec<i8> {
    x.iter().map(|&b| if b { 1 } else { -1 }).collect()
}

/// `x_i = (s_i + 1) / 2`.
pub fn bits_from_spins(s: &[i8]) -> Vec<bool> {
    s.iter().map(|&v| v > 0).collect()
}

/// Substitutes `x_i = (s_i + 1)/2`; energies agree on every assignment.
pub fn qubo_to_ising(q: &Qubo) -> IsingModel {
    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);
    let mut m = IsingModel::new(q.num_qubits());
    let mut offset = q.offset();
    for ((i, j), &v) in q.terms() {
        if i == j {
            // v (s+1)/2: -h s term with h = -v/2
            m.add_field(i, -v * half);
            offset += v * half;
        } else {
            // v (s_i s_j + s_i + s_j + 1)/4
            m.add_coupling(i, j, -v * quarter);
            m.add_field(i, -v * quarter);
            m.add_field(j, -v * quarter);
            offset += v * quarter;
        }
    }
    m.set_offset(offset);
    m
}

/// Substitutes `s_i = 2 x_i - 1`; inverse of [`qubo_to_ising`].
pub fn ising_to_qubo(m: &IsingModel) -> Qubo {
    let two = int(2);
    let four = int(4);
    let mut q = Qubo::new(m.num_spins());
    let mut offset = m.offset();
    for ((i, j), &v) in m.couplings() {
        // -J (4 x_i x_j - 2 x_i - 2 x_j + 1)
        q.add(i, j, -v * four);
        q.add(i, i, v * two);
        q.add(j, j, v * two);
        offset -= v;
    }
    for (i, &v) in m.h().iter().enumerate() {
        // -h (2x - 1)
        q.add(i, i, -v * two);
        offset += v;
    }
    q.set_offset(offset);
    q
}

/// Penalty MWIS formulation with one qubit per vertex: minimize
/// `-sum a_i x_i + p * sum_{(i,j) in E} x_i x_j`.
pub fn mwis_direct_qubo(g: &WeightedGraph, penalty: Rational) -> Result<Qubo> {
    if penalty <= Rational::zero() {
        return Err(Error::InvalidParameter(format!(
            "penalty must be positive, got {}",
            rational::format(&penalty)
        )));
    }
    let mut q = Qubo::new(g.vertex_count());
    for (i, &w) in g.weights().iter().enumerate() {
        q.add(i, i, -int(w as i128));
    }
    for &(u, v) in g.edges() {
        q.add(u, v, penalty);
    }
    Ok(q)
}

/// `max_i a_i * max_i deg(i) + 1`.
pub fn default_penalty(g: &WeightedGraph) -> u64 {
    g.max_weight() * g.max_degree() as u64 + 1
}

/// Selected vertex set, its weight and whether it is independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwisSolution {
    pub vertices: Vec<usize>,
    pub weight: u64,
    pub feasible: bool,
}

pub fn decode_mwis(g: &WeightedGraph, x: &[bool]) -> Result<MwisSolution> {
    if x.len() != g.vertex_count() {
        return Err(Error::LengthMismatch {
            expected: g.vertex_count(),
            actual: x.len(),
        });
    }
    let vertices: Vec<usize> = (0..x.len()).filter(|&i| x[i]).collect();
    let weight = vertices.iter().map(|&i| g.weight(i)).sum();
    let feasible = g.edges().iter().all(|&(u, v)| !(x[u] && x[v]));
    Ok(MwisSolution {
        vertices,
        weight,
        feasible,
    })
}

/// Writes the QUBO text format: `n <qubits>`, optional `offset <value>`,
/// then `<i> <j> <coeff>` lines with `i <= j`.
pub fn write_qubo(q: &Qubo) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", q.num_qubits());
    if !q.offset().is_zero() {
        let _ = writeln!(out, "offset {}", rational::format(&q.offset()));
    }
    for ((i, j), v) in q.terms() {
        let _ = writeln!(out, "{i} {j} {}", rational::format(v));
    }
    out
}

/// Writes the Ising text format: `n <spins>`, optional `offset`, then
/// `h <i> <value>` and `J <i> <j> <value>` lines. A model with no terms
/// still gets one zero field line so it reads back as Ising.
pub fn write_ising(m: &IsingModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", m.num_spins());
    if !m.offset().is_zero() {
        let _ = writeln!(out, "offset {}", rational::format(&m.offset()));
    }
    let empty = m.h().iter().all(Zero::is_zero) && m.couplings().next().is_none();
    for (i, v) in m.h().iter().enumerate() {
        if !v.is_zero() || (empty && i == 0) {
            let _ = writeln!(out, "h {i} {}", rational::format(v));
        }
    }
    for ((i, j), v) in m.couplings() {
        let _ = writeln!(out, "J {i} {j} {}", rational::format(v));
    }
    out
}

/// Model read from a QUBO or Ising file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelFile {
    Qubo(Qubo),
    Ising(IsingModel),
}

impl ModelFile {
    pub fn into_qubo(self) -> Qubo {
        match self {
            ModelFile::Qubo(q) => q,
            ModelFile::Ising(m) => ising_to_qubo(&m),
        }
    }
}

/// Upper bound on the qubit count accepted from files.
const MAX_FILE_QUBITS: usize = 1 << 20;

/// Upper bound on the common denominator of a model file and on that
/// denominator times the total absolute coefficient, leaving headroom for
/// conversions and solvers.
pub const MAX_FILE_MAGNITUDE: i128 = 1 << 80;

/// Parses either text format; a file is Ising if it contains `h` or `J` lines.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut n: Option<usize> = None;
    let mut offset: Option<Rational> = None;
    let mut qubo_terms: Vec<(usize, usize, Rational)> = Vec::new();
    let mut fields_h: Vec<(usize, Rational, usize)> = Vec::new();
    let mut ising_terms: Vec<(usize, usize, Rational, usize)> = Vec::new();

    let value = |field: &str, line: usize| -> Result<Rational> {
        rational::parse(field).map_err(|_| Error::parse(line, format!("invalid coefficient '{field}'")))
    };
    let index = |field: &str, line: usize, n: usize| -> Result<usize> {
        let i: usize = field
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid index '{field}'")))?;
        if i >= n {
            return Err(Error::parse(line, format!("index {i} out of range for {n} qubits")));
        }
        Ok(i)
    };

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed == "c" || trimmed.starts_with("c ") {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if let ["n", count] = fields.as_slice() {
            if n.is_some() {
                return Err(Error::parse(line, "duplicate 'n' line"));
            }
            let count: usize = count
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid qubit count '{count}'")))?;
            if count > MAX_FILE_QUBITS {
                return Err(Error::parse(line, format!("qubit count {count} too large")));
            }
            n = Some(count);
            continue;
        }
        let Some(size) = n else {
            return Err(Error::parse(line, "expected 'n <qubits>' first"));
        };
        match fields.as_slice() {
            ["offset", v] => {
                if offset.replace(value(v, line)?).is_some() {
                    return Err(Error::parse(line, "duplicate offset line"));
                }
            }
            ["h", i, v] => fields_h.push((index(i, line, size)?, value(v, line)?, line)),
            ["J", i, j, v] => {
                let (i, j) = (index(i, line, size)?, index(j, line, size)?);
                if i == j {
                    return Err(Error::parse(line, "Ising coupling on a single spin"));
                }
                ising_terms.push((i, j, value(v, line)?, line));
            }
            [i, j, v] => {
                let (i, j) = (index(i, line, size)?, index(j, line, size)?);
                if i > j {
                    return Err(Error::parse(line, format!("expected i <= j, got {i} > {j}")));
                }
                qubo_terms.push((i, j, value(v, line)?));
            }
            _ => return Err(Error::parse(line, format!("malformed line '{trimmed}'"))),
        }
    }

    let Some(n) = n else {
        return Err(Error::parse(0, "missing 'n <qubits>' line"));
    };
    let offset = offset.unwrap_or_else(Rational::zero);
    let values = qubo_terms
        .iter()
        .map(|t| &t.2)
        .chain(fields_h.iter().map(|t| &t.1))
        .chain(ising_terms.iter().map(|t| &t.2))
        .chain(std::iter::once(&offset));
    if !rational::scaled_magnitude(values).is_some_and(|m| m <= MAX_FILE_MAGNITUDE) {
        return Err(Error::parse(0, "coefficients too large for exact arithmetic"));
    }
    let is_ising = !fields_h.is_empty() || !ising_terms.is_empty();
    if is_ising {
        if !qubo_terms.is_empty() {
            return Err(Error::parse(0, "file mixes QUBO and Ising lines"));
        }
        let mut m = IsingModel::new(n);
        for (i, v, _) in fields_h {
            m.add_field(i, v);
        }
        for (i, j, v, _) in ising_terms {
            m.add_coupling(i, j, v);
        }
        m.set_offset(offset);
        Ok(ModelFile::Ising(m))
    } else {
        let mut q = Qubo::new(n);
        for (i, j, v) in qubo_terms {
            q.add(i, j, v);
        }
        q.set_offset(offset);
        Ok(ModelFile::Qubo(q))
    }
}

pub fn parse_qubo(text: &str) -> Result<Qubo> {
    match parse_model(text)? {
        ModelFile::Qubo(q) => Ok(q),
        ModelFile::Ising(_) => Err(Error::parse(0, "expected a QUBO file, found Ising lines")),
    }
}

pub fn parse_ising(text: &str) -> Result<IsingModel> {
    match parse_model(text)? {
        ModelFile::Ising(m) => Ok(m),
        // A QUBO file with no terms is also a valid empty Ising model.
        ModelFile::Qubo(q) if q.terms().next().is_none() => {
            let mut m = IsingModel::new(q.num_qubits());
            m.set_offset(q.offset());
            Ok(m)
        }
        ModelFile::Qubo(_) => Err(Error::parse(0, "expected an Ising file, found QUBO lines")),
    }
}

/// All assignments of `n` bits in index order, bit `i` of the index = qubit `i`.
pub fn bits_from_index(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (index >> i) & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(vec![3, 5, 4], [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn evaluate_qubo_examples() {
        let mut q = Qubo::new(1);
        q.add(0, 0, int(-3));
        assert_eq!(evaluate_qubo(&q, &[true]).unwrap(), int(-3));

        let mut q = Qubo::new(2);
        q.add(0, 1, int(11));
        q.add(0, 0, int(-3));
        q.add(1, 1, int(-5));
        assert_eq!(evaluate_qubo(&q, &[true, true]).unwrap(), int(3));

        q.set_offset(r(7, 2));
        assert_eq!(evaluate_qubo(&q, &[false, false]).unwrap(), r(7, 2));
        assert!(matches!(
            evaluate_qubo(&q, &[true]),
            Err(Error::LengthMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn add_normalizes_order_and_drops_zeros() {
        let mut q = Qubo::new(3);
        q.add(2, 0, int(4));
        assert_eq!(q.get(0, 2), int(4));
        q.add(0, 2, int(-4));
        assert!(q.terms().next().is_none());
    }

    #[test]
    fn evaluate_ising_examples() {
        let mut m = IsingModel::new(1);
        m.add_field(0, int(1));
        assert_eq!(evaluate_ising(&m, &[1]).unwrap(), int(-1));

        let mut m = IsingModel::new(2);
        m.add_coupling(0, 1, int(1));
        assert_eq!(evaluate_ising(&m, &[1, -1]).unwrap(), int(1));
        assert_eq!(evaluate_ising(&m, &[-1, 1]).unwrap(), int(1));
        assert_eq!(evaluate_ising(&m, &[1, 1]).unwrap(), evaluate_ising(&m, &[-1, -1]).unwrap());
        assert_eq!(evaluate_ising(&m, &[1, 0]), Err(Error::InvalidSpin(0)));
    }

    #[test]
    fn single_diagonal_term_converts() {
        let mut q = Qubo::new(1);
        q.add(0, 0, int(1));
        let m = qubo_to_ising(&q);
        assert_eq!(m.offset(), r(1, 2));
        assert_eq!(m.h(), &[r(-1, 2)]);
        assert_eq!(m.couplings().count(), 0);
        assert_eq!(m.evaluate(&[-1]).unwrap(), int(0));
        assert_eq!(m.evaluate(&[1]).unwrap(), int(1));
        assert_eq!(ising_to_qubo(&m), q);
    }

    #[test]
    fn zero_qubo_converts_to_zero_ising() {
        let m = qubo_to_ising(&Qubo::new(4));
        assert_eq!(m, IsingModel::new(4));
        assert_eq!(ising_to_qubo(&m), Qubo::new(4));
    }

    #[test]
    fn direct_mwis_qubo_on_triangle() {
        let q = mwis_direct_qubo(&triangle(), int(11)).unwrap();
        assert_eq!(q.get(0, 0), int(-3));
        assert_eq!(q.get(1, 1), int(-5));
        assert_eq!(q.get(2, 2), int(-4));
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert_eq!(q.get(i, j), int(11));
        }
        let (best, energy) = (0..8u64)
            .map(|idx| {
                let x = bits_from_index(idx, 3);
                let e = q.evaluate(&x).unwrap();
                (x, e)
            })
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        assert_eq!(best, vec![false, true, false]);
        assert_eq!(energy, int(-5));
        assert!(mwis_direct_qubo(&triangle(), int(0)).is_err());
    }

    #[test]
    fn default_penalty_examples() {
        assert_eq!(default_penalty(&triangle()), 11);
        let edgeless = WeightedGraph::new(vec![9, 2], []).unwrap();
        assert_eq!(default_penalty(&edgeless), 1);
        let star = WeightedGraph::new(vec![2; 5], [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(default_penalty(&star), 9);
    }

    #[test]
    fn decode_examples() {
        let sol = decode_mwis(&triangle(), &[true, true, false]).unwrap();
        assert_eq!((sol.weight, sol.feasible), (8, false));
        let path = WeightedGraph::new(vec![2, 3, 2], [(0, 1), (1, 2)]).unwrap();
        let sol = decode_mwis(&path, &[true, false, true]).unwrap();
        assert_eq!((sol.vertices.as_slice(), sol.weight, sol.feasible), (&[0, 2][..], 4, true));
        let sol = decode_mwis(&path, &[false; 3]).unwrap();
        assert_eq!((sol.vertices.len(), sol.weight, sol.feasible), (0, 0, true));
        assert!(decode_mwis(&path, &[true]).is_err());
    }

    #[test]
    fn file_formats() {
        let mut q = Qubo::new(3);
        q.add(0, 0, int(-3));
        q.add(0, 2, r(5, 2));
        q.set_offset(r(-1, 4));
        let text = write_qubo(&q);
        assert_eq!(text, "n 3\noffset -0.25\n0 0 -3\n0 2 2.5\n");
        assert_eq!(parse_qubo(&text).unwrap(), q);

        let m = qubo_to_ising(&q);
        let text = write_ising(&m);
        assert_eq!(parse_ising(&text).unwrap(), m);
        assert_eq!(parse_model(&text).unwrap().into_qubo(), q);

        assert!(matches!(parse_qubo("n 2\n1 0 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_qubo("n 2\n0 2 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_qubo("0 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_qubo("n 2\n0 0 x\n").is_err());
        assert!(parse_model("n 2\n0 0 1\nh 0 1\n").is_err());

        // Summing these would overflow the exact representation.
        let huge = "n 1\n0 0 -8880/340784720\n0 0 -80888888888888888888888886660\n";
        assert!(matches!(parse_model(huge), Err(Error::Parse { line: 0, .. })));
        let tiny = "n 1\n0 0 8/888888888888883\n0 0 8/888888888888888888888032\n";
        assert!(matches!(parse_model(tiny), Err(Error::Parse { line: 0, .. })));
        let empty = IsingModel::new(2);
        assert_eq!(parse_model(&write_ising(&empty)).unwrap(), ModelFile::Ising(empty));
    }

    fn arb_qubo(max_n: usize) -> impl Strategy<Value = Qubo> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, -20i128..20, 1i128..5), 0..(2 * n * n)).prop_map(
                move |terms| {
                    let mut q = Qubo::new(n);
                    for (i, j, num, den) in terms {
                        q.add(i, j, r(num, den));
                    }
                    q
                },
            )
        })
    }

    proptest! {
        #[test]
        fn ising_conversion_preserves_energy(q in arb_qubo(8)) {
            let m = qubo_to_ising(&q);
            let n = q.num_qubits();
            for idx in 0..(1u64 << n) {
                let x = bits_from_index(idx, n);
                prop_assert_eq!(q.evaluate(&x).unwrap(), m.evaluate(&spins_from_bits(&x)).unwrap());
            }
            prop_assert_eq!(ising_to_qubo(&m), q);
        }

        #[test]
        fn text_format_round_trip(q in arb_qubo(6)) {
            prop_assert_eq!(parse_qubo(&write_qubo(&q)).unwrap(), q.clone());
            let m = qubo_to_ising(&q);
            prop_assert_eq!(parse_model(&write_ising(&m)).unwrap(), ModelFile::Ising(m));
        }

        #[test]
        fn positive_scaling_keeps_argmin(q in arb_qubo(6), factor in 1i128..50) {
            let scaled = q.scaled(int(factor));
            let n = q.num_qubits();
            let energies: Vec<_> = (0..(1u64 << n)).map(|i| q.evaluate(&bits_from_index(i, n)).unwrap()).collect();
            let scaled_energies: Vec<_> = (0..(1u64 << n)).map(|i| scaled.evaluate(&bits_from_index(i, n)).unwrap()).collect();
            let min = energies.iter().min().unwrap();
            let smin = scaled_energies.iter().min().unwrap();
            for (a, b) in energies.iter().zip(&scaled_energies) {
                prop_assert_eq!(a == min, b == smin);
            }
        }
    }
}
