//! Encodings of an `m`-valued discrete variable onto qubits.
//!
//! | scheme      | qubits            | codeword for value `d`            |
//! |-------------|-------------------|-----------------------------------|
//! | binary      | `floor(log2 m)+1` | little-endian bits of `d`         |
//! | one-hot     | `m`               | single 1 at position `d`          |
//! | domain wall | `m - 1`           | `d` leading ones, then zeros      |
//!
//! Binary codewords above `m - 1` decode by clamping to `m - 1`; one-hot and
//! domain-wall codewords can be invalid and come with quadratic validity
//! terms that vanish exactly on valid codewords. Those terms are returned
//! unweighted.
//!
//! One-hot and domain-wall value indicators are linear in the bits, which is
//! what lets an arbitrary table of pairwise interactions compile to
//! quadratic terms ([`pairwise_interaction_terms`]). For domain wall the
//! indicator of value `d` is `b_d - b_{d+1}` with virtual boundary bits
//! `b_0 = 1` and `b_m = 0`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::qubo::Qubo;
use crate::rational::{int, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Binary,
    OneHot,
    DomainWall,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Scheme::Binary),
            "one_hot" | "one-hot" | "onehot" => Ok(Scheme::OneHot),
            "domain_wall" | "domain-wall" | "domainwall" => Ok(Scheme::DomainWall),
            other => Err(Error::InvalidParameter(format!("unknown encoding '{other}'"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Binary => "binary",
            Scheme::OneHot => "one_hot",
            Scheme::DomainWall => "domain_wall",
        })
    }
}

/// One discrete variable placed on a contiguous qubit range of a host QUBO.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingSpec {
    pub scheme: Scheme,
    /// Number of discrete values.
    pub m: usize,
    /// Index of the first qubit in the host.
    pub first_qubit: usize,
}

impl EncodingSpec {
    pub fn new(scheme: Scheme, m: usize, first_qubit: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("a discrete variable needs at least one value".into()));
        }
        Ok(Self {
            scheme,
            m,
            first_qubit,
        })
    }

    pub fn qubit_count(&self) -> usize {
        match self.scheme {
            Scheme::Binary => bits_for(self.m),
            Scheme::OneHot => self.m,
            Scheme::DomainWall => self.m - 1,
        }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.first_qubit..self.first_qubit + self.qubit_count()
    }

    pub fn encode(&self, d: usize) -> Result<Vec<bool>> {
        match self.scheme {
            Scheme::Binary => binary_encode(d, self.m),
            Scheme::OneHot => one_hot_encode(d, self.m),
            Scheme::DomainWall => domain_wall_encode(d, self.m),
        }
    }

    /// Decoded value and validity flag. Binary codewords are always valid.
    pub fn decode(&self, bits: &[bool]) -> Result<(usize, bool)> {
        if bits.len() != self.qubit_count() {
            return Err(Error::LengthMismatch {
                expected: self.qubit_count(),
                actual: bits.len(),
            });
        }
        Ok(match self.scheme {
            Scheme::Binary => (binary_decode(bits, self.m), true),
            Scheme::OneHot => one_hot_decode(bits),
            Scheme::DomainWall => domain_wall_decode(bits),
        })
    }

    /// Validity penalty on host indices; empty for binary.
    pub fn validity_terms(&self) -> Qubo {
        match self.scheme {
            Scheme::Binary => Qubo::new(self.qubits().end),
            Scheme::OneHot => one_hot_validity_terms(self),
            Scheme::DomainWall => domain_wall_validity_terms(self),
        }
    }

    /// The encoded value as a linear form `constant + sum coef * bit`
    /// (host indices), exact on valid codewords.
    pub fn value_form(&self) -> LinearForm {
        let start = self.first_qubit;
        let terms = match self.scheme {
            Scheme::Binary => (0..self.qubit_count()).map(|k| (start + k, int(1i128 << k))).collect(),
            Scheme::OneHot => (1..self.m).map(|d| (start + d, int(d as i128))).collect(),
            Scheme::DomainWall => (0..self.qubit_count()).map(|k| (start + k, int(1))).collect(),
        };
        LinearForm {
            constant: Rational::zero(),
            terms,
        }
    }

    /// Linear indicator of the variable taking value `d` (valid codewords only).
    fn indicator(&self, d: usize) -> Result<LinearForm> {
        let start = self.first_qubit;
        match self.scheme {
            Scheme::Binary => Err(Error::UnsupportedEncoding(
                "binary value indicators are not linear in the bits".into(),
            )),
            Scheme::OneHot => Ok(LinearForm {
                constant: Rational::zero(),
                terms: vec![(start + d, int(1))],
            }),
            Scheme::DomainWall => {
                // b_k lives on qubit start + k - 1 for k in 1..m
                let mut form = LinearForm::default();
                if d == 0 {
                    form.constant = int(1);
                } else {
                    form.terms.push((start + d - 1, int(1)));
                }
                if d + 1 < self.m {
                    form.terms.push((start + d, int(-1)));
                }
                Ok(form)
            }
        }
    }
}

/// `constant + sum coef * x_qubit`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Rational,
    pub terms: Vec<(usize, Rational)>,
}

impl LinearForm {
    pub fn evaluate(&self, x: &[bool]) -> Rational {
        self.terms
            .iter()
            .filter(|(q, _)| x[*q])
            .fold(self.constant, |acc, (_, c)| acc + c)
    }

    /// Adds `scale * self * other` into `target`, using `x^2 = x`.
    pub fn add_product_into(&self, other: &LinearForm, scale: Rational, target: &mut Qubo) {
        target.add_offset(scale * self.constant * other.constant);
        for &(q, c) in &other.terms {
            target.add(q, q, scale * self.constant * c);
        }
        for &(q, c) in &self.terms {
            target.add(q, q, scale * other.constant * c);
        }
        for &(p, a) in &self.terms {
            for &(q, b) in &other.terms {
                target.add(p, q, scale * a * b);
            }
        }
    }
}

fn bits_for(m: usize) -> usize {
    (usize::BITS - m.leading_zeros()) as usize
}

/// `floor(log2 m) + 1`.
pub fn binary_bits_required(m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidParameter("value count must be at least 1".into()));
    }
    Ok(bits_for(m))
}

pub fn binary_encode(d: usize, m: usize) -> Result<Vec<bool>> {
    let width = binary_bits_required(m)?;
    if d >= m {
        return Err(out_of_range(d, m));
    }
    Ok((0..width).map(|k| (d >> k) & 1 == 1).collect())
}

/// `sum 2^k b_k`, clamped to `m - 1`.
pub fn binary_decode(bits: &[bool], m: usize) -> usize {
    let limit = m.saturating_sub(1);
    let mut value: usize = 0;
    for (k, &b) in bits.iter().enumerate() {
        if b {
            match 1usize.checked_shl(k as u32) {
                Some(bit) if k < usize::BITS as usize => value = value.saturating_add(bit),
                _ => return limit,
            }
        }
    }
    value.min(limit)
}

fn out_of_range(d: usize, m: usize) -> Error {
    Error::InvalidParameter(format!("value {d} out of range for {m} values"))
}

/// `d` leading ones followed by zeros, length `m - 1`.
pub fn domain_wall_encode(d: usize, m: usize) -> Result<Vec<bool>> {
    if m == 0 || d >= m {
        return Err(out_of_range(d, m));
    }
    Ok((0..m - 1).map(|k| k < d).collect())
}

/// Valid iff no 0 is followed by a 1; the value is the number of ones.
pub fn domain_wall_decode(bits: &[bool]) -> (usize, bool) {
    let ones = bits.iter().filter(|&&b| b).count();
    let valid = bits.windows(2).all(|w| w[0] || !w[1]);
    (ones, valid)
}

/// `sum_k b_{k+1} (1 - b_k)`: nearest-neighbour terms counting `01` patterns.
pub fn domain_wall_validity_terms(spec: &EncodingSpec) -> Qubo {
    let range = spec.qubits();
    let mut q = Qubo::new(range.end);
    for k in range.start..range.end.saturating_sub(1) {
        q.add(k + 1, k + 1, int(1));
        q.add(k, k + 1, int(-1));
    }
    q
}

pub fn one_hot_encode(d: usize, m: usize) -> Result<Vec<bool>> {
    if d >= m {
        return Err(out_of_range(d, m));
    }
    Ok((0..m).map(|k| k == d).collect())
}

/// Valid iff exactly one bit is set; the value is the first set position (0 if none).
pub fn one_hot_decode(bits: &[bool]) -> (usize, bool) {
    let value = bits.iter().position(|&b| b).unwrap_or(0);
    let valid = bits.iter().filter(|&&b| b).count() == 1;
    (value, valid)
}

/// `(sum_k b_k - 1)^2`.
pub fn one_hot_validity_terms(spec: &EncodingSpec) -> Qubo {
    let range = spec.qubits();
    let mut q = Qubo::new(range.end);
    q.add_offset(int(1));
    for k in range.clone() {
        q.add(k, k, int(-1));
        for l in (k + 1)..range.end {
            q.add(k, l, int(2));
        }
    }
    q
}

/// Quadratic terms whose value on every pair of valid codewords `(d1, d2)`
/// equals `table[d1][d2]`. Both specs must be one-hot or domain wall and
/// occupy disjoint qubit ranges.
pub fn pairwise_interaction_terms(
    table: &[Vec<Rational>],
    first: &EncodingSpec,
    second: &EncodingSpec,
) -> Result<Qubo> {
    if table.len() != first.m || table.iter().any(|row| row.len() != second.m) {
        return Err(Error::InvalidParameter(format!(
            "interaction table must be {} x {}",
            first.m, second.m
        )));
    }
    let (a, b) = (first.qubits(), second.qubits());
    if a.start < b.end && b.start < a.end {
        return Err(Error::InvalidParameter("the two variables share qubits".into()));
    }
    let mut q = Qubo::new(a.end.max(b.end));
    for (d1, row) in table.iter().enumerate() {
        for (d2, value) in row.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let left = first.indicator(d1)?;
            let right = second.indicator(d2)?;
            left.add_product_into(&right, *value, &mut q);
        }
    }
    Ok(q)
}
