//! Rényi entropies, participation ratio and elementary symmetric functions of
//! probability vectors. All entropies are in nats.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Components below this count as exactly zero when counting the rank
/// (the boundary of the discontinuous `H_0`).
pub const ZERO_THRESHOLD: f64 = 1e-12;
/// Allowed deviation of `Σ x_i` from one.
pub const SUM_TOL: f64 = 1e-12;
/// Orders this close to one use the Shannon formula.
pub const SHANNON_WINDOW: f64 = 1e-6;
/// Finite orders above this are evaluated in log-space.
pub const LARGE_ORDER: f64 = 1e3;

/// Non-negative vector with unit sum, in any order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates non-negativity and unit sum. Round-off negatives in
    /// `(-ZERO_THRESHOLD, 0)` are clamped to zero.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty probability vector".into()));
        }
        let mut entries = entries;
        for x in entries.iter_mut() {
            if !x.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite component {x}")));
            }
            if *x < 0.0 {
                if *x > -ZERO_THRESHOLD {
                    *x = 0.0;
                } else {
                    return Err(Error::InvalidInput(format!("negative component {x}")));
                }
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidInput(format!("components sum to {sum}, not 1")));
        }
        Ok(Self(entries))
    }

    /// Rescales a non-negative vector to unit sum.
    pub fn normalized(entries: Vec<f64>) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        Self::new(entries.into_iter().map(|x| x / sum).collect())
    }

    /// The flat vector `(1/n, ..., 1/n)`.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// `(1, 0, ..., 0)`.
    pub fn pure(n: usize) -> Self {
        let mut v = vec![0.0; n];
        v[0] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Components sorted descending (stable).
    pub fn sorted_desc(&self) -> Vec<f64> {
        sorted_desc(&self.0)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Number of components above [`ZERO_THRESHOLD`].
    pub fn rank(&self) -> usize {
        self.0.iter().filter(|&&x| x >= ZERO_THRESHOLD).count()
    }

    /// Outer product `x ⊗ y`, flattened row-major.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&a| other.0.iter().map(move |&b| a * b))
                .collect(),
        )
    }
}

impl AsRef<[f64]> for ProbabilityVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for ProbabilityVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Self::new(v).map_err(serde::de::Error::custom)
    }
}

/// Stable descending sort.
pub fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Rényi order α ∈ [0, ∞].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyOrder(f64);

impl EntropyOrder {
    pub const ZERO: Self = Self(0.0);
    pub const HALF: Self = Self(0.5);
    pub const ONE: Self = Self(1.0);
    pub const TWO: Self = Self(2.0);
    pub const INFINITY: Self = Self(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EntropyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for EntropyOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Self::INFINITY);
        }
        let a: f64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad entropy order {s:?}")))?;
        Self::new(a)
    }
}

/// Finite orders serialize as numbers, `∞` as the string `"inf"`.
impl Serialize for EntropyOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for EntropyOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Self::new(a),
            Raw::Text(t) => t.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Shannon entropy `-Σ x ln x` with `0 ln 0 = 0`.
pub fn shannon_entropy(x: &ProbabilityVector) -> f64 {
    -x.as_slice()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Rényi entropy `H_α(x) = ln(Σ x_i^α) / (1 − α)` with its limits at
/// α = 0 (log rank), 1 (Shannon) and ∞ (`−ln max x`).
pub fn renyi_entropy(x: &ProbabilityVector, alpha: EntropyOrder) -> f64 {
    let a = alpha.value();
    let h = if a == 0.0 {
        (x.rank().max(1) as f64).ln()
    } else if (a - 1.0).abs() <= SHANNON_WINDOW {
        shannon_entropy(x)
    } else if a.is_infinite() {
        -x.max().ln()
    } else if a > LARGE_ORDER {
        let m = x.max();
        let rest: f64 = x
            .as_slice()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| (p / m).powf(a))
            .sum();
        (a * m.ln() + rest.ln()) / (1.0 - a)
    } else {
        let s: f64 = x
            .as_slice()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p.powf(a))
            .sum();
        s.ln() / (1.0 - a)
    };
    // round-off can push the boundary values a hair outside [0, ln N]
    h.clamp(0.0, (x.len() as f64).ln())
}

/// Inverse participation ratio `1 / Σ x_i²`, equal to `exp(H_2)`.
pub fn participation_ratio(x: &ProbabilityVector) -> f64 {
    1.0 / x.as_slice().iter().map(|p| p * p).sum::<f64>()
}

/// Elementary symmetric polynomial `e_k(x)`: the sum over all k-subsets of
/// the products of their components.
pub fn elementary_symmetric(x: &ProbabilityVector, k: usize) -> Result<f64> {
    let n = x.len();
    if k < 2 || k > n {
        return Err(Error::BadOrder { k, n });
    }
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &p in x.as_slice() {
        for j in (1..=k).rev() {
            e[j] += p * e[j - 1];
        }
    }
    Ok(e[k])
}
