//! Pure-state conversion under local operations and classical communication.
//!
//! `ψ → φ` is possible with certainty iff `λψ ≺ λφ`. Otherwise the best
//! success probability is `min_k E_k(ψ)/E_k(φ)` over the tail sums
//! `E_k = Σ_{i≥k} λ_i`. Relative to a reference vector, the Schmidt simplex
//! splits into the states reachable from it, the states that reach it, and
//! the incomparable rest.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorize::majorizes;
use crate::random::rng_for_sample;
use crate::schmidt::{haar_random_state, schmidt_coefficients, SchmidtVector};

/// Sorted vectors closer than this in sup-norm are interconvertible.
pub const INTERCONVERTIBLE_TOL: f64 = 1e-10;
/// Tail sums below this count as zero in the probability formula.
pub const TAIL_ZERO: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Interconvertible,
    Future,
    Past,
    Incomparable,
}

impl CausalClass {
    /// Swaps `Future` and `Past`.
    pub fn reversed(self) -> Self {
        match self {
            CausalClass::Future => CausalClass::Past,
            CausalClass::Past => CausalClass::Future,
            c => c,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CausalClass::Interconvertible => "Interconvertible",
            CausalClass::Future => "Future",
            CausalClass::Past => "Past",
            CausalClass::Incomparable => "Incomparable",
        }
    }
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CausalClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Interconvertible" => Ok(CausalClass::Interconvertible),
            "Future" => Ok(CausalClass::Future),
            "Past" => Ok(CausalClass::Past),
            "Incomparable" => Ok(CausalClass::Incomparable),
            _ => Err(Error::InvalidInput(format!("unknown class {s:?}"))),
        }
    }
}

fn check_lengths(a: &SchmidtVector, b: &SchmidtVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Deterministic conversion `ψ → φ` is possible.
pub fn can_convert(psi: &SchmidtVector, phi: &SchmidtVector) -> Result<bool> {
    majorizes(psi, phi)
}

fn tail_sums(l: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; l.len()];
    let mut acc = 0.0;
    for k in (0..l.len()).rev() {
        acc += l[k];
        out[k] = acc;
    }
    out
}

/// Optimal probability of converting `ψ` into `φ`.
///
/// A tail sum of `φ` that vanishes imposes no constraint. A vanishing tail sum
/// of `ψ` against a nonzero one of `φ` means `φ` has larger Schmidt rank and
/// the probability is zero. Pairs accepted by [`can_convert`] get exactly 1.
pub fn conversion_probability(psi: &SchmidtVector, phi: &SchmidtVector) -> Result<f64> {
    if can_convert(psi, phi)? {
        return Ok(1.0);
    }
    let (ep, ef) = (tail_sums(psi.as_slice()), tail_sums(phi.as_slice()));
    let mut p: f64 = 1.0;
    for (num, den) in ep.iter().zip(&ef).skip(1) {
        if *den < TAIL_ZERO {
            continue;
        }
        if *num < TAIL_ZERO {
            return Ok(0.0);
        }
        p = p.min(num / den);
    }
    Ok(p.clamp(0.0, 1.0 - f64::EPSILON))
}

/// Class of `q` relative to `reference`; `Future` when `reference` can be
/// converted into `q` but not back.
pub fn classify(reference: &SchmidtVector, q: &SchmidtVector) -> Result<CausalClass> {
    check_lengths(reference, q)?;
    let sup = reference
        .as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if sup <= INTERCONVERTIBLE_TOL {
        return Ok(CausalClass::Interconvertible);
    }
    Ok(match (majorizes(reference, q)?, majorizes(q, reference)?) {
        (true, true) => CausalClass::Interconvertible,
        (true, false) => CausalClass::Future,
        (false, true) => CausalClass::Past,
        (false, false) => CausalClass::Incomparable,
    })
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionEstimate {
    pub n: usize,
    pub samples: usize,
    pub fraction: f64,
    pub std_error: f64,
}

/// Fraction of Haar-random pairs of `N × N` states that are incomparable.
/// Pair `i` is drawn from the generator seeded with `seed + i`.
pub fn incomparability_fraction(n: usize, samples: usize, seed: u64) -> Result<FractionEstimate> {
    if n < 2 || samples == 0 {
        return Err(Error::InvalidInput(format!("need N >= 2 and samples >= 1, got N = {n}, samples = {samples}")));
    }
    let mut hits = 0usize;
    for i in 0..samples {
        let mut rng = rng_for_sample(seed, i as u64);
        let a = schmidt_coefficients(&haar_random_state(n, n, &mut rng))?;
        let b = schmidt_coefficients(&haar_random_state(n, n, &mut rng))?;
        if classify(&a, &b)? == CausalClass::Incomparable {
            hits += 1;
        }
    }
    let f = hits as f64 / samples as f64;
    Ok(FractionEstimate {
        n,
        samples,
        fraction: f,
        std_error: (f * (1.0 - f) / samples as f64).sqrt(),
    })
}
