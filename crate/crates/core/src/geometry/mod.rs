//! Orbit distances in the Weyl chamber and the polytope of spectra reachable
//! by random fields.
//!
//! For sorted spectra the Euclidean distance is the smallest Hilbert–Schmidt
//! distance between the unitary orbits of the two density matrices, and
//! `arccos Σ√(λ_k μ_k)` is the smallest Fubini–Study distance between the
//! local-unitary orbits of two pure states.

mod hull;
mod polytope;

pub use polytope::{future_polytope, Combinatorics, Face, Polytope, FULL_LIMIT, VERTEX_LIMIT};

use crate::error::{Error, Result};
use crate::schmidt::SchmidtVector;
use crate::spectra::ProbabilityVector;

fn check_sorted(x: &[f64]) -> Result<()> {
    if x.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotSorted);
    }
    Ok(())
}

/// Euclidean distance between two spectra in the same Weyl chamber.
pub fn weyl_hs_distance(h: &ProbabilityVector, g: &ProbabilityVector) -> Result<f64> {
    if h.len() != g.len() {
        return Err(Error::LengthMismatch {
            left: h.len(),
            right: g.len(),
        });
    }
    check_sorted(h.as_slice())?;
    check_sorted(g.as_slice())?;
    Ok(h.as_slice()
        .iter()
        .zip(g.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// `arccos Σ_k √(λ_k μ_k)` with both vectors sorted descending.
pub fn weyl_fs_distance(lambda: &SchmidtVector, mu: &SchmidtVector) -> Result<f64> {
    if lambda.len() != mu.len() {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: mu.len(),
        });
    }
    let overlap: f64 = lambda
        .as_slice()
        .iter()
        .zip(mu.as_slice())
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(overlap.min(1.0).acos())
}

/// `d(x) = (x/6)(3,2,1,0) + ((1−x)/4)(1,1,1,1)`; at `x > 0` the future
/// polytope is a truncated octahedron.
pub fn arch_line_point(x: f64) -> Result<ProbabilityVector> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let v = [3.0, 2.0, 1.0, 0.0].map(|k| x / 6.0 * k + (1.0 - x) / 4.0);
    ProbabilityVector::new(v.to_vec())
}
