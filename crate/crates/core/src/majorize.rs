//! Majorization order on probability vectors.
//!
//! `x ≺ y` ("x is majorized by y", x is more mixed) holds when every
//! descending prefix sum of `x` is bounded by the matching prefix sum of `y`.
//! The relation only sees the multiset of components, so every routine sorts
//! its inputs descending first and reports positions in that sorted order.
//!
//! Constructive side: [`t_transform_chain`] builds at most `N − 1`
//! two-component mixing steps taking `y` to `x`, and [`horn_unistochastic`]
//! turns such a chain into an orthogonal `U` with `x = |U|²·y`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::ComplexMatrix;
use crate::spectra::{sorted_desc, ProbabilityVector};

/// Absolute slack for prefix-sum comparisons; borderline equalities pass.
pub const MAJORIZATION_TOL: f64 = 1e-10;
/// Coordinates closer than this to their target count as pinned in
/// [`t_transform_chain`].
const PIN_TOL: f64 = 1e-14;

fn check_lengths(x: usize, y: usize) -> Result<()> {
    if x != y {
        return Err(Error::LengthMismatch { left: x, right: y });
    }
    Ok(())
}

fn prefix_sums(x: &[f64]) -> Vec<f64> {
    x.iter()
        .scan(0.0, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Prefix-sum form on sorted inputs, `k = 1..N−1`.
fn majorized_prefix(xs: &[f64], ys: &[f64], slack: f64) -> bool {
    let (px, py) = (prefix_sums(xs), prefix_sums(ys));
    px.iter()
        .zip(&py)
        .take(xs.len().saturating_sub(1))
        .all(|(a, b)| *a <= *b + slack)
}

/// Tail-sum form on sorted inputs: `Σ_{i≥l} x_i ≥ Σ_{i≥l} y_i`, `l = 2..N`.
fn majorized_tail(xs: &[f64], ys: &[f64], slack: f64) -> bool {
    let n = xs.len();
    let (mut tx, mut ty) = (0.0, 0.0);
    for l in (1..n).rev() {
        tx += xs[l];
        ty += ys[l];
        if tx < ty - slack {
            return false;
        }
    }
    true
}

/// `x ≺ y`.
pub fn majorizes(x: &ProbabilityVector, y: &ProbabilityVector) -> Result<bool> {
    check_lengths(x.len(), y.len())?;
    let (xs, ys) = (x.sorted_desc(), y.sorted_desc());
    let prefix = majorized_prefix(&xs, &ys, MAJORIZATION_TOL);
    // the two forms can only disagree within the unit-sum tolerance of the boundary
    debug_assert!(if prefix {
        majorized_tail(&xs, &ys, MAJORIZATION_TOL + 3e-12)
    } else {
        !majorized_tail(&xs, &ys, MAJORIZATION_TOL - 3e-12)
    });
    Ok(prefix)
}

/// Weak submajorization `x ≺_w y`: all `N` descending prefix sums of `x` are
/// bounded by those of `y`. Inputs need not be normalized.
pub fn weakly_submajorized(x: &[f64], y: &[f64]) -> Result<bool> {
    check_lengths(x.len(), y.len())?;
    if let Some(v) = x.iter().chain(y).find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::InvalidInput(format!("negative or NaN component {v}")));
    }
    let (px, py) = (prefix_sums(&sorted_desc(x)), prefix_sums(&sorted_desc(y)));
    Ok(px.iter().zip(&py).all(|(a, b)| *a <= *b + MAJORIZATION_TOL))
}

/// One T-transform: mixes components `i < j` with the bistochastic block
/// `[[t, 1−t], [1−t, t]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTransformStep {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

impl TTransformStep {
    pub fn new(i: usize, j: usize, t: f64) -> Result<Self> {
        if i >= j {
            return Err(Error::InvalidInput(format!("T-step needs i < j, got ({i}, {j})")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(Self { i, j, t })
    }

    pub fn apply(&self, v: &mut [f64]) {
        let (a, b) = (v[self.i], v[self.j]);
        v[self.i] = self.t * a + (1.0 - self.t) * b;
        v[self.j] = (1.0 - self.t) * a + self.t * b;
    }

    /// The full `n × n` matrix of the step.
    pub fn matrix(&self, n: usize) -> BistochasticMatrix {
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            m[k * n + k] = 1.0;
        }
        m[self.i * n + self.i] = self.t;
        m[self.j * n + self.j] = self.t;
        m[self.i * n + self.j] = 1.0 - self.t;
        m[self.j * n + self.i] = 1.0 - self.t;
        BistochasticMatrix { n, entries: m }
    }
}

/// Applies the steps in order to `y`.
pub fn apply_chain(y: &[f64], chain: &[TTransformStep]) -> Vec<f64> {
    let mut v = y.to_vec();
    for step in chain {
        step.apply(&mut v);
    }
    v
}

/// Square non-negative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BistochasticMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl BistochasticMatrix {
    /// Row/column sum tolerance.
    pub const TOL: f64 = 1e-10;

    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::dims(n * n, entries.len()));
        }
        if entries.iter().any(|&v| v.is_nan() || v < -Self::TOL) {
            return Err(Error::InvalidInput("negative entry in bistochastic matrix".into()));
        }
        for k in 0..n {
            let row: f64 = (0..n).map(|j| entries[k * n + j]).sum();
            let col: f64 = (0..n).map(|i| entries[i * n + k]).sum();
            if (row - 1.0).abs() > Self::TOL || (col - 1.0).abs() > Self::TOL {
                return Err(Error::InvalidInput(format!(
                    "row/column {k} sums to {row}/{col}"
                )));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * y[j]).sum())
            .collect()
    }
}

/// Chain of T-transforms taking `y` to `x` (both sorted descending) when
/// `x ≺ y`.
///
/// Each step picks the largest index `j` with `y_j > x_j` and the smallest
/// `k > j` with `y_k < x_k`, and moves `δ = min(y_j − x_j, x_k − y_k)` from
/// `j` to `k`. Every step pins at least one coordinate to its target and
/// pinned coordinates are never touched again, so the chain has at most
/// `N − 1` steps.
pub fn t_transform_chain(x: &ProbabilityVector, y: &ProbabilityVector) -> Result<Vec<TTransformStep>> {
    if !majorizes(x, y)? {
        return Err(Error::NotMajorized);
    }
    let xs = x.sorted_desc();
    let mut cur = y.sorted_desc();
    let n = xs.len();
    let mut chain = Vec::new();
    while chain.len() < n.saturating_sub(1) {
        let Some(j) = (0..n).rev().find(|&i| cur[i] - xs[i] > PIN_TOL) else {
            break;
        };
        let Some(k) = (j + 1..n).find(|&i| xs[i] - cur[i] > PIN_TOL) else {
            break;
        };
        let delta = (cur[j] - xs[j]).min(xs[k] - cur[k]);
        let gap = cur[j] - cur[k];
        let t = (1.0 - delta / gap).clamp(0.0, 1.0);
        let step = TTransformStep { i: j, j: k, t };
        step.apply(&mut cur);
        chain.push(step);
    }
    Ok(chain)
}

/// Orthogonal `U = R_m ⋯ R_1` built from planar rotations with `cos²θ = t`,
/// together with the unistochastic `B_ij = |U_ij|²`.
///
/// For a chain produced by [`t_transform_chain`] the rotations never act on a
/// pair of coordinates that an earlier rotation has coupled, so
/// `diag(U diag(y) Uᵀ)` follows the T-steps exactly and `B·y = x`. Arbitrary
/// chains still yield a unitary `U` and bistochastic `B`.
pub fn horn_unistochastic(
    chain: &[TTransformStep],
    n: usize,
) -> Result<(ComplexMatrix, BistochasticMatrix)> {
    let mut u = ComplexMatrix::identity(n);
    for step in chain {
        if step.j >= n || step.i >= step.j {
            return Err(Error::InvalidInput(format!(
                "T-step ({}, {}) invalid for N = {n}",
                step.i, step.j
            )));
        }
        let (c, s) = (step.t.sqrt(), (1.0 - step.t).sqrt());
        let mut r = ComplexMatrix::identity(n);
        r[(step.i, step.i)] = Complex64::new(c, 0.0);
        r[(step.i, step.j)] = Complex64::new(s, 0.0);
        r[(step.j, step.i)] = Complex64::new(-s, 0.0);
        r[(step.j, step.j)] = Complex64::new(c, 0.0);
        u = r.matmul(&u);
    }
    let entries = u.as_slice().iter().map(|z| z.norm_sqr()).collect();
    let b = BistochasticMatrix::new(n, entries)?;
    Ok((u, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_probability_vector, rng_from_seed};
    use rand::Rng;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    /// `x = B y` for a random product of T-transforms; majorized by construction.
    fn random_majorized_pair(n: usize, rng: &mut impl Rng) -> (ProbabilityVector, ProbabilityVector) {
        let y = random_probability_vector(n, rng);
        let mut x = y.clone();
        for _ in 0..rng.random_range(0..2 * n) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i != j {
                let (i, j) = (i.min(j), i.max(j));
                TTransformStep { i, j, t: rng.random() }.apply(&mut x);
            }
        }
        (ProbabilityVector::normalized(x).unwrap(), ProbabilityVector::new(y).unwrap())
    }

    #[test]
    fn extremes_of_the_order() {
        let y = pv(&[0.6, 0.1, 0.3]);
        assert!(majorizes(&ProbabilityVector::uniform(3), &y).unwrap());
        assert!(majorizes(&y, &ProbabilityVector::pure(3)).unwrap());
        assert!(!majorizes(&ProbabilityVector::pure(3), &y).unwrap());
    }

    #[test]
    fn hand_checked_pair() {
        let x = pv(&[0.4, 0.35, 0.25]);
        let y = pv(&[0.6, 0.3, 0.1]);
        assert!(majorizes(&x, &y).unwrap());
        assert!(!majorizes(&y, &x).unwrap());
        // order of components is irrelevant
        assert!(majorizes(&pv(&[0.25, 0.4, 0.35]), &pv(&[0.1, 0.3, 0.6])).unwrap());
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            majorizes(&pv(&[1.0]), &pv(&[0.5, 0.5])),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
        assert!(weakly_submajorized(&[0.1], &[0.1, 0.2]).is_err());
    }

    #[test]
    fn weak_submajorization() {
        assert!(weakly_submajorized(&[0.3, 0.2], &[0.5, 0.1]).unwrap());
        assert!(!weakly_submajorized(&[0.6, 0.0], &[0.5, 0.0]).unwrap());
        assert!(weakly_submajorized(&[0.4, 0.35, 0.25], &[0.6, 0.3, 0.1]).unwrap());
        assert!(weakly_submajorized(&[-0.1, 0.0], &[0.5, 0.1]).is_err());
    }

    #[test]
    fn chain_identity_and_two_components() {
        let y = pv(&[0.5, 0.3, 0.2]);
        assert!(t_transform_chain(&y, &y).unwrap().is_empty());
        let chain = t_transform_chain(&pv(&[0.5, 0.5]), &pv(&[0.9, 0.1])).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!((chain[0].i, chain[0].j), (0, 1));
        assert!((chain[0].t - 0.5).abs() < 1e-15);
        assert_eq!(
            t_transform_chain(&pv(&[0.9, 0.1]), &pv(&[0.5, 0.5])),
            Err(Error::NotMajorized)
        );
    }

    #[test]
    fn chain_reconstructs_random_pairs() {
        let mut rng = rng_from_seed(31);
        for trial in 0..2000 {
            let n = 2 + trial % 7;
            let (x, y) = random_majorized_pair(n, &mut rng);
            let chain = t_transform_chain(&x, &y).unwrap();
            assert!(chain.len() < n);
            let got = apply_chain(&y.sorted_desc(), &chain);
            for (g, w) in got.iter().zip(x.sorted_desc()) {
                assert!((g - w).abs() <= 1e-12, "trial {trial}: {got:?} vs {x:?}");
            }
            assert!(chain.iter().all(|s| s.i < s.j && (0.0..=1.0).contains(&s.t)));
        }
    }

    #[test]
    fn horn_factor_cases() {
        let (u, b) = horn_unistochastic(&[], 3).unwrap();
        assert_eq!(u, ComplexMatrix::identity(3));
        assert_eq!(b.apply(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);

        let t = 0.3;
        let (u, b) = horn_unistochastic(&[TTransformStep::new(0, 1, t).unwrap()], 2).unwrap();
        assert!(u.unitarity_defect() < 1e-15);
        assert!((b.get(0, 0) - t).abs() < 1e-15 && (b.get(1, 1) - t).abs() < 1e-15);
        assert!((b.get(0, 1) - (1.0 - t)).abs() < 1e-15 && (b.get(1, 0) - (1.0 - t)).abs() < 1e-15);

        assert!(horn_unistochastic(&[TTransformStep { i: 0, j: 3, t: 0.5 }], 3).is_err());
    }

    #[test]
    fn horn_factor_reproduces_chain_endpoints() {
        let mut rng = rng_from_seed(32);
        for trial in 0..1000 {
            let n = 2 + trial % 7;
            let (x, y) = random_majorized_pair(n, &mut rng);
            let chain = t_transform_chain(&x, &y).unwrap();
            let (u, b) = horn_unistochastic(&chain, n).unwrap();
            assert!(u.unitarity_defect() < 1e-12);
            let bx = b.apply(&y.sorted_desc());
            for (g, w) in bx.iter().zip(x.sorted_desc()) {
                assert!((g - w).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn step_matrix_is_bistochastic() {
        let m = TTransformStep::new(1, 3, 0.25).unwrap().matrix(4);
        assert!(BistochasticMatrix::new(4, m.entries.clone()).is_ok());
        assert_eq!(m.apply(&[0.4, 0.3, 0.2, 0.1]), {
            let mut v = vec![0.4, 0.3, 0.2, 0.1];
            TTransformStep::new(1, 3, 0.25).unwrap().apply(&mut v);
            v
        });
        assert!(TTransformStep::new(2, 1, 0.5).is_err());
        assert!(TTransformStep::new(0, 1, 1.5).is_err());
    }
}
