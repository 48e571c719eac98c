//! Seeded sampling of states, unitaries and probability vectors.
//!
//! Every stochastic routine takes the generator explicitly. The crate-wide
//! generator is [`StdRng`] = `ChaCha8Rng`, seeded with
//! [`rand::SeedableRng::seed_from_u64`]; Monte-Carlo loops derive the
//! generator for sample `i` from `seed + i` (see [`rng_for_sample`]).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::numkernel::ComplexMatrix;

/// The named, seedable generator used throughout the crate.
pub type StdRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Generator for the `index`-th independent sample of a Monte-Carlo run.
pub fn rng_for_sample(seed: u64, index: u64) -> StdRng {
    StdRng::seed_from_u64(seed.wrapping_add(index))
}

/// Standard complex Gaussian `(x + iy)/√2` with `x, y ~ N(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Unit vector drawn from the unitarily invariant measure on `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v = complex_gaussian_vec(n, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-150 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: Gram–Schmidt on a Ginibre matrix, which equals QR
/// with a positive diagonal in `R`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = complex_gaussian_vec(n, rng);
        // two passes of modified Gram–Schmidt keep orthogonality at round-off
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Hilbert–Schmidt random density matrix `G G† / tr(G G†)`.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    gg.scale_real(1.0 / tr)
}

/// Uniform (flat Dirichlet) probability vector of length `n`.
pub fn random_probability_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Convex mixture of `terms` random pure product states; separable by construction.
pub fn random_separable_state<R: Rng + ?Sized>(
    (n_a, n_b): (usize, usize),
    terms: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let weights = random_probability_vector(terms.max(1), rng);
    let mut rho = ComplexMatrix::zeros(n_a * n_b, n_a * n_b);
    for w in weights {
        let a = ComplexMatrix::outer(&random_unit_vector(n_a, rng));
        let b = ComplexMatrix::outer(&random_unit_vector(n_b, rng));
        rho = rho.add(&a.kron(&b).scale_real(w));
    }
    rho
}
