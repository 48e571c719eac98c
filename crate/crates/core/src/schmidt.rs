//! Pure bipartite states and their Schmidt decomposition.
//!
//! A state `|ψ> = Σ_ab C_ab |a>⊗|b>` is stored as its coefficient matrix `C`
//! with rows indexing subsystem A and columns subsystem B, so the row-major
//! entries of `C` are the amplitudes in the `a * dim_b + b` ordering used by
//! [`crate::numkernel`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Deref;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{hermitian_eigensystem, ComplexMatrix};
use crate::random::random_unit_vector;
use crate::spectra::ProbabilityVector;

/// Allowed deviation of `⟨ψ|ψ⟩` from one.
pub const NORM_TOL: f64 = 1e-12;

/// Normalized pure state of an `dim_a × dim_b` system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct PureBipartiteState {
    coeffs: ComplexMatrix,
}

impl PureBipartiteState {
    /// Wraps a `dim_a × dim_b` coefficient matrix; fails unless `Σ|C_ab|² = 1`.
    pub fn new(coeffs: ComplexMatrix) -> Result<Self> {
        let norm_sqr: f64 = coeffs.as_slice().iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { coeffs })
    }

    /// Amplitudes in `a * dim_b + b` order.
    pub fn from_amplitudes(dim_a: usize, dim_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(ComplexMatrix::from_vec(dim_a, dim_b, amps)?)
    }

    /// Rescales arbitrary nonzero amplitudes to a unit vector.
    pub fn normalized(dim_a: usize, dim_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Self::from_amplitudes(dim_a, dim_b, amps.into_iter().map(|z| z / norm).collect())
    }

    /// `Σ_k √λ_k |k>⊗|k>` in the computational product basis.
    pub fn from_schmidt(lambda: &SchmidtVector) -> Self {
        let n = lambda.len();
        let mut c = ComplexMatrix::zeros(n, n);
        for (k, &l) in lambda.as_slice().iter().enumerate() {
            c[(k, k)] = Complex64::new(l.sqrt(), 0.0);
        }
        Self { coeffs: c }
    }

    /// `(|11> + ... + |NN>)/√N`.
    pub fn maximally_entangled(n: usize) -> Self {
        Self::from_schmidt(&SchmidtVector::uniform(n))
    }

    pub fn dim_a(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn dim_b(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a(), self.dim_b())
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.coeffs.as_slice()
    }

    /// `|ψ><ψ|` on the full space.
    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(self.amplitudes())
    }

    /// `(U_A ⊗ U_B)|ψ>`, i.e. `C ↦ U_A C U_Bᵀ`.
    pub fn apply_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        if u_a.rows() != self.dim_a() || u_a.cols() != self.dim_a() {
            return Err(Error::dims(self.dim_a(), format!("{}x{}", u_a.rows(), u_a.cols())));
        }
        if u_b.rows() != self.dim_b() || u_b.cols() != self.dim_b() {
            return Err(Error::dims(self.dim_b(), format!("{}x{}", u_b.rows(), u_b.cols())));
        }
        Ok(Self {
            coeffs: u_a.matmul(&self.coeffs).matmul(&u_b.transpose()),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    dim_a: usize,
    dim_b: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<StateJson> for PureBipartiteState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let n = j.dim_a * j.dim_b;
        if j.re.len() != n || j.im.len() != n {
            return Err(Error::dims(n, format!("re: {}, im: {}", j.re.len(), j.im.len())));
        }
        let amps = j
            .re
            .iter()
            .zip(&j.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        Self::from_amplitudes(j.dim_a, j.dim_b, amps)
    }
}

impl From<PureBipartiteState> for StateJson {
    fn from(s: PureBipartiteState) -> Self {
        StateJson {
            dim_a: s.dim_a(),
            dim_b: s.dim_b(),
            re: s.amplitudes().iter().map(|z| z.re).collect(),
            im: s.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

/// Schmidt coefficients `λ_1 ≥ ... ≥ λ_N ≥ 0`, `Σλ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SchmidtVector(ProbabilityVector);

impl SchmidtVector {
    /// Validates a probability vector and sorts it descending (stable).
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Ok(Self::from_probability(ProbabilityVector::new(coeffs)?))
    }

    pub fn from_probability(p: ProbabilityVector) -> Self {
        let sorted = p.sorted_desc();
        Self(ProbabilityVector::new(sorted).expect("sorting preserves validity"))
    }

    pub fn uniform(n: usize) -> Self {
        Self(ProbabilityVector::uniform(n))
    }

    pub fn separable(n: usize) -> Self {
        Self(ProbabilityVector::pure(n))
    }

    pub fn as_probability(&self) -> &ProbabilityVector {
        &self.0
    }

    /// Largest coefficient `λ_1`.
    pub fn largest(&self) -> f64 {
        self.0.as_slice()[0]
    }
}

impl Deref for SchmidtVector {
    type Target = ProbabilityVector;

    fn deref(&self) -> &ProbabilityVector {
        &self.0
    }
}

impl<'de> Deserialize<'de> for SchmidtVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::from_probability(ProbabilityVector::deserialize(d)?))
    }
}

/// `C = Σ_k √λ_k a_k b_kᵀ` with `a_k`, `b_k` the columns of `basis_a`, `basis_b`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub lambda: SchmidtVector,
    /// `dim_a × dim_a` unitary; first `N` columns pair with `λ`.
    pub basis_a: ComplexMatrix,
    /// `dim_b × dim_b` unitary; first `N` columns pair with `λ`.
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// Rebuilds the coefficient matrix from the decomposition.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (na, nb) = (self.basis_a.rows(), self.basis_b.rows());
        let mut c = ComplexMatrix::zeros(na, nb);
        for (k, &l) in self.lambda.as_slice().iter().enumerate() {
            let s = l.sqrt();
            for i in 0..na {
                for j in 0..nb {
                    c[(i, j)] += self.basis_a[(i, k)] * self.basis_b[(j, k)] * s;
                }
            }
        }
        c
    }
}

/// Schmidt decomposition through the eigensystem of the smaller reduced
/// matrix.
///
/// Columns of the smaller-side basis have their first nonzero component real
/// and positive; the partner columns follow from `C` and so carry the
/// compensating phase. Unused columns are completed by Gram–Schmidt and get
/// the same phase convention.
pub fn schmidt_decompose(psi: &PureBipartiteState) -> Result<SchmidtDecomposition> {
    // re-check in case the caller built the state by hand
    let norm_sqr: f64 = psi.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let (na, nb) = psi.dims();
    let swap = na > nb;
    let work = if swap {
        psi.coeffs().transpose()
    } else {
        psi.coeffs().clone()
    };
    let (n, big) = (work.rows(), work.cols());

    let reduced = work.matmul(&work.adjoint());
    let es = hermitian_eigensystem(&reduced)?;
    let mut small = es.vectors;
    for k in 0..n {
        let mut col = small.column(k);
        fix_phase(&mut col);
        small.set_column(k, &col);
    }

    // v_k ∝ Wᵀ conj(u_k)
    let wt = work.transpose();
    let mut partner: Vec<Vec<Complex64>> = Vec::with_capacity(big);
    for k in 0..n {
        let uk: Vec<Complex64> = small.column(k).iter().map(|z| z.conj()).collect();
        let mut w = wt.mul_vec(&uk);
        orthogonalize(&mut w, &partner);
        let norm = vec_norm(&w);
        if norm > 1e-13 {
            partner.push(w.into_iter().map(|z| z / norm).collect());
        } else {
            break;
        }
    }
    complete_basis(&mut partner, big);
    let mut big_basis = ComplexMatrix::zeros(big, big);
    for (k, col) in partner.iter().enumerate() {
        big_basis.set_column(k, col);
    }

    let lambda: Vec<f64> = es.values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = lambda.iter().sum();
    let lambda = SchmidtVector::new(lambda.into_iter().map(|x| x / total).collect())?;

    let (basis_a, basis_b) = if swap {
        (big_basis, small)
    } else {
        (small, big_basis)
    };
    Ok(SchmidtDecomposition {
        lambda,
        basis_a,
        basis_b,
    })
}

/// Schmidt coefficients only.
pub fn schmidt_coefficients(psi: &PureBipartiteState) -> Result<SchmidtVector> {
    Ok(schmidt_decompose(psi)?.lambda)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in basis {
            let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
    }
}

/// Rotates the vector so its first component above round-off is real positive.
fn fix_phase(v: &mut [Complex64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-12) {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn complete_basis(cols: &mut Vec<Vec<Complex64>>, n: usize) {
    while cols.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for i in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[i] = Complex64::new(1.0, 0.0);
            orthogonalize(&mut e, cols);
            let norm = vec_norm(&e);
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, e));
            }
        }
        let (norm, mut e) = best.expect("n > 0");
        for z in e.iter_mut() {
            *z /= norm;
        }
        fix_phase(&mut e);
        cols.push(e);
    }
}

/// Schmidt angle β ∈ [0, π/4] of a two-qubit Schmidt vector: `λ_1 = cos²β`.
pub fn schmidt_angle(lambda: &SchmidtVector) -> Result<f64> {
    if lambda.len() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: lambda.len(),
        });
    }
    Ok(lambda.largest().sqrt().min(1.0).acos())
}

/// Polar angles `ϑ_1, ϑ_2, ϑ_3 ∈ [0, π/2]` and azimuthal angles
/// `φ_1, φ_2, φ_3 ∈ [0, 2π)` of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypersphericalAngles {
    /// `[ϑ_1, ϑ_2, ϑ_3]`
    pub polar: [f64; 3],
    /// `[φ_1, φ_2, φ_3]`
    pub azimuthal: [f64; 3],
}

impl HypersphericalAngles {
    /// Real non-negative amplitudes `(√w_0, ..., √w_3)` for the weights `w`
    /// on the corners `(--, -+, +-, ++)`; phases zero.
    pub fn from_weights(w: [f64; 4]) -> Self {
        let amp = w.map(|x| x.max(0.0).sqrt());
        let t3 = amp[0].min(1.0).acos();
        let s3 = t3.sin();
        let t2 = if s3 > 1e-15 {
            (amp[1] / s3).min(1.0).acos()
        } else {
            0.0
        };
        let t1 = amp[3].atan2(amp[2]);
        Self {
            polar: [t1, t2, t3],
            azimuthal: [0.0; 3],
        }
    }
}

/// Two-qubit state
/// `(cos ϑ3, sin ϑ3 cos ϑ2 e^{iφ3}, sin ϑ3 sin ϑ2 cos ϑ1 e^{iφ2}, sin ϑ3 sin ϑ2 sin ϑ1 e^{iφ1})`
/// on the corners `(--, -+, +-, ++)`, reshaped row-major into a 2×2
/// coefficient matrix.
pub fn state_from_hyperspherical(angles: &HypersphericalAngles) -> Result<PureBipartiteState> {
    const POLAR: [&str; 3] = ["theta1", "theta2", "theta3"];
    const AZIMUTHAL: [&str; 3] = ["phi1", "phi2", "phi3"];
    for (k, &t) in angles.polar.iter().enumerate() {
        if !(0.0..=FRAC_PI_2).contains(&t) {
            return Err(Error::AngleOutOfRange {
                name: POLAR[k],
                value: t,
                lo: 0.0,
                hi: FRAC_PI_2,
            });
        }
    }
    for (k, &p) in angles.azimuthal.iter().enumerate() {
        if !(0.0..2.0 * PI).contains(&p) {
            return Err(Error::AngleOutOfRange {
                name: AZIMUTHAL[k],
                value: p,
                lo: 0.0,
                hi: 2.0 * PI,
            });
        }
    }
    let [t1, t2, t3] = angles.polar;
    let [p1, p2, p3] = angles.azimuthal;
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let amps = vec![
        Complex64::new(t3.cos(), 0.0),
        e(p3) * (t3.sin() * t2.cos()),
        e(p2) * (t3.sin() * t2.sin() * t1.cos()),
        e(p1) * (t3.sin() * t2.sin() * t1.sin()),
    ];
    PureBipartiteState::normalized(2, 2, amps)
}

/// Haar-random pure state: an i.i.d. complex Gaussian amplitude vector
/// normalized to unit length.
pub fn haar_random_state<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> PureBipartiteState {
    let amps = random_unit_vector(dim_a * dim_b, rng);
    PureBipartiteState {
        coeffs: ComplexMatrix::from_vec(dim_a, dim_b, amps).expect("finite amplitudes"),
    }
}
