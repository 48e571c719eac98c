//! Density matrices, unital random-field channels and the majorization arrow
//! of global evolution.
//!
//! A channel `ρ ↦ Σ p_i U_i ρ U_i†` can only make the spectrum more mixed,
//! and conversely every `d' ≺ d` is reached from `diag(d)` by such a channel
//! ([`channel_from_target`]). Entropies `S_α` therefore never decrease.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::locc::{classify, CausalClass};
use crate::majorize::{majorizes, t_transform_chain};
use crate::numkernel::{hermitian_eigensystem, partial_trace, ComplexMatrix, Subsystem, HERMITIAN_TOL, PSD_CLAMP};
use crate::random::{haar_unitary, random_probability_vector};
use crate::schmidt::{PureBipartiteState, SchmidtVector};
use crate::spectra::{renyi_entropy, sorted_desc, EntropyOrder, ProbabilityVector};

/// Allowed `‖U U† − I‖` for channel unitaries.
pub const UNITARY_TOL: f64 = 1e-10;
/// Allowed deviation of `tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates squareness, Hermiticity, unit trace and positivity.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() == 0 {
            return Err(Error::dims("non-empty square matrix", format!("{}x{}", mat.rows(), mat.cols())));
        }
        let asym = mat.hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                asymmetry: asym,
                allowed: HERMITIAN_TOL,
            });
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { norm_sqr: tr });
        }
        let min = *hermitian_eigensystem(&mat)?.values.last().unwrap();
        if min < -PSD_CLAMP {
            return Err(Error::InvalidInput(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    /// Symmetrizes away round-off; the caller guarantees a state.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        let h = mat.add(&mat.adjoint()).scale_real(0.5);
        Self { mat: h }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    pub fn diagonal(d: &ProbabilityVector) -> Self {
        Self {
            mat: ComplexMatrix::from_diagonal(d.as_slice()),
        }
    }

    pub fn from_pure(psi: &PureBipartiteState) -> Self {
        Self::new_unchecked(psi.density_matrix())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Eigenvalues, descending, as a probability vector.
    pub fn spectrum(&self) -> Result<ProbabilityVector> {
        let vals = hermitian_eigensystem(&self.mat)?
            .values
            .into_iter()
            .map(|x| x.max(0.0))
            .collect();
        ProbabilityVector::normalized(vals)
    }

    /// Reduced state on the factor that is kept when `traced` is removed.
    pub fn reduced(&self, dims: (usize, usize), traced: Subsystem) -> Result<Self> {
        Ok(Self::new_unchecked(partial_trace(&self.mat, dims, traced)?))
    }

    pub fn entropy(&self, alpha: EntropyOrder) -> Result<f64> {
        Ok(renyi_entropy(&self.spectrum()?, alpha))
    }
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<DensityJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityJson) -> Result<Self> {
        let n = j.dim * j.dim;
        if j.re.len() != n || j.im.len() != n {
            return Err(Error::dims(n, format!("re: {}, im: {}", j.re.len(), j.im.len())));
        }
        let data = j.re.iter().zip(&j.im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Self::new(ComplexMatrix::from_vec(j.dim, j.dim, data)?)
    }
}

impl From<DensityMatrix> for DensityJson {
    fn from(d: DensityMatrix) -> Self {
        DensityJson {
            dim: d.dim(),
            re: d.mat.as_slice().iter().map(|z| z.re).collect(),
            im: d.mat.as_slice().iter().map(|z| z.im).collect(),
        }
    }
}

/// Eigenvalues at or below this count as exact zeros inside square roots.
const ROOT_CUTOFF: f64 = 1e-13;

fn root0(x: f64) -> f64 {
    if x <= ROOT_CUTOFF {
        0.0
    } else {
        x.sqrt()
    }
}

/// `√A` of a positive semidefinite Hermitian matrix.
fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let es = hermitian_eigensystem(a)?;
    let roots: Vec<f64> = es.values.iter().map(|&x| root0(x)).collect();
    let v = &es.vectors;
    Ok(v.matmul(&ComplexMatrix::from_diagonal(&roots)).matmul(&v.adjoint()))
}

/// Root fidelity `tr √(√ρ σ √ρ)`.
pub fn root_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dims(rho.dim(), sigma.dim()));
    }
    let s = sqrt_psd(&rho.mat)?;
    let inner = s.matmul(&sigma.mat).matmul(&s);
    let inner = inner.add(&inner.adjoint()).scale_real(0.5);
    let f: f64 = hermitian_eigensystem(&inner)?
        .values
        .iter()
        .map(|&x| root0(x))
        .sum();
    Ok(f.min(1.0))
}

/// Bures distance `√(2 − 2 tr√(√ρ σ √ρ))`.
pub fn bures_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * root_fidelity(rho, sigma)?).max(0.0).sqrt())
}

/// Unital channel `ρ ↦ Σ p_i U_i ρ U_i†`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFieldChannel {
    weights: ProbabilityVector,
    unitaries: Vec<ComplexMatrix>,
}

impl RandomFieldChannel {
    pub fn new(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::LengthMismatch {
                left: weights.len(),
                right: unitaries.len(),
            });
        }
        let weights = ProbabilityVector::new(weights)?;
        let n = unitaries[0].rows();
        for u in &unitaries {
            if !u.is_square() || u.rows() != n {
                return Err(Error::dims(format!("{n}x{n}"), format!("{}x{}", u.rows(), u.cols())));
            }
            let defect = u.unitarity_defect();
            if defect > UNITARY_TOL {
                return Err(Error::InvalidInput(format!("unitarity defect {defect:e}")));
            }
        }
        Ok(Self { weights, unitaries })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            weights: ProbabilityVector::pure(1),
            unitaries: vec![ComplexMatrix::identity(n)],
        }
    }

    /// `terms` Haar unitaries with flat-Dirichlet weights.
    pub fn random<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Self {
        let terms = terms.max(1);
        let unitaries = (0..terms).map(|_| haar_unitary(n, rng)).collect();
        let weights = ProbabilityVector::normalized(random_probability_vector(terms, rng)).unwrap();
        Self { weights, unitaries }
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].rows()
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.as_slice()
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// Channel applying `self` first and `next` afterwards.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.dim() != next.dim() {
            return Err(Error::dims(self.dim(), next.dim()));
        }
        let mut weights = Vec::new();
        let mut unitaries = Vec::new();
        for (p, u) in self.weights().iter().zip(&self.unitaries) {
            for (q, v) in next.weights().iter().zip(&next.unitaries) {
                if p * q > 0.0 {
                    weights.push(p * q);
                    unitaries.push(v.matmul(u));
                }
            }
        }
        Ok(Self {
            weights: ProbabilityVector::normalized(weights)?,
            unitaries,
        })
    }
}

pub fn apply_channel(rho: &DensityMatrix, ch: &RandomFieldChannel) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim() {
        return Err(Error::dims(ch.dim(), rho.dim()));
    }
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for (p, u) in ch.weights().iter().zip(&ch.unitaries) {
        out = out.add(&rho.mat.conjugate_by(u).scale_real(*p));
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Rotation by `π/2` in the `(a, b)` plane; exchanges the populations of `a` and `b`.
fn quarter_turn(n: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut r = ComplexMatrix::identity(n);
    r[(a, a)] = Complex64::new(0.0, 0.0);
    r[(b, b)] = Complex64::new(0.0, 0.0);
    r[(a, b)] = Complex64::new(1.0, 0.0);
    r[(b, a)] = Complex64::new(-1.0, 0.0);
    r
}

/// Channel taking `diag(d)` to a state with spectrum `d_target`.
///
/// Each T-step with parameter `t` on a pair of sorted positions becomes the
/// mixture `t·ρ + (1 − t)·R ρ Rᵀ` with `R` the quarter turn on the matching
/// original indices. The output stays diagonal in the input basis.
pub fn channel_from_target(d: &ProbabilityVector, d_target: &ProbabilityVector) -> Result<RandomFieldChannel> {
    let chain = t_transform_chain(d_target, d)?;
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d.as_slice()[j].total_cmp(&d.as_slice()[i]));
    let mut ch = RandomFieldChannel::identity(n);
    for step in chain {
        if step.t >= 1.0 {
            continue;
        }
        let (a, b) = (order[step.i], order[step.j]);
        let mix = if step.t <= 0.0 {
            RandomFieldChannel::new(vec![1.0], vec![quarter_turn(n, a, b)])?
        } else {
            RandomFieldChannel::new(
                vec![step.t, 1.0 - step.t],
                vec![ComplexMatrix::identity(n), quarter_turn(n, a, b)],
            )?
        };
        ch = ch.then(&mix)?;
    }
    Ok(ch)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NkVerdict {
    ConsistentWithSeparable,
    Entangled,
}

/// `S_α(ρ) ≥ max(S_α(ρ_A), S_α(ρ_B))`, required of every separable state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyCheck {
    pub alpha: EntropyOrder,
    pub global: f64,
    pub reduced_a: f64,
    pub reduced_b: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub verdict: NkVerdict,
    pub entropy_checks: Vec<EntropyCheck>,
}

pub const NK_ENTROPY_ORDERS: [EntropyOrder; 5] = [
    EntropyOrder::ZERO,
    EntropyOrder::HALF,
    EntropyOrder::ONE,
    EntropyOrder::TWO,
    EntropyOrder::INFINITY,
];

fn padded(p: &ProbabilityVector, n: usize) -> Result<ProbabilityVector> {
    let mut v = p.as_slice().to_vec();
    v.resize(n, 0.0);
    ProbabilityVector::new(v)
}

/// Nielsen–Kempe necessary criterion: a separable `ρ` has a spectrum
/// majorized by both reduced spectra (padded with zeros).
pub fn nk00_test(rho: &DensityMatrix, dims: (usize, usize)) -> Result<SeparabilityReport> {
    let n = rho.dim();
    let d = rho.spectrum()?;
    let da = rho.reduced(dims, Subsystem::B)?.spectrum()?;
    let db = rho.reduced(dims, Subsystem::A)?.spectrum()?;
    let separable_like = majorizes(&d, &padded(&da, n)?)? && majorizes(&d, &padded(&db, n)?)?;
    let entropy_checks = NK_ENTROPY_ORDERS
        .iter()
        .map(|&alpha| {
            let global = renyi_entropy(&d, alpha);
            let reduced_a = renyi_entropy(&da, alpha);
            let reduced_b = renyi_entropy(&db, alpha);
            EntropyCheck {
                alpha,
                global,
                reduced_a,
                reduced_b,
                holds: global >= reduced_a.max(reduced_b) - 1e-10,
            }
        })
        .collect();
    Ok(SeparabilityReport {
        verdict: if separable_like {
            NkVerdict::ConsistentWithSeparable
        } else {
            NkVerdict::Entangled
        },
        entropy_checks,
    })
}

/// Class of spectrum `q` relative to `reference` under random-field evolution:
/// `Future` when some channel takes `reference` to `q`.
pub fn evolution_class(reference: &ProbabilityVector, q: &ProbabilityVector) -> Result<CausalClass> {
    let r = SchmidtVector::from_probability(reference.clone());
    let q = SchmidtVector::from_probability(q.clone());
    Ok(classify(&r, &q)?.reversed())
}

/// Spectrum of the channel output, sorted descending.
pub fn evolved_spectrum(d: &ProbabilityVector, ch: &RandomFieldChannel) -> Result<Vec<f64>> {
    let out = apply_channel(&DensityMatrix::diagonal(d), ch)?;
    Ok(sorted_desc(out.spectrum()?.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_separable_state, rng_from_seed};
    use crate::schmidt::haar_random_state;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn validation() {
        let bad = ComplexMatrix::from_diagonal(&[0.6, 0.6]);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotNormalized { .. })));
        let neg = ComplexMatrix::from_diagonal(&[1.2, -0.2]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidInput(_))));
        let mut h = ComplexMatrix::from_diagonal(&[0.5, 0.5]);
        h[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(h), Err(Error::NotHermitian { .. })));
        assert!(DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.25; 4])).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let rho = DensityMatrix::new(random_density_matrix(3, &mut rng_from_seed(5))).unwrap();
        let s = serde_json::to_string(&rho).unwrap();
        assert!(s.starts_with("{\"dim\":3,\"re\":"));
        let back: DensityMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rho);
        assert!(serde_json::from_str::<DensityMatrix>("{\"dim\":2,\"re\":[1,0,0],\"im\":[0,0,0]}").is_err());
    }

    #[test]
    fn single_unitary_preserves_spectrum() {
        let mut rng = rng_from_seed(6);
        let rho = DensityMatrix::new_unchecked(random_density_matrix(4, &mut rng));
        let ch = RandomFieldChannel::new(vec![1.0], vec![haar_unitary(4, &mut rng)]).unwrap();
        let out = apply_channel(&rho, &ch).unwrap();
        assert!(close(out.spectrum().unwrap().as_slice(), rho.spectrum().unwrap().as_slice(), 1e-12));
    }

    #[test]
    fn maximally_mixed_is_fixed() {
        let mut rng = rng_from_seed(7);
        let rho = DensityMatrix::maximally_mixed(5);
        let out = apply_channel(&rho, &RandomFieldChannel::random(5, 4, &mut rng)).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn dimension_mismatch() {
        let ch = RandomFieldChannel::identity(3);
        assert!(matches!(
            apply_channel(&DensityMatrix::maximally_mixed(2), &ch),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn channel_output_is_more_mixed() {
        let mut rng = rng_from_seed(8);
        for n in 2..=5 {
            for _ in 0..20 {
                let rho = DensityMatrix::new_unchecked(random_density_matrix(n, &mut rng));
                let ch = RandomFieldChannel::random(n, 3, &mut rng);
                let out = apply_channel(&rho, &ch).unwrap();
                assert!(majorizes(&out.spectrum().unwrap(), &rho.spectrum().unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn target_equal_to_source_gives_identity() {
        let d = pv(&[0.5, 0.3, 0.2]);
        let ch = channel_from_target(&d, &d).unwrap();
        assert_eq!(ch.unitaries().len(), 1);
        assert!(ch.unitaries()[0].max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn first_pair_averaging_endpoint() {
        let d = pv(&[0.6, 0.3, 0.1]);
        let target = pv(&[0.45, 0.45, 0.1]);
        let ch = channel_from_target(&d, &target).unwrap();
        assert_eq!(ch.weights().len(), 2);
        assert!(close(ch.weights(), &[0.5, 0.5], 1e-15));
        let out = apply_channel(&DensityMatrix::diagonal(&d), &ch).unwrap();
        let diag: Vec<f64> = out.matrix().diagonal().iter().map(|z| z.re).collect();
        assert!(close(&diag, &[0.45, 0.45, 0.1], 1e-15));
    }

    #[test]
    fn target_reached_for_unsorted_input() {
        let d = pv(&[0.1, 0.6, 0.3]);
        let target = pv(&[0.4, 0.35, 0.25]);
        let out = evolved_spectrum(&d, &channel_from_target(&d, &target).unwrap()).unwrap();
        assert!(close(&out, &[0.4, 0.35, 0.25], 1e-12));
    }

    #[test]
    fn unreachable_target() {
        assert_eq!(
            channel_from_target(&pv(&[0.4, 0.35, 0.25]), &pv(&[0.6, 0.3, 0.1])).unwrap_err(),
            Error::NotMajorized
        );
    }

    #[test]
    fn bures_distance_basics() {
        let a = DensityMatrix::diagonal(&pv(&[1.0, 0.0]));
        let b = DensityMatrix::diagonal(&pv(&[0.0, 1.0]));
        assert!((bures_distance(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(bures_distance(&a, &a).unwrap() < 1e-7);
        // commuting states: classical fidelity Σ√(p q)
        let p = DensityMatrix::diagonal(&pv(&[0.7, 0.3]));
        let q = DensityMatrix::diagonal(&pv(&[0.2, 0.8]));
        let f = (0.14f64).sqrt() + (0.24f64).sqrt();
        assert!((root_fidelity(&p, &q).unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn nk_product_and_bell() {
        let prod = DensityMatrix::new_unchecked(
            random_density_matrix(2, &mut rng_from_seed(9)).kron(&random_density_matrix(3, &mut rng_from_seed(10))),
        );
        let r = nk00_test(&prod, (2, 3)).unwrap();
        assert_eq!(r.verdict, NkVerdict::ConsistentWithSeparable);
        assert!(r.entropy_checks.iter().all(|c| c.holds));

        let bell = DensityMatrix::from_pure(&PureBipartiteState::maximally_entangled(3));
        let r = nk00_test(&bell, (3, 3)).unwrap();
        assert_eq!(r.verdict, NkVerdict::Entangled);
        assert!(r.entropy_checks.iter().all(|c| !c.holds));
    }

    #[test]
    fn nk_never_flags_separable_mixtures() {
        let mut rng = rng_from_seed(11);
        for _ in 0..200 {
            let rho = DensityMatrix::new_unchecked(random_separable_state((2, 3), 4, &mut rng));
            assert_eq!(nk00_test(&rho, (2, 3)).unwrap().verdict, NkVerdict::ConsistentWithSeparable);
        }
    }

    #[test]
    fn nk_flags_random_pure_states() {
        let mut rng = rng_from_seed(12);
        let psi = haar_random_state(3, 3, &mut rng);
        let r = nk00_test(&DensityMatrix::from_pure(&psi), (3, 3)).unwrap();
        assert_eq!(r.verdict, NkVerdict::Entangled);
    }

    #[test]
    fn nk_dimension_mismatch() {
        assert!(matches!(
            nk00_test(&DensityMatrix::maximally_mixed(4), (3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evolution_reverses_locc_arrow() {
        let r = pv(&[0.6, 0.3, 0.1]);
        assert_eq!(evolution_class(&r, &pv(&[0.4, 0.35, 0.25])).unwrap(), CausalClass::Future);
        assert_eq!(evolution_class(&r, &pv(&[0.8, 0.15, 0.05])).unwrap(), CausalClass::Past);
    }

    /// Point on the N = 3 simplex at distance `r` from the centre, polar angle `phi`.
    fn circle_point(r: f64, phi: f64) -> Vec<f64> {
        let e1 = [2.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt()];
        let e2 = [0.0, 1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
        (0..3).map(|i| 1.0 / 3.0 + r * (phi.cos() * e1[i] + phi.sin() * e2[i])).collect()
    }

    #[test]
    fn constant_radius_circle_cross_check() {
        let three = EntropyOrder::new(3.0).unwrap();
        for &r in &[0.05, 0.1, 0.2, 0.3] {
            let steps = 400;
            for k in 0..steps {
                let (a, b) = (k as f64 / steps as f64, (k + 1) as f64 / steps as f64);
                let pa = circle_point(r, a * std::f64::consts::TAU);
                let pb = circle_point(r, b * std::f64::consts::TAU);
                if pa.iter().chain(&pb).any(|&x| x < 0.0) {
                    continue;
                }
                let cube = |p: &[f64]| p.iter().map(|x| x * x * x).sum::<f64>();
                let (xa, xb) = (pv(&pa), pv(&pb));
                if cube(&pb) > cube(&pa) + 1e-15 {
                    assert!(renyi_entropy(&xb, three) < renyi_entropy(&xa, three));
                    assert!(renyi_entropy(&xb, EntropyOrder::ONE) > renyi_entropy(&xa, EntropyOrder::ONE));
                }
            }
        }
    }
}
