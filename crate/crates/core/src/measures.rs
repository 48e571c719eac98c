//! Pure-state entanglement measures as functions of the Schmidt vector.
//!
//! Every entry of [`MeasureRecord`] is a monotone function of one Rényi
//! entropy of `λ`:
//!
//! | measure                              | closed form                  | order |
//! |--------------------------------------|------------------------------|-------|
//! | Schmidt rank                         | `#{λ_i > 0}`                 | 0     |
//! | negativity, robustness               | `(Σ√λ_i)² − 1`               | 1/2   |
//! | maximal fidelity                     | `(Σ√λ_i)² / N`               | 1/2   |
//! | entropy of entanglement              | `−Σ λ_i ln λ_i`              | 1     |
//! | Bures distance to closest mixed sep. | `√(2 − 2√Σλ_i²)`             | 2     |
//! | FS / trace / HS / Bures to pure sep. | functions of `κ = λ_max`     | ∞     |
//!
//! Distances are reported as distances, never squared. The closest separable
//! mixed state `Σ λ_k |kk><kk|` is proven optimal for two qubits and used as
//! stated for larger `N`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mixedstates::DensityMatrix;
use crate::numkernel::{partial_transpose, trace_norm, ComplexMatrix};
use crate::schmidt::{SchmidtDecomposition, SchmidtVector};
use crate::spectra::{renyi_entropy, EntropyOrder};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub schmidt_rank: usize,
    pub entropy_of_entanglement: f64,
    pub negativity: f64,
    pub robustness: f64,
    pub max_fidelity: f64,
    pub bures_to_separable_mixed: f64,
    pub fs_to_separable_pure: f64,
    pub trace_to_separable_pure: f64,
    pub hs_to_separable_pure: f64,
    pub bures_to_separable_pure: f64,
}

impl MeasureRecord {
    /// `(name, value)` pairs in field order, rank included as a float.
    pub fn entries(&self) -> [(&'static str, f64); 10] {
        [
            ("schmidt_rank", self.schmidt_rank as f64),
            ("entropy_of_entanglement", self.entropy_of_entanglement),
            ("negativity", self.negativity),
            ("robustness", self.robustness),
            ("max_fidelity", self.max_fidelity),
            ("bures_to_separable_mixed", self.bures_to_separable_mixed),
            ("fs_to_separable_pure", self.fs_to_separable_pure),
            ("trace_to_separable_pure", self.trace_to_separable_pure),
            ("hs_to_separable_pure", self.hs_to_separable_pure),
            ("bures_to_separable_pure", self.bures_to_separable_pure),
        ]
    }
}

fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

pub fn measure_suite(lambda: &SchmidtVector) -> MeasureRecord {
    let n = lambda.len() as f64;
    let root_sum: f64 = lambda.as_slice().iter().map(|&l| l.sqrt()).sum();
    let negativity = (root_sum * root_sum - 1.0).max(0.0);
    let purity: f64 = lambda.as_slice().iter().map(|l| l * l).sum();
    let kappa = lambda.largest().min(1.0);
    MeasureRecord {
        schmidt_rank: lambda.rank(),
        entropy_of_entanglement: renyi_entropy(lambda, EntropyOrder::ONE),
        negativity,
        robustness: negativity,
        max_fidelity: (root_sum * root_sum / n).min(1.0),
        bures_to_separable_mixed: sqrt0(2.0 - 2.0 * purity.sqrt()),
        fs_to_separable_pure: kappa.sqrt().acos(),
        trace_to_separable_pure: 2.0 * sqrt0(1.0 - kappa),
        hs_to_separable_pure: sqrt0(2.0 - 2.0 * kappa),
        bures_to_separable_pure: sqrt0(2.0 - 2.0 * kappa.sqrt()),
    }
}

/// `Σ_k λ_k |a_k b_k><a_k b_k|` in the product basis of the decomposition.
pub fn closest_separable_mixed(decomp: &SchmidtDecomposition) -> DensityMatrix {
    let (na, nb) = (decomp.basis_a.rows(), decomp.basis_b.rows());
    let mut rho = ComplexMatrix::zeros(na * nb, na * nb);
    for (k, &l) in decomp.lambda.as_slice().iter().enumerate() {
        let a = decomp.basis_a.column(k);
        let b = decomp.basis_b.column(k);
        let prod: Vec<_> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        rho = rho.add(&ComplexMatrix::outer(&prod).scale_real(l));
    }
    DensityMatrix::new_unchecked(rho)
}

/// Vidal monotones `E_k = Σ_{i≥k} λ_i` for `k = 2..N`.
pub fn vidal_monotones(lambda: &SchmidtVector) -> Vec<f64> {
    let l = lambda.as_slice();
    (1..l.len()).map(|k| l[k..].iter().sum()).collect()
}

/// Negativity `‖ρ^{T_B}‖_tr − 1` computed from the partially transposed matrix.
pub fn negativity_of(rho: &ComplexMatrix, dims: (usize, usize)) -> Result<f64> {
    Ok(trace_norm(&partial_transpose(rho, dims)?)? - 1.0)
}
