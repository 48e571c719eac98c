//! Pure-state entanglement as an order theory.
//!
//! The Schmidt vector `λ` of a bipartite pure state carries everything that
//! local unitaries cannot change. This crate computes it, evaluates Rényi
//! entropies and the standard entanglement measures as functions of it,
//! decides convertibility under local operations through majorization, and
//! builds the geometry of the resulting order: Weyl-chamber distances, the
//! polytope of reachable spectra and the random-field channels that walk
//! through it.
//!
//! ```
//! use entorder::{locc, SchmidtVector};
//!
//! let psi = SchmidtVector::new(vec![0.5, 0.3, 0.2]).unwrap();
//! let phi = SchmidtVector::uniform(3);
//! assert!(!locc::can_convert(&psi, &phi).unwrap());
//! let p = locc::conversion_probability(&psi, &phi).unwrap();
//! assert!((p - 0.6).abs() < 1e-12);
//! ```

pub mod error;
pub mod geometry;
pub mod locc;
pub mod majorize;
pub mod measures;
pub mod mixedstates;
pub mod numkernel;
pub mod random;
pub mod schmidt;
pub mod spectra;

pub use error::{Error, Result};
pub use geometry::{Combinatorics, Polytope};
pub use locc::CausalClass;
pub use majorize::{BistochasticMatrix, TTransformStep};
pub use measures::MeasureRecord;
pub use mixedstates::{DensityMatrix, RandomFieldChannel};
pub use num_complex::Complex64;
pub use numkernel::{ComplexMatrix, EigenSystem, Subsystem};
pub use random::StdRng;
pub use schmidt::{HypersphericalAngles, PureBipartiteState, SchmidtDecomposition, SchmidtVector};
pub use spectra::{EntropyOrder, ProbabilityVector};
