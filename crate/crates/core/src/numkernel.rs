//! Dense complex linear algebra for the small matrices used throughout the
//! crate: a row-major [`ComplexMatrix`], a cyclic Jacobi eigensolver for
//! Hermitian matrices, and the two bipartite maps (partial trace and partial
//! transpose).
//!
//! Bipartite index convention: for dimensions `(n_a, n_b)` the basis state
//! `|a> ⊗ |b>` sits at row/column `a * n_b + b`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Hermiticity tolerance accepted by [`hermitian_eigensystem`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this times ‖H‖.
pub const JACOBI_TOL: f64 = 1e-13;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues of positive semidefinite inputs in `(-PSD_CLAMP, 0)` are set to zero.
pub const PSD_CLAMP: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Projector `|v><v|` onto a (not necessarily normalized) column vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Entrywise sum. Panics on shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    /// Matrix product. Panics on shape mismatch.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Largest entrywise deviation from Hermiticity, `max |H_ij - conj(H_ji)|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Deviation `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .sub(&Self::identity(self.cols))
            .frobenius_norm()
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition `H = V diag(values) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `H_pq` with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation with
/// `|θ| ≤ π/4`. Sweeps stop when the off-diagonal Frobenius norm falls below
/// [`JACOBI_TOL`]`·‖H‖`.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<EigenSystem> {
    if !h.is_square() || h.rows() == 0 {
        return Err(Error::dims("non-empty square matrix", format!("{}x{}", h.rows(), h.cols())));
    }
    let n = h.rows();
    let norm = h.frobenius_norm();
    let asym = h.hermitian_asymmetry();
    if asym > HERMITIAN_TOL * norm {
        return Err(Error::NotHermitian {
            asymmetry: asym,
            allowed: HERMITIAN_TOL * norm,
        });
    }

    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(h[(i, i)].re, 0.0)
        } else {
            (h[(i, j)] + h[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let target = JACOBI_TOL * norm;
    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}

fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows();
    let b = a[(p, q)];
    let m = b.norm();
    if m == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip pivots that are negligible next to both diagonal entries
    if m < 1e-300 || (app.abs() + m == app.abs() && aqq.abs() + m == aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = b / m;
    let theta = (aqq - app) / (2.0 * m);
    // f64::signum(0.0) = 1, so equal diagonals give the π/4 rotation
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) · [[c, s], [-s, c]] acting on (p, q)
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Eigenvalues of a positive semidefinite matrix, descending, with round-off
/// negatives in `(-PSD_CLAMP, 0)` set to zero.
pub fn psd_spectrum(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigensystem(h)?
        .values
        .into_iter()
        .map(clamp_psd)
        .collect())
}

#[inline]
pub(crate) fn clamp_psd(x: f64) -> f64 {
    if x < 0.0 && x > -PSD_CLAMP {
        0.0
    } else {
        x
    }
}

/// Trace norm `Σ|λ_i|` of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigensystem(h)?.values.iter().map(|x| x.abs()).sum())
}

/// Which factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

fn check_bipartite(rho: &ComplexMatrix, (n_a, n_b): (usize, usize)) -> Result<()> {
    let n = n_a * n_b;
    if !rho.is_square() || rho.rows() != n {
        return Err(Error::dims(
            format!("{n}x{n} ({n_a}*{n_b})"),
            format!("{}x{}", rho.rows(), rho.cols()),
        ));
    }
    Ok(())
}

/// Partial trace over `traced`; returns the reduced matrix of the other factor.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<ComplexMatrix> {
    check_bipartite(rho, dims)?;
    let (n_a, n_b) = dims;
    Ok(match traced {
        Subsystem::B => ComplexMatrix::from_fn(n_a, n_a, |a, a2| {
            (0..n_b).map(|b| rho[(a * n_b + b, a2 * n_b + b)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(n_b, n_b, |b, b2| {
            (0..n_a).map(|a| rho[(a * n_b + b, a * n_b + b2)]).sum()
        }),
    })
}

/// Partial transpose on the second factor: `(ρ^{T_B})_{ab,a'b'} = ρ_{ab',a'b}`.
/// Pure index permutation, hence an exact involution.
pub fn partial_transpose(rho: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_bipartite(rho, dims)?;
    let (n_a, n_b) = dims;
    let n = n_a * n_b;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i / n_b, i % n_b);
        let (a2, b2) = (j / n_b, j % n_b);
        rho[(a * n_b + b2, a2 * n_b + b)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, rng_from_seed};
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        g.add(&g.adjoint()).scale_real(0.5)
    }

    #[test]
    fn identity_eigenvalues() {
        let es = hermitian_eigensystem(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(es.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let es = hermitian_eigensystem(&ComplexMatrix::from_diagonal(&[3.0, 1.0])).unwrap();
        assert_eq!(es.values, vec![3.0, 1.0]);
        assert_eq!(es.vectors, ComplexMatrix::identity(2));
        let es = hermitian_eigensystem(&ComplexMatrix::from_diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(es.values, vec![3.0, 1.0]);
    }

    #[test]
    fn two_by_two_matches_quadratic_formula() {
        let mut rng = rng_from_seed(7);
        for _ in 0..200 {
            let h = random_hermitian(2, &mut rng);
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let b = h[(0, 1)].norm_sqr();
            let mean = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + b).sqrt();
            let es = hermitian_eigensystem(&h).unwrap();
            assert!((es.values[0] - (mean + disc)).abs() < 1e-10);
            assert!((es.values[1] - (mean - disc)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn eigen_residual_and_orthonormality() {
        let mut rng = rng_from_seed(11);
        for trial in 0..1000 {
            let n = 2 + trial % 8;
            let h = random_hermitian(n, &mut rng);
            let norm = h.frobenius_norm();
            let es = hermitian_eigensystem(&h).unwrap();
            assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
            assert!(es.vectors.unitarity_defect() < 1e-10);
            for k in 0..n {
                let vk = es.vectors.column(k);
                let hv = h.mul_vec(&vk);
                let res: f64 = hv
                    .iter()
                    .zip(&vk)
                    .map(|(x, y)| (x - y * es.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * norm, "n={n} residual {res}");
            }
        }
    }

    #[test]
    fn degenerate_spectrum_converges() {
        let mut rng = rng_from_seed(3);
        let u = haar_unitary(5, &mut rng);
        let h = ComplexMatrix::from_diagonal(&[2.0, 2.0, 2.0, -1.0, -1.0]).conjugate_by(&u);
        let es = hermitian_eigensystem(&h).unwrap();
        for (got, want) in es.values.iter().zip([2.0, 2.0, 2.0, -1.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = rng_from_seed(5);
        let ra = crate::random::random_density_matrix(2, &mut rng);
        let rb = crate::random::random_density_matrix(3, &mut rng);
        let rho = ra.kron(&rb);
        let got = partial_trace(&rho, (2, 3), Subsystem::B).unwrap();
        assert!(got.max_abs_diff(&ra) < 1e-12);
        let got = partial_trace(&rho, (2, 3), Subsystem::A).unwrap();
        assert!(got.max_abs_diff(&rb) < 1e-12);
        assert!((got.trace() - rho.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_maximally_entangled() {
        let n = 3;
        let mut psi = vec![c(0., 0.); n * n];
        for k in 0..n {
            psi[k * n + k] = c(1.0 / (n as f64).sqrt(), 0.0);
        }
        let rho = ComplexMatrix::outer(&psi);
        let red = partial_trace(&rho, (n, n), Subsystem::B).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::identity(n).scale_real(1.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let rho = ComplexMatrix::identity(5);
        assert!(matches!(
            partial_trace(&rho, (2, 3), Subsystem::B),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(partial_transpose(&rho, (2, 2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let mut rng = rng_from_seed(9);
        for &(na, nb) in &[(2, 2), (2, 3), (3, 2), (3, 3)] {
            let rho = crate::random::random_density_matrix(na * nb, &mut rng);
            let pt = partial_transpose(&rho, (na, nb)).unwrap();
            assert!(pt.hermitian_asymmetry() < 1e-15);
            assert_eq!(partial_transpose(&pt, (na, nb)).unwrap(), rho);
        }
    }

    #[test]
    fn partial_transpose_keeps_diagonal_matrices() {
        let rho = ComplexMatrix::from_diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&rho, (2, 2)).unwrap(), rho);
    }

    #[test]
    fn separable_mixture_has_positive_partial_transpose() {
        let mut rng = rng_from_seed(13);
        for _ in 0..50 {
            let rho = crate::random::random_separable_state((3, 3), 4, &mut rng);
            let pt = partial_transpose(&rho, (3, 3)).unwrap();
            let es = hermitian_eigensystem(&pt).unwrap();
            assert!(es.values.iter().all(|&x| x >= -1e-12));
        }
    }

    #[test]
    fn schmidt_form_partial_transpose_spectrum() {
        let lambda = [0.5f64, 0.3, 0.2];
        let n = 3;
        let mut psi = vec![c(0., 0.); n * n];
        for k in 0..n {
            psi[k * n + k] = c(lambda[k].sqrt(), 0.0);
        }
        let pt = partial_transpose(&ComplexMatrix::outer(&psi), (n, n)).unwrap();
        let mut got = hermitian_eigensystem(&pt).unwrap().values;
        let mut want: Vec<f64> = lambda.to_vec();
        for i in 0..n {
            for j in 0..i {
                let s = (lambda[i] * lambda[j]).sqrt();
                want.push(s);
                want.push(-s);
            }
        }
        want.sort_by(|a, b| b.total_cmp(a));
        got.sort_by(|a, b| b.total_cmp(a));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10);
        }
    }
}
