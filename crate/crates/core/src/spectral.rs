//! Spectral bases of self-adjoint graph matrices and the graph / discrete
//! Fourier transforms they define.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::RealSymMatrix;
use crate::linalg::{self, ComplexMatrix, ComplexVector};

/// Tolerance for unitary identities.
pub const UNITARY_TOL: f64 = 1e-10;
/// Relative tolerance for `A = Ψ Λ Ψ*` reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Eigenvalues closer than this to zero are treated as exactly zero.
pub const ZERO_EIGENVALUE_CLAMP: f64 = 1e-10;

const SIGN_THRESHOLD: f64 = 1e-12;
const EIG_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    Laplacian,
    Adjacency,
    Dft,
    Custom,
}

impl BasisSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisSource::Laplacian => "laplacian",
            BasisSource::Adjacency => "adjacency",
            BasisSource::Dft => "dft",
            BasisSource::Custom => "custom",
        }
    }
}

impl fmt::Display for BasisSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Orthonormal eigenvectors (columns of `psi`) with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    psi: ComplexMatrix,
    lambda: Vec<f64>,
    source: BasisSource,
}

impl SpectralBasis {
    /// Assembles a basis from its parts, checking unitarity, finiteness and
    /// eigenvalue ordering.
    pub fn from_parts(psi: ComplexMatrix, lambda: Vec<f64>, source: BasisSource) -> Result<Self> {
        let n = psi.nrows();
        if n == 0 || !psi.is_square() {
            return Err(Error::InvalidParameter(format!(
                "basis matrix must be square and nonempty, got {}x{}",
                psi.nrows(),
                psi.ncols()
            )));
        }
        if lambda.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: lambda.len() });
        }
        if !linalg::all_finite(&psi) || lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("basis has non-finite entries".into()));
        }
        if lambda.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("eigenvalues must be nondecreasing".into()));
        }
        let residual = linalg::unitarity_residual(&psi);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { psi, lambda, source })
    }

    /// A user-supplied unitary basis with no associated eigenvalues.
    pub fn custom(psi: ComplexMatrix) -> Result<Self> {
        let n = psi.nrows();
        Self::from_parts(psi, vec![0.0; n], BasisSource::Custom)
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn psi(&self) -> &ComplexMatrix {
        &self.psi
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn source(&self) -> BasisSource {
        self.source
    }

    /// Column `k` of `psi`.
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.psi.column(k).into_owned()
    }

    /// `psi · Diag(lambda) · psi*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag: Vec<Complex64> = self.lambda.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        linalg::spectral_synthesis(&self.psi, &diag)
    }

    /// `‖A − psi·Diag(lambda)·psi*‖_max / max(1, ‖A‖_max)`.
    pub fn reconstruction_residual(&self, a: &RealSymMatrix) -> f64 {
        let a = linalg::to_complex(a.matrix());
        linalg::max_abs_diff(&a, &self.reconstruct()) / linalg::max_abs(&a).max(1.0)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for n = 1).
    pub fn min_eigen_gap(&self) -> f64 {
        self.lambda.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues come out ascending. Each eigenvector is real and scaled so
/// that its first entry with magnitude above `1e-12` is positive; inside a
/// repeated eigenvalue the choice of basis is whatever the solver returns.
pub fn eig_sym(a: &RealSymMatrix, source: BasisSource) -> Result<SpectralBasis> {
    let n = a.n();
    let eig = SymmetricEigen::try_new(a.matrix().clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or(Error::NoConvergence { n })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut vectors = DMatrix::<f64>::zeros(n, n);
    let mut lambda = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        if let Some(first) = v.iter().find(|x| x.abs() > SIGN_THRESHOLD) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        vectors.set_column(dst, &v);
        lambda.push(eig.eigenvalues[src]);
    }
    SpectralBasis::from_parts(linalg::to_complex(&vectors), lambda, source)
}

/// Unitary DFT basis: `psi[n, k] = exp(i·2πk·n/m)/√m`, `lambda[k] = 2πk/m`.
pub fn dft_basis(m: usize) -> Result<SpectralBasis> {
    if m < 1 {
        return Err(Error::InvalidParameter("DFT size must be at least 1".into()));
    }
    let scale = 1.0 / (m as f64).sqrt();
    let omega: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
    // Reduce n·k mod m before taking the angle so large products stay exact.
    let psi = ComplexMatrix::from_fn(m, m, |n, k| {
        let angle = 2.0 * PI * ((n * k) % m) as f64 / m as f64;
        Complex64::from_polar(scale, angle)
    });
    SpectralBasis::from_parts(psi, omega, BasisSource::Dft)
}

/// Forward transform `psi* · x`.
pub fn gft(x: &ComplexVector, b: &SpectralBasis) -> Result<ComplexVector> {
    check_len(x, b)?;
    Ok(b.psi.ad_mul(x))
}

/// Inverse transform `psi · xhat`.
pub fn igft(xhat: &ComplexVector, b: &SpectralBasis) -> Result<ComplexVector> {
    check_len(xhat, b)?;
    Ok(&b.psi * xhat)
}

fn check_len(x: &ComplexVector, b: &SpectralBasis) -> Result<()> {
    if x.len() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: x.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, laplacian, GraphKind};
    use crate::linalg::{identity_residual, max_abs_diff_vec, unitarity_residual};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vector(n: usize, seed: u64) -> ComplexVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexVector::from_fn(n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn single_edge_eigenproblem() {
        let g = generate(GraphKind::Path { n: 2 }, None).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        assert!((b.lambda()[0] - 0.0).abs() < 1e-14);
        assert!((b.lambda()[1] - 2.0).abs() < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        let expected = [[s, s], [s, -s]];
        for (i, row) in expected.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                assert!((b.psi()[(i, k)] - Complex64::new(e, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn four_cycle_eigenvalues_match_closed_form() {
        let g = generate(GraphKind::Cycle { n: 4 }, None).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        let mut closed: Vec<f64> = (0..4).map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / 4.0).cos()).collect();
        closed.sort_by(f64::total_cmp);
        for (got, want) in b.lambda().iter().zip(&closed) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(b.reconstruction_residual(&laplacian(&g)) < RECONSTRUCTION_TOL);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let b = eig_sym(&RealSymMatrix::identity(3), BasisSource::Custom).unwrap();
        assert_eq!(b.lambda(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigenvectors_are_real_with_sign_convention() {
        let g = generate(GraphKind::ErdosRenyi { n: 10, p: 0.5 }, Some(7)).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        for k in 0..b.n() {
            let v = b.vector(k);
            assert!(v.iter().all(|z| z.im == 0.0));
            let first = v.iter().find(|z| z.re.abs() > 1e-12).unwrap();
            assert!(first.re > 0.0);
        }
    }

    #[test]
    fn dft_small_sizes() {
        let b1 = dft_basis(1).unwrap();
        assert_eq!(b1.psi()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(b1.lambda(), &[0.0]);

        let b2 = dft_basis(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        // exp(iπnk)/√2 evaluated directly
        for n in 0..2 {
            for k in 0..2 {
                let want = Complex64::from_polar(s, PI * (n * k) as f64);
                assert!((b2.psi()[(n, k)] - want).norm() < 1e-15);
            }
        }
        assert_eq!(b2.lambda(), &[0.0, PI]);
        assert!(dft_basis(0).is_err());
    }

    #[test]
    fn dft_is_unitary() {
        for m in [1, 2, 3, 7, 16, 64] {
            assert!(unitarity_residual(dft_basis(m).unwrap().psi()) < UNITARY_TOL);
        }
    }

    #[test]
    fn gft_of_basis_vector_is_unit_vector() {
        let g = generate(GraphKind::Cycle { n: 8 }, None).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        for k in 0..8 {
            let xhat = gft(&b.vector(k), &b).unwrap();
            for (i, z) in xhat.iter().enumerate() {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((z - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
            let back = igft(&ComplexVector::from_fn(8, |i, _| Complex64::new((i == k) as u8 as f64, 0.0)), &b).unwrap();
            assert!(max_abs_diff_vec(&back, &b.vector(k)) < 1e-15);
        }
    }

    #[test]
    fn constant_signal_is_pure_dc() {
        let g = generate(GraphKind::Grid { rows: 3, cols: 3 }, None).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        let x = ComplexVector::from_element(9, Complex64::new(1.0, 0.0));
        let xhat = gft(&x, &b).unwrap();
        assert!((xhat[0].norm() - 3.0).abs() < 1e-10);
        assert!(xhat.iter().skip(1).all(|z| z.norm() <= 1e-10));
    }

    #[test]
    fn zero_and_mismatch() {
        let b = dft_basis(4).unwrap();
        let z = ComplexVector::zeros(4);
        assert_eq!(gft(&z, &b).unwrap(), z);
        assert_eq!(igft(&z, &b).unwrap(), z);
        assert!(matches!(
            gft(&ComplexVector::zeros(3), &b),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn parseval_and_round_trip() {
        for (seed, n) in [2usize, 5, 16, 64].into_iter().enumerate() {
            let g = generate(GraphKind::Cycle { n }, None).unwrap();
            let lb = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
            let db = dft_basis(n).unwrap();
            let x = random_vector(n, seed as u64);
            for b in [&lb, &db] {
                let xhat = gft(&x, b).unwrap();
                assert!((xhat.norm() - x.norm()).abs() < 1e-10);
                assert!(max_abs_diff_vec(&igft(&xhat, b).unwrap(), &x) < 1e-10);
            }
        }
    }

    #[test]
    fn from_parts_rejects_non_unitary() {
        let psi = ComplexMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(
            SpectralBasis::from_parts(psi, vec![0.0, 1.0], BasisSource::Custom),
            Err(Error::NotUnitary { .. })
        ));
        let id = ComplexMatrix::identity(2, 2);
        assert!(SpectralBasis::from_parts(id.clone(), vec![1.0, 0.0], BasisSource::Custom).is_err());
        assert!(identity_residual(SpectralBasis::custom(id).unwrap().psi()) == 0.0);
    }
}
