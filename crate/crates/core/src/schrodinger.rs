//! Schrödinger evolution `i·α·∂u/∂t = H·u` of a graph signal.
//!
//! The transition matrix `exp(−i·t·H/α)` is available from the spectral
//! factorization and from a truncated power series; the two are kept as
//! independent routes for cross-checking. [`evolve`] works directly on
//! the eigen-expansion.

use std::f64::consts::E;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::spectral::SpectralBasis;
use crate::translation::FrequencySpec;

/// Hard cap on power-series terms.
pub const MAX_SERIES_TERMS: usize = 10_000;

/// Self-adjoint `H = Ψ · Diag(γ) · Ψ*`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    h: ComplexMatrix,
    basis: SpectralBasis,
    gamma: Vec<f64>,
}

impl Hamiltonian {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    /// Spectral norm; `H` is normal so this is `max |γ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    /// `‖H − H*‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        linalg::max_abs_diff(&self.h, &self.h.adjoint())
    }
}

pub fn hamiltonian(b: &SpectralBasis, f: &FrequencySpec) -> Result<Hamiltonian> {
    if f.len() != b.n() {
        return Err(Error::DimensionMismatch { expected: b.n(), found: f.len() });
    }
    let diag: Vec<Complex64> = f.values().iter().map(|&g| Complex64::new(g, 0.0)).collect();
    let mut h = linalg::spectral_synthesis(b.psi(), &diag);
    // Symmetrize away rounding so H == H* holds to the last bit.
    h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(Hamiltonian { h, basis: b.clone(), gamma: f.values().to_vec() })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite and nonzero, got {alpha}")));
    }
    Ok(())
}

/// `Ψ · Diag(exp(−i·t·γ/α)) · Ψ*`.
pub fn transition_spectral(h: &Hamiltonian, t: f64, alpha: f64) -> Result<ComplexMatrix> {
    check_alpha(alpha)?;
    Ok(linalg::spectral_synthesis(h.basis.psi(), &linalg::phases(&h.gamma, t / alpha)))
}

/// Truncated series `Σ_r (−i·t/α)^r / r! · H^r`.
///
/// Terms are added until one has max-abs norm at most `tol` and at least
/// `⌈e·‖A‖₂⌉` terms have been taken (`A = t·H/α`), since the terms grow
/// before they decay. When `‖A‖₂ > 1/2` the series is summed for
/// `A / 2^s` with tolerance `tol / 2^s` and the result squared `s` times;
/// summing the raw series there loses about `ε·e^‖A‖` to cancellation.
pub fn transition_series(h: &Hamiltonian, t: f64, alpha: f64, tol: f64) -> Result<ComplexMatrix> {
    check_alpha(alpha)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let norm = (t / alpha).abs() * h.spectral_norm();
    if !norm.is_finite() {
        return Err(Error::InvalidParameter("t / alpha overflows".into()));
    }
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let shrink = 2f64.powi(squarings as i32);
    let mut result = series_sum(&h.h, -t / (alpha * shrink), norm / shrink, tol / shrink)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// `Σ_r (i·scale·H)^r / r!` with the stopping rule of [`transition_series`].
fn series_sum(h: &ComplexMatrix, scale: f64, norm: f64, tol: f64) -> Result<ComplexMatrix> {
    let n = h.nrows();
    let step = Complex64::new(0.0, scale);
    let min_terms = (E * norm).ceil() as usize;
    let mut sum = ComplexMatrix::identity(n, n);
    let mut term = ComplexMatrix::identity(n, n);
    let mut terms = 1;
    while linalg::max_abs(&term) > tol || terms < min_terms {
        if terms >= MAX_SERIES_TERMS {
            return Err(Error::SeriesDiverged { max_terms: MAX_SERIES_TERMS });
        }
        term = (h * term) * (step / terms as f64);
        sum += &term;
        terms += 1;
    }
    Ok(sum)
}

/// `u(t) = Σ_k exp(−i·t·γ_k/α) · ⟨u(0), ψ_k⟩ · ψ_k`.
pub fn evolve(u0: &ComplexVector, h: &Hamiltonian, t: f64, alpha: f64) -> Result<ComplexVector> {
    check_alpha(alpha)?;
    if u0.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: u0.len() });
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let psi = h.basis.psi();
    let mut u = ComplexVector::zeros(h.n());
    for (k, &g) in h.gamma.iter().enumerate() {
        let col = psi.column(k);
        let coeff = col.dotc(u0) * Complex64::from_polar(1.0, -t * g / alpha);
        u.axpy(coeff, &col, Complex64::new(1.0, 0.0));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, laplacian, GraphKind};
    use crate::linalg::{identity_residual, max_abs, max_abs_diff, max_abs_diff_vec, to_complex};
    use crate::spectral::{eig_sym, BasisSource};
    use crate::translation::{frequencies, gto, Variant};

    fn setup(kind: GraphKind) -> (SpectralBasis, FrequencySpec) {
        let g = generate(kind, Some(7)).unwrap();
        let b = eig_sym(&laplacian(&g), BasisSource::Laplacian).unwrap();
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        (b, f)
    }

    #[test]
    fn laplacian_eigenvalues_rebuild_laplacian() {
        let g = generate(GraphKind::Grid { rows: 2, cols: 3 }, None).unwrap();
        let l = laplacian(&g);
        let b = eig_sym(&l, BasisSource::Laplacian).unwrap();
        let f = frequencies(&Variant::Custom { values: b.lambda().to_vec() }, &b).unwrap();
        let h = hamiltonian(&b, &f).unwrap();
        assert!(max_abs_diff(h.matrix(), &to_complex(l.matrix())) < 1e-9);
        assert_eq!(h.hermiticity_residual(), 0.0);

        let zero = frequencies(&Variant::Custom { values: vec![0.0; 6] }, &b).unwrap();
        assert_eq!(max_abs(hamiltonian(&b, &zero).unwrap().matrix()), 0.0);
    }

    #[test]
    fn single_edge_hamiltonian_closed_form() {
        // γ = (0, √2) on the (1,1)/√2, (1,−1)/√2 basis gives (√2/2)·[[1,−1],[−1,1]].
        let (b, f) = setup(GraphKind::Path { n: 2 });
        let h = hamiltonian(&b, &f).unwrap();
        let a = 2f64.sqrt() / 2.0;
        let want = to_complex(&nalgebra::DMatrix::from_row_slice(2, 2, &[a, -a, -a, a]));
        assert!(max_abs_diff(h.matrix(), &want) < 1e-12);

        let spectral = transition_spectral(&h, 1.0, 1.0).unwrap();
        let series = transition_series(&h, 1.0, 1.0, 1e-12).unwrap();
        assert!(max_abs_diff(&spectral, &series) < 1e-10);
    }

    #[test]
    fn zero_time_and_zero_hamiltonian() {
        let (b, f) = setup(GraphKind::Cycle { n: 5 });
        let h = hamiltonian(&b, &f).unwrap();
        assert!(identity_residual(&transition_spectral(&h, 0.0, 1.0).unwrap()) < 1e-12);
        assert_eq!(identity_residual(&transition_series(&h, 0.0, 1.0, 1e-12).unwrap()), 0.0);

        let zero = frequencies(&Variant::Custom { values: vec![0.0; 5] }, &b).unwrap();
        let h0 = hamiltonian(&b, &zero).unwrap();
        assert_eq!(identity_residual(&transition_series(&h0, 3.0, 1.0, 1e-12).unwrap()), 0.0);
    }

    #[test]
    fn only_ratio_t_over_alpha_matters() {
        let (b, f) = setup(GraphKind::Cycle { n: 6 });
        let h = hamiltonian(&b, &f).unwrap();
        let a = transition_spectral(&h, 3.0, 2.0).unwrap();
        let b1 = transition_spectral(&h, 1.5, 1.0).unwrap();
        assert!(max_abs_diff(&a, &b1) < 1e-12);
        assert!(transition_spectral(&h, 1.0, 0.0).is_err());
        assert!(evolve(&ComplexVector::zeros(6), &h, 1.0, 0.0).is_err());
    }

    #[test]
    fn integer_time_matches_translation() {
        let (b, f) = setup(GraphKind::Cycle { n: 8 });
        let h = hamiltonian(&b, &f).unwrap();
        for t in [1.0, 2.0, 5.0] {
            let op = gto(&b, &f, t).unwrap();
            assert!(max_abs_diff(&transition_spectral(&h, t, 1.0).unwrap(), op.matrix()) < 1e-10);
            // general alpha reads as kappa = t / alpha
            let op = gto(&b, &f, t / 3.0).unwrap();
            assert!(max_abs_diff(&transition_spectral(&h, t, 3.0).unwrap(), op.matrix()) < 1e-10);
        }
    }

    #[test]
    fn single_mode_evolution() {
        let (b, f) = setup(GraphKind::Path { n: 5 });
        let h = hamiltonian(&b, &f).unwrap();
        for k in 0..5 {
            let u0 = b.vector(k);
            let want = &u0 * Complex64::from_polar(1.0, -0.7 * f.values()[k] / 2.0);
            assert!(max_abs_diff_vec(&evolve(&u0, &h, 0.7, 2.0).unwrap(), &want) < 1e-12);
        }
        let u0 = ComplexVector::from_fn(5, |i, _| Complex64::new(i as f64, 1.0));
        assert!(max_abs_diff_vec(&evolve(&u0, &h, 0.0, 1.0).unwrap(), &u0) < 1e-12);
        let matrix_route = transition_spectral(&h, 2.5, 1.0).unwrap() * &u0;
        assert!(max_abs_diff_vec(&evolve(&u0, &h, 2.5, 1.0).unwrap(), &matrix_route) < 1e-10);
        assert!(evolve(&ComplexVector::zeros(4), &h, 1.0, 1.0).is_err());
    }

    #[test]
    fn series_rejects_bad_tolerance() {
        let (b, f) = setup(GraphKind::Path { n: 3 });
        let h = hamiltonian(&b, &f).unwrap();
        assert!(transition_series(&h, 1.0, 1.0, 0.0).is_err());
        assert!(transition_series(&h, f64::MAX, 1e-300, 1e-12).is_err());
    }

    #[test]
    fn series_accuracy_at_large_argument() {
        // |t/α|·‖H‖₂ = 20 on a 16-vertex cycle
        let (b, f) = setup(GraphKind::Cycle { n: 16 });
        let h = hamiltonian(&b, &f).unwrap();
        let t = 20.0 / h.spectral_norm();
        for tol in [1e-8, 1e-12] {
            let diff = max_abs_diff(
                &transition_series(&h, t, 1.0, tol).unwrap(),
                &transition_spectral(&h, t, 1.0).unwrap(),
            );
            assert!(diff <= 10.0 * tol, "tol {tol}: {diff:e}");
        }
    }
}
