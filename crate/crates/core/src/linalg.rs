//! Dense complex matrix helpers shared by the operator modules.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Largest absolute entry, `‖a‖_max`.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn max_abs_diff_vec(a: &ComplexVector, b: &ComplexVector) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch in max_abs_diff_vec");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// `max(‖a·a* − I‖_max, ‖a*·a − I‖_max)` for a square matrix.
pub fn unitarity_residual(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "unitarity_residual needs a square matrix");
    let id = ComplexMatrix::identity(n, n);
    let left = max_abs_diff(&(a * a.adjoint()), &id);
    let right = max_abs_diff(&(a.adjoint() * a), &id);
    left.max(right)
}

pub fn identity_residual(a: &ComplexMatrix) -> f64 {
    max_abs_diff(a, &ComplexMatrix::identity(a.nrows(), a.ncols()))
}

/// Largest magnitude off the main diagonal.
pub fn max_off_diagonal(a: &ComplexMatrix) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if i != j {
                m = m.max(a[(i, j)].norm());
            }
        }
    }
    m
}

pub fn to_complex(a: &DMatrix<f64>) -> ComplexMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

pub fn real_to_complex_vec(x: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(x.len(), x.iter().map(|&v| Complex64::new(v, 0.0)))
}

/// `psi · Diag(diag) · psi*` without forming the diagonal matrix.
pub fn spectral_synthesis(psi: &ComplexMatrix, diag: &[Complex64]) -> ComplexMatrix {
    assert_eq!(psi.ncols(), diag.len(), "one diagonal entry per basis column");
    let mut scaled = psi.clone();
    for (j, d) in diag.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= d;
        }
    }
    scaled * psi.adjoint()
}

/// Unit-modulus phases `exp(-i · scale · v)`.
pub fn phases(values: &[f64], scale: f64) -> Vec<Complex64> {
    values
        .iter()
        .map(|&v| Complex64::from_polar(1.0, -scale * v))
        .collect()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker sum `a ⊕ b = a ⊗ I + I ⊗ b`.
pub fn kronecker_sum<T: ComplexField>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    assert!(a.is_square() && b.is_square(), "kronecker_sum needs square factors");
    let (m, n) = (a.nrows(), b.nrows());
    a.kronecker(&DMatrix::identity(n, n)) + DMatrix::<T>::identity(m, m).kronecker(b)
}

/// Column-stacking vectorization: entry `(i, j)` lands at `j * nrows + i`.
pub fn vec_columns(x: &ComplexMatrix) -> ComplexVector {
    // nalgebra stores column-major, so iteration order is already vec order.
    ComplexVector::from_iterator(x.len(), x.iter().cloned())
}

pub fn unvec_columns(v: &ComplexVector, nrows: usize, ncols: usize) -> ComplexMatrix {
    assert_eq!(v.len(), nrows * ncols, "unvec length mismatch");
    ComplexMatrix::from_iterator(nrows, ncols, v.iter().cloned())
}

pub fn all_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
