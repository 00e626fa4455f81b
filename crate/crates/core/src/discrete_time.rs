//! Circular translation of discrete-time signals, as a permutation and in
//! the DFT-diagonal form. The two agree for integer shifts; the spectral
//! form also defines bandlimited fractional shifts.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::spectral::dft_basis;

/// Right-circular shift: column `j` is `e_{(j+1) mod m}`, so
/// `(T x)[n] = x[(n − 1) mod m]`.
pub fn shift_permutation(m: usize) -> Result<DMatrix<f64>> {
    if m < 1 {
        return Err(Error::InvalidParameter("time length must be at least 1".into()));
    }
    let mut t = DMatrix::zeros(m, m);
    for j in 0..m {
        t[((j + 1) % m, j)] = 1.0;
    }
    Ok(t)
}

/// `Ψ_D · exp(−iυ·M_D) · Ψ_D*` with the unitary DFT basis.
pub fn dt_translation(m: usize, upsilon: f64) -> Result<ComplexMatrix> {
    if !upsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("translation value must be finite, got {upsilon}")));
    }
    let basis = dft_basis(m)?;
    Ok(linalg::spectral_synthesis(basis.psi(), &linalg::phases(basis.lambda(), upsilon)))
}
