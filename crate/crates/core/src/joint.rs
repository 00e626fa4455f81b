//! Joint time-vertex signals, transforms and translations.
//!
//! A time-vertex signal is an `N × M` matrix (rows are vertices, columns
//! are time steps). Operators act on its column-stacked vectorization, so
//! the joint Fourier basis is `Ψ_J = Ψ_D ⊗ Ψ_G` and index `j·N + i` pairs
//! graph frequency `i` with time frequency `j`. Kronecker sums follow
//! `A ⊕ B = A ⊗ I + I ⊗ B`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use crate::discrete_time::dt_translation;
use crate::error::{Error, Result};
use crate::graph::{self, RealSymMatrix};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::spectral::{eig_sym, BasisSource, SpectralBasis};
use crate::translation::{frequencies, gto, FrequencySpec, TranslationOperator, Variant};

/// Largest `N·M` for which a dense joint operator is materialized.
pub const DENSE_LIMIT: usize = 4096;

/// `N × M` signal: rows are vertices, columns are time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeVertexSignal {
    x: ComplexMatrix,
}

impl TimeVertexSignal {
    pub fn new(x: ComplexMatrix) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidParameter("time-vertex signal must be nonempty".into()));
        }
        if !linalg::all_finite(&x) {
            return Err(Error::InvalidParameter("time-vertex signal has non-finite entries".into()));
        }
        Ok(Self { x })
    }

    pub fn from_real(x: &DMatrix<f64>) -> Result<Self> {
        Self::new(linalg::to_complex(x))
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self { x: ComplexMatrix::zeros(n, m) }
    }

    /// Inverse of [`vec`](Self::vec).
    pub fn from_vec(v: &ComplexVector, n: usize, m: usize) -> Result<Self> {
        if v.len() != n * m {
            return Err(Error::DimensionMismatch { expected: n * m, found: v.len() });
        }
        Self::new(linalg::unvec_columns(v, n, m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn vertices(&self) -> usize {
        self.x.nrows()
    }

    pub fn times(&self) -> usize {
        self.x.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.x.shape()
    }

    /// Column-stacked vectorization.
    pub fn vec(&self) -> ComplexVector {
        linalg::vec_columns(&self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointForm {
    Kronecker,
    Spectral,
    Segarra,
    SegarraBivariate,
}

impl JointForm {
    pub fn as_str(&self) -> &'static str {
        match self {
            JointForm::Kronecker => "kronecker",
            JointForm::Spectral => "spectral",
            JointForm::Segarra => "segarra",
            JointForm::SegarraBivariate => "segarra_bivariate",
        }
    }
}

/// Dense operator on vectorized `N × M` signals.
#[derive(Debug, Clone)]
pub struct JointOperator {
    matrix: ComplexMatrix,
    vertices: usize,
    times: usize,
    kappa: f64,
    upsilon: f64,
    form: JointForm,
}

impl JointOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn upsilon(&self) -> f64 {
        self.upsilon
    }

    pub fn form(&self) -> JointForm {
        self.form
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.vertices, self.times)
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.matrix)
    }

    pub fn apply_vec(&self, x: &ComplexVector) -> Result<ComplexVector> {
        if x.len() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: self.matrix.ncols(), found: x.len() });
        }
        Ok(&self.matrix * x)
    }

    pub fn apply(&self, x: &TimeVertexSignal) -> Result<TimeVertexSignal> {
        if x.shape() != (self.vertices, self.times) {
            return Err(Error::DimensionMismatch {
                expected: self.vertices * self.times,
                found: x.vertices() * x.times(),
            });
        }
        TimeVertexSignal::from_vec(&self.apply_vec(&x.vec())?, self.vertices, self.times)
    }

    pub fn metadata(&self) -> Value {
        json!({
            "kind": "joint",
            "form": self.form.as_str(),
            "kappa": self.kappa,
            "upsilon": self.upsilon,
            "vertices": self.vertices,
            "times": self.times,
        })
    }
}

fn check_dense(n: usize, m: usize) -> Result<()> {
    let size = n * m;
    if size > DENSE_LIMIT {
        return Err(Error::TooLarge { size, limit: DENSE_LIMIT });
    }
    Ok(())
}

fn check_dft(bd: &SpectralBasis) -> Result<()> {
    if bd.source() != BasisSource::Dft {
        return Err(Error::IncompatibleBasis {
            variant: "joint transform",
            required: "a dft time basis",
            found: bd.source().to_string(),
        });
    }
    Ok(())
}

fn check_shape(x: &TimeVertexSignal, bg: &SpectralBasis, bd: &SpectralBasis) -> Result<()> {
    if x.vertices() != bg.n() {
        return Err(Error::DimensionMismatch { expected: bg.n(), found: x.vertices() });
    }
    if x.times() != bd.n() {
        return Err(Error::DimensionMismatch { expected: bd.n(), found: x.times() });
    }
    Ok(())
}

/// Joint Fourier transform `Ψ_G* · X · conj(Ψ_D)`.
pub fn jft(x: &TimeVertexSignal, bg: &SpectralBasis, bd: &SpectralBasis) -> Result<TimeVertexSignal> {
    check_dft(bd)?;
    check_shape(x, bg, bd)?;
    TimeVertexSignal::new(bg.psi().ad_mul(&x.x) * bd.psi().conjugate())
}

/// Inverse joint transform `Ψ_G · X̂ · Ψ_D^T`.
pub fn ijft(xhat: &TimeVertexSignal, bg: &SpectralBasis, bd: &SpectralBasis) -> Result<TimeVertexSignal> {
    check_dft(bd)?;
    check_shape(xhat, bg, bd)?;
    TimeVertexSignal::new(bg.psi() * &xhat.x * bd.psi().transpose())
}

/// `|jft(X)[ℓ, k]|²`.
pub fn joint_power_spectrum(
    x: &TimeVertexSignal,
    bg: &SpectralBasis,
    bd: &SpectralBasis,
) -> Result<DMatrix<f64>> {
    Ok(jft(x, bg, bd)?.x.map(|z| z.norm_sqr()))
}

/// Dense joint Fourier basis `Ψ_D ⊗ Ψ_G`.
pub fn joint_basis(bg: &SpectralBasis, bd: &SpectralBasis) -> Result<ComplexMatrix> {
    check_dense(bg.n(), bd.n())?;
    Ok(linalg::kron(bd.psi(), bg.psi()))
}

/// `T_D^υ ⊗ T_G^κ`, with `κ` taken from the graph operator.
pub fn jto_kronecker(tg: &TranslationOperator, m: usize, upsilon: f64) -> Result<JointOperator> {
    check_dense(tg.n(), m)?;
    let td = dt_translation(m, upsilon)?;
    Ok(JointOperator {
        matrix: linalg::kron(&td, tg.matrix()),
        vertices: tg.n(),
        times: m,
        kappa: tg.kappa(),
        upsilon,
        form: JointForm::Kronecker,
    })
}

/// Two-sided application `T_G^κ · X · (T_D^υ)^T`, never forming the
/// joint matrix; usable at any size.
pub fn jto_two_sided(tg: &TranslationOperator, upsilon: f64, x: &TimeVertexSignal) -> Result<TimeVertexSignal> {
    if x.vertices() != tg.n() {
        return Err(Error::DimensionMismatch { expected: tg.n(), found: x.vertices() });
    }
    let td = dt_translation(x.times(), upsilon)?;
    TimeVertexSignal::new(tg.matrix() * &x.x * td.transpose())
}

/// Joint frequencies `ζ[j·N + i] = κ·ϖ_i + υ·ω_j`, the diagonal of
/// `υ·M_D ⊕ κ·M_G`.
pub fn joint_frequencies(fg: &FrequencySpec, bd: &SpectralBasis, kappa: f64, upsilon: f64) -> Vec<f64> {
    let mut zeta = Vec::with_capacity(fg.len() * bd.n());
    for &omega in bd.lambda() {
        for &varpi in fg.values() {
            zeta.push(kappa * varpi + upsilon * omega);
        }
    }
    zeta
}

/// `Ψ_J · Diag(exp(−i·ζ)) · Ψ_J*`.
pub fn jto_spectral(
    bg: &SpectralBasis,
    bd: &SpectralBasis,
    fg: &FrequencySpec,
    kappa: f64,
    upsilon: f64,
) -> Result<JointOperator> {
    check_dft(bd)?;
    if fg.len() != bg.n() {
        return Err(Error::DimensionMismatch { expected: bg.n(), found: fg.len() });
    }
    if !(kappa.is_finite() && upsilon.is_finite()) {
        return Err(Error::InvalidParameter("translation values must be finite".into()));
    }
    let psi_j = joint_basis(bg, bd)?;
    let zeta = joint_frequencies(fg, bd, kappa, upsilon);
    Ok(JointOperator {
        matrix: linalg::spectral_synthesis(&psi_j, &linalg::phases(&zeta, 1.0)),
        vertices: bg.n(),
        times: bd.n(),
        kappa,
        upsilon,
        form: JointForm::Spectral,
    })
}

/// Checks that `wd` is the adjacency matrix of an unweighted cycle
/// (trivial for one vertex, a single edge for two).
fn check_cycle_adjacency(wd: &RealSymMatrix) -> Result<()> {
    let m = wd.n();
    let w = wd.matrix();
    let bad = |why: String| Err(Error::InvalidParameter(format!("time adjacency is not a cycle: {why}")));
    if m == 0 {
        return bad("empty".into());
    }
    if w.iter().any(|&v| v != 0.0 && v != 1.0) {
        return bad("entries must be 0 or 1".into());
    }
    let expected_degree = match m {
        1 => 0.0,
        2 => 1.0,
        _ => 2.0,
    };
    for i in 0..m {
        if w[(i, i)] != 0.0 {
            return bad(format!("self-loop at {i}"));
        }
        let deg: f64 = w.row(i).sum();
        if deg != expected_degree {
            return bad(format!("row {i} has {deg} unit entries"));
        }
    }
    if !graph::validate(w).is_valid() {
        return bad("not a single connected cycle".into());
    }
    Ok(())
}

/// Joint adjacency shift `W_D ⊕ W_G`. Real and generally not isometric.
pub fn segarra_shift(wg: &RealSymMatrix, wd: &RealSymMatrix) -> Result<JointOperator> {
    check_cycle_adjacency(wd)?;
    check_dense(wg.n(), wd.n())?;
    let s = wd.kronecker_sum(wg);
    Ok(JointOperator {
        matrix: linalg::to_complex(s.matrix()),
        vertices: wg.n(),
        times: wd.n(),
        kappa: 1.0,
        upsilon: 1.0,
        form: JointForm::Segarra,
    })
}

/// `| ‖t·x‖₂ / ‖x‖₂ − 1 |`.
pub fn isometry_defect(op: &JointOperator, x: &ComplexVector) -> Result<f64> {
    let y = op.apply_vec(x)?;
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("isometry defect of the zero vector".into()));
    }
    Ok((y.norm() / norm - 1.0).abs())
}

/// Bivariate joint adjacency shift
/// `(Φ_D ⊗ Φ_G) · (Γ_D^υ ⊕ Γ_G^κ) · (Φ_D ⊗ Φ_G)*` with elementwise
/// integer powers of the eigenvalues (`0^0 = 1`).
pub fn segarra_bivariate(
    bg_adj: &SpectralBasis,
    bd_adj: &SpectralBasis,
    kappa: u32,
    upsilon: u32,
) -> Result<JointOperator> {
    for b in [bg_adj, bd_adj] {
        if b.source() != BasisSource::Adjacency {
            return Err(Error::IncompatibleBasis {
                variant: "segarra_bivariate",
                required: "adjacency bases",
                found: b.source().to_string(),
            });
        }
    }
    let (n, m) = (bg_adj.n(), bd_adj.n());
    check_dense(n, m)?;
    let phi = linalg::kron(bd_adj.psi(), bg_adj.psi());
    let mut diag = Vec::with_capacity(n * m);
    for &gd in bd_adj.lambda() {
        for &gg in bg_adj.lambda() {
            diag.push(Complex64::new(gd.powi(upsilon as i32) + gg.powi(kappa as i32), 0.0));
        }
    }
    Ok(JointOperator {
        matrix: linalg::spectral_synthesis(&phi, &diag),
        vertices: n,
        times: m,
        kappa: kappa as f64,
        upsilon: upsilon as f64,
        form: JointForm::SegarraBivariate,
    })
}

/// Translation on the Cartesian product graph, built from the joint
/// Laplacian `L_D ⊕ L_G` with angular frequencies `√λ`. Exposed to compare
/// against the joint translation at `κ = υ`; the two do not coincide in
/// general because `√(λ_g + λ_d) ≠ √λ_g + ω_d`.
pub fn joint_graph_gto(lg: &RealSymMatrix, ld: &RealSymMatrix, kappa: f64) -> Result<TranslationOperator> {
    check_dense(lg.n(), ld.n())?;
    let lj = ld.kronecker_sum(lg);
    let b = eig_sym(&lj, BasisSource::Laplacian)?;
    let f = frequencies(&Variant::LaplacianSqrt, &b)?;
    gto(&b, &f, kappa)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftDeviation {
    pub kappa: f64,
    pub upsilon: f64,
    /// `‖T·μ̂ − μ̂‖_∞`.
    pub mean_deviation: f64,
    /// `‖T·Ŝ·T* − Ŝ‖_max`.
    pub moment_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JwssReport {
    pub samples: usize,
    pub tol: f64,
    pub shifts: Vec<ShiftDeviation>,
}

impl JwssReport {
    pub fn passed(&self) -> bool {
        self.shifts.iter().all(|s| s.pass)
    }
}

/// Finite-sample check of joint wide-sense stationarity: the sample mean
/// and the uncentered sample second moment `(1/K)·Σ x·x*` should be
/// invariant under each requested joint translation.
pub fn jwss_check<F>(
    signals: &[TimeVertexSignal],
    shifts: &[(f64, f64)],
    mut build: F,
    tol: f64,
) -> Result<JwssReport>
where
    F: FnMut(f64, f64) -> Result<JointOperator>,
{
    if signals.len() < 2 {
        return Err(Error::InvalidParameter("need at least two signals".into()));
    }
    if shifts.is_empty() {
        return Err(Error::InvalidParameter("shift list is empty".into()));
    }
    let (n, m) = signals[0].shape();
    if let Some(bad) = signals.iter().find(|s| s.shape() != (n, m)) {
        return Err(Error::DimensionMismatch { expected: n * m, found: bad.vertices() * bad.times() });
    }
    check_dense(n, m)?;
    let k = signals.len();
    let mut stacked = ComplexMatrix::zeros(n * m, k);
    for (j, s) in signals.iter().enumerate() {
        stacked.set_column(j, &s.vec());
    }
    let inv_k = Complex64::new(1.0 / k as f64, 0.0);
    let mean: ComplexVector = stacked.column_sum() * inv_k;
    let moment = &stacked * stacked.adjoint() * inv_k;

    let mut out = Vec::with_capacity(shifts.len());
    for &(kappa, upsilon) in shifts {
        let op = build(kappa, upsilon)?;
        if op.matrix.nrows() != n * m {
            return Err(Error::DimensionMismatch { expected: n * m, found: op.matrix.nrows() });
        }
        let mean_deviation = linalg::max_abs_diff_vec(&(&op.matrix * &mean), &mean);
        let moved = &op.matrix * &moment * op.matrix.adjoint();
        let moment_deviation = linalg::max_abs_diff(&moved, &moment);
        out.push(ShiftDeviation {
            kappa,
            upsilon,
            mean_deviation,
            moment_deviation,
            pass: mean_deviation <= tol && moment_deviation <= tol,
        });
    }
    Ok(JwssReport { samples: k, tol, shifts: out })
}

/// `k` real standard-normal `N × M` signals from a seeded stream.
pub fn white_noise_ensemble(n: usize, m: usize, k: usize, seed: u64) -> Vec<TimeVertexSignal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let x = ComplexMatrix::from_fn(n, m, |_, _| {
                Complex64::new(StandardNormal.sample(&mut rng), 0.0)
            });
            TimeVertexSignal { x }
        })
        .collect()
}
