//! Isometric graph translation operators `T = Ψ · exp(−iκ·M) · Ψ*`.
//!
//! The operator is fixed by two choices: the Fourier basis `Ψ` and the
//! diagonal frequency matrix `M`. [`Variant`] enumerates the frequency maps
//! this crate knows about; [`frequencies`] turns one into a concrete
//! [`FrequencySpec`] for a basis, and [`gto`] assembles the operator.

use std::f64::consts::{PI, TAU};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};
use crate::spectral::{self, BasisSource, SpectralBasis, ZERO_EIGENVALUE_CLAMP};

/// How uniform phases `2πℓ/N` are attached to basis columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenOrdering {
    /// Rank columns by descending eigenvalue, so the largest eigenvalue gets
    /// phase 0. Ties keep column order.
    DescendingEigenvalue,
    /// Column `ℓ` gets `2πℓ/N`.
    BasisColumns,
}

impl EigenOrdering {
    /// Descending for adjacency bases, column order for everything else.
    pub fn default_for(source: BasisSource) -> Self {
        match source {
            BasisSource::Adjacency => EigenOrdering::DescendingEigenvalue,
            _ => EigenOrdering::BasisColumns,
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            EigenOrdering::DescendingEigenvalue => "descending",
            EigenOrdering::BasisColumns => "columns",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// Angular graph frequencies `√λ` on a Laplacian basis.
    LaplacianSqrt,
    /// Reduced frequencies `π·√(λ/ρ)` on a Laplacian basis; `None` uses the
    /// largest Laplacian eigenvalue.
    GiraultReduced { rho: Option<f64> },
    /// Uniform phases `2πℓ/N` on an adjacency (or user-supplied) basis.
    GaviliUniform { ordering: Option<EigenOrdering> },
    /// Distinct phases in `[0, 2π]`, one per basis column.
    GaviliPhases { phi: Vec<f64> },
    /// Arbitrary real diagonal, one per basis column.
    Custom { values: Vec<f64> },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::LaplacianSqrt => "laplacian_sqrt",
            Variant::GiraultReduced { .. } => "girault_reduced",
            Variant::GaviliUniform { .. } => "gavili_uniform",
            Variant::GaviliPhases { .. } => "gavili_phases",
            Variant::Custom { .. } => "custom",
        }
    }
}

/// Diagonal of the frequency matrix, ordered like the basis columns, plus
/// the resolved variant that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpec {
    variant: Variant,
    values: Vec<f64>,
}

impl FrequencySpec {
    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn metadata(&self) -> Value {
        let mut meta = json!({ "variant": self.variant.name() });
        match &self.variant {
            Variant::GiraultReduced { rho: Some(rho) } => meta["rho"] = json!(rho),
            Variant::GaviliUniform { ordering: Some(o) } => meta["ordering"] = json!(o.as_str()),
            Variant::GaviliPhases { phi } => meta["phi"] = json!(phi),
            Variant::Custom { values } => meta["values"] = json!(values),
            _ => {}
        }
        meta
    }
}

fn clamped(lambda: f64) -> f64 {
    if lambda.abs() < ZERO_EIGENVALUE_CLAMP {
        0.0
    } else {
        lambda.max(0.0)
    }
}

fn require_source(
    variant: &'static str,
    b: &SpectralBasis,
    allowed: &[BasisSource],
    required: &'static str,
) -> Result<()> {
    if allowed.contains(&b.source()) {
        Ok(())
    } else {
        Err(Error::IncompatibleBasis { variant, required, found: b.source().to_string() })
    }
}

/// Resolves a frequency variant against a basis.
pub fn frequencies(variant: &Variant, b: &SpectralBasis) -> Result<FrequencySpec> {
    let n = b.n();
    let lambda = b.lambda();
    let gavili_sources = [BasisSource::Adjacency, BasisSource::Custom, BasisSource::Dft];
    let (variant, values) = match variant {
        Variant::LaplacianSqrt => {
            require_source("laplacian_sqrt", b, &[BasisSource::Laplacian], "a laplacian basis")?;
            let values = lambda.iter().map(|&l| clamped(l).sqrt()).collect();
            (Variant::LaplacianSqrt, values)
        }
        Variant::GiraultReduced { rho } => {
            require_source("girault_reduced", b, &[BasisSource::Laplacian], "a laplacian basis")?;
            let lambda_max = clamped(lambda[n - 1]);
            let rho = match *rho {
                None => lambda_max,
                Some(r) if !(r.is_finite() && r > 0.0) => {
                    return Err(Error::InvalidParameter(format!("rho must be positive, got {r}")));
                }
                Some(r) if r < lambda_max - ZERO_EIGENVALUE_CLAMP * lambda_max.max(1.0) => {
                    return Err(Error::InvalidParameter(format!(
                        "rho = {r} is below the largest laplacian eigenvalue {lambda_max}"
                    )));
                }
                Some(r) => r,
            };
            let values = if rho == 0.0 {
                vec![0.0; n]
            } else {
                lambda.iter().map(|&l| PI * (clamped(l) / rho).sqrt()).collect()
            };
            (Variant::GiraultReduced { rho: Some(rho) }, values)
        }
        Variant::GaviliUniform { ordering } => {
            require_source("gavili_uniform", b, &gavili_sources, "an adjacency or custom basis")?;
            let ordering = ordering.unwrap_or_else(|| EigenOrdering::default_for(b.source()));
            let step = TAU / n as f64;
            let values = match ordering {
                EigenOrdering::BasisColumns => (0..n).map(|l| step * l as f64).collect(),
                EigenOrdering::DescendingEigenvalue => {
                    let mut rank: Vec<usize> = (0..n).collect();
                    rank.sort_by(|&i, &j| lambda[j].total_cmp(&lambda[i]).then(i.cmp(&j)));
                    let mut values = vec![0.0; n];
                    for (l, &col) in rank.iter().enumerate() {
                        values[col] = step * l as f64;
                    }
                    values
                }
            };
            (Variant::GaviliUniform { ordering: Some(ordering) }, values)
        }
        Variant::GaviliPhases { phi } => {
            require_source("gavili_phases", b, &gavili_sources, "an adjacency or custom basis")?;
            check_len(phi.len(), n)?;
            if let Some(p) = phi.iter().find(|p| !(0.0..=TAU).contains(*p)) {
                return Err(Error::InvalidParameter(format!("phase {p} outside [0, 2π]")));
            }
            let mut sorted = phi.clone();
            sorted.sort_by(f64::total_cmp);
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("phase {} repeated", w[0])));
            }
            (Variant::GaviliPhases { phi: phi.clone() }, phi.clone())
        }
        Variant::Custom { values } => {
            check_len(values.len(), n)?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("custom frequencies must be finite".into()));
            }
            (Variant::Custom { values: values.clone() }, values.clone())
        }
    };
    Ok(FrequencySpec { variant, values })
}

fn check_len(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A graph translation by `kappa`, remembering the basis and frequencies it
/// was built from.
#[derive(Debug, Clone)]
pub struct TranslationOperator {
    matrix: ComplexMatrix,
    basis: SpectralBasis,
    freq: FrequencySpec,
    kappa: f64,
}

impl TranslationOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn freq(&self) -> &FrequencySpec {
        &self.freq
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.matrix)
    }

    /// Distance from `psi · Diag(exp(−iκ·values)) · psi*`, recomputed.
    pub fn factorization_residual(&self) -> f64 {
        let diag = linalg::phases(&self.freq.values, self.kappa);
        linalg::max_abs_diff(&self.matrix, &linalg::spectral_synthesis(self.basis.psi(), &diag))
    }

    /// Metadata block attached to serialized operators.
    pub fn metadata(&self) -> Value {
        let mut meta = self.freq.metadata();
        meta["kind"] = json!("gto");
        meta["kappa"] = json!(self.kappa);
        meta["basis_source"] = json!(self.basis.source().as_str());
        meta
    }
}

/// Builds `T = psi · Diag(exp(−i·kappa·values)) · psi*`.
pub fn gto(b: &SpectralBasis, f: &FrequencySpec, kappa: f64) -> Result<TranslationOperator> {
    check_len(f.len(), b.n())?;
    if !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!("translation value must be finite, got {kappa}")));
    }
    let matrix = linalg::spectral_synthesis(b.psi(), &linalg::phases(&f.values, kappa));
    Ok(TranslationOperator { matrix, basis: b.clone(), freq: f.clone(), kappa })
}

/// Applies the operator: `t · x`.
pub fn translate(op: &TranslationOperator, x: &ComplexVector) -> Result<ComplexVector> {
    check_len(x.len(), op.n())?;
    Ok(&op.matrix * x)
}

/// `|gft(x)|²` per basis column.
pub fn power_spectrum(x: &ComplexVector, b: &SpectralBasis) -> Result<Vec<f64>> {
    Ok(spectral::gft(x, b)?.iter().map(|z| z.norm_sqr()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, laplacian, GraphKind};
    use crate::linalg::{identity_residual, max_abs_diff, max_abs_diff_vec};
    use crate::spectral::eig_sym;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn laplacian_basis(kind: GraphKind) -> SpectralBasis {
        eig_sym(&laplacian(&generate(kind, Some(7)).unwrap()), BasisSource::Laplacian).unwrap()
    }

    fn adjacency_basis(kind: GraphKind) -> SpectralBasis {
        eig_sym(&generate(kind, Some(7)).unwrap().adjacency(), BasisSource::Adjacency).unwrap()
    }

    #[test]
    fn frequency_maps_on_single_edge() {
        let b = laplacian_basis(GraphKind::Path { n: 2 });
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        assert!((f.values()[0]).abs() < 1e-12);
        assert!((f.values()[1] - 2f64.sqrt()).abs() < 1e-12);

        let f = frequencies(&Variant::GiraultReduced { rho: None }, &b).unwrap();
        assert!((f.values()[1] - PI).abs() < 1e-12);
        assert!(matches!(f.variant(), Variant::GiraultReduced { rho: Some(r) } if (*r - 2.0).abs() < 1e-12));

        let f = frequencies(&Variant::GiraultReduced { rho: Some(8.0) }, &b).unwrap();
        assert!((f.values()[1] - PI * 0.5).abs() < 1e-12);
        assert!(frequencies(&Variant::GiraultReduced { rho: Some(1.0) }, &b).is_err());
    }

    #[test]
    fn exact_rho_survives_eigenvalue_roundoff() {
        // The computed largest eigenvalue of the C8 Laplacian is 4 plus a few ulps.
        let b = laplacian_basis(GraphKind::Cycle { n: 8 });
        let f = frequencies(&Variant::GiraultReduced { rho: Some(4.0) }, &b).unwrap();
        assert!((f.values()[7] - PI).abs() < 1e-7);
        assert!(frequencies(&Variant::GiraultReduced { rho: Some(3.99) }, &b).is_err());
    }

    #[test]
    fn gavili_uniform_phases() {
        let dft = spectral::dft_basis(4).unwrap();
        let f = frequencies(&Variant::GaviliUniform { ordering: None }, &dft).unwrap();
        assert_eq!(f.values(), &[0.0, PI / 2.0, PI, 3.0 * PI / 2.0]);

        // adjacency default: largest eigenvalue (last column) gets phase 0
        let b = adjacency_basis(GraphKind::Path { n: 4 });
        let f = frequencies(&Variant::GaviliUniform { ordering: None }, &b).unwrap();
        assert_eq!(f.values()[3], 0.0);
        assert_eq!(f.values()[0], 3.0 * PI / 2.0);
        let f = frequencies(
            &Variant::GaviliUniform { ordering: Some(EigenOrdering::BasisColumns) },
            &b,
        )
        .unwrap();
        assert_eq!(f.values()[0], 0.0);
    }

    #[test]
    fn variant_basis_compatibility() {
        let lap = laplacian_basis(GraphKind::Cycle { n: 4 });
        let adj = adjacency_basis(GraphKind::Cycle { n: 4 });
        assert!(matches!(
            frequencies(&Variant::LaplacianSqrt, &adj),
            Err(Error::IncompatibleBasis { .. })
        ));
        assert!(frequencies(&Variant::GaviliUniform { ordering: None }, &lap).is_err());
        assert!(frequencies(&Variant::Custom { values: vec![1.0; 4] }, &adj).is_ok());
    }

    #[test]
    fn gavili_phase_checks() {
        let adj = adjacency_basis(GraphKind::Path { n: 3 });
        assert!(frequencies(&Variant::GaviliPhases { phi: vec![0.0, 1.0, 2.0] }, &adj).is_ok());
        assert!(frequencies(&Variant::GaviliPhases { phi: vec![0.0, 1.0, 1.0] }, &adj).is_err());
        assert!(frequencies(&Variant::GaviliPhases { phi: vec![0.0, 1.0, 7.0] }, &adj).is_err());
        assert!(matches!(
            frequencies(&Variant::GaviliPhases { phi: vec![0.0, 1.0] }, &adj),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_translation_is_identity() {
        let b = laplacian_basis(GraphKind::Grid { rows: 3, cols: 3 });
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        let t = gto(&b, &f, 0.0).unwrap();
        assert!(identity_residual(t.matrix()) < 1e-12);
        assert!(gto(&b, &f, f64::NAN).is_err());
    }

    #[test]
    fn single_edge_half_period_is_swap() {
        // Diag(1, e^{-iπ}) conjugated by the Hadamard-like basis is the swap.
        let b = laplacian_basis(GraphKind::Path { n: 2 });
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        let t = gto(&b, &f, PI / 2f64.sqrt()).unwrap();
        let swap = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        assert!(max_abs_diff(t.matrix(), &swap) < 1e-10);
        let y = translate(&t, &ComplexVector::from_vec(vec![c(1.0), c(0.0)])).unwrap();
        assert!(max_abs_diff_vec(&y, &ComplexVector::from_vec(vec![c(0.0), c(1.0)])) < 1e-10);
    }

    #[test]
    fn squaring_doubles_translation() {
        let b = laplacian_basis(GraphKind::ErdosRenyi { n: 10, p: 0.5 });
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        let t1 = gto(&b, &f, 1.0).unwrap();
        let t2 = gto(&b, &f, 2.0).unwrap();
        assert!(max_abs_diff(&(t1.matrix() * t1.matrix()), t2.matrix()) < 1e-9);
        assert!(t1.factorization_residual() < 1e-12);
    }

    #[test]
    fn eigenvector_only_picks_up_phase() {
        let b = laplacian_basis(GraphKind::Cycle { n: 8 });
        let f = frequencies(&Variant::LaplacianSqrt, &b).unwrap();
        let op = gto(&b, &f, 1.3).unwrap();
        for l in 0..8 {
            let v = b.vector(l);
            let want = &v * Complex64::from_polar(1.0, -1.3 * f.values()[l]);
            assert!(max_abs_diff_vec(&translate(&op, &v).unwrap(), &want) < 1e-12);
        }
    }

    #[test]
    fn power_spectrum_basics() {
        let b = laplacian_basis(GraphKind::Cycle { n: 6 });
        let ps = power_spectrum(&b.vector(2), &b).unwrap();
        for (i, p) in ps.iter().enumerate() {
            assert!((p - if i == 2 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
        assert!(power_spectrum(&ComplexVector::zeros(6), &b).unwrap().iter().all(|&p| p == 0.0));
        assert!(power_spectrum(&ComplexVector::zeros(5), &b).is_err());
    }

    #[test]
    fn metadata_records_parameters() {
        let b = laplacian_basis(GraphKind::Path { n: 3 });
        let f = frequencies(&Variant::GiraultReduced { rho: Some(5.0) }, &b).unwrap();
        let meta = gto(&b, &f, 0.5).unwrap().metadata();
        assert_eq!(meta["variant"], "girault_reduced");
        assert_eq!(meta["rho"], 5.0);
        assert_eq!(meta["kappa"], 0.5);
        assert_eq!(meta["basis_source"], "laplacian");
    }
}
