//! Isometric translation operators for graph signals.
//!
//! A translation is built the same way in every domain: move to the
//! Fourier domain, multiply each coefficient by a unit-modulus phase
//! `exp(-i * kappa * frequency)`, and move back. This crate provides that
//! construction for
//!
//! * undirected weighted graphs ([`translation`]), with the angular,
//!   reduced and phase-assigned frequency maps,
//! * circular discrete time ([`discrete_time`]),
//! * the joint time-vertex domain ([`joint`]), both as a Kronecker product
//!   of the factor operators and in the joint spectral form,
//!
//! together with the Schrödinger evolution view of the graph operator
//! ([`schrodinger`]) and a finite-sample joint stationarity diagnostic.
//!
//! All operators are dense complex matrices ([`ComplexMatrix`]); the crate
//! targets desk-scale problems (a few hundred vertices).

pub mod cli;
pub mod discrete_time;
pub mod error;
pub mod graph;
pub mod io;
pub mod joint;
pub mod linalg;
pub mod schrodinger;
pub mod spectral;
pub mod translation;

pub use error::{Error, Result};
pub use graph::{Graph, GraphKind, RealSymMatrix, ValidationReport};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use spectral::{BasisSource, SpectralBasis};
pub use translation::{FrequencySpec, TranslationOperator, Variant};
