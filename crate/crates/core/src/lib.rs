//! Eigentriad and eigenprogression scattering transforms of symbolic music,
//! together with the feature standardization, energy-based shrinkage and linear
//! SVM used for composer recognition.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which every file format uses.

mod binfmt;
pub mod corpus;
pub mod error;
pub mod features;
pub mod filterbank;
pub mod pianoroll;
mod scalar;
pub mod scattering;
pub mod spectral;
pub mod svm;

/// Version of this library, recorded in run provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, MidiErrorKind, Result};
pub use num_complex::Complex;
pub use scalar::Scalar;

pub type PianoRoll64 = pianoroll::PianoRoll<f64>;
pub type EigenprogressionBasis64 = spectral::EigenprogressionBasis<f64>;
pub type TonnetzLaplacian64 = spectral::TonnetzLaplacian<f64>;
pub type Transformer64 = scattering::Transformer<f64>;
pub type FeatureMatrix64 = features::FeatureMatrix<f64>;
pub type LinearSvmModel64 = svm::LinearSvmModel<f64>;
