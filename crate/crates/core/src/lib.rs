//! Generalized Fourier matrices, their extreme singular values, and
//! stability bounds for exponential systems on unions of unit cubes.
//!
//! The numerical core is generic over the real scalar type (`f32` or
//! `f64`); the aliases below fix the common double-precision choice.

pub mod bounds;
pub mod core_matrix;
pub mod error;
pub mod experiments;
pub mod exp_systems;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ComplexDense64 = core_matrix::ComplexDense<f64>;
pub type ComplexDense32 = core_matrix::ComplexDense<f32>;
pub type FrequencySet64 = core_matrix::FrequencySet<f64>;
pub type NodeSet64 = core_matrix::NodeSet<f64>;
pub type PerturbationMap64 = core_matrix::PerturbationMap<f64>;
pub type SpectralSummary64 = spectral::SpectralSummary<f64>;
