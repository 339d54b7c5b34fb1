//! Compressed tomography of n-qubit Schrödinger-cat states.
//!
//! The crate reconstructs the density matrix of a GHZ/cat state from
//! expectation values of a structured operator family — computational-basis
//! projectors and tensor powers of rotated in-plane spin observables — by
//! solving one of two convex programs over the density-matrix set:
//!
//! * an absolute-residual fit min Σ|Tr(Mᵢρ) − bᵢ| ([`recovery::Method::PhaseLift`]), or
//! * an entrywise-L1 minimizer subject to |Tr(Mᵢρ) − bᵢ| ≤ ε ([`recovery::Method::L1`]).
//!
//! Everything is generic over the working precision through [`scalar::Real`]
//! (f32 or f64); the aliases below fix f64 for ordinary use.

pub mod error;
pub mod files;
pub mod linalg;
pub mod metrics;
pub mod operators;
pub mod recovery;
pub mod scalar;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};

/// f64 working types, the default precision.
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type StateVector = linalg::StateVector<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type OperatorSet = operators::OperatorSet<f64>;
pub type OperatorDescriptor = operators::OperatorDescriptor<f64>;
pub type MeasurementRecord = states::MeasurementRecord<f64>;
pub type NoiseModel = states::NoiseModel<f64>;
pub type RecoveryConfig = recovery::RecoveryConfig<f64>;
pub type RecoveryResult = recovery::RecoveryResult<f64>;
pub type SweepConfig = sweep::SweepConfig<f64>;
