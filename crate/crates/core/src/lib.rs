//! Simulation and certification toolkit for multimode squeezed-light
//! sampling experiments.
//!
//! The crate covers the full pipeline of a time-multiplexed photonic
//! sampling setup:
//!
//! - `numerics`: permanents, hafnians, Stirling numbers, a symmetric
//!   eigensolver, Haar-random unitaries, and small dense matrix types;
//! - `states`: Gaussian covariance states (squeezed, two-mode squeezed,
//!   thermal), symplectic unitaries, per-mode loss, and exact Fock-basis
//!   probabilities and distributions;
//! - `sampler`: reproducible photon-pattern sampling in three source
//!   regimes, with a multiplexed herald detector model including blinding;
//! - `certifier`: moment accumulation, the photon-number covariance
//!   nonclassicality criterion, bootstrap uncertainties, and Pearson
//!   herald/signal correlation measures;
//! - `analysis`: source characterization formulas (g2, Schmidt modes,
//!   interference visibilities, Klyshko efficiencies, squeezing
//!   reconstruction).
//!
//! The math core is generic over the real scalar (`scalar::Real`); the
//! aliases below pin the `f64` instantiations that the sampler, certifier,
//! and CLI use.

pub mod analysis;
pub mod certifier;
pub mod error;
pub mod numerics;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod states;

pub use error::{CoreError, Result};
pub use scalar::Real;

/// Complex scalar used by the f64 instantiation.
pub type C64 = num_complex::Complex<f64>;

/// f64 dense complex matrix.
pub type Matrix = numerics::ComplexMatrix<f64>;

/// f64 validated unitary.
pub type Unitary = numerics::UnitaryMatrix<f64>;

/// f64 real symmetric matrix.
pub type SymMatrix = numerics::SymmetricMatrix<f64>;

/// f64 Gaussian state.
pub type State = states::GaussianState<f64>;

/// f64 squeezer description.
pub type Squeezer = states::SqueezerSpec<f64>;
