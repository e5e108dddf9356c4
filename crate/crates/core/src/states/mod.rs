//! Gaussian states of bosonic modes and their photon-number statistics.

mod fock;
mod gaussian;
mod pattern;
mod squeezer;

pub use fock::{
    fock_distribution, fock_probability, FockDistribution, FOCK_PATTERN_BUDGET, FOCK_TOTAL_MAX,
};
pub(crate) use fock::NumberKernel;
pub use gaussian::{GaussianState, UNCERTAINTY_CHECK_MAX_MODES};
pub use pattern::PhotonPattern;
pub use squeezer::SqueezerSpec;
