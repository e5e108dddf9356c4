//! Derived quantities for source and channel characterization: count
//! histograms, correlation functions, efficiency estimates, interference
//! visibilities, and the corrections applied before comparing coincidence
//! data against theory.

mod characterize;
mod histogram;
mod homfit;

pub use characterize::{
    dispersion_visibility, false_fourfold_estimate, g2, hom_visibility_polarization, klyshko,
    multiphoton_correction, reconstruct_squeezing, schmidt_modes, KlyshkoEstimate,
    MultiphotonCorrection, SqueezingEstimate, SQUEEZING_DB_PER_R,
};
pub use histogram::{CountHistogram, TAIL_MASS_WARNING};
pub use homfit::{hom_scan, HomFit};
