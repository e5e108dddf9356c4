//! Nonclassicality certification: photon-number moment accumulation, the
//! covariance criterion with bootstrap uncertainties, and herald-signal
//! correlation checks.

mod certify;
mod moments;
mod pearson;

pub use certify::{
    certify, criterion_matrix, full_moment_matrix, timebinned_certify, CriterionResult,
    RegimeEnvelope, TimebinnedReport, DEFAULT_BOOTSTRAP_ROUNDS, MIN_CERTIFY_SHOTS,
};
pub use moments::{criterion_counts, MomentAccumulator, PatternHistogram};
pub use pearson::{pearson_measured, pearson_predicted, PearsonMeasured};
