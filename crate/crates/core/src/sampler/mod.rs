//! Shot-by-shot simulation of the three source regimes: configuration,
//! block scheduling, detector effects, and the sampling engine.

mod alias;
mod config;
mod detector;
mod engine;
mod fockbs;
mod record;

pub use alias::AliasTable;
pub use config::{
    default_fock_cutoff, ExperimentConfig, HeraldDetectorModel, Regime, ScheduleSpec, UnitarySpec,
    MAX_MODES,
};
pub use detector::{
    apply_pnr_truncation, blinding_distribution, extinction_ratio, herald_assignment_matrix,
    herald_assignment_train,
    misassignment_probability, misassignment_upper_bound, worst_pulse_misassignment,
    AssignmentMatrix, ExtinctionRatio, BLINDING_PHOTON_MAX, SOURCE_PHOTON_MAX,
};
pub use engine::{
    build_output_state, draw_samples, plan_blocks, BlockPlan, BlockSummary, RunSummary, SampleRun,
};
pub use fockbs::{ConditionalDistribution, FockInterferometer, COMPOSITION_BUDGET};
pub use record::SampleRecord;
