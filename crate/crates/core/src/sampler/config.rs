//! Experiment configuration: sources, interferometer, losses, detectors,
//! and the block schedule that alternates sampling regimes.

use crate::error::{CoreError, Result};
use crate::numerics::{haar_unitary, UnitaryMatrix};
use crate::states::SqueezerSpec;
use serde::{Deserialize, Serialize};

/// Sampling regime for one block of shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    /// Single-mode squeezed vacuum into the interferometer.
    Gbs,
    /// Two-mode squeezed vacuum; one arm heralds, the other is sampled.
    Sbs,
    /// Same sources as SBS with the herald arm discarded.
    Tbs,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Gbs => "GBS",
            Regime::Sbs => "SBS",
            Regime::Tbs => "TBS",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Regime {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GBS" => Ok(Regime::Gbs),
            "SBS" => Ok(Regime::Sbs),
            "TBS" => Ok(Regime::Tbs),
            other => Err(CoreError::Parse(format!("unknown regime '{}'", other))),
        }
    }
}

/// Interferometer specification: an explicit matrix or a seeded Haar draw.
#[derive(Debug, Clone)]
pub enum UnitarySpec {
    HaarSeed(u64),
    Explicit(UnitaryMatrix<f64>),
}

impl UnitarySpec {
    pub fn resolve(&self, modes: usize) -> Result<UnitaryMatrix<f64>> {
        match self {
            UnitarySpec::HaarSeed(seed) => haar_unitary(modes, *seed),
            UnitarySpec::Explicit(u) => {
                if u.dim() != modes {
                    return Err(CoreError::Dimension(format!(
                        "interferometer is {}x{} but the experiment has {} modes",
                        u.dim(),
                        u.dim(),
                        modes
                    )));
                }
                Ok(u.clone())
            }
        }
    }
}

/// Block schedule: `pattern` cycles with `block_shots` shots per block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub block_shots: u64,
    pub pattern: Vec<Regime>,
}

/// Multiplexed heralding detector bank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeraldDetectorModel {
    /// Number of multiplexed click detectors behind one herald mode.
    pub detectors: u32,
    /// Pulses sharing one detector bank before it resets.
    pub pulses_per_train: u32,
    /// Detection efficiency of each click detector.
    pub efficiency: f64,
    /// When set, detectors that fire stay dead for the rest of the train
    /// and photon counts are inferred through the assignment model.
    pub blinding_enabled: bool,
}

impl Default for HeraldDetectorModel {
    fn default() -> Self {
        Self {
            detectors: 16,
            pulses_per_train: 8,
            efficiency: 0.4,
            blinding_enabled: false,
        }
    }
}

impl HeraldDetectorModel {
    pub fn validate(&self) -> Result<()> {
        if self.detectors < 1 {
            return Err(CoreError::InvalidParameter(
                "herald detector count must be at least 1".into(),
            ));
        }
        if self.pulses_per_train < 1 {
            return Err(CoreError::InvalidParameter(
                "pulses per train must be at least 1".into(),
            ));
        }
        if !(self.efficiency >= 0.0 && self.efficiency <= 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "detector efficiency must lie in [0, 1], got {}",
                self.efficiency
            )));
        }
        Ok(())
    }
}

/// Largest supported signal-mode count.
pub const MAX_MODES: usize = 8;

/// Default per-mode enumeration cutoff: generous for tiny systems, modest
/// once the pattern count grows with mode number.
pub fn default_fock_cutoff(modes: usize) -> u32 {
    if modes <= 2 {
        15
    } else {
        5
    }
}

/// Full description of one simulated experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Signal-mode count (SBS adds one herald mode per signal mode).
    pub modes: usize,
    /// One squeezer per signal mode (SMSV for GBS, TMSV pair for SBS/TBS).
    pub squeezers: Vec<SqueezerSpec<f64>>,
    pub unitary: UnitarySpec,
    /// Per-mode transmission of the signal path (includes detection).
    pub eta_signal: Vec<f64>,
    /// Per-mode transmission of the herald path.
    pub eta_herald: Vec<f64>,
    /// Photon-number-resolving limit applied to every recorded count.
    pub pnr_cutoff: u32,
    /// Per-mode cutoff for exact enumeration of the output distribution.
    pub fock_cutoff: u32,
    pub schedule: ScheduleSpec,
    /// Shots discarded at each end of every block (settling guard).
    pub guard_shots: u64,
    /// Std-dev of the per-block Gaussian phase increments (radians).
    pub phase_drift_rms: f64,
    /// Drift applies one shared increment to all modes instead of
    /// independent per-mode increments.
    pub shared_phase_drift: bool,
    pub herald_detector: HeraldDetectorModel,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Reasonable defaults for everything except sources and interferometer.
    pub fn new(
        modes: usize,
        squeezers: Vec<SqueezerSpec<f64>>,
        unitary: UnitarySpec,
        regime: Regime,
    ) -> Self {
        Self {
            modes,
            squeezers,
            unitary,
            eta_signal: vec![1.0; modes],
            eta_herald: vec![1.0; modes],
            pnr_cutoff: 3,
            fock_cutoff: default_fock_cutoff(modes),
            schedule: ScheduleSpec {
                block_shots: 10_000,
                pattern: vec![regime],
            },
            guard_shots: 0,
            phase_drift_rms: 0.11,
            shared_phase_drift: false,
            herald_detector: HeraldDetectorModel::default(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes < 1 || self.modes > MAX_MODES {
            return Err(CoreError::InvalidParameter(format!(
                "mode count must lie in 1..={}, got {}",
                MAX_MODES, self.modes
            )));
        }
        if self.squeezers.len() != self.modes {
            return Err(CoreError::InvalidParameter(format!(
                "{} squeezers configured for {} modes",
                self.squeezers.len(),
                self.modes
            )));
        }
        for etas in [&self.eta_signal, &self.eta_herald] {
            if etas.len() != self.modes {
                return Err(CoreError::InvalidParameter(format!(
                    "{} transmissions configured for {} modes",
                    etas.len(),
                    self.modes
                )));
            }
            for &e in etas {
                if !(e >= 0.0 && e <= 1.0) {
                    return Err(CoreError::InvalidParameter(format!(
                        "transmission must lie in [0, 1], got {}",
                        e
                    )));
                }
            }
        }
        if self.pnr_cutoff < 1 {
            return Err(CoreError::InvalidParameter(
                "pnr_cutoff must be at least 1".into(),
            ));
        }
        if self.fock_cutoff < 1 {
            return Err(CoreError::InvalidParameter(
                "fock_cutoff must be at least 1".into(),
            ));
        }
        if self.schedule.block_shots < 1 {
            return Err(CoreError::InvalidParameter(
                "block_shots must be at least 1".into(),
            ));
        }
        if self.schedule.pattern.is_empty() {
            return Err(CoreError::InvalidParameter(
                "schedule pattern must name at least one regime".into(),
            ));
        }
        if 2 * self.guard_shots >= self.schedule.block_shots {
            return Err(CoreError::InvalidParameter(format!(
                "guard of {} shots per edge consumes the whole {}-shot block",
                self.guard_shots, self.schedule.block_shots
            )));
        }
        if !(self.phase_drift_rms >= 0.0) || !self.phase_drift_rms.is_finite() {
            return Err(CoreError::InvalidParameter(
                "phase_drift_rms must be finite and non-negative".into(),
            ));
        }
        if let UnitarySpec::Explicit(u) = &self.unitary {
            if u.dim() != self.modes {
                return Err(CoreError::Dimension(format!(
                    "interferometer dimension {} does not match {} modes",
                    u.dim(),
                    self.modes
                )));
            }
        }
        self.herald_detector.validate()?;
        Ok(())
    }
}
