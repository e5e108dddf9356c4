//! Experiment config files: a single TOML document fully specifies a run.
//! Unknown keys are rejected so a typo cannot silently change physics.

use std::path::{Path, PathBuf};

use bosonic_core::numerics::{ComplexMatrix, UnitaryMatrix};
use bosonic_core::sampler::{
    default_fock_cutoff, ExperimentConfig, HeraldDetectorModel, Regime, ScheduleSpec, UnitarySpec,
};
use bosonic_core::states::SqueezerSpec;
use bosonic_core::C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{io_usage, CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezerEntry {
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
}

/// Exactly one of `haar_seed` and `file` must be given.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub block_shots: u64,
    pub pattern: Vec<Regime>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeraldDetectorEntry {
    #[serde(default = "default_detectors")]
    pub detectors: u32,
    #[serde(default = "default_pulses")]
    pub pulses_per_train: u32,
    #[serde(default = "default_efficiency")]
    pub efficiency: f64,
    #[serde(default)]
    pub blinding_enabled: bool,
}

fn default_detectors() -> u32 {
    HeraldDetectorModel::default().detectors
}
fn default_pulses() -> u32 {
    HeraldDetectorModel::default().pulses_per_train
}
fn default_efficiency() -> f64 {
    HeraldDetectorModel::default().efficiency
}
fn default_pnr_cutoff() -> u32 {
    3
}
fn default_phase_drift() -> f64 {
    0.11
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub modes: usize,
    pub squeezers: Vec<SqueezerEntry>,
    pub unitary: UnitaryEntry,
    pub eta_signal: Vec<f64>,
    pub eta_herald: Vec<f64>,
    #[serde(default = "default_pnr_cutoff")]
    pub pnr_cutoff: u32,
    /// Defaults per mode count when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_cutoff: Option<u32>,
    pub schedule: ScheduleEntry,
    #[serde(default = "default_phase_drift")]
    pub phase_drift_rms: f64,
    #[serde(default)]
    pub shared_phase_drift: bool,
    #[serde(default)]
    pub guard_shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herald_detector: Option<HeraldDetectorEntry>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| io_usage(&format!("config {}", path.display()), e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {}", path.display(), e)))
    }

    /// Resolve into the sampler's validated runtime config. `base_dir` is
    /// where relative unitary file paths are anchored (the config's dir).
    pub fn to_experiment(&self, seed: u64, base_dir: &Path) -> CliResult<ExperimentConfig> {
        let unitary = self.resolve_unitary(base_dir)?;
        let mut squeezers = Vec::with_capacity(self.squeezers.len());
        for (i, s) in self.squeezers.iter().enumerate() {
            let spec = SqueezerSpec::new(s.r, s.phi)
                .map_err(|e| CliError::Usage(format!("squeezers[{}]: {}", i, e)))?;
            squeezers.push(spec);
        }
        let detector = match &self.herald_detector {
            Some(d) => HeraldDetectorModel {
                detectors: d.detectors,
                pulses_per_train: d.pulses_per_train,
                efficiency: d.efficiency,
                blinding_enabled: d.blinding_enabled,
            },
            None => HeraldDetectorModel::default(),
        };
        let cfg = ExperimentConfig {
            modes: self.modes,
            squeezers,
            unitary,
            eta_signal: self.eta_signal.clone(),
            eta_herald: self.eta_herald.clone(),
            pnr_cutoff: self.pnr_cutoff,
            fock_cutoff: self.fock_cutoff.unwrap_or_else(|| default_fock_cutoff(self.modes)),
            schedule: ScheduleSpec {
                block_shots: self.schedule.block_shots,
                pattern: self.schedule.pattern.clone(),
            },
            guard_shots: self.guard_shots,
            phase_drift_rms: self.phase_drift_rms,
            shared_phase_drift: self.shared_phase_drift,
            herald_detector: detector,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_unitary(&self, base_dir: &Path) -> CliResult<UnitarySpec> {
        match (&self.unitary.haar_seed, &self.unitary.file) {
            (Some(seed), None) => Ok(UnitarySpec::HaarSeed(*seed)),
            (None, Some(file)) => {
                let path = if file.is_absolute() {
                    file.clone()
                } else {
                    base_dir.join(file)
                };
                Ok(UnitarySpec::Explicit(load_unitary(&path)?))
            }
            _ => Err(CliError::Usage(
                "unitary: give exactly one of haar_seed or file".into(),
            )),
        }
    }

    /// Canonical content hash. The parsed document is re-serialized as
    /// JSON with sorted keys, so key order in the source file cannot move
    /// the hash, while every field value does. A file-referenced unitary
    /// contributes its content digest rather than only its path.
    pub fn canonical_hash(&self, base_dir: &Path) -> CliResult<String> {
        let mut doc = serde_json::to_value(self)
            .map_err(|e| CliError::Numeric(format!("config serialization: {}", e)))?;
        if let Some(file) = &self.unitary.file {
            let path = if file.is_absolute() {
                file.clone()
            } else {
                base_dir.join(file)
            };
            let bytes = std::fs::read(&path)
                .map_err(|e| io_usage(&format!("unitary file {}", path.display()), e))?;
            doc["unitary"]["file_sha256"] = serde_json::Value::String(hex_digest(&bytes));
        }
        let canonical = serde_json::to_string(&doc)
            .map_err(|e| CliError::Numeric(format!("config serialization: {}", e)))?;
        Ok(format!("sha256:{}", hex_digest(canonical.as_bytes())))
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

/// Explicit interferometers are JSON: an array of rows, each entry a
/// two-element [re, im] array. Unitarity is checked on load.
pub fn load_unitary(path: &Path) -> CliResult<UnitaryMatrix<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io_usage(&format!("unitary file {}", path.display()), e))?;
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("unitary file {}: {}", path.display(), e)))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage(format!(
            "unitary file {}: matrix must be square and nonempty",
            path.display()
        )));
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    UnitaryMatrix::new(m)
        .map_err(|e| CliError::Usage(format!("unitary file {}: {}", path.display(), e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
modes = 2
eta_signal = [0.9, 0.8]
eta_herald = [0.6, 0.6]

[[squeezers]]
r = 0.5

[[squeezers]]
r = 0.4
phi = 0.3

[unitary]
haar_seed = 7

[schedule]
block_shots = 1000
pattern = ["GBS", "SBS"]
"#;

    #[test]
    fn parses_and_resolves() {
        let cfg: ConfigFile = toml::from_str(BASE).unwrap();
        let exp = cfg.to_experiment(3, Path::new(".")).unwrap();
        assert_eq!(exp.modes, 2);
        assert_eq!(exp.pnr_cutoff, 3);
        assert_eq!(exp.fock_cutoff, 15);
        assert_eq!(exp.seed, 3);
        assert!((exp.phase_drift_rms - 0.11).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_fail_closed() {
        let text = format!("{}\nextra_knob = 1\n", BASE);
        assert!(toml::from_str::<ConfigFile>(&text).is_err());
        let nested = BASE.replace("haar_seed = 7", "haar_seed = 7\ntypo = 2");
        assert!(toml::from_str::<ConfigFile>(&nested).is_err());
    }

    #[test]
    fn unitary_choice_is_exclusive() {
        let neither = BASE.replace("haar_seed = 7", "");
        let cfg: ConfigFile = toml::from_str(&neither).unwrap();
        assert!(cfg.to_experiment(0, Path::new(".")).is_err());
    }

    #[test]
    fn hash_ignores_key_order_but_tracks_values() {
        let cfg: ConfigFile = toml::from_str(BASE).unwrap();
        let reordered = r#"
eta_herald = [0.6, 0.6]
eta_signal = [0.9, 0.8]
modes = 2

[schedule]
pattern = ["GBS", "SBS"]
block_shots = 1000

[unitary]
haar_seed = 7

[[squeezers]]
r = 0.5

[[squeezers]]
phi = 0.3
r = 0.4
"#;
        let cfg2: ConfigFile = toml::from_str(reordered).unwrap();
        let dir = Path::new(".");
        assert_eq!(
            cfg.canonical_hash(dir).unwrap(),
            cfg2.canonical_hash(dir).unwrap()
        );

        let mut cfg3 = cfg.clone();
        cfg3.eta_signal[1] = 0.81;
        assert_ne!(
            cfg.canonical_hash(dir).unwrap(),
            cfg3.canonical_hash(dir).unwrap()
        );

        let mut cfg4 = cfg.clone();
        cfg4.pnr_cutoff = 4;
        assert_ne!(
            cfg.canonical_hash(dir).unwrap(),
            cfg4.canonical_hash(dir).unwrap()
        );
    }
}
