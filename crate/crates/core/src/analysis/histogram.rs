//! Photon-number count histograms for single detection channels.

use crate::error::{CoreError, Result};
use crate::sampler::SampleRecord;

/// Share of probability mass in the top bin above which moment estimates
/// are suspect; detectors that clip at 3 photons make this a real hazard
/// at high brightness.
pub const TAIL_MASS_WARNING: f64 = 1e-3;

/// Occurrence counts indexed by photon number 0..=cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct CountHistogram {
    counts: Vec<f64>,
}

impl CountHistogram {
    /// Raw (unnormalized) counts; the index is the photon number.
    pub fn from_counts(counts: Vec<f64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(CoreError::InvalidParameter(
                "histogram needs at least one bin".into(),
            ));
        }
        if counts.iter().any(|&c| !c.is_finite() || c < 0.0) {
            return Err(CoreError::InvalidParameter(
                "histogram counts must be finite and non-negative".into(),
            ));
        }
        if counts.iter().sum::<f64>() <= 0.0 {
            return Err(CoreError::InvalidParameter(
                "histogram must hold some counts".into(),
            ));
        }
        Ok(Self { counts })
    }

    /// Probabilities; must sum to 1 within 1e-9.
    pub fn from_probabilities(probs: Vec<f64>) -> Result<Self> {
        let h = Self::from_counts(probs)?;
        let total: f64 = h.counts.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(CoreError::InvalidParameter(format!(
                "probabilities sum to {}, expected 1",
                total
            )));
        }
        Ok(h)
    }

    /// Tally one mode of the signal arm across records.
    pub fn from_signal_mode(records: &[SampleRecord], mode: usize) -> Result<Self> {
        Self::tally(records.iter().map(|r| r.signal.counts().get(mode).copied()))
    }

    /// Tally one mode of the herald arm across records.
    pub fn from_herald_mode(records: &[SampleRecord], mode: usize) -> Result<Self> {
        Self::tally(records.iter().map(|r| r.herald.counts().get(mode).copied()))
    }

    fn tally(values: impl Iterator<Item = Option<u32>>) -> Result<Self> {
        let mut counts: Vec<f64> = Vec::new();
        for v in values {
            let n = v.ok_or_else(|| {
                CoreError::Dimension("mode index outside the recorded pattern".into())
            })? as usize;
            if n >= counts.len() {
                counts.resize(n + 1, 0.0);
            }
            counts[n] += 1.0;
        }
        Self::from_counts(counts)
    }

    pub fn cutoff(&self) -> u32 {
        (self.counts.len() - 1) as u32
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.counts.iter().sum();
        self.counts.iter().map(|c| c / total).collect()
    }

    pub fn mean(&self) -> f64 {
        let p = self.normalized();
        p.iter().enumerate().map(|(n, &pn)| n as f64 * pn).sum()
    }

    /// True when the top bin carries enough mass to bias moments.
    pub fn tail_mass_exceeded(&self) -> bool {
        *self.normalized().last().expect("non-empty by construction") > TAIL_MASS_WARNING
    }
}
