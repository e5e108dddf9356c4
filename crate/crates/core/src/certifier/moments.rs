//! Streaming photon-number moments and the pattern histogram the bootstrap
//! resamples from.

use crate::error::{CoreError, Result};
use crate::sampler::{Regime, SampleRecord};
use crate::states::PhotonPattern;
use std::collections::BTreeMap;

/// First and second raw moments of per-mode photon counts, accumulated in
/// one pass. Accumulators over disjoint shot sets merge by field-wise
/// addition, so shards can run in parallel; merge order only moves results
/// at the floating-point-associativity level.
///
/// Moments divide by N (population convention), not N-1: at certification
/// sample sizes the difference is far below counting noise, and the
/// plug-in estimator matches the normally ordered moment identities in
/// expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentAccumulator {
    modes: usize,
    shot_count: u64,
    sum_n: Vec<f64>,
    /// Row-major M x M sums of n_j * n_k; symmetric by construction.
    sum_nn: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(modes: usize) -> Result<Self> {
        if modes < 1 {
            return Err(CoreError::InvalidParameter(
                "accumulator needs at least one mode".into(),
            ));
        }
        Ok(Self {
            modes,
            shot_count: 0,
            sum_n: vec![0.0; modes],
            sum_nn: vec![0.0; modes * modes],
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn shot_count(&self) -> u64 {
        self.shot_count
    }

    /// Add one shot.
    pub fn accumulate(&mut self, pattern: &PhotonPattern) -> Result<()> {
        self.accumulate_weighted(pattern, 1)
    }

    /// Add `weight` identical shots at once (histogram replay).
    pub fn accumulate_weighted(&mut self, pattern: &PhotonPattern, weight: u64) -> Result<()> {
        if pattern.modes() != self.modes {
            return Err(CoreError::Dimension(format!(
                "pattern has {} modes, accumulator has {}",
                pattern.modes(),
                self.modes
            )));
        }
        if weight == 0 {
            return Ok(());
        }
        let w = weight as f64;
        let c = pattern.counts();
        for j in 0..self.modes {
            let nj = c[j] as f64;
            self.sum_n[j] += w * nj;
            for k in j..self.modes {
                let prod = w * nj * c[k] as f64;
                self.sum_nn[j * self.modes + k] += prod;
                if k > j {
                    self.sum_nn[k * self.modes + j] += prod;
                }
            }
        }
        self.shot_count += weight;
        Ok(())
    }

    /// Field-wise addition with a shard covering different shots.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.modes != self.modes {
            return Err(CoreError::Dimension(format!(
                "cannot merge accumulators over {} and {} modes",
                self.modes, other.modes
            )));
        }
        self.shot_count += other.shot_count;
        for (a, b) in self.sum_n.iter_mut().zip(&other.sum_n) {
            *a += b;
        }
        for (a, b) in self.sum_nn.iter_mut().zip(&other.sum_nn) {
            *a += b;
        }
        Ok(())
    }

    /// Mean count of mode j.
    pub fn mean(&self, j: usize) -> f64 {
        self.sum_n[j] / self.shot_count as f64
    }

    /// Raw (not normally ordered) second moment <n_j n_k>.
    pub fn second_moment(&self, j: usize, k: usize) -> f64 {
        self.sum_nn[j * self.modes + k] / self.shot_count as f64
    }

    pub fn sum_n(&self, j: usize) -> f64 {
        self.sum_n[j]
    }

    pub fn sum_nn(&self, j: usize, k: usize) -> f64 {
        self.sum_nn[j * self.modes + k]
    }
}

/// Counts per observed pattern; the empirical distribution certification
/// bootstraps over. BTreeMap keying keeps iteration deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternHistogram {
    modes: usize,
    counts: BTreeMap<PhotonPattern, u64>,
    total: u64,
}

impl PatternHistogram {
    pub fn new(modes: usize) -> Result<Self> {
        if modes < 1 {
            return Err(CoreError::InvalidParameter(
                "histogram needs at least one mode".into(),
            ));
        }
        Ok(Self {
            modes,
            counts: BTreeMap::new(),
            total: 0,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn total_shots(&self) -> u64 {
        self.total
    }

    pub fn distinct_patterns(&self) -> usize {
        self.counts.len()
    }

    pub fn record(&mut self, pattern: &PhotonPattern) -> Result<()> {
        self.record_many(pattern, 1)
    }

    pub fn record_many(&mut self, pattern: &PhotonPattern, k: u64) -> Result<()> {
        if pattern.modes() != self.modes {
            return Err(CoreError::Dimension(format!(
                "pattern has {} modes, histogram has {}",
                pattern.modes(),
                self.modes
            )));
        }
        if k > 0 {
            *self.counts.entry(pattern.clone()).or_insert(0) += k;
            self.total += k;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.modes != self.modes {
            return Err(CoreError::Dimension(format!(
                "cannot merge histograms over {} and {} modes",
                self.modes, other.modes
            )));
        }
        for (p, &k) in &other.counts {
            *self.counts.entry(p.clone()).or_insert(0) += k;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PhotonPattern, u64)> {
        self.counts.iter().map(|(p, &k)| (p, k))
    }

    /// Replay the histogram into a moment accumulator.
    pub fn accumulator(&self) -> Result<MomentAccumulator> {
        let mut acc = MomentAccumulator::new(self.modes)?;
        for (p, k) in self.iter() {
            acc.accumulate_weighted(p, k)?;
        }
        Ok(acc)
    }
}

/// The mode set entering the criterion for one record. Heralds are part of
/// the certified data only when they carry information: with two-mode
/// squeezed sources the herald-signal correlation is the nonclassical
/// resource, so those modes concatenate; squeezed-light and thermal runs
/// leave the herald bank idle and certify the signal modes alone.
pub fn criterion_counts(record: &SampleRecord) -> PhotonPattern {
    match record.regime {
        Regime::Gbs | Regime::Tbs => record.signal.clone(),
        Regime::Sbs => record.signal.concat(&record.herald),
    }
}
