//! The photon-number covariance criterion: C - B matrix, minimum
//! eigenvalue, bootstrap uncertainty, and time-binned reports.
//!
//! For classical light the matrix Cov(n_j, n_k) - delta_jk <n_j> is
//! positive semidefinite, so a negative eigenvalue certifies nonclassical
//! photon-number correlations. The criterion is the two-by-two conjugated
//! block of the full normally ordered moment matrix, which preserves
//! eigenvalue signs (Sylvester inertia), verified as a property test.

use crate::certifier::{criterion_counts, MomentAccumulator, PatternHistogram};
use crate::error::{CoreError, Result};
use crate::numerics::{eigen_symmetric, SymmetricMatrix};
use crate::rng::{derive_seed, domain, stream_rng};
use crate::sampler::{Regime, SampleRecord};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const DEFAULT_BOOTSTRAP_ROUNDS: u32 = 200;

/// Smallest shot set certify accepts; below this the bootstrap spread is
/// meaningless.
pub const MIN_CERTIFY_SHOTS: u64 = 100;

/// Outcome of one certification: the criterion matrix, its minimum
/// eigenvalue with the corresponding mode combination, and the bootstrap
/// spread.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub matrix: SymmetricMatrix<f64>,
    pub min_eigenvalue: f64,
    /// Eigenvector of the minimum eigenvalue: which mode combination
    /// carries the (non)classicality.
    pub eigenvector: Vec<f64>,
    /// One standard deviation of the minimum eigenvalue over bootstrap
    /// resamples.
    pub uncertainty: f64,
    pub shot_count: u64,
    pub regime: Option<Regime>,
    /// Time-bin interval [start, end) the shots came from, when binned.
    pub bin_range: Option<(u64, u64)>,
}

impl CriterionResult {
    /// Violation significance |lambda_min| / sigma; zero when the minimum
    /// eigenvalue is non-negative (no violation to quantify).
    pub fn n_sigma_violation(&self) -> f64 {
        if self.min_eigenvalue < 0.0 && self.uncertainty > 0.0 {
            -self.min_eigenvalue / self.uncertainty
        } else {
            0.0
        }
    }
}

/// C - B from accumulated moments: covariances of per-mode counts minus
/// the diagonal of means, both with 1/N normalization.
pub fn criterion_matrix(acc: &MomentAccumulator) -> Result<SymmetricMatrix<f64>> {
    if acc.shot_count() < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "criterion needs at least 2 shots, got {}",
            acc.shot_count()
        )));
    }
    let m = acc.modes();
    Ok(SymmetricMatrix::from_fn(m, |j, k| {
        let cov = acc.second_moment(j, k) - acc.mean(j) * acc.mean(k);
        if j == k {
            cov - acc.mean(j)
        } else {
            cov
        }
    }))
}

/// The full (M+1) x (M+1) normally ordered moment matrix: first row and
/// column hold the means, inner block holds <n_j n_k> - delta_jk <n_j>.
/// Classical light makes this PSD; C - B is its conjugation by the
/// mean-subtracting triangular transform.
pub fn full_moment_matrix(acc: &MomentAccumulator) -> Result<SymmetricMatrix<f64>> {
    if acc.shot_count() < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "moment matrix needs at least 2 shots, got {}",
            acc.shot_count()
        )));
    }
    let m = acc.modes();
    Ok(SymmetricMatrix::from_fn(m + 1, |a, b| match (a, b) {
        (0, 0) => 1.0,
        (0, k) => acc.mean(k - 1),
        (j, 0) => acc.mean(j - 1),
        (j, k) => {
            let raw = acc.second_moment(j - 1, k - 1);
            if j == k {
                raw - acc.mean(j - 1)
            } else {
                raw
            }
        }
    }))
}

fn min_eigenpair(m: &SymmetricMatrix<f64>) -> Result<(f64, Vec<f64>)> {
    let (vals, vecs) = eigen_symmetric(m)?;
    Ok((vals[0], vecs[0].clone()))
}

/// One multinomial resample of the histogram, drawn pattern by pattern via
/// conditional binomials (deterministic given the BTreeMap order).
fn resample_accumulator(
    hist: &PatternHistogram,
    rng: &mut impl Rng,
) -> Result<MomentAccumulator> {
    let n = hist.total_shots();
    let mut acc = MomentAccumulator::new(hist.modes())?;
    let mut remaining = n;
    let mut mass_left = n as f64;
    for (pattern, count) in hist.iter() {
        if remaining == 0 {
            break;
        }
        let p = (count as f64 / mass_left).min(1.0);
        let k = if p >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, p)
                .map_err(|e| CoreError::Numeric(format!("binomial draw: {}", e)))?
                .sample(rng)
        };
        acc.accumulate_weighted(pattern, k)?;
        remaining -= k;
        mass_left -= count as f64;
    }
    // Float cancellation can leave a shot unassigned; give it to the modal
    // pattern rather than shorting the resample.
    if remaining > 0 {
        let modal = hist
            .iter()
            .max_by_key(|&(_, k)| k)
            .map(|(p, _)| p.clone())
            .expect("histogram verified non-empty");
        acc.accumulate_weighted(&modal, remaining)?;
    }
    Ok(acc)
}

/// Certify a shot set: minimum eigenvalue of the criterion matrix over the
/// full data, with uncertainty from multinomial bootstrap resamples of the
/// pattern histogram. Rounds run in parallel on per-round derived streams,
/// so results are independent of thread count.
pub fn certify(hist: &PatternHistogram, bootstrap_rounds: u32, seed: u64) -> Result<CriterionResult> {
    if hist.total_shots() < MIN_CERTIFY_SHOTS {
        return Err(CoreError::InvalidParameter(format!(
            "certification needs at least {} shots, got {}",
            MIN_CERTIFY_SHOTS,
            hist.total_shots()
        )));
    }
    if bootstrap_rounds < 2 {
        return Err(CoreError::InvalidParameter(
            "bootstrap needs at least 2 rounds".into(),
        ));
    }
    let acc = hist.accumulator()?;
    let matrix = criterion_matrix(&acc)?;
    let (min_eigenvalue, eigenvector) = min_eigenpair(&matrix)?;

    let round_eigs: Vec<Result<f64>> = (0..bootstrap_rounds)
        .into_par_iter()
        .map(|round| {
            let mut rng = stream_rng(seed, domain::BOOTSTRAP, round as u64);
            let acc = resample_accumulator(hist, &mut rng)?;
            let m = criterion_matrix(&acc)?;
            Ok(min_eigenpair(&m)?.0)
        })
        .collect();
    let mut eigs = Vec::with_capacity(bootstrap_rounds as usize);
    for e in round_eigs {
        eigs.push(e?);
    }
    let mean = eigs.iter().sum::<f64>() / eigs.len() as f64;
    let var = eigs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (eigs.len() - 1) as f64;

    Ok(CriterionResult {
        matrix,
        min_eigenvalue,
        eigenvector,
        uncertainty: var.sqrt(),
        shot_count: hist.total_shots(),
        regime: None,
        bin_range: None,
    })
}

/// Lowest and highest minimum eigenvalues one regime reached across bins.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeEnvelope {
    pub regime: Regime,
    pub lowest: f64,
    pub highest: f64,
}

#[derive(Debug, Clone)]
pub struct TimebinnedReport {
    /// One result per (bin, regime), ordered by bin start then regime.
    pub bins: Vec<CriterionResult>,
    pub envelopes: Vec<RegimeEnvelope>,
}

fn regime_order(r: Regime) -> u8 {
    match r {
        Regime::Gbs => 0,
        Regime::Sbs => 1,
        Regime::Tbs => 2,
    }
}

/// Split records into time bins of `bin_size` shots per regime and certify
/// each bin separately; also report the per-regime eigenvalue envelope.
/// Bins left with fewer than MIN_CERTIFY_SHOTS records (stub bins at
/// regime switches) are skipped.
pub fn timebinned_certify(
    records: &[SampleRecord],
    bin_size: u64,
    bootstrap_rounds: u32,
    seed: u64,
) -> Result<TimebinnedReport> {
    if bin_size < MIN_CERTIFY_SHOTS {
        return Err(CoreError::InvalidParameter(format!(
            "bin size must be at least {}, got {}",
            MIN_CERTIFY_SHOTS, bin_size
        )));
    }
    let mut groups: BTreeMap<(u64, u8), PatternHistogram> = BTreeMap::new();
    for rec in records {
        let counts = criterion_counts(rec);
        let key = (rec.time_bin / bin_size, regime_order(rec.regime));
        match groups.get_mut(&key) {
            Some(h) => h.record(&counts)?,
            None => {
                let mut h = PatternHistogram::new(counts.modes())?;
                h.record(&counts)?;
                groups.insert(key, h);
            }
        }
    }

    let mut bins = Vec::new();
    for (ordinal, ((bin_idx, regime_idx), hist)) in groups.into_iter().enumerate() {
        if hist.total_shots() < MIN_CERTIFY_SHOTS {
            continue;
        }
        let sub_seed = derive_seed(seed, domain::BOOTSTRAP, ordinal as u64);
        let mut result = certify(&hist, bootstrap_rounds, sub_seed)?;
        let regime = match regime_idx {
            0 => Regime::Gbs,
            1 => Regime::Sbs,
            _ => Regime::Tbs,
        };
        result.regime = Some(regime);
        result.bin_range = Some((bin_idx * bin_size, (bin_idx + 1) * bin_size));
        bins.push(result);
    }

    let mut envelopes = Vec::new();
    for regime in [Regime::Gbs, Regime::Sbs, Regime::Tbs] {
        let eigs: Vec<f64> = bins
            .iter()
            .filter(|b| b.regime == Some(regime))
            .map(|b| b.min_eigenvalue)
            .collect();
        if !eigs.is_empty() {
            envelopes.push(RegimeEnvelope {
                regime,
                lowest: eigs.iter().cloned().fold(f64::INFINITY, f64::min),
                highest: eigs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    Ok(TimebinnedReport { bins, envelopes })
}
