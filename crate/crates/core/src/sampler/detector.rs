//! Detector models: PNR truncation, the multiplexed herald bank with
//! detector blinding, and demultiplexer extinction ratios.

use crate::error::{CoreError, Result};
use crate::numerics::{choose, choose_f64, factorial_u128, stirling2, STIRLING_MAX_N};
use crate::sampler::HeraldDetectorModel;
use crate::states::PhotonPattern;

/// Photon counts from the thermal source are truncated here; the geometric
/// tail beyond this is far below double precision for desk-scale means.
pub const SOURCE_PHOTON_MAX: u32 = 60;

/// Largest photon number with an exact occupancy law (Stirling-number cap).
pub const BLINDING_PHOTON_MAX: u32 = STIRLING_MAX_N as u32;

/// Clamp every count in a pattern at the detector's resolving limit.
pub fn apply_pnr_truncation(pattern: &PhotonPattern, cutoff: u32) -> Result<PhotonPattern> {
    if cutoff < 1 {
        return Err(CoreError::InvalidParameter(
            "PNR cutoff must be at least 1".into(),
        ));
    }
    Ok(pattern.truncated(cutoff))
}

/// Probability that `n` photons spread uniformly over `d` detectors
/// illuminate exactly k distinct detectors, for k = 0..=min(n, d):
///   P(k | n, d) = C(d, k) * S(n, k) * k! / d^n
/// with S the Stirling partition number.
pub fn blinding_distribution(n: u32, d: u32) -> Result<Vec<f64>> {
    if d < 1 {
        return Err(CoreError::InvalidParameter(
            "detector count must be at least 1".into(),
        ));
    }
    if n > BLINDING_PHOTON_MAX {
        return Err(CoreError::Capacity(format!(
            "occupancy law supports at most {} photons, got {}",
            BLINDING_PHOTON_MAX, n
        )));
    }
    if n == 0 {
        return Ok(vec![1.0]);
    }
    let kmax = n.min(d);
    let dn = (d as f64).powi(n as i32);
    let mut out = vec![0.0; kmax as usize + 1];
    for k in 1..=kmax {
        // bank size can be large, so the d-choose-k factor lives in f64
        let ways = choose_f64(d as u64, k as u64)
            * stirling2(n as usize, k as usize)? as f64
            * factorial_u128(k)? as f64;
        out[k as usize] = ways / dn;
    }
    Ok(out)
}

fn binomial_pmf(k: u32, n: u32, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    choose(n as u64, k as u64) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Thermal photon-number law truncated at SOURCE_PHOTON_MAX, renormalized
/// so downstream composition stays exactly stochastic.
fn thermal_pmf(mean: f64) -> Vec<f64> {
    let lambda = mean / (1.0 + mean);
    let mut pmf: Vec<f64> = (0..=SOURCE_PHOTON_MAX)
        .map(|n| lambda.powi(n as i32) / (1.0 + mean))
        .collect();
    let total: f64 = pmf.iter().sum();
    for p in pmf.iter_mut() {
        *p /= total;
    }
    pmf
}

/// fired_distribution for every (live, n) pair the train can reach;
/// indexed [live][n] with n capped at the occupancy-law photon limit.
/// Rebuilding these per pulse dominated the train cost before caching.
fn fired_table(d: u32, eta: f64) -> Result<Vec<Vec<Vec<f64>>>> {
    let mut table = Vec::with_capacity(d as usize + 1);
    for live in 0..=d {
        let mut rows = Vec::new();
        if live > 0 {
            for n in 0..=BLINDING_PHOTON_MAX {
                rows.push(fired_distribution(n, d, live, eta)?);
            }
        }
        table.push(rows);
    }
    Ok(table)
}

/// Distribution of already-dead detectors at the start of each pulse.
///
/// A detector that fires stays dead for the rest of the train; photons
/// landing on dead detectors are swallowed. Element [t][b] is the
/// probability that b of the d detectors are dead when pulse t arrives.
fn blinded_count_evolution(
    model: &HeraldDetectorModel,
    mean_photons: f64,
) -> Result<Vec<Vec<f64>>> {
    let d = model.detectors;
    let pulses = model.pulses_per_train as usize;
    let source = thermal_pmf(mean_photons);
    let table = fired_table(d, model.efficiency)?;

    let mut per_pulse = Vec::with_capacity(pulses);
    let mut state = vec![0.0; d as usize + 1];
    state[0] = 1.0;
    for _ in 0..pulses {
        per_pulse.push(state.clone());
        let mut next = vec![0.0; d as usize + 1];
        for (b, &pb) in state.iter().enumerate() {
            if pb == 0.0 {
                continue;
            }
            let live = d - b as u32;
            if live == 0 {
                next[b] += pb;
                continue;
            }
            for (n, &pn) in source.iter().enumerate() {
                if pn == 0.0 {
                    continue;
                }
                let fired = &table[live as usize][(n as u32).min(BLINDING_PHOTON_MAX) as usize];
                for (f, &pf) in fired.iter().enumerate() {
                    next[b + f] += pb * pn * pf;
                }
            }
        }
        state = next;
    }
    Ok(per_pulse)
}

/// Distribution of detectors that fire when `n` photons hit a bank of `d`
/// detectors of which `live` still respond, each firing with prob `eta`.
fn fired_distribution(n: u32, d: u32, live: u32, eta: f64) -> Result<Vec<f64>> {
    let n = n.min(BLINDING_PHOTON_MAX);
    let mut out = vec![0.0; (n.min(live) as usize) + 1];
    let p_live = live as f64 / d as f64;
    for j in 0..=n {
        // j photons land on live detectors
        let pj = binomial_pmf(j, n, p_live);
        if pj == 0.0 {
            continue;
        }
        let occupancy = blinding_distribution(j, live)?;
        for (k, &pk) in occupancy.iter().enumerate() {
            if pk == 0.0 {
                continue;
            }
            for f in 0..=k as u32 {
                out[f as usize] += pj * pk * binomial_pmf(f, k as u32, eta);
            }
        }
    }
    Ok(out)
}

/// Detection-probability matrix of the herald bank at one pulse position.
#[derive(Debug, Clone)]
pub struct AssignmentMatrix {
    /// p[n][m]: probability of registering m clicks given n photons.
    /// Rows are indexed by the true photon number n = 0..=BLINDING_PHOTON_MAX.
    pub p: Vec<Vec<f64>>,
}

impl AssignmentMatrix {
    pub fn max_input(&self) -> u32 {
        self.p.len() as u32 - 1
    }

    /// P(m detected | n arrived); n above the table clamps to the last row.
    pub fn prob(&self, n: u32, m: u32) -> f64 {
        let row = &self.p[(n as usize).min(self.p.len() - 1)];
        row.get(m as usize).copied().unwrap_or(0.0)
    }

    pub fn row(&self, n: u32) -> &[f64] {
        &self.p[(n as usize).min(self.p.len() - 1)]
    }
}

/// Assignment matrix of the multiplexed herald bank for pulse `pulse_index`
/// of a train, with earlier pulses drawn from a thermal source of the given
/// mean. Dead detectors accumulated earlier in the train swallow photons.
/// Every row sums to 1.
pub fn herald_assignment_matrix(
    model: &HeraldDetectorModel,
    mean_photons: f64,
    pulse_index: u32,
) -> Result<AssignmentMatrix> {
    model.validate()?;
    if pulse_index >= model.pulses_per_train {
        return Err(CoreError::InvalidParameter(format!(
            "pulse index {} outside a train of {}",
            pulse_index, model.pulses_per_train
        )));
    }
    if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
        return Err(CoreError::InvalidParameter(
            "mean photon number must be finite and non-negative".into(),
        ));
    }
    let blinded = blinded_count_evolution(model, mean_photons)?;
    assignment_for_blinded(model, &blinded[pulse_index as usize])
}

fn assignment_for_blinded(
    model: &HeraldDetectorModel,
    blinded: &[f64],
) -> Result<AssignmentMatrix> {
    let d = model.detectors;
    let nmax = BLINDING_PHOTON_MAX;
    let table = fired_table(d, model.efficiency)?;
    let mut p = vec![vec![0.0; d.min(nmax) as usize + 1]; nmax as usize + 1];
    for (b, &pb) in blinded.iter().enumerate() {
        if pb == 0.0 {
            continue;
        }
        let live = d - b as u32;
        for n in 0..=nmax {
            if live == 0 {
                p[n as usize][0] += pb;
                continue;
            }
            let fired = &table[live as usize][n as usize];
            for (m, &pm) in fired.iter().enumerate() {
                p[n as usize][m] += pb * pm;
            }
        }
    }
    Ok(AssignmentMatrix { p })
}

/// Probability that a thermal pulse at this train position registers a
/// click count different from its photon number.
pub fn misassignment_probability(
    model: &HeraldDetectorModel,
    mean_photons: f64,
    pulse_index: u32,
) -> Result<f64> {
    let a = herald_assignment_matrix(model, mean_photons, pulse_index)?;
    let source = thermal_pmf(mean_photons);
    let mut correct = 0.0;
    for (n, &pn) in source.iter().enumerate() {
        correct += pn * a.prob(n as u32, n as u32);
    }
    Ok(1.0 - correct)
}

/// Assignment matrices for every pulse position of a train, sharing one
/// blinded-count evolution instead of recomputing it per pulse.
pub fn herald_assignment_train(
    model: &HeraldDetectorModel,
    mean_photons: f64,
) -> Result<Vec<AssignmentMatrix>> {
    model.validate()?;
    if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
        return Err(CoreError::InvalidParameter(
            "mean photon number must be finite and non-negative".into(),
        ));
    }
    let blinded = blinded_count_evolution(model, mean_photons)?;
    blinded
        .iter()
        .map(|row| assignment_for_blinded(model, row))
        .collect()
}

/// Worst misassignment probability across the pulse train and the pulse
/// index where it occurs.
pub fn worst_pulse_misassignment(
    model: &HeraldDetectorModel,
    mean_photons: f64,
) -> Result<(f64, u32)> {
    let train = herald_assignment_train(model, mean_photons)?;
    let source = thermal_pmf(mean_photons);
    let mut worst = (0.0, 0u32);
    for (t, a) in train.iter().enumerate() {
        let mut correct = 0.0;
        for (n, &pn) in source.iter().enumerate() {
            correct += pn * a.prob(n as u32, n as u32);
        }
        let m = 1.0 - correct;
        if m > worst.0 {
            worst = (m, t as u32);
        }
    }
    Ok(worst)
}

/// Ceiling on the misassignment probability of any pulse: vacuum pulses are
/// always assigned correctly (no dark counts), so at most the photon-carrying
/// fraction 1 - P(0) = mean/(1 + mean) can be misassigned.
pub fn misassignment_upper_bound(mean_photons: f64) -> f64 {
    mean_photons / (1.0 + mean_photons)
}

/// Demultiplexer extinction ratio from a delay histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtinctionRatio {
    Decibels(f64),
    /// No counts in any off-time bin.
    Infinite,
}

impl std::fmt::Display for ExtinctionRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtinctionRatio::Decibels(db) => write!(f, "{:.2} dB", db),
            ExtinctionRatio::Infinite => write!(f, "inf dB (no off-time counts)"),
        }
    }
}

/// 10 log10(on-time counts / off-time counts) over (delay bin, counts)
/// pairs; bin 0 is the on-time bin. Duplicate bins accumulate.
pub fn extinction_ratio(counts_by_delay: &[(i64, f64)]) -> Result<ExtinctionRatio> {
    let mut on = 0.0;
    let mut off = 0.0;
    let mut saw_on = false;
    for &(bin, c) in counts_by_delay {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "counts must be finite and non-negative, got {}",
                c
            )));
        }
        if bin == 0 {
            saw_on = true;
            on += c;
        } else {
            off += c;
        }
    }
    if !saw_on || on <= 0.0 {
        return Err(CoreError::InvalidParameter(
            "extinction ratio needs an on-time bin with positive counts".into(),
        ));
    }
    if off == 0.0 {
        return Ok(ExtinctionRatio::Infinite);
    }
    Ok(ExtinctionRatio::Decibels(10.0 * (on / off).log10()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(eta: f64) -> HeraldDetectorModel {
        HeraldDetectorModel {
            detectors: 16,
            pulses_per_train: 8,
            efficiency: eta,
            blinding_enabled: true,
        }
    }

    #[test]
    fn occupancy_law_against_direct_enumeration() {
        // Count distinct detectors over all d^n photon placements.
        for d in 1u32..=4 {
            for n in 0u32..=5 {
                let law = blinding_distribution(n, d).unwrap();
                let mut counts = vec![0u64; law.len()];
                let total = (d as u64).pow(n);
                for code in 0..total {
                    let mut c = code;
                    let mut hit = vec![false; d as usize];
                    for _ in 0..n {
                        hit[(c % d as u64) as usize] = true;
                        c /= d as u64;
                    }
                    let k = hit.iter().filter(|&&h| h).count();
                    counts[k] += 1;
                }
                for (k, &ways) in counts.iter().enumerate() {
                    let expect = ways as f64 / total as f64;
                    assert!(
                        (law[k] - expect).abs() < 1e-12,
                        "n={} d={} k={}: {} vs {}",
                        n,
                        d,
                        k,
                        law[k],
                        expect
                    );
                }
            }
        }
    }

    #[test]
    fn occupancy_law_normalizes_and_degenerates() {
        for n in 0..=10u32 {
            for d in [1u32, 2, 7, 16] {
                let law = blinding_distribution(n, d).unwrap();
                let sum: f64 = law.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "n={} d={}", n, d);
            }
            // single detector: all photons pile onto it
            let law = blinding_distribution(n, 1).unwrap();
            let k = n.min(1) as usize;
            assert!((law[k] - 1.0).abs() < 1e-12);
        }
        let law = blinding_distribution(2, 2).unwrap();
        assert!((law[1] - 0.5).abs() < 1e-12);
        assert!((law[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn first_pulse_single_photon_detection_equals_efficiency() {
        let a = herald_assignment_matrix(&model(0.4), 0.04, 0).unwrap();
        assert!((a.prob(1, 1) - 0.4).abs() < 1e-12);
        assert!((a.prob(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assignment_rows_sum_to_one_at_every_pulse() {
        for t in 0..8 {
            let a = herald_assignment_matrix(&model(0.4), 2.3, t).unwrap();
            for (n, row) in a.p.iter().enumerate() {
                let s: f64 = row.iter().sum();
                assert!((s - 1.0).abs() < 1e-9, "pulse {} n {}: sum {}", t, n, s);
            }
        }
    }

    #[test]
    fn huge_bank_with_perfect_efficiency_is_nearly_ideal() {
        let m = HeraldDetectorModel {
            detectors: 1000,
            pulses_per_train: 1,
            efficiency: 1.0,
            blinding_enabled: true,
        };
        let a = herald_assignment_matrix(&m, 0.01, 0).unwrap();
        for n in 0..=3u32 {
            assert!((a.prob(n, n) - 1.0).abs() < 5e-3, "n={}", n);
        }
    }

    #[test]
    fn misassignment_stays_below_photon_carrying_bound() {
        for &mean in &[0.04_f64, 0.5, 2.3] {
            let bound = misassignment_upper_bound(mean);
            let (worst, _) = worst_pulse_misassignment(&model(0.4), mean).unwrap();
            assert!(worst <= bound + 1e-12, "mean={}", mean);
        }
    }

    #[test]
    fn misassignment_grows_along_the_train() {
        let m = model(0.4);
        let lo = misassignment_probability(&m, 2.3, 0).unwrap();
        let hi = misassignment_probability(&m, 2.3, 7).unwrap();
        assert!(hi > lo, "blinding should accumulate: {} vs {}", lo, hi);
    }

    #[test]
    fn pnr_truncation_contract() {
        let p = PhotonPattern::new(vec![5, 0, 2]);
        assert_eq!(
            apply_pnr_truncation(&p, 3).unwrap().counts(),
            &[3, 0, 2]
        );
        assert!(apply_pnr_truncation(&p, 0).is_err());
    }

    #[test]
    fn extinction_ratio_basics() {
        let er = extinction_ratio(&[(0, 1000.0), (-1, 40.0), (1, 60.0)]).unwrap();
        match er {
            ExtinctionRatio::Decibels(db) => assert!((db - 10.0).abs() < 1e-12),
            _ => panic!("expected finite ER"),
        }
        // scaling all counts leaves the ratio unchanged
        let er2 = extinction_ratio(&[(0, 2000.0), (-1, 80.0), (1, 120.0)]).unwrap();
        assert_eq!(er, er2);

        assert_eq!(
            extinction_ratio(&[(0, 10.0)]).unwrap(),
            ExtinctionRatio::Infinite
        );
        assert!(extinction_ratio(&[(1, 5.0)]).is_err());
        assert!(extinction_ratio(&[(0, 0.0), (1, 5.0)]).is_err());
    }
}
