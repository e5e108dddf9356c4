//! Source and channel characterization: correlation functions, efficiency
//! estimates, and the standard corrections applied to coincidence data.

use crate::analysis::CountHistogram;
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Conventional dB-per-unit-r conversion for squeezing levels, i.e.
/// 10 log10(e^{2r}) rounded to the three decimals used in practice.
pub const SQUEEZING_DB_PER_R: f64 = 8.686;

/// Second-order correlation at zero delay from a photon-number histogram:
/// sum of p_n n(n-1) over the squared mean.
pub fn g2(hist: &CountHistogram) -> Result<f64> {
    let mean = hist.mean();
    if mean <= 0.0 {
        return Err(CoreError::InvalidParameter(
            "g2 needs a nonzero mean photon number".into(),
        ));
    }
    let pairs: f64 = hist
        .normalized()
        .iter()
        .enumerate()
        .map(|(n, &p)| p * (n as f64) * (n as f64 - 1.0))
        .sum();
    Ok(pairs / (mean * mean))
}

/// Effective Schmidt-mode count K = 1/(g2 - 1) of a thermal-like source.
/// Only defined for super-Poissonian light (g2 > 1).
pub fn schmidt_modes(g2: f64) -> Result<f64> {
    if !g2.is_finite() || g2 <= 1.0 {
        return Err(CoreError::InvalidParameter(format!(
            "Schmidt-mode estimate needs g2 > 1, got {}",
            g2
        )));
    }
    Ok(1.0 / (g2 - 1.0))
}

/// Interference visibility from a polarization-swap check: `n_max` counts
/// with interference disabled, `n_min` at the dip. An ideal dip reaches
/// half the disabled rate, so V = (n_max/2 - n_min)/(n_max/2).
pub fn hom_visibility_polarization(n_max: f64, n_min: f64) -> Result<f64> {
    if !(n_max > 0.0) || !n_max.is_finite() {
        return Err(CoreError::InvalidParameter(
            "reference count rate must be positive".into(),
        ));
    }
    if !(n_min >= 0.0) || !n_min.is_finite() {
        return Err(CoreError::InvalidParameter(
            "dip count rate must be non-negative".into(),
        ));
    }
    Ok(1.0 - 2.0 * n_min / n_max)
}

/// Expected false four-fold coincidences from double-pair emission, to
/// leading order in the pair rate: one source emits two pairs while its
/// partner emits one, one herald photon and the partner's signal photon
/// are lost, and the surviving pair of signal photons splits across the
/// two exit ports. Both source assignments contribute equally.
pub fn false_fourfold_estimate(
    mean_n: f64,
    eta_h: f64,
    eta_s: f64,
    n_triggers: f64,
) -> Result<f64> {
    check_correction_inputs(mean_n, eta_h, eta_s, n_triggers)?;
    Ok((1.0 - eta_h) * (1.0 - eta_s) * eta_h * eta_h * eta_s * eta_s * mean_n.powi(3) * n_triggers)
}

/// Four-fold coincidence counts after subtracting the double-pair
/// background and normalizing by the squared mean photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiphotonCorrection {
    /// Estimated false four-folds over the trigger window.
    pub false_fourfolds: f64,
    /// Normalized corrected counts, clamped at zero.
    pub corrected: f64,
    /// Set when the raw subtraction went negative and was clamped.
    pub clamped: bool,
}

/// Subtract the estimated double-pair background from measured four-fold
/// counts `n_c` and normalize by the squared mean photon number.
pub fn multiphoton_correction(
    n_c: f64,
    mean_n: f64,
    eta_h: f64,
    eta_s: f64,
    n_triggers: f64,
) -> Result<MultiphotonCorrection> {
    if !(n_c >= 0.0) || !n_c.is_finite() {
        return Err(CoreError::InvalidParameter(
            "coincidence counts must be finite and non-negative".into(),
        ));
    }
    let false_fourfolds = false_fourfold_estimate(mean_n, eta_h, eta_s, n_triggers)?;
    let raw = (n_c - false_fourfolds) / (mean_n * mean_n);
    let clamped = raw < 0.0;
    Ok(MultiphotonCorrection {
        false_fourfolds,
        corrected: if clamped { 0.0 } else { raw },
        clamped,
    })
}

fn check_correction_inputs(mean_n: f64, eta_h: f64, eta_s: f64, n_triggers: f64) -> Result<()> {
    if !(mean_n > 0.0) || !mean_n.is_finite() {
        return Err(CoreError::InvalidParameter(
            "mean photon number must be positive".into(),
        ));
    }
    for (name, eta) in [("herald", eta_h), ("signal", eta_s)] {
        if !(eta >= 0.0 && eta <= 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "{} efficiency must lie in [0, 1], got {}",
                name, eta
            )));
        }
    }
    if !(n_triggers >= 0.0) || !n_triggers.is_finite() {
        return Err(CoreError::InvalidParameter(
            "trigger count must be finite and non-negative".into(),
        ));
    }
    Ok(())
}

/// Interference visibility left after group-velocity dispersion broadens
/// one arm of a two-photon interferometer: V = tau0^2 / sqrt(tau0^4 + b^2)
/// with broadening b = gvd * delta_l / 2. All quantities in SI units
/// (seconds, seconds^2 per meter, meters).
pub fn dispersion_visibility(tau0: f64, gvd: f64, delta_l: f64) -> Result<f64> {
    if !(tau0 > 0.0) || !tau0.is_finite() {
        return Err(CoreError::InvalidParameter(
            "correlation time must be positive".into(),
        ));
    }
    if !gvd.is_finite() || !delta_l.is_finite() {
        return Err(CoreError::InvalidParameter(
            "dispersion and length must be finite".into(),
        ));
    }
    let broadening = gvd * delta_l / 2.0;
    // hypot(tau0^2, b) = sqrt(tau0^4 + b^2) without underflow at ps scales.
    Ok(tau0.powi(2) / tau0.powi(2).hypot(broadening))
}

/// Heralding-based efficiency estimate for one source: coincidences over
/// singles in each arm, with Poisson error propagation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlyshkoEstimate {
    /// Signal-path efficiency C/H.
    pub eta_signal: f64,
    pub eta_signal_sigma: f64,
    /// Herald-path efficiency C/S.
    pub eta_herald: f64,
    pub eta_herald_sigma: f64,
    /// Coincidences exceed one of the singles rates, which no loss model
    /// can produce; usually a sign of accidental-coincidence pollution.
    pub unphysical: bool,
}

/// Per-mode Klyshko efficiencies from coincidence counts `c`, herald
/// singles `h`, and signal singles `s`. Relative uncertainty on a ratio
/// C/X is sqrt(1/C + 1/X) for Poissonian counting.
pub fn klyshko(c: &[f64], h: &[f64], s: &[f64]) -> Result<Vec<KlyshkoEstimate>> {
    if c.is_empty() || c.len() != h.len() || c.len() != s.len() {
        return Err(CoreError::Dimension(format!(
            "count arrays must share one nonzero length, got {}/{}/{}",
            c.len(),
            h.len(),
            s.len()
        )));
    }
    let mut out = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        let (ci, hi, si) = (c[i], h[i], s[i]);
        if !(hi > 0.0) || !(si > 0.0) || !hi.is_finite() || !si.is_finite() {
            return Err(CoreError::InvalidParameter(
                "singles counts must be positive".into(),
            ));
        }
        if !(ci >= 0.0) || !ci.is_finite() {
            return Err(CoreError::InvalidParameter(
                "coincidence counts must be finite and non-negative".into(),
            ));
        }
        let eta_signal = ci / hi;
        let eta_herald = ci / si;
        // With zero coincidences the ratio is zero and the Poisson error
        // formula degenerates; report zero spread rather than NaN.
        let (sig_s, sig_h) = if ci > 0.0 {
            (
                eta_signal * (1.0 / ci + 1.0 / hi).sqrt(),
                eta_herald * (1.0 / ci + 1.0 / si).sqrt(),
            )
        } else {
            (0.0, 0.0)
        };
        out.push(KlyshkoEstimate {
            eta_signal,
            eta_signal_sigma: sig_s,
            eta_herald,
            eta_herald_sigma: sig_h,
            unphysical: ci > hi.min(si),
        });
    }
    Ok(out)
}

/// Squeezing level inferred from loss-corrected mean photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingEstimate {
    /// Mean squeezing parameter over the modes.
    pub r: f64,
    /// The same level in decibels.
    pub decibels: f64,
    /// Mean generated photon number over the modes, after dividing out
    /// the detection efficiency.
    pub mean_photons_generated: f64,
}

/// Invert per-mode detected mean photon numbers through the given
/// efficiencies and average arcsinh(sqrt(n)) to estimate the squeezing
/// parameter of the sources.
pub fn reconstruct_squeezing(
    measured_means: &[f64],
    efficiencies: &[f64],
) -> Result<SqueezingEstimate> {
    if measured_means.is_empty() || measured_means.len() != efficiencies.len() {
        return Err(CoreError::Dimension(format!(
            "got {} means for {} efficiencies",
            measured_means.len(),
            efficiencies.len()
        )));
    }
    let mut r_sum = 0.0;
    let mut n_sum = 0.0;
    for (&m, &eta) in measured_means.iter().zip(efficiencies) {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(CoreError::InvalidParameter(
                "measured means must be finite and non-negative".into(),
            ));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(CoreError::InvalidParameter(format!(
                "efficiency must lie in (0, 1], got {}",
                eta
            )));
        }
        let n_gen = m / eta;
        r_sum += n_gen.sqrt().asinh();
        n_sum += n_gen;
    }
    let modes = measured_means.len() as f64;
    let r = r_sum / modes;
    Ok(SqueezingEstimate {
        r,
        decibels: SQUEEZING_DB_PER_R * r,
        mean_photons_generated: n_sum / modes,
    })
}
