//! Pearson correlation between total herald and total signal counts:
//! measured from records and predicted from source parameters.

use crate::error::{CoreError, Result};
use crate::sampler::{Regime, SampleRecord};

/// Measured correlation; `degenerate` marks a zero-variance stream (e.g. a
/// run with the herald bank idle), where the coefficient is undefined and
/// reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PearsonMeasured {
    pub gamma: f64,
    pub degenerate: bool,
}

/// Correlation coefficient of (total herald, total signal) over shots.
/// Totals are integers, so the variance-zero test is exact.
pub fn pearson_measured(records: &[SampleRecord]) -> Result<PearsonMeasured> {
    let n = records.len() as u64;
    if n < 2 {
        return Err(CoreError::InvalidParameter(format!(
            "correlation needs at least 2 shots, got {}",
            n
        )));
    }
    let mut sum_m = 0u128;
    let mut sum_s = 0u128;
    let mut sum_mm = 0u128;
    let mut sum_ss = 0u128;
    let mut sum_ms = 0u128;
    for r in records {
        let m = r.herald_total() as u128;
        let s = r.signal_total() as u128;
        sum_m += m;
        sum_s += s;
        sum_mm += m * m;
        sum_ss += s * s;
        sum_ms += m * s;
    }
    let n = n as u128;
    // N^2-scaled covariance/variances stay exact in integer arithmetic
    let var_m = (n * sum_mm) as i128 - (sum_m * sum_m) as i128;
    let var_s = (n * sum_ss) as i128 - (sum_s * sum_s) as i128;
    if var_m == 0 || var_s == 0 {
        return Ok(PearsonMeasured {
            gamma: 0.0,
            degenerate: true,
        });
    }
    let cov = (n * sum_ms) as i128 - (sum_m * sum_s) as i128;
    let gamma = cov as f64 / ((var_m as f64).sqrt() * (var_s as f64).sqrt());
    Ok(PearsonMeasured {
        gamma: gamma.clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Expected herald-signal correlation for a source at squeezing `r` with
/// the given arm transmissions. Squeezed-light runs leave the herald bank
/// idle, so the coefficient is zero; likewise thermal runs, which discard
/// the herald arm. Two-mode squeezed sources correlate the arms:
///   gamma = sqrt(eta_h eta_s / ([1-(1-eta_h)tanh^2 r][1-(1-eta_s)tanh^2 r]))
pub fn pearson_predicted(r: f64, eta_herald: f64, eta_signal: f64, regime: Regime) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(CoreError::InvalidParameter(format!(
            "squeezing parameter must be finite and non-negative, got {}",
            r
        )));
    }
    for (name, eta) in [("herald", eta_herald), ("signal", eta_signal)] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(CoreError::InvalidParameter(format!(
                "{} transmission {} outside [0, 1]",
                name, eta
            )));
        }
    }
    match regime {
        Regime::Gbs | Regime::Tbs => Ok(0.0),
        Regime::Sbs => {
            let t2 = r.tanh() * r.tanh();
            let dh = 1.0 - (1.0 - eta_herald) * t2;
            let ds = 1.0 - (1.0 - eta_signal) * t2;
            Ok((eta_herald * eta_signal / (dh * ds)).sqrt())
        }
    }
}
