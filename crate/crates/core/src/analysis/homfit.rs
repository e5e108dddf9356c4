//! Gaussian dip fit for two-photon interference scans.

use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

/// Fitted dip c(tau) = baseline * (1 - visibility * exp(-(tau-center)^2 / 2w^2)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomFit {
    /// Dip depth relative to the baseline, clamped to [0, 1].
    pub visibility: f64,
    pub dip_center: f64,
    pub baseline: f64,
    /// Gaussian width parameter (same unit as the delays).
    pub width: f64,
}

struct Candidate {
    sse: f64,
    tau0: f64,
    w: f64,
    baseline: f64,
    depth: f64,
}

/// Least-squares solve of counts = b - a*g(tau; tau0, w) for fixed dip
/// position and width; `a = b*v` is the absolute dip depth.
fn solve_linear(delays: &[f64], counts: &[f64], tau0: f64, w: f64) -> Option<(f64, f64, f64)> {
    let n = delays.len() as f64;
    let mut sum_g = 0.0;
    let mut sum_gg = 0.0;
    let mut sum_c = 0.0;
    let mut sum_cg = 0.0;
    for (&t, &c) in delays.iter().zip(counts) {
        let z = (t - tau0) / w;
        let g = (-0.5 * z * z).exp();
        sum_g += g;
        sum_gg += g * g;
        sum_c += c;
        sum_cg += c * g;
    }
    let den = sum_g * sum_g - n * sum_gg;
    // Degenerate when g is constant over the scan (width far beyond the
    // span); no dip information at this candidate.
    if den.abs() < 1e-12 * n * n {
        return None;
    }
    let a = (n * sum_cg - sum_c * sum_g) / den;
    let b = (sum_c + a * sum_g) / n;
    let mut sse = 0.0;
    for (&t, &c) in delays.iter().zip(counts) {
        let z = (t - tau0) / w;
        let g = (-0.5 * z * z).exp();
        let r = c - (b - a * g);
        sse += r * r;
    }
    Some((sse, b, a))
}

fn scan_grid(
    delays: &[f64],
    counts: &[f64],
    taus: impl Iterator<Item = f64> + Clone,
    widths: impl Iterator<Item = f64>,
    best: &mut Candidate,
) {
    for w in widths {
        for tau0 in taus.clone() {
            if let Some((sse, b, a)) = solve_linear(delays, counts, tau0, w) {
                if sse < best.sse {
                    *best = Candidate {
                        sse,
                        tau0,
                        w,
                        baseline: b,
                        depth: a,
                    };
                }
            }
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| lo + step * i as f64)
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let ratio = if n > 1 {
        (hi / lo).powf(1.0 / (n - 1) as f64)
    } else {
        1.0
    };
    (0..n).map(move |i| lo * ratio.powi(i as i32))
}

/// Fit a Gaussian dip to an interference scan. The position and width are
/// found by a coarse grid with local refinement; the baseline and depth
/// follow from an exact linear solve at each candidate.
pub fn hom_scan(delays: &[f64], counts: &[f64]) -> Result<HomFit> {
    if delays.len() != counts.len() {
        return Err(CoreError::Dimension(format!(
            "{} delays for {} coincidence values",
            delays.len(),
            counts.len()
        )));
    }
    if delays.len() < 5 {
        return Err(CoreError::InvalidParameter(
            "a dip fit needs at least 5 scan points".into(),
        ));
    }
    if delays.iter().chain(counts).any(|x| !x.is_finite()) {
        return Err(CoreError::InvalidParameter(
            "scan data must be finite".into(),
        ));
    }
    let t_lo = delays.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_hi = delays.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if t_hi <= t_lo {
        return Err(CoreError::InvalidParameter(
            "scan needs at least two distinct delays".into(),
        ));
    }
    let c_lo = counts.iter().cloned().fold(f64::INFINITY, f64::min);
    let c_hi = counts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if c_hi == c_lo {
        return Err(CoreError::InvalidParameter(
            "scan is exactly flat; no dip to fit".into(),
        ));
    }

    let span = t_hi - t_lo;
    let mut best = Candidate {
        sse: f64::INFINITY,
        tau0: 0.5 * (t_lo + t_hi),
        w: span,
        baseline: 0.0,
        depth: 0.0,
    };
    scan_grid(
        delays,
        counts,
        linspace(t_lo, t_hi, 81),
        logspace(span / 50.0, span, 25),
        &mut best,
    );
    if !best.sse.is_finite() {
        return Err(CoreError::Numeric(
            "no usable dip candidate over the scan".into(),
        ));
    }
    let mut dt = span / 80.0;
    let mut wf = 1.25;
    for _ in 0..3 {
        let center = best.tau0;
        let width = best.w;
        scan_grid(
            delays,
            counts,
            linspace(center - dt, center + dt, 21),
            logspace(width / wf, width * wf, 21),
            &mut best,
        );
        dt /= 5.0;
        wf = wf.powf(0.4);
    }

    if !(best.baseline > 0.0) {
        return Err(CoreError::Numeric(
            "dip fit collapsed to a non-positive baseline".into(),
        ));
    }
    let visibility = (best.depth / best.baseline).clamp(0.0, 1.0);
    Ok(HomFit {
        visibility,
        dip_center: best.tau0,
        baseline: best.baseline,
        width: best.w.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dip(delays: &[f64], b: f64, v: f64, tau0: f64, w: f64) -> Vec<f64> {
        delays
            .iter()
            .map(|&t| {
                let z = (t - tau0) / w;
                b * (1.0 - v * (-0.5 * z * z).exp())
            })
            .collect()
    }

    fn scan_delays(n: usize) -> Vec<f64> {
        (0..n).map(|i| -5.0 + 10.0 * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn recovers_a_clean_dip() {
        let delays = scan_delays(41);
        let counts = dip(&delays, 1000.0, 0.8, 0.3, 1.2);
        let fit = hom_scan(&delays, &counts).unwrap();
        assert!((fit.visibility - 0.8).abs() < 1e-3, "v {}", fit.visibility);
        assert!((fit.dip_center - 0.3).abs() < 1e-2);
        assert!((fit.baseline - 1000.0).abs() < 2.0);
        assert!((fit.width - 1.2).abs() < 0.05);
    }

    #[test]
    fn full_bunching_reaches_unit_visibility() {
        let delays = scan_delays(25);
        let counts = dip(&delays, 800.0, 1.0, -0.2, 1.5);
        let fit = hom_scan(&delays, &counts).unwrap();
        assert!(fit.visibility > 0.999);
        assert!(fit.visibility <= 1.0);
    }

    #[test]
    fn partial_distinguishability_matches_the_mode_count() {
        // A source with K = 1.05 effective modes caps the dip at 1/K.
        let v_true = 1.0 / 1.05;
        let delays = scan_delays(31);
        let counts = dip(&delays, 1200.0, v_true, 0.0, 0.9);
        let fit = hom_scan(&delays, &counts).unwrap();
        assert!((fit.visibility - 0.952).abs() < 1e-3, "v {}", fit.visibility);
    }

    #[test]
    fn distinguishable_photons_show_no_dip() {
        // Flat up to small detector jitter: the fit may latch onto a
        // fluctuation but the extracted visibility stays near zero.
        let delays = scan_delays(31);
        let counts: Vec<f64> = delays
            .iter()
            .enumerate()
            .map(|(i, _)| 1000.0 + 3.0 * ((7 * i) as f64).sin())
            .collect();
        let fit = hom_scan(&delays, &counts).unwrap();
        assert!(fit.visibility < 0.05, "v {}", fit.visibility);
    }

    #[test]
    fn rejects_degenerate_scans() {
        let delays = scan_delays(31);
        assert!(hom_scan(&delays, &vec![500.0; 31]).is_err());
        assert!(hom_scan(&delays[..4], &[1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(hom_scan(&delays, &vec![500.0; 30]).is_err());
        assert!(hom_scan(&vec![1.0; 31], &vec![500.0; 31]).is_err());
        let mut counts = vec![500.0; 31];
        counts[3] = f64::NAN;
        assert!(hom_scan(&delays, &counts).is_err());
    }

    #[test]
    fn upward_bumps_clamp_to_zero_visibility() {
        let delays = scan_delays(31);
        let counts: Vec<f64> = dip(&delays, 1000.0, -0.5, 0.0, 1.0);
        let fit = hom_scan(&delays, &counts).unwrap();
        assert_eq!(fit.visibility, 0.0);
    }
}
