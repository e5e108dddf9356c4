//! Acceptance suite. Each test prints one `ACCEPTANCE <n> PASS/FAIL` line
//! with the measured values and the tolerance it was held to, then asserts.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use bosonic_core::certifier::{certify, criterion_counts, pearson_measured, pearson_predicted, PatternHistogram};
use bosonic_core::numerics::{hafnian, permanent, permanent_naive, ComplexMatrix, UnitaryMatrix};
use bosonic_core::rng::{domain, stream_rng};
use bosonic_core::sampler::{
    draw_samples, misassignment_upper_bound, worst_pulse_misassignment, ExperimentConfig,
    HeraldDetectorModel, Regime, SampleRecord, UnitarySpec,
};
use bosonic_core::states::{fock_probability, GaussianState, PhotonPattern, SqueezerSpec};
use bosonic_core::{analysis, C64};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

fn line(criterion: u32, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {} {}: {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
}

fn random_complex(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = C64::new(re, im);
        }
    }
    m
}

fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Criterion matrix certification of a full record set (no time binning).
fn certify_records(records: &[SampleRecord], rounds: u32, seed: u64) -> bosonic_core::certifier::CriterionResult {
    let dim = criterion_counts(&records[0]).counts().len();
    let mut hist = PatternHistogram::new(dim).unwrap();
    for rec in records {
        hist.record(&criterion_counts(rec)).unwrap();
    }
    certify(&hist, rounds, seed).unwrap()
}

fn identity_unitary(modes: usize) -> UnitarySpec {
    UnitarySpec::Explicit(UnitaryMatrix::new(ComplexMatrix::identity(modes)).unwrap())
}

#[test]
fn acceptance_1_permanent_routes_and_hafnian_block_identity() {
    const TOL_PERMANENT: f64 = 1e-10;
    const TOL_BLOCK: f64 = 1e-9;
    const LIMIT: Duration = Duration::from_secs(10);
    let start = Instant::now();
    let mut rng = stream_rng(2026, domain::SYNTHETIC, 1);

    let mut worst_routes = 0.0f64;
    for i in 0..100usize {
        let dim = 1 + i % 6;
        let m = random_complex(dim, &mut rng);
        worst_routes = worst_routes.max(rel_err(
            permanent(&m).unwrap(),
            permanent_naive(&m).unwrap(),
        ));
    }

    let mut worst_block = 0.0f64;
    for i in 0..100usize {
        let n = 1 + i % 5;
        let c = random_complex(n, &mut rng);
        let mut block = ComplexMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                block[(i, n + j)] = c[(i, j)];
                block[(n + j, i)] = c[(i, j)];
            }
        }
        worst_block = worst_block.max(rel_err(hafnian(&block).unwrap(), permanent(&c).unwrap()));
    }

    let elapsed = start.elapsed();
    let pass = worst_routes <= TOL_PERMANENT && worst_block <= TOL_BLOCK && elapsed < LIMIT;
    line(
        1,
        pass,
        &format!(
            "permanent routes rel err {:.2e} (tol {:.0e}), hafnian block identity rel err {:.2e} (tol {:.0e}), {:.2?} (limit {:?})",
            worst_routes, TOL_PERMANENT, worst_block, TOL_BLOCK, elapsed, LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_2_fock_probabilities_match_closed_forms() {
    const TOL: f64 = 1e-9;
    const LIMIT: Duration = Duration::from_secs(30);
    let start = Instant::now();
    let mut worst = 0.0f64;

    // Single-mode squeezed vacuum: only even counts, with the term ratio
    // tanh^2 r (2k-1)/(2k) building P(2k) from P(0) = 1/cosh r.
    for &r in &[0.3f64, 0.5, 0.9] {
        let state = GaussianState::smsv_state(&[SqueezerSpec { r, phase: 0.0 }]).unwrap();
        let lambda2 = r.tanh() * r.tanh();
        let mut even_term = 1.0 / r.cosh();
        let mut k = 0u32;
        for n in 0..=10u32 {
            let expect = if n % 2 == 0 {
                if n > 0 {
                    k += 1;
                    even_term *= lambda2 * (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
                }
                even_term
            } else {
                0.0
            };
            let got = fock_probability(&state, &PhotonPattern::new(vec![n])).unwrap();
            worst = worst.max((got - expect).abs());
        }
    }

    // Two-mode squeezed vacuum: P(n, m) = delta_nm tanh^2n r / cosh^2 r.
    for &r in &[0.3f64, 0.5] {
        let state = GaussianState::tmsv_state(&[SqueezerSpec { r, phase: 0.0 }]).unwrap();
        let lambda2 = r.tanh() * r.tanh();
        for n in 0..=10u32 {
            for m in 0..=(10 - n) {
                let expect = if n == m {
                    lambda2.powi(n as i32) / (r.cosh() * r.cosh())
                } else {
                    0.0
                };
                let got = fock_probability(&state, &PhotonPattern::new(vec![n, m])).unwrap();
                worst = worst.max((got - expect).abs());
            }
        }
    }

    let elapsed = start.elapsed();
    let pass = worst <= TOL && elapsed < LIMIT;
    line(
        2,
        pass,
        &format!(
            "max abs err {:.2e} (tol {:.0e}) over all patterns with total <= 10, {:.2?} (limit {:?})",
            worst, TOL, elapsed, LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_3_pearson_prediction_table_and_sampled_run() {
    const TOL_TABLE: f64 = 2e-3;
    const TABLE_LIMIT: Duration = Duration::from_secs(1);
    const ETA_HERALD: f64 = 0.384;
    const ETA_SIGNAL: f64 = 0.087;
    // (r, gamma) pairs of the heralded-correlation regression table.
    const TABLE: [(f64, f64); 8] = [
        (0.176, 0.1867),
        (0.265, 0.1923),
        (0.403, 0.2054),
        (0.545, 0.2250),
        (0.697, 0.2531),
        (0.843, 0.2873),
        (1.012, 0.3355),
        (1.176, 0.3904),
    ];

    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut gbs_ok = true;
    for &(r, gamma) in &TABLE {
        let predicted = pearson_predicted(r, ETA_HERALD, ETA_SIGNAL, Regime::Sbs).unwrap();
        worst = worst.max((predicted - gamma).abs());
        gbs_ok &= pearson_predicted(r, ETA_HERALD, ETA_SIGNAL, Regime::Gbs).unwrap() == 0.0;
    }
    let table_elapsed = start.elapsed();

    // A four-mode sampled run must agree with its own prediction: the
    // statistic correlates herald and signal totals, which the
    // interferometer preserves.
    let r = 0.697f64;
    let shots = 1_000_000u64;
    let mut cfg = ExperimentConfig::new(
        4,
        vec![SqueezerSpec { r, phase: 0.0 }; 4],
        UnitarySpec::HaarSeed(11),
        Regime::Sbs,
    );
    cfg.eta_signal = vec![ETA_SIGNAL; 4];
    cfg.eta_herald = vec![ETA_HERALD; 4];
    cfg.pnr_cutoff = 30;
    cfg.phase_drift_rms = 0.0;
    cfg.schedule.block_shots = 125_000;
    cfg.seed = 23;
    let run = draw_samples(&cfg, shots).unwrap();
    let measured = pearson_measured(&run.records).unwrap();
    assert!(!measured.degenerate);
    let predicted = pearson_predicted(r, ETA_HERALD, ETA_SIGNAL, Regime::Sbs).unwrap();

    // Bootstrap spread of the measured coefficient over shot resamples.
    let pairs: Vec<(f64, f64)> = run
        .records
        .iter()
        .map(|rec| (rec.herald_total() as f64, rec.signal_total() as f64))
        .collect();
    let n = pairs.len();
    let gammas: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|round| {
            let mut rng = stream_rng(2390, domain::SYNTHETIC, round);
            let (mut sh, mut ss, mut shh, mut sss, mut shs) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for _ in 0..n {
                let (h, s) = pairs[rng.random_range(0..n)];
                sh += h;
                ss += s;
                shh += h * h;
                sss += s * s;
                shs += h * s;
            }
            let nf = n as f64;
            (nf * shs - sh * ss) / ((nf * shh - sh * sh) * (nf * sss - ss * ss)).sqrt()
        })
        .collect();
    let mean_g = gammas.iter().sum::<f64>() / gammas.len() as f64;
    let sigma = (gammas.iter().map(|g| (g - mean_g).powi(2)).sum::<f64>()
        / (gammas.len() - 1) as f64)
        .sqrt();
    let sampled_dev = (measured.gamma - predicted).abs();

    let pass = worst <= TOL_TABLE && gbs_ok && table_elapsed < TABLE_LIMIT && sampled_dev <= 5.0 * sigma;
    line(
        3,
        pass,
        &format!(
            "table err {:.2e} (tol {:.0e}) in {:.2?}, no-herald regime exactly 0: {}, sampled gamma {:.4} vs predicted {:.4} ({:.1} bootstrap sigma, limit 5)",
            worst, TOL_TABLE, table_elapsed, gbs_ok, measured.gamma, predicted, sampled_dev / sigma
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_4_dispersion_visibility_anchor() {
    const TOL: f64 = 1e-3;
    let v = analysis::dispersion_visibility(1.0e-12, -26.0e-27, 18.0).unwrap();
    let pass = (v - 0.974).abs() <= TOL;
    line(
        4,
        pass,
        &format!("visibility {:.5} vs 0.974 (tol {:.0e}) at 1 ps, -26 fs^2/mm, 18 m", v, TOL),
    );
    assert!(pass);
}

#[test]
fn acceptance_5_blinding_misassignment_anchors() {
    const LIMIT: Duration = Duration::from_secs(5);
    let start = Instant::now();
    let model = HeraldDetectorModel {
        detectors: 16,
        pulses_per_train: 8,
        efficiency: 0.4,
        blinding_enabled: true,
    };
    // The quoted maxima are the photon-carrying-fraction ceiling
    // mean/(1 + mean); the detailed per-pulse model must stay below it.
    let faint = misassignment_upper_bound(0.04);
    let bright = misassignment_upper_bound(2.3);
    let (worst_faint, _) = worst_pulse_misassignment(&model, 0.04).unwrap();
    let (worst_bright, _) = worst_pulse_misassignment(&model, 2.3).unwrap();
    let elapsed = start.elapsed();

    let pass = (faint - 0.038).abs() <= 1e-3
        && (bright - 0.697).abs() <= 2e-3
        && worst_faint <= faint
        && worst_bright <= bright
        && elapsed < LIMIT;
    line(
        5,
        pass,
        &format!(
            "ceiling {:.4} vs 0.038 (tol 1e-3) and {:.4} vs 0.697 (tol 2e-3); per-pulse worst {:.4}/{:.4} below ceiling; {:.2?} (limit {:?})",
            faint, bright, worst_faint, worst_bright, elapsed, LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_6_criterion_analytic_anchors() {
    const LIMIT: Duration = Duration::from_secs(120);
    let start = Instant::now();

    // Lossless photon-number-correlated pairs: min eigenvalue -<n>.
    let mut pair_ok = true;
    let mut pair_detail = String::new();
    for (i, &mean) in [0.1f64, 0.5, 1.0].iter().enumerate() {
        let r = SqueezerSpec::r_for_mean_photons(mean).unwrap();
        let mut cfg = ExperimentConfig::new(
            1,
            vec![SqueezerSpec { r, phase: 0.0 }],
            identity_unitary(1),
            Regime::Sbs,
        );
        cfg.pnr_cutoff = 30;
        cfg.phase_drift_rms = 0.0;
        cfg.schedule.block_shots = 250_000;
        cfg.seed = 600 + i as u64;
        let run = draw_samples(&cfg, 1_000_000).unwrap();
        let res = certify_records(&run.records, 200, 600 + i as u64);
        let dev = (res.min_eigenvalue + mean).abs();
        pair_ok &= dev <= 3.0 * res.uncertainty;
        pair_detail.push_str(&format!(
            "<n>={}: {:.4}+-{:.4}; ",
            mean, res.min_eigenvalue, res.uncertainty
        ));
    }

    // Classical synthetic data: geometric (thermal) and Poisson
    // (coherent) counts must sit above -3 sigma in >= 99% of runs.
    let runs_per_family = 100u64;
    let shots = 20_000u64;
    let clean: u64 = (0..2 * runs_per_family)
        .into_par_iter()
        .map(|run_idx| {
            let mut rng = stream_rng(61, domain::SYNTHETIC, run_idx);
            let mut hist = PatternHistogram::new(2).unwrap();
            let poisson = Poisson::new(0.4f64).unwrap();
            for _ in 0..shots {
                let counts: Vec<u32> = if run_idx < runs_per_family {
                    // thermal, mean 0.3
                    let q = 0.3 / 1.3;
                    (0..2)
                        .map(|_| {
                            let mut n = 0u32;
                            while rng.random::<f64>() < q {
                                n += 1;
                            }
                            n
                        })
                        .collect()
                } else {
                    (0..2).map(|_| poisson.sample(&mut rng) as u32).collect()
                };
                hist.record(&PhotonPattern::new(counts)).unwrap();
            }
            let res = certify(&hist, 100, run_idx).unwrap();
            u64::from(res.min_eigenvalue >= -3.0 * res.uncertainty)
        })
        .sum();

    let elapsed = start.elapsed();
    let required = (2 * runs_per_family) * 99 / 100;
    let pass = pair_ok && clean >= required && elapsed < LIMIT;
    line(
        6,
        pass,
        &format!(
            "correlated pairs at -<n> within 3 sigma [{}]; classical runs clean {}/{} (need >= {}); {:.2?} (limit {:?})",
            pair_detail.trim_end_matches("; "),
            clean,
            2 * runs_per_family,
            required,
            elapsed,
            LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_7_regime_sweep_eigenvalue_trends() {
    const LIMIT: Duration = Duration::from_secs(600);
    const RS: [f64; 4] = [0.176, 0.403, 0.697, 1.0];
    let start = Instant::now();

    // Seed picked so the brightness where the lossless envelope turns
    // upward lands inside the r sweep; the turning point is set by the
    // interferometer through the pair-correlation matrix it produces.
    let base = |r: f64, regime: Regime| {
        let mut cfg = ExperimentConfig::new(
            4,
            vec![SqueezerSpec { r, phase: 0.0 }; 4],
            UnitarySpec::HaarSeed(22),
            regime,
        );
        cfg.phase_drift_rms = 0.0;
        cfg.schedule.block_shots = 75_000;
        cfg
    };

    // (a) Heralded sampling with the measured channel losses: more
    // squeezing digs the minimum eigenvalue strictly deeper.
    let sbs: Vec<f64> = RS
        .par_iter()
        .enumerate()
        .map(|(k, &r)| {
            let mut cfg = base(r, Regime::Sbs);
            cfg.eta_signal = vec![0.087; 4];
            cfg.eta_herald = vec![0.384; 4];
            cfg.seed = 1900 + k as u64;
            let run = draw_samples(&cfg, 300_000).unwrap();
            certify_records(&run.records, 200, 1900 + k as u64).min_eigenvalue
        })
        .collect();
    let sbs_ok = sbs.windows(2).all(|w| w[1] < w[0]);

    // (b) Same sources with the herald arm discarded are thermal:
    // non-negative within noise and growing with the per-mode mean.
    let tbs: Vec<(f64, f64)> = RS
        .par_iter()
        .enumerate()
        .map(|(k, &r)| {
            let mut cfg = base(r, Regime::Tbs);
            cfg.eta_signal = vec![0.087; 4];
            cfg.eta_herald = vec![0.384; 4];
            cfg.seed = 2900 + k as u64;
            let run = draw_samples(&cfg, 300_000).unwrap();
            let res = certify_records(&run.records, 200, 2900 + k as u64);
            (res.min_eigenvalue, res.uncertainty)
        })
        .collect();
    let tbs_ok = tbs.iter().all(|&(e, s)| e >= -3.0 * s)
        && tbs.windows(2).all(|w| w[1].0 > w[0].0);

    // (c) Lossless squeezed-light sampling: the lowest envelope over
    // fixed phase sets stops falling once the sources get bright.
    let mut phase_sets = Vec::new();
    for set in 0..10u64 {
        let mut rng = stream_rng(313, domain::SYNTHETIC, set);
        let phases: Vec<f64> = (0..4)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        phase_sets.push(phases);
    }
    let jobs: Vec<(usize, usize)> = (0..RS.len())
        .flat_map(|k| (0..phase_sets.len()).map(move |s| (k, s)))
        .collect();
    // Counts are recorded without detector truncation here (the
    // reversal is intrinsic to bright squeezed light, and saturating
    // detectors would fake sub-Poissonian statistics instead).
    let eigs: Vec<((usize, usize), f64, f64)> = jobs
        .par_iter()
        .map(|&(k, s)| {
            let mut cfg = base(RS[k], Regime::Gbs);
            cfg.squeezers = phase_sets[s]
                .iter()
                .map(|&phase| SqueezerSpec { r: RS[k], phase })
                .collect();
            cfg.fock_cutoff = 15;
            cfg.pnr_cutoff = 15;
            cfg.schedule.block_shots = 200_000;
            cfg.seed = 3900 + (k * 10 + s) as u64;
            let run = draw_samples(&cfg, 200_000).unwrap();
            let eig = certify_records(&run.records, 100, cfg.seed).min_eigenvalue;
            ((k, s), eig, run.summary.max_overflow_mass)
        })
        .collect();
    let mut envelope = vec![f64::INFINITY; RS.len()];
    let mut worst_overflow = 0.0f64;
    for ((k, _), e, overflow) in eigs {
        envelope[k] = envelope[k].min(e);
        worst_overflow = worst_overflow.max(overflow);
    }
    let gbs_ok = envelope[1] < envelope[0] && envelope.windows(2).any(|w| w[1] >= w[0]);

    let elapsed = start.elapsed();
    let pass = sbs_ok && tbs_ok && gbs_ok && elapsed < LIMIT;
    line(
        7,
        pass,
        &format!(
            "heralded strictly deeper {:?} ({}), thermal non-negative and rising {:?} ({}), lossless envelope non-monotonic {:?} ({}, overflow <= {:.2e}); {:.2?} (limit {:?})",
            sbs.iter().map(|e| (e * 1e3).round() / 1e3).collect::<Vec<_>>(),
            sbs_ok,
            tbs.iter().map(|(e, _)| (e * 1e4).round() / 1e4).collect::<Vec<_>>(),
            tbs_ok,
            envelope.iter().map(|e| (e * 1e3).round() / 1e3).collect::<Vec<_>>(),
            gbs_ok,
            worst_overflow,
            elapsed,
            LIMIT
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_8_simulate_is_thread_count_invariant() {
    let exe = env!("CARGO_BIN_EXE_bosonic");
    let config = r#"
modes = 3
eta_signal = [0.8, 0.7, 0.9]
eta_herald = [0.5, 0.5, 0.5]
pnr_cutoff = 3

[[squeezers]]
r = 0.5

[[squeezers]]
r = 0.4
phi = 0.7

[[squeezers]]
r = 0.45

[unitary]
haar_seed = 9

[schedule]
block_shots = 4000
pattern = ["GBS", "SBS", "TBS"]

[herald_detector]
detectors = 16
pulses_per_train = 8
efficiency = 0.4
blinding_enabled = true
"#;

    let run = |threads: &str| {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("config.toml"), config).unwrap();
        let out = std::process::Command::new(exe)
            .current_dir(dir.path())
            .args([
                "simulate",
                "config.toml",
                "--shots",
                "24000",
                "--seed",
                "5",
                "--threads",
                threads,
                "--out",
                "samples.jsonl",
            ])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "simulate failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let samples = std::fs::read(dir.path().join("samples.jsonl")).unwrap();
        let manifest = std::fs::read(dir.path().join("samples.manifest.json")).unwrap();
        (samples, manifest)
    };

    let (samples_1, manifest_1) = run("1");
    let (samples_8, manifest_8) = run("8");
    let pass = samples_1 == samples_8 && manifest_1 == manifest_8;
    line(
        8,
        pass,
        &format!(
            "1-thread and 8-thread runs byte-identical: samples {} ({} bytes), manifest {}",
            samples_1 == samples_8,
            samples_1.len(),
            manifest_1 == manifest_8
        ),
    );
    assert!(pass);
}

#[test]
fn acceptance_9_squeezing_reconstruction_round_trip() {
    let r_true = 0.697f64;
    let eta = 0.087f64;
    let n_gen_ref = 0.569f64;
    let shots = 400_000u64;
    let modes = 2usize;

    let mut cfg = ExperimentConfig::new(
        modes,
        vec![SqueezerSpec { r: r_true, phase: 0.0 }; modes],
        identity_unitary(modes),
        Regime::Gbs,
    );
    cfg.eta_signal = vec![eta; modes];
    cfg.fock_cutoff = 10;
    cfg.pnr_cutoff = 10;
    cfg.phase_drift_rms = 0.0;
    cfg.schedule.block_shots = 100_000;
    cfg.seed = 77;
    let run = draw_samples(&cfg, shots).unwrap();

    let mut sums = vec![0.0f64; modes];
    let mut sq_sums = vec![0.0f64; modes];
    for rec in &run.records {
        for (j, &n) in rec.signal.counts().iter().enumerate() {
            sums[j] += n as f64;
            sq_sums[j] += (n as f64) * (n as f64);
        }
    }
    let nf = run.records.len() as f64;
    let means: Vec<f64> = sums.iter().map(|s| s / nf).collect();
    let est = analysis::reconstruct_squeezing(&means, &vec![eta; modes]).unwrap();

    // Delta-method spread of the averaged estimates from per-mode count
    // variance: dr/dmean = 1 / (2 eta sqrt(x (1 + x))), x = mean / eta.
    let mut var_r = 0.0f64;
    let mut var_gen = 0.0f64;
    for j in 0..modes {
        let var_count = (sq_sums[j] / nf - means[j] * means[j]) / nf;
        let x = means[j] / eta;
        let dr_dmean = 1.0 / (2.0 * eta * (x * (1.0 + x)).sqrt());
        var_r += var_count * dr_dmean * dr_dmean;
        var_gen += var_count / (eta * eta);
    }
    let sigma_r = var_r.sqrt() / modes as f64;
    let sigma_gen = var_gen.sqrt() / modes as f64;

    let dev_r = (est.r - r_true).abs();
    let dev_gen = (est.mean_photons_generated - n_gen_ref).abs();
    let pass = dev_r <= 3.0 * sigma_r && dev_gen <= 3.0 * sigma_gen;
    line(
        9,
        pass,
        &format!(
            "r {:.4} vs {} ({:.1} sigma, sigma {:.1e}); <n> {:.4} vs {} ({:.1} sigma, sigma {:.1e})",
            est.r,
            r_true,
            dev_r / sigma_r,
            sigma_r,
            est.mean_photons_generated,
            n_gen_ref,
            dev_gen / sigma_gen,
            sigma_gen
        ),
    );
    assert!(pass);
}
