//! Built-in self-check suites. Every check computes the same quantity by
//! two independent routes (or against a closed form) and compares; any
//! disagreement exits 4 so scripted pipelines can gate on it.

use crate::error::{CliError, CliResult};
use crate::Cli;
use bosonic_core::certifier::{criterion_matrix, full_moment_matrix, MomentAccumulator};
use bosonic_core::numerics::{
    eigen_symmetric, hafnian, hafnian_matching_enumeration, hafnian_power_trace, permanent,
    permanent_naive, ComplexMatrix,
};
use bosonic_core::rng::{domain, stream_rng};
use bosonic_core::sampler::{
    blinding_distribution, herald_assignment_matrix, misassignment_upper_bound,
    worst_pulse_misassignment, HeraldDetectorModel,
};
use bosonic_core::states::{fock_probability, GaussianState, PhotonPattern, SqueezerSpec};
use bosonic_core::C64;
use rand::Rng;
use rand_distr::StandardNormal;

struct Check {
    name: &'static str,
    /// Worst deviation observed across the check's cases.
    err: f64,
    tol: f64,
    detail: String,
}

impl Check {
    fn passed(&self) -> bool {
        self.err <= self.tol
    }
}

fn report(checks: &[Check]) -> usize {
    let mut failures = 0;
    for c in checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failures += 1;
        }
        println!(
            "[{}] {}: max err {:.3e} (tol {:.1e}){}",
            tag,
            c.name,
            c.err,
            c.tol,
            if c.detail.is_empty() {
                String::new()
            } else {
                format!(" [{}]", c.detail)
            }
        );
    }
    failures
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn random_complex(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = C64::new(normal(rng), normal(rng));
        }
    }
    m
}

fn random_symmetric(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = C64::new(normal(rng), normal(rng));
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Relative disagreement, floored at absolute scale 1 so near-zero
/// reference values do not blow the ratio up.
fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn permanent_suite(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = stream_rng(seed, domain::SYNTHETIC, 100);
    let mut checks = Vec::new();

    // Per([[a, b], [c, d]]) = ad + bc by hand.
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m = random_complex(2, &mut rng);
        let closed = m[(0, 0)] * m[(1, 1)] + m[(0, 1)] * m[(1, 0)];
        worst = worst.max(rel_err(permanent(&m)?, closed));
    }
    checks.push(Check {
        name: "permanent: 2x2 closed form vs Gray-code route",
        err: worst,
        tol: 1e-12,
        detail: "10 random complex matrices".into(),
    });

    let mut worst = 0.0f64;
    let mut cases = 0;
    for dim in 1..=6 {
        for _ in 0..5 {
            let m = random_complex(dim, &mut rng);
            worst = worst.max(rel_err(permanent(&m)?, permanent_naive(&m)?));
            cases += 1;
        }
    }
    checks.push(Check {
        name: "permanent: Gray-code route vs expansion over index maps",
        err: worst,
        tol: 1e-10,
        detail: format!("{} matrices, dims 1..=6", cases),
    });
    Ok(checks)
}

fn hafnian_suite(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = stream_rng(seed, domain::SYNTHETIC, 101);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut cases = 0;
    for &dim in &[2usize, 4, 6, 8, 10] {
        for _ in 0..3 {
            let m = random_symmetric(dim, &mut rng);
            worst = worst.max(rel_err(
                hafnian_matching_enumeration(&m)?,
                hafnian_power_trace(&m)?,
            ));
            cases += 1;
        }
    }
    checks.push(Check {
        name: "hafnian: matching enumeration vs power-trace route",
        err: worst,
        tol: 1e-9,
        detail: format!("{} symmetric matrices, dims 2..=10", cases),
    });

    // Haf([[0, C], [C^T, 0]]) = Per(C) ties the two functions together.
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=5usize {
        for _ in 0..4 {
            let c = random_complex(n, &mut rng);
            let mut block = ComplexMatrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    block[(i, n + j)] = c[(i, j)];
                    block[(n + j, i)] = c[(i, j)];
                }
            }
            worst = worst.max(rel_err(hafnian(&block)?, permanent(&c)?));
            cases += 1;
        }
    }
    checks.push(Check {
        name: "hafnian: bipartite block equals the permanent",
        err: worst,
        tol: 1e-9,
        detail: format!("{} blocks, n = 1..=5", cases),
    });
    Ok(checks)
}

fn fock_suite(_seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();

    // Single-mode squeezed vacuum populates only even numbers:
    // P(2k) = (1/cosh r) (2k)! / (2^k k!)^2 tanh^{2k} r, built up by the
    // term ratio lambda^2 (2k-1) / (2k).
    let mut worst = 0.0f64;
    for &r in &[0.3f64, 0.5] {
        let state = GaussianState::smsv_state(&[SqueezerSpec { r, phase: 0.0 }])?;
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
            let got = fock_probability(&state, &PhotonPattern::new(vec![n]))?;
            worst = worst.max((got - expect).abs());
        }
    }
    checks.push(Check {
        name: "fock: squeezed vacuum vs even-number closed form",
        err: worst,
        tol: 1e-9,
        detail: "r in {0.3, 0.5}, n <= 10".into(),
    });

    // Two-mode squeezing is diagonal: P(n, m) = delta_nm lambda^2n / cosh^2 r.
    let mut worst = 0.0f64;
    let r = 0.4f64;
    let state = GaussianState::tmsv_state(&[SqueezerSpec { r, phase: 0.0 }])?;
    let lambda2 = r.tanh() * r.tanh();
    for n in 0..=5u32 {
        for m in 0..=5u32 {
            let expect = if n == m {
                lambda2.powi(n as i32) / (r.cosh() * r.cosh())
            } else {
                0.0
            };
            let got = fock_probability(&state, &PhotonPattern::new(vec![n, m]))?;
            worst = worst.max((got - expect).abs());
        }
    }
    checks.push(Check {
        name: "fock: two-mode squeezed diagonal law",
        err: worst,
        tol: 1e-9,
        detail: "r = 0.4, n, m <= 5".into(),
    });

    let mut worst = 0.0f64;
    let mu = 0.7f64;
    let state = GaussianState::thermal_state(&[mu])?;
    for n in 0..=8u32 {
        let expect = mu.powi(n as i32) / (1.0 + mu).powi(n as i32 + 1);
        let got = fock_probability(&state, &PhotonPattern::new(vec![n]))?;
        worst = worst.max((got - expect).abs());
    }
    checks.push(Check {
        name: "fock: thermal geometric law",
        err: worst,
        tol: 1e-9,
        detail: "mean 0.7, n <= 8".into(),
    });
    Ok(checks)
}

fn blinding_suite(_seed: u64) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();

    // Enumerate every one of the d^n ways n photons can land on d
    // detectors and count distinct detectors hit; compare to the
    // Stirling-number expression.
    let mut worst = 0.0f64;
    for &d in &[2u32, 4] {
        for n in 1..=6u32 {
            let total = (d as u64).pow(n);
            let mut pmf = vec![0.0f64; d as usize + 1];
            for code in 0..total {
                let mut rem = code;
                let mut hit = 0u32;
                for _ in 0..n {
                    hit |= 1 << (rem % d as u64);
                    rem /= d as u64;
                }
                pmf[hit.count_ones() as usize] += 1.0 / total as f64;
            }
            let dist = blinding_distribution(n, d)?;
            for (k, &p) in pmf.iter().enumerate() {
                let got = dist.get(k).copied().unwrap_or(0.0);
                worst = worst.max((got - p).abs());
            }
        }
    }
    checks.push(Check {
        name: "blinding: click counts vs brute-force assignment enumeration",
        err: worst,
        tol: 1e-12,
        detail: "d in {2, 4}, n <= 6".into(),
    });

    let mut worst = 0.0f64;
    for n in 0..=10u32 {
        let sum: f64 = blinding_distribution(n, 16)?.iter().sum();
        worst = worst.max((sum - 1.0).abs());
    }
    checks.push(Check {
        name: "blinding: click distribution normalization",
        err: worst,
        tol: 1e-12,
        detail: "d = 16, n <= 10".into(),
    });

    // On the first pulse of a train nothing is blinded yet, so one photon
    // is registered with exactly the detector efficiency.
    let model = HeraldDetectorModel {
        detectors: 16,
        pulses_per_train: 8,
        efficiency: 0.4,
        blinding_enabled: true,
    };
    let assignment = herald_assignment_matrix(&model, 0.04, 0)?;
    checks.push(Check {
        name: "blinding: fresh-train single photon registers with efficiency",
        err: (assignment.prob(1, 1) - model.efficiency).abs(),
        tol: 1e-9,
        detail: format!("P(1|1) = {:.6}", assignment.prob(1, 1)),
    });

    // Vacuum pulses always assign correctly, so the photon-carrying
    // fraction mean/(1 + mean) caps the error of any pulse.
    checks.push(Check {
        name: "blinding: misassignment ceiling, faint pumping",
        err: (misassignment_upper_bound(0.04) - 0.038).abs(),
        tol: 1e-3,
        detail: format!("bound {:.6} at mean 0.04", misassignment_upper_bound(0.04)),
    });
    checks.push(Check {
        name: "blinding: misassignment ceiling, bright pumping",
        err: (misassignment_upper_bound(2.3) - 0.697).abs(),
        tol: 2e-3,
        detail: format!("bound {:.6} at mean 2.3", misassignment_upper_bound(2.3)),
    });

    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &mu in &[0.04f64, 0.5, 2.3] {
        let (p, pulse) = worst_pulse_misassignment(&model, mu)?;
        let bound = misassignment_upper_bound(mu);
        // Positive excess means the detailed model leaks past the ceiling.
        worst = worst.max(p - bound);
        detail = format!("{}mean {}: {:.4} <= {:.4} (pulse {}); ", detail, mu, p, bound, pulse);
    }
    checks.push(Check {
        name: "blinding: per-pulse model stays under the ceiling",
        err: worst.max(0.0),
        tol: 1e-12,
        detail: detail.trim_end_matches("; ").to_string(),
    });
    Ok(checks)
}

fn criterion_suite(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = stream_rng(seed, domain::SYNTHETIC, 102);
    let mut checks = Vec::new();

    // Replay the exact joint law of two independent thermal modes with
    // integer weights at scale 2^48; quantization then sits near 1e-9,
    // far below the mu^2 signal.
    let scale = (1u64 << 48) as f64;
    let mu = 0.3f64;
    let q = mu / (1.0 + mu);
    let mut acc = MomentAccumulator::new(2).map_err(CliError::from)?;
    for n in 0..=40u32 {
        for m in 0..=40u32 {
            let p = (1.0 - q) * q.powi(n as i32) * (1.0 - q) * q.powi(m as i32);
            let w = (p * scale).round() as u64;
            if w > 0 {
                acc.accumulate_weighted(&PhotonPattern::new(vec![n, m]), w)
                    .map_err(CliError::from)?;
            }
        }
    }
    let cb = criterion_matrix(&acc).map_err(CliError::from)?;
    let mut worst = 0.0f64;
    for j in 0..2 {
        for k in 0..2 {
            let expect = if j == k { mu * mu } else { 0.0 };
            worst = worst.max((cb.get(j, k) - expect).abs());
        }
    }
    checks.push(Check {
        name: "criterion: independent thermal modes give diag(mean^2)",
        err: worst,
        tol: 1e-7,
        detail: format!("mean {}", mu),
    });

    // Perfectly correlated pair: matrix [[mu^2, mu(1+mu)], [.., mu^2]],
    // minimum eigenvalue exactly -mu.
    let mu = 0.5f64;
    let q = mu / (1.0 + mu);
    let mut acc = MomentAccumulator::new(2).map_err(CliError::from)?;
    for n in 0..=120u32 {
        let p = (1.0 - q) * q.powi(n as i32);
        let w = (p * scale).round() as u64;
        if w > 0 {
            acc.accumulate_weighted(&PhotonPattern::new(vec![n, n]), w)
                .map_err(CliError::from)?;
        }
    }
    let cb = criterion_matrix(&acc).map_err(CliError::from)?;
    let expect = [[mu * mu, mu * (1.0 + mu)], [mu * (1.0 + mu), mu * mu]];
    let mut worst = 0.0f64;
    for j in 0..2 {
        for k in 0..2 {
            worst = worst.max((cb.get(j, k) - expect[j][k]).abs());
        }
    }
    let (eigs, _) = eigen_symmetric(&cb).map_err(CliError::from)?;
    worst = worst.max((eigs[0] + mu).abs());
    checks.push(Check {
        name: "criterion: photon-number-correlated pair reaches -mean",
        err: worst,
        tol: 1e-7,
        detail: format!("mean {}, min eig {:.9}", mu, eigs[0]),
    });

    // The criterion block and the bordered moment matrix must agree on
    // how many negative directions exist (congruence preserves signs).
    let mut mismatches = 0u32;
    for trial in 0..10u64 {
        let modes = 2 + (trial % 3) as usize;
        let mut acc = MomentAccumulator::new(modes).map_err(CliError::from)?;
        for _ in 0..300 {
            let counts: Vec<u32> = (0..modes).map(|_| rng.random_range(0..5)).collect();
            acc.accumulate(&PhotonPattern::new(counts))
                .map_err(CliError::from)?;
        }
        let cb = criterion_matrix(&acc).map_err(CliError::from)?;
        let mom = full_moment_matrix(&acc).map_err(CliError::from)?;
        let (cb_eigs, _) = eigen_symmetric(&cb).map_err(CliError::from)?;
        let (mom_eigs, _) = eigen_symmetric(&mom).map_err(CliError::from)?;
        let tol_cb = 1e-10 * cb.norm_max().max(1.0);
        let tol_mom = 1e-10 * mom.norm_max().max(1.0);
        let neg_cb = cb_eigs.iter().filter(|&&e| e < -tol_cb).count();
        let neg_mom = mom_eigs.iter().filter(|&&e| e < -tol_mom).count();
        if neg_cb != neg_mom {
            mismatches += 1;
        }
    }
    checks.push(Check {
        name: "criterion: negative count matches bordered moment matrix",
        err: mismatches as f64,
        tol: 0.0,
        detail: "10 random accumulators, 2 to 4 modes".into(),
    });

    // Relabeling modes permutes the matrix; the spectrum cannot move.
    let perm = [2usize, 0, 1];
    let mut acc = MomentAccumulator::new(3).map_err(CliError::from)?;
    let mut acc_perm = MomentAccumulator::new(3).map_err(CliError::from)?;
    for _ in 0..400 {
        let counts: Vec<u32> = (0..3).map(|_| rng.random_range(0..5)).collect();
        let permuted: Vec<u32> = perm.iter().map(|&i| counts[i]).collect();
        acc.accumulate(&PhotonPattern::new(counts))
            .map_err(CliError::from)?;
        acc_perm
            .accumulate(&PhotonPattern::new(permuted))
            .map_err(CliError::from)?;
    }
    let (e1, _) = eigen_symmetric(&criterion_matrix(&acc).map_err(CliError::from)?)
        .map_err(CliError::from)?;
    let (e2, _) = eigen_symmetric(&criterion_matrix(&acc_perm).map_err(CliError::from)?)
        .map_err(CliError::from)?;
    let worst = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    checks.push(Check {
        name: "criterion: spectrum invariant under mode relabeling",
        err: worst,
        tol: 1e-12,
        detail: "400 shots, 3 modes".into(),
    });
    Ok(checks)
}

pub fn run(cli: &Cli, suite: &str) -> CliResult<()> {
    let seed = cli.seed;
    let suites: Vec<(&str, fn(u64) -> CliResult<Vec<Check>>)> = vec![
        ("permanent", permanent_suite),
        ("hafnian", hafnian_suite),
        ("fock", fock_suite),
        ("blinding", blinding_suite),
        ("criterion", criterion_suite),
    ];
    let selected: Vec<_> = if suite == "all" {
        suites
    } else {
        let hit: Vec<_> = suites.into_iter().filter(|(n, _)| *n == suite).collect();
        if hit.is_empty() {
            return Err(CliError::Usage(format!(
                "unknown oracle suite '{}'; expected permanent, hafnian, fock, blinding, criterion, or all",
                suite
            )));
        }
        hit
    };

    let mut failures = 0;
    let mut total = 0;
    for (name, f) in selected {
        println!("suite {}:", name);
        let checks = f(seed)?;
        total += checks.len();
        failures += report(&checks);
    }
    println!("{} checks, {} failed", total, failures);
    if failures > 0 {
        Err(CliError::Numeric(format!(
            "{} oracle check(s) failed",
            failures
        )))
    } else {
        Ok(())
    }
}
