//! Shot generation: block scheduling, slow phase drift, and per-regime
//! sampling strategies.
//!
//! GBS blocks enumerate the output distribution once (per block, since the
//! drifted phases change it) and draw outcomes from an alias table, with
//! the beyond-cutoff mass mapped to a saturated overflow pattern.
//!
//! SBS/TBS blocks sample exactly, with no cutoff: each squeezed pair emits
//! a geometric photon number, the herald arm is thinned (or passed through
//! the blinded detector bank), and the signal photons propagate through the
//! interferometer via exact conditional distributions. This produces the
//! same joint law as enumerating the Gaussian state (verified in tests)
//! while keeping bright sources free of truncation bias.

use crate::error::{CoreError, Result};
use crate::rng::{domain, stream_rng};
use crate::sampler::{
    apply_pnr_truncation, herald_assignment_train, AliasTable, AssignmentMatrix,
    ConditionalDistribution, ExperimentConfig, FockInterferometer, HeraldDetectorModel, Regime,
    SampleRecord,
};
use crate::states::{GaussianState, NumberKernel, PhotonPattern, SqueezerSpec};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// One scheduled block of consecutive shots.
#[derive(Debug, Clone)]
pub struct BlockPlan {
    pub index: u64,
    pub regime: Regime,
    pub start_shot: u64,
    pub shots: u64,
    /// Accumulated phase-drift offsets (radians) per mode for this block.
    pub phases: Vec<f64>,
}

/// Per-block bookkeeping for the run manifest.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BlockSummary {
    pub index: u64,
    pub regime: Regime,
    pub start_shot: u64,
    pub end_shot: u64,
    pub emitted: u64,
}

/// Aggregate statistics of one sampling run.
#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub shots_requested: u64,
    pub shots_emitted: u64,
    pub shots_discarded: u64,
    /// GBS draws that fell outside the enumeration cutoff.
    pub overflow_hits: u64,
    /// Largest per-block probability mass beyond the cutoff.
    pub max_overflow_mass: f64,
    pub blocks: Vec<BlockSummary>,
}

/// Result of a sampling run: records in (block, shot) order plus summary.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub records: Vec<SampleRecord>,
    pub summary: RunSummary,
}

/// Lay out blocks covering `n_shots` and precompute the phase walk.
///
/// Drift accumulates block to block (one increment per block boundary,
/// independent per mode unless `shared_phase_drift`), so block b's phases
/// do not depend on which regimes ran before it, only on elapsed blocks.
pub fn plan_blocks(cfg: &ExperimentConfig, n_shots: u64) -> Result<Vec<BlockPlan>> {
    cfg.validate()?;
    if n_shots < 1 {
        return Err(CoreError::InvalidParameter(
            "shot count must be at least 1".into(),
        ));
    }
    let per_block = cfg.schedule.block_shots;
    let n_blocks = n_shots.div_ceil(per_block);
    let mut plans = Vec::with_capacity(n_blocks as usize);
    let mut phases = vec![0.0f64; cfg.modes];
    for b in 0..n_blocks {
        if b > 0 && cfg.phase_drift_rms > 0.0 {
            let mut rng = stream_rng(cfg.seed, domain::PHASE_WALK, b);
            if cfg.shared_phase_drift {
                let step: f64 = rng.sample::<f64, _>(StandardNormal) * cfg.phase_drift_rms;
                for p in phases.iter_mut() {
                    *p += step;
                }
            } else {
                for p in phases.iter_mut() {
                    *p += rng.sample::<f64, _>(StandardNormal) * cfg.phase_drift_rms;
                }
            }
        }
        let start = b * per_block;
        plans.push(BlockPlan {
            index: b,
            regime: cfg.schedule.pattern[(b % cfg.schedule.pattern.len() as u64) as usize],
            start_shot: start,
            shots: per_block.min(n_shots - start),
            phases: phases.clone(),
        });
    }
    Ok(plans)
}

/// Construct the Gaussian state arriving at the detectors for one regime.
///
/// `phases` are additive offsets on each squeezer phase; they model pump
/// drift and only matter for GBS (squeezed-quadrature orientation), so the
/// SBS/TBS paths ignore them.
pub fn build_output_state(
    cfg: &ExperimentConfig,
    regime: Regime,
    phases: &[f64],
) -> Result<GaussianState<f64>> {
    cfg.validate()?;
    if phases.len() != cfg.modes {
        return Err(CoreError::Dimension(format!(
            "{} phase offsets for {} modes",
            phases.len(),
            cfg.modes
        )));
    }
    let u = cfg.unitary.resolve(cfg.modes)?;
    let m = cfg.modes;
    match regime {
        Regime::Gbs => {
            let specs: Vec<SqueezerSpec<f64>> = cfg
                .squeezers
                .iter()
                .zip(phases)
                .map(|(s, &dp)| SqueezerSpec::new(s.r, s.phase + dp))
                .collect::<Result<_>>()?;
            let mut st = GaussianState::smsv_state(&specs)?;
            let all: Vec<usize> = (0..m).collect();
            st.apply_unitary(&u, &all)?;
            st.apply_loss(&cfg.eta_signal)?;
            Ok(st)
        }
        Regime::Sbs | Regime::Tbs => {
            let mut st = GaussianState::tmsv_state(&cfg.squeezers)?;
            // Pairs are laid out (signal, herald) adjacent; regroup to all
            // signals first, then all heralds.
            let perm: Vec<usize> = (0..m).map(|i| 2 * i).chain((0..m).map(|i| 2 * i + 1)).collect();
            st.permute_modes(&perm)?;
            let signals: Vec<usize> = (0..m).collect();
            st.apply_unitary(&u, &signals)?;
            let mut etas = cfg.eta_signal.clone();
            etas.extend_from_slice(&cfg.eta_herald);
            st.apply_loss(&etas)?;
            if regime == Regime::Tbs {
                st = st.trace_out_to(&signals)?;
            }
            Ok(st)
        }
    }
}

/// Exact geometric draw for a squeezed pair: P(n) proportional to q^n.
fn geometric_pair(rng: &mut impl Rng, q: f64) -> u32 {
    if q <= 0.0 {
        return 0;
    }
    let u: f64 = rng.random();
    // (1 - u) in (0, 1], so the log ratio is finite and non-negative.
    ((1.0 - u).ln() / q.ln()) as u32
}

fn binomial_thin(rng: &mut impl Rng, n: u32, p: f64) -> u32 {
    if p >= 1.0 {
        return n;
    }
    if p <= 0.0 {
        return 0;
    }
    let mut k = 0;
    for _ in 0..n {
        if rng.random::<f64>() < p {
            k += 1;
        }
    }
    k
}

/// Draw from a probability row via one uniform (row sums to 1).
fn draw_from_row(rng: &mut impl Rng, row: &[f64]) -> u32 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (m, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return m as u32;
        }
    }
    row.len() as u32 - 1
}

struct BlockOutput {
    records: Vec<SampleRecord>,
    overflow_hits: u64,
    overflow_mass: f64,
}

/// Everything shot loops need, resolved once per run.
struct RunContext {
    interferometer: FockInterferometer,
    lambda_sq: Vec<f64>,
    /// Herald bank assignment rows per (mode, pulse); present when blinding
    /// is enabled.
    herald_banks: Option<Vec<Vec<AssignmentMatrix>>>,
}

impl RunContext {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let u = cfg.unitary.resolve(cfg.modes)?;
        let herald_banks = if cfg.herald_detector.blinding_enabled {
            let mut banks = Vec::with_capacity(cfg.modes);
            for i in 0..cfg.modes {
                // The bank's per-detector efficiency is this mode's herald
                // transmission; the pulse train sees the pair's thermal flux.
                let model = HeraldDetectorModel {
                    efficiency: cfg.eta_herald[i],
                    ..cfg.herald_detector.clone()
                };
                let mean = cfg.squeezers[i].mean_photons();
                banks.push(herald_assignment_train(&model, mean)?);
            }
            Some(banks)
        } else {
            None
        };
        Ok(Self {
            interferometer: FockInterferometer::new(&u),
            lambda_sq: cfg.squeezers.iter().map(|s| s.lambda() * s.lambda()).collect(),
            herald_banks,
        })
    }
}

fn sample_block(cfg: &ExperimentConfig, ctx: &RunContext, plan: &BlockPlan) -> Result<BlockOutput> {
    let mut rng = stream_rng(cfg.seed, domain::SAMPLE_BLOCK, plan.index);
    let guard = cfg.guard_shots;
    let emit_range = guard..plan.shots.saturating_sub(guard);
    let mut records = Vec::with_capacity(emit_range.clone().count());
    let mut overflow_hits = 0u64;
    let mut overflow_mass = 0.0f64;
    let m = cfg.modes;
    let zero_herald = PhotonPattern::zeros(m);

    match plan.regime {
        Regime::Gbs => {
            let state = build_output_state(cfg, Regime::Gbs, &plan.phases)?;
            let kernel = NumberKernel::new(&state)?;
            let dist = kernel.distribution(cfg.fock_cutoff)?;
            overflow_mass = dist.overflow_mass;
            let mut weights = dist.probabilities.clone();
            weights.push(dist.overflow_mass.max(0.0));
            let alias = AliasTable::new(&weights)?;
            let saturated = PhotonPattern::new(vec![cfg.fock_cutoff; m]);
            for local in emit_range {
                let idx = alias.sample(&mut rng);
                let raw = if idx < dist.patterns.len() {
                    &dist.patterns[idx]
                } else {
                    overflow_hits += 1;
                    &saturated
                };
                records.push(SampleRecord {
                    time_bin: plan.start_shot + local,
                    regime: plan.regime,
                    herald: zero_herald.clone(),
                    signal: apply_pnr_truncation(raw, cfg.pnr_cutoff)?,
                });
            }
        }
        Regime::Sbs | Regime::Tbs => {
            let is_sbs = plan.regime == Regime::Sbs;
            // Conditional distributions keyed by input pattern, built on
            // first use; block-local so parallel blocks stay independent.
            let mut cache: BTreeMap<Vec<u32>, ConditionalDistribution> = BTreeMap::new();
            let pulses = cfg.herald_detector.pulses_per_train as u64;
            let mut n = vec![0u32; m];
            for local in emit_range {
                let time_bin = plan.start_shot + local;
                for (i, q) in ctx.lambda_sq.iter().enumerate() {
                    n[i] = geometric_pair(&mut rng, *q);
                }
                let herald = if is_sbs {
                    let mut h = Vec::with_capacity(m);
                    match &ctx.herald_banks {
                        Some(banks) => {
                            let pulse = (time_bin % pulses) as usize;
                            for i in 0..m {
                                h.push(draw_from_row(&mut rng, banks[i][pulse].row(n[i])));
                            }
                        }
                        None => {
                            for i in 0..m {
                                h.push(binomial_thin(&mut rng, n[i], cfg.eta_herald[i]));
                            }
                        }
                    }
                    PhotonPattern::new(h)
                } else {
                    zero_herald.clone()
                };

                let total: u32 = n.iter().sum();
                let mut signal = if total == 0 {
                    vec![0u32; m]
                } else {
                    if !cache.contains_key(&n) {
                        cache.insert(n.clone(), ctx.interferometer.conditional_distribution(&n)?);
                    }
                    cache[&n].sample(&mut rng).to_vec()
                };
                for (j, s) in signal.iter_mut().enumerate() {
                    *s = binomial_thin(&mut rng, *s, cfg.eta_signal[j]);
                }
                records.push(SampleRecord {
                    time_bin,
                    regime: plan.regime,
                    herald: apply_pnr_truncation(&herald, cfg.pnr_cutoff)?,
                    signal: apply_pnr_truncation(&PhotonPattern::new(signal), cfg.pnr_cutoff)?,
                });
            }
        }
    }

    Ok(BlockOutput {
        records,
        overflow_hits,
        overflow_mass,
    })
}

/// Generate `n_shots` records (minus guard windows) per the block schedule.
///
/// Blocks are sampled in parallel from independent per-block RNG streams,
/// so the output is identical for any thread count.
pub fn draw_samples(cfg: &ExperimentConfig, n_shots: u64) -> Result<SampleRun> {
    let plans = plan_blocks(cfg, n_shots)?;
    let ctx = RunContext::new(cfg)?;
    let outputs: Vec<Result<BlockOutput>> = plans
        .par_iter()
        .map(|plan| sample_block(cfg, &ctx, plan))
        .collect();

    let mut run = SampleRun {
        records: Vec::new(),
        summary: RunSummary {
            shots_requested: n_shots,
            ..RunSummary::default()
        },
    };
    for (plan, out) in plans.iter().zip(outputs) {
        let out = out?;
        run.summary.shots_emitted += out.records.len() as u64;
        run.summary.shots_discarded += plan.shots - out.records.len() as u64;
        run.summary.overflow_hits += out.overflow_hits;
        run.summary.max_overflow_mass = run.summary.max_overflow_mass.max(out.overflow_mass);
        run.summary.blocks.push(BlockSummary {
            index: plan.index,
            regime: plan.regime,
            start_shot: plan.start_shot,
            end_shot: plan.start_shot + plan.shots,
            emitted: out.records.len() as u64,
        });
        run.records.extend(out.records);
    }
    Ok(run)
}
