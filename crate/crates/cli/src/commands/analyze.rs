//! `analyze`: characterization tools over counts, scans, and efficiency
//! tables. Results print as text; --out adds a JSON copy.

use std::path::Path;

use bosonic_core::analysis::{
    dispersion_visibility, g2, hom_scan, klyshko, reconstruct_squeezing, schmidt_modes,
    CountHistogram, SQUEEZING_DB_PER_R,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{parse_float_list, read_float_rows, read_samples, write_text};
use crate::{AnalyzeCommand, Arm, Cli};

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    if let Some(out) = &cli.out {
        let json = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Numeric(format!("serialization: {}", e)))?;
        write_text(out, &(json + "\n"))?;
        if cli.verbose {
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct G2Report {
    g2: f64,
    mean_photons: f64,
    schmidt_modes: Option<f64>,
    tail_mass_exceeded: bool,
}

fn run_g2(
    cli: &Cli,
    samples: &Option<std::path::PathBuf>,
    counts: &Option<String>,
    mode: usize,
    arm: Arm,
) -> CliResult<()> {
    let hist = match (samples, counts) {
        (Some(path), None) => {
            let records = read_samples(path)?;
            match arm {
                Arm::Signal => CountHistogram::from_signal_mode(&records, mode)?,
                Arm::Herald => CountHistogram::from_herald_mode(&records, mode)?,
            }
        }
        (None, Some(list)) => CountHistogram::from_counts(parse_float_list(list)?)?,
        _ => {
            return Err(CliError::Usage(
                "give a sample file or --counts, not both or neither".into(),
            ))
        }
    };
    let g = g2(&hist)?;
    let report = G2Report {
        g2: g,
        mean_photons: hist.mean(),
        schmidt_modes: schmidt_modes(g).ok(),
        tail_mass_exceeded: hist.tail_mass_exceeded(),
    };
    println!("g2(0)        = {:.6}", report.g2);
    println!("mean photons = {:.6}", report.mean_photons);
    match report.schmidt_modes {
        Some(k) => println!("Schmidt modes K = {:.4} (thermal-statistics estimate)", k),
        None => println!("Schmidt modes: not defined at g2 <= 1"),
    }
    if report.tail_mass_exceeded {
        println!("warning: top histogram bin carries > 0.1% of the mass; moments may be biased");
    }
    emit_json(cli, &report)
}

fn run_hom(cli: &Cli, scan: &Path) -> CliResult<()> {
    let rows = read_float_rows(scan, 2)?;
    let delays: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let counts: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let fit = hom_scan(&delays, &counts)?;
    println!("visibility = {:.4}", fit.visibility);
    println!("dip center = {:.6}", fit.dip_center);
    println!("baseline   = {:.3}", fit.baseline);
    println!("width      = {:.6}", fit.width);
    if fit.visibility > 0.0 {
        println!(
            "mode-count bound: K <= 1/V = {:.3} for indistinguishable photons",
            1.0 / fit.visibility
        );
    }
    emit_json(cli, &fit)
}

#[derive(Serialize)]
struct KlyshkoReport {
    per_mode: Vec<bosonic_core::analysis::KlyshkoEstimate>,
    mean_eta_signal: f64,
    std_eta_signal: f64,
    mean_eta_herald: f64,
    std_eta_herald: f64,
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

fn run_klyshko(cli: &Cli, counts: &Path) -> CliResult<()> {
    let rows = read_float_rows(counts, 3)?;
    let c: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let h: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let s: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    let per_mode = klyshko(&c, &h, &s)?;

    println!("mode  eta_signal      sigma  eta_herald      sigma  flags");
    for (i, e) in per_mode.iter().enumerate() {
        println!(
            "{:>4} {:>11.5} {:>10.5} {:>11.5} {:>10.5}  {}",
            i,
            e.eta_signal,
            e.eta_signal_sigma,
            e.eta_herald,
            e.eta_herald_sigma,
            if e.unphysical { "UNPHYSICAL" } else { "" }
        );
    }
    let sig: Vec<f64> = per_mode.iter().map(|e| e.eta_signal).collect();
    let her: Vec<f64> = per_mode.iter().map(|e| e.eta_herald).collect();
    let mean_s = sig.iter().sum::<f64>() / sig.len() as f64;
    let mean_h = her.iter().sum::<f64>() / her.len() as f64;
    let report = KlyshkoReport {
        mean_eta_signal: mean_s,
        std_eta_signal: sample_std(&sig, mean_s),
        mean_eta_herald: mean_h,
        std_eta_herald: sample_std(&her, mean_h),
        per_mode,
    };
    println!(
        "mean: eta_signal {:.4} +- {:.4}, eta_herald {:.4} +- {:.4}",
        report.mean_eta_signal,
        report.std_eta_signal,
        report.mean_eta_herald,
        report.std_eta_herald
    );
    emit_json(cli, &report)
}

#[derive(Serialize)]
struct DispersionReport {
    tau0_s: f64,
    gvd_s2_per_m: f64,
    length_m: f64,
    visibility: f64,
}

fn run_dispersion(cli: &Cli, tau0_ps: f64, gvd_fs2_mm: f64, length_m: f64) -> CliResult<()> {
    // ps -> s; fs^2/mm -> s^2/m (1e-30 / 1e-3).
    let tau0 = tau0_ps * 1e-12;
    let gvd = gvd_fs2_mm * 1e-27;
    let v = dispersion_visibility(tau0, gvd, length_m)?;
    let report = DispersionReport {
        tau0_s: tau0,
        gvd_s2_per_m: gvd,
        length_m,
        visibility: v,
    };
    if cli.verbose {
        println!("tau0 = {:e} s, gvd = {:e} s^2/m, length = {} m", tau0, gvd, length_m);
    }
    println!("dispersion-limited visibility = {:.4}", v);
    emit_json(cli, &report)
}

fn run_squeezing(cli: &Cli, means: &str, eta: &str) -> CliResult<()> {
    let means = parse_float_list(means)?;
    let mut etas = parse_float_list(eta)?;
    if etas.len() == 1 && means.len() > 1 {
        etas = vec![etas[0]; means.len()];
    }
    let est = reconstruct_squeezing(&means, &etas)?;
    println!("squeezing parameter r = {:.4}", est.r);
    println!(
        "squeezing level       = {:.3} dB ({} dB per unit r)",
        est.decibels, SQUEEZING_DB_PER_R
    );
    println!("mean photons generated = {:.5}", est.mean_photons_generated);
    emit_json(cli, &est)
}

pub fn run(cli: &Cli, what: &AnalyzeCommand) -> CliResult<()> {
    match what {
        AnalyzeCommand::G2 {
            samples,
            counts,
            mode,
            arm,
        } => run_g2(cli, samples, counts, *mode, *arm),
        AnalyzeCommand::Hom { scan } => run_hom(cli, scan),
        AnalyzeCommand::Klyshko { counts } => run_klyshko(cli, counts),
        AnalyzeCommand::Dispersion {
            tau0_ps,
            gvd_fs2_mm,
            length_m,
        } => run_dispersion(cli, *tau0_ps, *gvd_fs2_mm, *length_m),
        AnalyzeCommand::Squeezing { means, eta } => run_squeezing(cli, means, eta),
    }
}
