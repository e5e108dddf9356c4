//! `predict`: closed-form expectations for a config without sampling.

use std::path::Path;

use bosonic_core::analysis::SQUEEZING_DB_PER_R;
use bosonic_core::certifier::pearson_predicted;
use bosonic_core::sampler::Regime;
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::CliResult;
use crate::Cli;

#[derive(Serialize)]
struct ModePrediction {
    mode: usize,
    r: f64,
    squeezing_db: f64,
    mean_photons_generated: f64,
    mean_photons_signal: f64,
    mean_photons_herald: f64,
    gamma_sbs: f64,
    gamma_gbs: f64,
}

pub fn run(cli: &Cli, config_path: &Path) -> CliResult<()> {
    let cfg_file = ConfigFile::load(config_path)?;
    let base_dir = config_path.parent().unwrap_or_else(|| Path::new("."));
    let cfg = cfg_file.to_experiment(cli.seed, base_dir)?;

    let mut rows = Vec::with_capacity(cfg.modes);
    for (i, sq) in cfg.squeezers.iter().enumerate() {
        let r = sq.r;
        let n_gen = sq.mean_photons();
        // A source that is off produces no counts, so there is nothing to
        // correlate; report zero rather than the r -> 0 formula limit.
        let gamma_sbs = if r > 0.0 {
            pearson_predicted(r, cfg.eta_herald[i], cfg.eta_signal[i], Regime::Sbs)?
        } else {
            0.0
        };
        rows.push(ModePrediction {
            mode: i,
            r,
            squeezing_db: SQUEEZING_DB_PER_R * r,
            mean_photons_generated: n_gen,
            mean_photons_signal: cfg.eta_signal[i] * n_gen,
            mean_photons_herald: cfg.eta_herald[i] * n_gen,
            gamma_sbs,
            gamma_gbs: pearson_predicted(r, cfg.eta_herald[i], cfg.eta_signal[i], Regime::Gbs)?,
        });
    }

    println!("mode        r    squeeze_dB       n_gen    n_signal    n_herald   gamma_sbs");
    for p in &rows {
        println!(
            "{:>4} {:>8.4} {:>13.4} {:>11.5} {:>11.5} {:>11.5} {:>11.4}",
            p.mode,
            p.r,
            p.squeezing_db,
            p.mean_photons_generated,
            p.mean_photons_signal,
            p.mean_photons_herald,
            p.gamma_sbs
        );
    }
    println!("gamma_gbs = 0 for every mode (no herald arm to correlate)");

    if let Some(out) = &cli.out {
        let json = serde_json::to_string_pretty(&rows)
            .map_err(|e| crate::error::CliError::Numeric(format!("serialization: {}", e)))?;
        crate::io::write_text(out, &(json + "\n"))?;
        if cli.verbose {
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}
