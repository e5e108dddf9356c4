//! `simulate`: draw samples and write them with a provenance manifest.

use std::path::{Path, PathBuf};

use bosonic_core::sampler::draw_samples;

use crate::config::ConfigFile;
use crate::error::CliResult;
use crate::io::write_samples;
use crate::manifest::{manifest_path, RunManifest};
use crate::Cli;

pub fn run(cli: &Cli, config_path: &Path, shots: u64) -> CliResult<()> {
    let cfg_file = ConfigFile::load(config_path)?;
    let base_dir = config_path.parent().unwrap_or_else(|| Path::new("."));
    let cfg = cfg_file.to_experiment(cli.seed, base_dir)?;
    let run = draw_samples(&cfg, shots)?;

    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("samples.jsonl"));
    write_samples(&out_path, &run.records)?;

    let manifest = RunManifest::new(
        cfg_file.canonical_hash(base_dir)?,
        cli.seed,
        &run.summary,
        vec![out_path.display().to_string()],
    );
    let mpath = manifest_path(&out_path);
    crate::io::write_text(&mpath, &(manifest.to_json()? + "\n"))?;

    println!(
        "wrote {} records to {} ({} requested, {} guard-discarded)",
        run.summary.shots_emitted,
        out_path.display(),
        run.summary.shots_requested,
        run.summary.shots_discarded
    );
    println!("manifest: {}", mpath.display());
    if run.summary.max_overflow_mass > 1e-3 {
        println!(
            "warning: up to {:.3}% of per-block probability mass lay beyond the enumeration \
             cutoff; consider raising fock_cutoff",
            100.0 * run.summary.max_overflow_mass
        );
    }
    if cli.verbose {
        for b in &run.summary.blocks {
            println!(
                "  block {:>4} {} shots [{}, {}) emitted {}",
                b.index, b.regime, b.start_shot, b.end_shot, b.emitted
            );
        }
    }
    Ok(())
}
