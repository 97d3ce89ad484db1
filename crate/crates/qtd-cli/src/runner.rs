//! Run orchestration: fit, sweep, simulate, and emit artifacts with a
//! self-describing manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use qtd_core::info::{advantage_curve, fit_pair_rate, window_sweep, DEFAULT_G_RANGE};
use qtd_core::mc::validate::{run_validation, ValidationConfig};
use qtd_core::mc::{generate_stream, write_stream};
use qtd_core::noise::analytic_conditionals;
use qtd_core::{Hypothesis, Strategy};

use crate::config::{Emit, RunConfig};
use crate::log;
use crate::output::{
    render_crossover, render_fig3, render_fig4, render_manifest, render_mc_validation, sha256_hex,
    Manifest, ManifestArtifact,
};

/// Outcome of a run: where the manifest went and whether every internal
/// validation passed.
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub pair_rate: f64,
    pub pair_rate_fitted: bool,
    pub validations_passed: bool,
}

/// Execute a configuration, writing every artifact in its emit set plus the
/// manifest into `out_dir`. Identical configurations and seeds give
/// byte-identical artifacts.
pub fn run(
    cfg: &RunConfig,
    out_dir: &Path,
    command: &str,
    dump_events: bool,
) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    // Resolve the one free model parameter.
    let base = cfg.base_params();
    let (pair_rate, fitted) = match cfg.pair_rate {
        Some(r) => (r, false),
        None => {
            log::info(format!(
                "fitting pair_rate for a crossover at g = {} (window {} s)",
                cfg.fit_target_g, cfg.delta_t
            ));
            let r = fit_pair_rate(&base, cfg.fit_target_g)?;
            log::info(format!("fitted pair_rate = {r} pairs/s"));
            (r, true)
        }
    };
    let params = base.with_pair_rate(pair_rate);

    let mut artifacts: Vec<(String, Vec<u8>)> = Vec::new();
    let mut validations_passed = true;

    for &item in &cfg.emit {
        match item {
            Emit::Fig3 => {
                log::info("emitting fig3.csv (conditional probabilities over g)");
                let grid = cfg.g_grid.points();
                let rows: Result<Vec<_>> = grid
                    .iter()
                    .map(|&g| {
                        let p = params.with_noise_ratio(g);
                        let c = analytic_conditionals(&p, Strategy::Classical)?;
                        let q = analytic_conditionals(&p, Strategy::Quantum)?;
                        Ok((g, c, q))
                    })
                    .collect();
                artifacts.push(("fig3.csv".into(), render_fig3(&rows?).into_bytes()));
            }
            Emit::Fig4 => {
                log::info("emitting fig4.csv (mutual information over g)");
                let curve = advantage_curve(&params, &cfg.g_grid.points())?;
                artifacts.push(("fig4.csv".into(), render_fig4(&curve).into_bytes()));
            }
            Emit::Crossover => {
                log::info(format!(
                    "emitting crossover.json over {} window(s)",
                    cfg.windows.len()
                ));
                let sweep = window_sweep(&params, &cfg.windows, DEFAULT_G_RANGE)?;
                for (w, outcome) in &sweep {
                    match outcome.found() {
                        Some(r) => log::info(format!("window {w} s: g* = {}", r.g_star)),
                        None => log::info(format!("window {w} s: no crossover")),
                    }
                }
                artifacts.push((
                    "crossover.json".into(),
                    render_crossover(&sweep, pair_rate, fitted, cfg.fit_target_g).into_bytes(),
                ));
            }
            Emit::McValidation => {
                log::info(format!(
                    "running Monte Carlo validation: {} g-points x {} seeds",
                    cfg.mc_g.len(),
                    cfg.mc_seeds
                ));
                let vcfg = ValidationConfig {
                    g_values: cfg.mc_g.clone(),
                    seeds_per_point: cfg.mc_seeds,
                    master_seed: cfg.master_seed,
                    target_coincidences: cfg.mc_target_coincidences,
                    max_events_present: cfg.mc_max_events_present,
                    max_events_absent: cfg.mc_max_events_absent,
                };
                let reports = run_validation(&params, &cfg.jitter(), &vcfg)?;
                for r in &reports {
                    log::debug(format!(
                        "g={} {} x={}: pass {}/{} (empty {})",
                        r.g,
                        r.strategy,
                        r.hypothesis.x(),
                        r.n_pass,
                        r.n_trials,
                        r.n_empty
                    ));
                    if !r.pass {
                        validations_passed = false;
                        log::info(format!(
                            "validation FAILED at g={} {} x={}",
                            r.g,
                            r.strategy,
                            r.hypothesis.x()
                        ));
                    }
                }
                artifacts.push((
                    "mc_validation.csv".into(),
                    render_mc_validation(&reports).into_bytes(),
                ));
            }
        }
    }

    if dump_events {
        log::info("dumping event streams for one seeded trial per layout");
        for strategy in [Strategy::Classical, Strategy::Quantum] {
            for hyp in [Hypothesis::Present, Hypothesis::Absent] {
                let events =
                    generate_stream(&params, strategy, hyp, &cfg.jitter(), cfg.master_seed)?;
                let mut buf = Vec::new();
                write_stream(&mut buf, &events)?;
                artifacts.push((format!("events_{strategy}_x{}.txt", hyp.x()), buf));
            }
        }
    }

    let mut manifest_entries = Vec::new();
    for (name, bytes) in &artifacts {
        let path = out_dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        manifest_entries.push(ManifestArtifact {
            file: name.clone(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
    }
    manifest_entries.sort_by(|a, b| a.file.cmp(&b.file));

    let manifest = Manifest {
        tool: "qtd",
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        master_seed: cfg.master_seed,
        pair_rate,
        pair_rate_fitted: fitted,
        fit_target_g: cfg.fit_target_g,
        config: cfg.snapshot(),
        artifacts: manifest_entries,
    };
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, render_manifest(&manifest))
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    log::info(format!("wrote {}", manifest_path.display()));

    Ok(RunSummary {
        out_dir: out_dir.to_path_buf(),
        pair_rate,
        pair_rate_fitted: fitted,
        validations_passed,
    })
}
