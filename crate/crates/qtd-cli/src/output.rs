//! Artifact serialization: fixed-precision CSV, crossover JSON, manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use qtd_core::info::AdvantagePoint;
use qtd_core::mc::validate::EntryReport;
use qtd_core::{ConditionalTable, CrossoverOutcome, Hypothesis};

/// Floating-point rendering used in every CSV cell: scientific notation with
/// 17 significant digits, enough to reproduce the f64 bit pattern.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

pub const FIG3_HEADER: &str =
    "g,p_c(0|0),p_c(1|0),p_c(0|1),p_c(1|1),p_q(0|0),p_q(1|0),p_q(0|1),p_q(1|1)";

/// Conditional-probability table versus noise ratio, both strategies.
pub fn render_fig3(rows: &[(f64, ConditionalTable, ConditionalTable)]) -> String {
    let mut out = String::new();
    out.push_str(FIG3_HEADER);
    out.push('\n');
    for (g, classical, quantum) in rows {
        let cells = [
            *g,
            classical.p(0, 0),
            classical.p(1, 0),
            classical.p(0, 1),
            classical.p(1, 1),
            quantum.p(0, 0),
            quantum.p(1, 0),
            quantum.p(0, 1),
            quantum.p(1, 1),
        ];
        let line: Vec<String> = cells.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub const FIG4_HEADER: &str = "g,I_classical,I_quantum";

/// Mutual information versus noise ratio.
pub fn render_fig4(curve: &[AdvantagePoint]) -> String {
    let mut out = String::new();
    out.push_str(FIG4_HEADER);
    out.push('\n');
    for pt in curve {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(pt.g),
            fmt_f64(pt.info_classical),
            fmt_f64(pt.info_quantum)
        ));
    }
    out
}

#[derive(Serialize)]
pub struct CrossoverEntry {
    pub window_seconds: f64,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_to_baseline: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_high: Option<f64>,
}

#[derive(Serialize)]
pub struct CrossoverReport {
    pub pair_rate: f64,
    pub pair_rate_fitted: bool,
    pub fit_target_g: f64,
    pub baseline_window_seconds: f64,
    pub results: Vec<CrossoverEntry>,
}

/// Crossover results per coincidence window, ratios relative to the first.
pub fn render_crossover(
    sweep: &[(f64, CrossoverOutcome)],
    pair_rate: f64,
    pair_rate_fitted: bool,
    fit_target_g: f64,
) -> String {
    let baseline = sweep.first().and_then(|(_, o)| o.found().map(|r| r.g_star));
    let results: Vec<CrossoverEntry> = sweep
        .iter()
        .map(|&(w, outcome)| match outcome {
            CrossoverOutcome::Found(r) => CrossoverEntry {
                window_seconds: w,
                found: true,
                g_star: Some(r.g_star),
                bracket: Some(r.bracket),
                ratio_to_baseline: baseline.map(|b| r.g_star / b),
                gap_low: None,
                gap_high: None,
            },
            CrossoverOutcome::NoCrossover { gap_low, gap_high } => CrossoverEntry {
                window_seconds: w,
                found: false,
                g_star: None,
                bracket: None,
                ratio_to_baseline: None,
                gap_low: Some(gap_low),
                gap_high: Some(gap_high),
            },
        })
        .collect();
    let report = CrossoverReport {
        pair_rate,
        pair_rate_fitted,
        fit_target_g,
        baseline_window_seconds: sweep.first().map(|&(w, _)| w).unwrap_or(f64::NAN),
        results,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
    s.push('\n');
    s
}

pub const MC_VALIDATION_HEADER: &str = "g,strategy,x,duration_s,n_trials,n_pass,n_empty,\
pooled_coincidences,p_analytic,p_mc,se_pooled,degenerate,pass";

/// Per-point Monte Carlo versus analytic comparison.
pub fn render_mc_validation(reports: &[EntryReport]) -> String {
    let mut out = String::new();
    out.push_str(MC_VALIDATION_HEADER);
    out.push('\n');
    for r in reports {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.g),
            r.strategy,
            match r.hypothesis {
                Hypothesis::Present => 0,
                Hypothesis::Absent => 1,
            },
            fmt_f64(r.duration),
            r.n_trials,
            r.n_pass,
            r.n_empty,
            r.pooled_counts,
            fmt_f64(r.p_analytic),
            opt(r.p_mc),
            opt(r.se_pooled),
            r.analytically_degenerate,
            r.pass
        ));
    }
    out
}

#[derive(Serialize)]
pub struct ManifestArtifact {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub master_seed: u64,
    /// Pair rate the artifacts were produced with.
    pub pair_rate: f64,
    /// True when the pair rate came from the one-parameter crossover fit.
    pub pair_rate_fitted: bool,
    pub fit_target_g: f64,
    pub config: BTreeMap<String, String>,
    pub artifacts: Vec<ManifestArtifact>,
}

pub fn render_manifest(manifest: &Manifest) -> String {
    let mut s = serde_json::to_string_pretty(manifest).expect("serializable manifest");
    s.push('\n');
    s
}
