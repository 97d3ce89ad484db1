//! `key = value` run configuration with strict validation.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use qtd_core::{ExperimentParams, JitterModel};

/// Artifacts a run can emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Emit {
    Fig3,
    Fig4,
    Crossover,
    McValidation,
}

impl Emit {
    fn parse(token: &str) -> Option<Emit> {
        match token {
            "fig3" => Some(Emit::Fig3),
            "fig4" => Some(Emit::Fig4),
            "crossover" => Some(Emit::Crossover),
            "mc_validation" => Some(Emit::McValidation),
            _ => None,
        }
    }
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Emit::Fig3 => "fig3",
            Emit::Fig4 => "fig4",
            Emit::Crossover => "crossover",
            Emit::McValidation => "mc_validation",
        };
        write!(f, "{s}")
    }
}

/// Noise-ratio grid specification: `<linear|log> <start> <stop> <count>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log_spaced: bool,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = self.count as f64 - 1.0;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                if self.log_spaced {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

/// A fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub s_a: f64,
    pub s_b: f64,
    /// Scalar background level for single runs, as a noise ratio. Sweeps use
    /// `g_grid` and validation uses `mc_g` instead.
    pub g: f64,
    pub eps_a: f64,
    pub eps_b: f64,
    pub delta_t: f64,
    /// Explicit pair rate; when absent the run fits it so the crossover sits
    /// at `fit_target_g`.
    pub pair_rate: Option<f64>,
    pub visibility: f64,
    pub prior: f64,
    pub jitter_sigma: f64,
    pub duration: f64,
    pub g_grid: GridSpec,
    pub windows: Vec<f64>,
    pub mc_g: Vec<f64>,
    pub mc_seeds: u32,
    pub master_seed: u64,
    pub mc_target_coincidences: f64,
    pub mc_max_events_present: f64,
    pub mc_max_events_absent: f64,
    pub fit_target_g: f64,
    pub output_dir: Option<PathBuf>,
    pub emit: BTreeSet<Emit>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            s_a: 1000.0,
            s_b: 1000.0,
            g: 0.0,
            eps_a: 1.0,
            eps_b: 1.0,
            delta_t: 5e-9,
            pair_rate: None,
            visibility: 0.9,
            prior: 0.5,
            jitter_sigma: 50e-12,
            duration: 1.0,
            g_grid: GridSpec {
                start: 0.01,
                stop: 1000.0,
                count: 50,
                log_spaced: true,
            },
            windows: vec![5e-9, 1e-10],
            mc_g: vec![0.0, 1.0, 10.0, 100.0],
            mc_seeds: 40,
            master_seed: 1,
            mc_target_coincidences: 1.05e4,
            mc_max_events_present: 1.4e7,
            mc_max_events_absent: 1.5e6,
            fit_target_g: 40.0,
            output_dir: None,
            emit: BTreeSet::new(),
        }
    }
}

impl RunConfig {
    /// Experiment parameters at the configured scalar noise level, with a
    /// placeholder pair rate when none is set (the runner substitutes the
    /// fitted one).
    pub fn base_params(&self) -> ExperimentParams {
        ExperimentParams {
            idler_rate: self.s_a,
            signal_rate: self.s_b,
            background_rate: self.g * self.s_b,
            eff_idler: self.eps_a,
            eff_signal: self.eps_b,
            window: self.delta_t,
            pair_rate: self.pair_rate.unwrap_or(0.0),
            visibility: self.visibility,
            prior_present: self.prior,
            duration: self.duration,
        }
    }

    pub fn jitter(&self) -> JitterModel {
        JitterModel {
            sigma: self.jitter_sigma,
        }
    }

    /// Normalized key/value snapshot for the manifest.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let fl = |v: f64| format!("{v:e}");
        m.insert("s_a".into(), fl(self.s_a));
        m.insert("s_b".into(), fl(self.s_b));
        m.insert("g".into(), fl(self.g));
        m.insert("eps_a".into(), fl(self.eps_a));
        m.insert("eps_b".into(), fl(self.eps_b));
        m.insert("delta_t".into(), fl(self.delta_t));
        m.insert("pair_rate".into(), self.pair_rate.map_or("fit".into(), fl));
        m.insert("visibility".into(), fl(self.visibility));
        m.insert("prior".into(), fl(self.prior));
        m.insert("jitter_sigma".into(), fl(self.jitter_sigma));
        m.insert("duration".into(), fl(self.duration));
        m.insert(
            "g_grid".into(),
            format!(
                "{} {} {} {}",
                if self.g_grid.log_spaced {
                    "log"
                } else {
                    "linear"
                },
                fl(self.g_grid.start),
                fl(self.g_grid.stop),
                self.g_grid.count
            ),
        );
        let join = |v: &[f64]| v.iter().map(|x| fl(*x)).collect::<Vec<_>>().join(" ");
        m.insert("windows".into(), join(&self.windows));
        m.insert("mc_g".into(), join(&self.mc_g));
        m.insert("mc_seeds".into(), self.mc_seeds.to_string());
        m.insert("master_seed".into(), self.master_seed.to_string());
        m.insert(
            "mc_target_coincidences".into(),
            fl(self.mc_target_coincidences),
        );
        m.insert(
            "mc_max_events_present".into(),
            fl(self.mc_max_events_present),
        );
        m.insert("mc_max_events_absent".into(), fl(self.mc_max_events_absent));
        m.insert("fit_target_g".into(), fl(self.fit_target_g));
        m.insert(
            "emit".into(),
            self.emit
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        m
    }
}

/// A configuration error carrying the offending line number.
#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("{key}: expected a number, got `{value}`")))
}

fn parse_f64_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Result<Vec<f64>, _> = value
        .split_whitespace()
        .map(|tok| parse_f64(line, key, tok))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(err(line, format!("{key}: expected at least one number")));
    }
    Ok(items)
}

/// Parse a `key = value` document with `#` comments into a validated
/// configuration. Unknown and duplicate keys are rejected with their line
/// number, as is any value violating a model invariant.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut g_line: Option<usize> = None;
    let mut background_line: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(err(lineno, format!("{key}: empty value")));
        }
        if let Some(first) = seen.insert(
            match key {
                "s_a" => "s_a",
                "s_b" => "s_b",
                "g" => "g",
                "background" => "background",
                "eps_a" => "eps_a",
                "eps_b" => "eps_b",
                "delta_t" => "delta_t",
                "pair_rate" => "pair_rate",
                "visibility" => "visibility",
                "prior" => "prior",
                "jitter_sigma" => "jitter_sigma",
                "duration" => "duration",
                "g_grid" => "g_grid",
                "windows" => "windows",
                "mc_g" => "mc_g",
                "mc_seeds" => "mc_seeds",
                "master_seed" => "master_seed",
                "mc_target_coincidences" => "mc_target_coincidences",
                "mc_max_events_present" => "mc_max_events_present",
                "mc_max_events_absent" => "mc_max_events_absent",
                "fit_target_g" => "fit_target_g",
                "output_dir" => "output_dir",
                "emit" => "emit",
                other => return Err(err(lineno, format!("unknown key `{other}`"))),
            },
            lineno,
        ) {
            return Err(err(
                lineno,
                format!("duplicate key `{key}` (first given on line {first})"),
            ));
        }

        match key {
            "s_a" => cfg.s_a = parse_f64(lineno, key, value)?,
            "s_b" => cfg.s_b = parse_f64(lineno, key, value)?,
            "g" => {
                cfg.g = parse_f64(lineno, key, value)?;
                g_line = Some(lineno);
            }
            "background" => {
                // Stored as a ratio once s_b is known; resolved below.
                cfg.g = parse_f64(lineno, key, value)?;
                background_line = Some(lineno);
            }
            "eps_a" => cfg.eps_a = parse_f64(lineno, key, value)?,
            "eps_b" => cfg.eps_b = parse_f64(lineno, key, value)?,
            "delta_t" => cfg.delta_t = parse_f64(lineno, key, value)?,
            "pair_rate" => cfg.pair_rate = Some(parse_f64(lineno, key, value)?),
            "visibility" => cfg.visibility = parse_f64(lineno, key, value)?,
            "prior" => cfg.prior = parse_f64(lineno, key, value)?,
            "jitter_sigma" => cfg.jitter_sigma = parse_f64(lineno, key, value)?,
            "duration" => cfg.duration = parse_f64(lineno, key, value)?,
            "g_grid" => {
                let toks: Vec<&str> = value.split_whitespace().collect();
                if toks.len() != 4 {
                    return Err(err(
                        lineno,
                        "g_grid: expected `<linear|log> <start> <stop> <count>`",
                    ));
                }
                let log_spaced = match toks[0] {
                    "log" => true,
                    "linear" | "lin" => false,
                    other => return Err(err(lineno, format!("g_grid: unknown scale `{other}`"))),
                };
                let start = parse_f64(lineno, key, toks[1])?;
                let stop = parse_f64(lineno, key, toks[2])?;
                let count: usize = toks[3]
                    .parse()
                    .map_err(|_| err(lineno, format!("g_grid: bad count `{}`", toks[3])))?;
                cfg.g_grid = GridSpec {
                    start,
                    stop,
                    count,
                    log_spaced,
                };
            }
            "windows" => cfg.windows = parse_f64_list(lineno, key, value)?,
            "mc_g" => cfg.mc_g = parse_f64_list(lineno, key, value)?,
            "mc_seeds" => {
                cfg.mc_seeds = value
                    .parse()
                    .map_err(|_| err(lineno, format!("mc_seeds: bad integer `{value}`")))?
            }
            "master_seed" => {
                cfg.master_seed = value
                    .parse()
                    .map_err(|_| err(lineno, format!("master_seed: bad integer `{value}`")))?
            }
            "mc_target_coincidences" => cfg.mc_target_coincidences = parse_f64(lineno, key, value)?,
            "mc_max_events_present" => cfg.mc_max_events_present = parse_f64(lineno, key, value)?,
            "mc_max_events_absent" => cfg.mc_max_events_absent = parse_f64(lineno, key, value)?,
            "fit_target_g" => cfg.fit_target_g = parse_f64(lineno, key, value)?,
            "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
            "emit" => {
                cfg.emit.clear();
                for tok in value.split_whitespace() {
                    let item = Emit::parse(tok)
                        .ok_or_else(|| err(lineno, format!("emit: unknown artifact `{tok}`")))?;
                    cfg.emit.insert(item);
                }
            }
            _ => unreachable!("key already matched"),
        }
    }

    if let (Some(gl), Some(bl)) = (g_line, background_line) {
        return Err(err(
            bl.max(gl),
            "give exactly one of `g` (ratio) and `background` (rate), not both",
        ));
    }
    if let Some(bl) = background_line {
        if cfg.s_b <= 0.0 {
            return Err(err(bl, "background: needs s_b > 0 to form the noise ratio"));
        }
        cfg.g /= cfg.s_b; // value arrived as an absolute rate
    }

    validate(&cfg, &seen)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, seen: &BTreeMap<&str, usize>) -> Result<(), ConfigError> {
    let line_of = |key: &str| seen.get(key).copied().unwrap_or(0);
    let check = |ok: bool, key: &str, msg: &str| -> Result<(), ConfigError> {
        if ok {
            Ok(())
        } else {
            Err(err(line_of(key), format!("{key}: {msg}")))
        }
    };
    check(
        cfg.delta_t.is_finite() && cfg.delta_t > 0.0,
        "delta_t",
        "violates `delta_T > 0`",
    )?;
    check(
        cfg.s_a.is_finite() && cfg.s_a >= 0.0,
        "s_a",
        "violates `rate >= 0`",
    )?;
    check(
        cfg.s_b.is_finite() && cfg.s_b >= 0.0,
        "s_b",
        "violates `rate >= 0`",
    )?;
    check(
        cfg.g.is_finite() && cfg.g >= 0.0,
        "g",
        "violates `rate >= 0`",
    )?;
    check(
        (0.0..=1.0).contains(&cfg.eps_a),
        "eps_a",
        "violates `efficiency in [0, 1]`",
    )?;
    check(
        (0.0..=1.0).contains(&cfg.eps_b),
        "eps_b",
        "violates `efficiency in [0, 1]`",
    )?;
    check(
        (0.0..=1.0).contains(&cfg.visibility),
        "visibility",
        "violates `V in [0, 1]`",
    )?;
    check(
        (0.0..=1.0).contains(&cfg.prior),
        "prior",
        "violates `prior in [0, 1]`",
    )?;
    if let Some(r) = cfg.pair_rate {
        check(
            r.is_finite() && r >= 0.0,
            "pair_rate",
            "violates `rate >= 0`",
        )?;
    }
    check(
        cfg.jitter_sigma.is_finite() && cfg.jitter_sigma >= 0.0,
        "jitter_sigma",
        "violates `sigma >= 0`",
    )?;
    check(
        cfg.duration.is_finite() && cfg.duration > 0.0,
        "duration",
        "violates `duration > 0`",
    )?;
    check(cfg.g_grid.count >= 1, "g_grid", "violates `count >= 1`")?;
    check(
        cfg.g_grid.start.is_finite() && cfg.g_grid.stop.is_finite(),
        "g_grid",
        "bounds must be finite",
    )?;
    if cfg.g_grid.log_spaced {
        check(
            cfg.g_grid.start > 0.0 && cfg.g_grid.stop > 0.0,
            "g_grid",
            "log spacing needs positive bounds",
        )?;
    }
    check(
        cfg.windows.iter().all(|w| w.is_finite() && *w > 0.0),
        "windows",
        "violates `window > 0`",
    )?;
    check(
        cfg.mc_g.iter().all(|g| g.is_finite() && *g >= 0.0),
        "mc_g",
        "violates `g >= 0`",
    )?;
    check(cfg.mc_seeds >= 1, "mc_seeds", "violates `seeds >= 1`")?;
    check(
        cfg.fit_target_g.is_finite() && cfg.fit_target_g > 0.0,
        "fit_target_g",
        "violates `target > 0`",
    )?;
    check(
        cfg.mc_target_coincidences > 0.0,
        "mc_target_coincidences",
        "violates `target > 0`",
    )?;
    check(
        cfg.mc_max_events_present >= 1.0 && cfg.mc_max_events_absent >= 1.0,
        "mc_max_events_present",
        "violates `event budget >= 1`",
    )?;
    Ok(())
}
