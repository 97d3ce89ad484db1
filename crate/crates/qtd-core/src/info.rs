//! Mutual-information discrimination analysis and the crossover finder.

use crate::error::{Error, Result};
use crate::noise::{analytic_conditionals, ConditionalTable};
use crate::params::{ExperimentParams, Strategy};

/// Base-2 binary entropy, with the continuity convention H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::ProbabilityRange(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

/// Mutual information I(r:x) = H(x) - H(x|r) in bits, for a binary outcome
/// r distributed as `cond` and a binary hypothesis with prior
/// `prior_present` = p(x = 0).
///
/// The joint table p(x, r) = p(x) p(r|x) is formed directly and posteriors
/// follow from Bayes' rule; outcomes of zero total probability contribute
/// nothing.
pub fn mutual_information(cond: &ConditionalTable, prior_present: f64) -> Result<f64> {
    if !(prior_present > 0.0 && prior_present < 1.0) {
        return Err(Error::PriorRange(prior_present));
    }
    for x in 0..2u8 {
        for r in 0..2u8 {
            let p = cond.p(r, x);
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                return Err(Error::ProbabilityRange(p));
            }
        }
    }
    let px = [prior_present, 1.0 - prior_present];
    let mut h_x_given_r = 0.0;
    for r in 0..2u8 {
        let p_r: f64 = (0..2u8).map(|x| px[x as usize] * cond.p(r, x)).sum();
        if p_r <= 0.0 {
            continue;
        }
        for x in 0..2u8 {
            let joint = px[x as usize] * cond.p(r, x);
            if joint > 0.0 {
                h_x_given_r -= joint * (joint / p_r).log2();
            }
        }
    }
    let h_x = binary_entropy(prior_present)?;
    Ok((h_x - h_x_given_r).max(0.0))
}

/// Mutual informations of the two strategies at one noise/signal ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvantagePoint {
    pub g: f64,
    pub info_classical: f64,
    pub info_quantum: f64,
}

impl AdvantagePoint {
    pub fn gap(&self) -> f64 {
        self.info_quantum - self.info_classical
    }
}

/// Evaluate both strategies at a single noise/signal ratio.
pub fn advantage_at(params: &ExperimentParams, g: f64) -> Result<AdvantagePoint> {
    if !g.is_finite() || g < 0.0 {
        return Err(Error::InvalidParams(format!(
            "noise ratio must be finite and >= 0, got {g}"
        )));
    }
    let p = params.with_noise_ratio(g);
    let classical = analytic_conditionals(&p, Strategy::Classical)?;
    let quantum = analytic_conditionals(&p, Strategy::Quantum)?;
    Ok(AdvantagePoint {
        g,
        info_classical: mutual_information(&classical, p.prior_present)?,
        info_quantum: mutual_information(&quantum, p.prior_present)?,
    })
}

/// Evaluate both strategies along a grid of noise/signal ratios.
pub fn advantage_curve(params: &ExperimentParams, g_grid: &[f64]) -> Result<Vec<AdvantagePoint>> {
    if g_grid.is_empty() {
        return Err(Error::InvalidParams("empty g grid".into()));
    }
    g_grid.iter().map(|&g| advantage_at(params, g)).collect()
}

/// A located quantum/classical crossover.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverResult {
    /// Noise/signal ratio where the two strategies break even.
    pub g_star: f64,
    /// Final bisection bracket; the information gap changes sign across it.
    pub bracket: (f64, f64),
    /// Coincidence window the curves were evaluated at.
    pub window: f64,
    /// Pair rate the curves were evaluated at.
    pub pair_rate: f64,
}

/// Outcome of a crossover search: either a bracketed root of
/// I_q(g) - I_c(g), or the distinguished no-crossover case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CrossoverOutcome {
    Found(CrossoverResult),
    /// The gap does not change sign on the range; endpoint values reported.
    NoCrossover {
        gap_low: f64,
        gap_high: f64,
    },
}

impl CrossoverOutcome {
    pub fn found(&self) -> Option<&CrossoverResult> {
        match self {
            CrossoverOutcome::Found(r) => Some(r),
            CrossoverOutcome::NoCrossover { .. } => None,
        }
    }
}

/// Relative tolerance in g of the bisection.
pub const CROSSOVER_REL_TOL: f64 = 1e-4;

/// Generic bisection for a sign change of `f` on `(low, high)`.
///
/// Returns the final midpoint and bracket, or `None` when the endpoint
/// values do not have strictly opposite signs (including the identically
/// zero case).
pub fn bisect_sign_change<F: FnMut(f64) -> f64>(
    mut f: F,
    range: (f64, f64),
    rel_tol: f64,
) -> Option<(f64, (f64, f64))> {
    let (mut lo, mut hi) = range;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return None;
    }
    let f_lo = f(lo);
    let product = f_lo * f(hi);
    if product.is_nan() || product >= 0.0 {
        return None;
    }
    let mut sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            return Some((mid, (lo, hi)));
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some((mid, (lo, hi)));
        }
        if f_mid.signum() == sign_lo {
            lo = mid;
            sign_lo = f_mid.signum();
        } else {
            hi = mid;
        }
    }
    Some((0.5 * (lo + hi), (lo, hi)))
}

/// Locate the noise/signal ratio where the two strategies' mutual
/// informations cross, by bisection on the analytic model curves.
pub fn find_crossover(params: &ExperimentParams, g_range: (f64, f64)) -> Result<CrossoverOutcome> {
    params.validate()?;
    let gap = |g: f64| advantage_at(params, g).map(|pt| pt.gap());
    let gap_low = gap(g_range.0)?;
    let gap_high = gap(g_range.1)?;
    let product = gap_low * gap_high;
    if product.is_nan() || product >= 0.0 {
        return Ok(CrossoverOutcome::NoCrossover { gap_low, gap_high });
    }
    let (g_star, bracket) = bisect_sign_change(
        |g| {
            advantage_at(params, g)
                .map(|pt| pt.gap())
                .unwrap_or(f64::NAN)
        },
        g_range,
        CROSSOVER_REL_TOL,
    )
    .expect("sign change verified above");
    Ok(CrossoverOutcome::Found(CrossoverResult {
        g_star,
        bracket,
        window: params.window,
        pair_rate: params.pair_rate,
    }))
}

/// Crossover search repeated over a list of coincidence windows.
pub fn window_sweep(
    params: &ExperimentParams,
    windows: &[f64],
    g_range: (f64, f64),
) -> Result<Vec<(f64, CrossoverOutcome)>> {
    windows
        .iter()
        .map(|&w| {
            if w.is_nan() || w <= 0.0 {
                return Err(Error::InvalidParams(format!("window must be > 0, got {w}")));
            }
            let outcome = find_crossover(&params.with_window(w), g_range)?;
            Ok((w, outcome))
        })
        .collect()
}

/// Default search range in g for crossover and fitting.
pub const DEFAULT_G_RANGE: (f64, f64) = (1e-3, 1e6);

/// Fit the one free parameter of the model: find the pair rate at which the
/// crossover sits at `target_g` for the given window and rates.
///
/// The crossover ratio grows monotonically with the pair rate (more signal
/// tolerates more noise), so a bisection over a wide logarithmic range is
/// robust. Pair rates whose curves never cross inside the search range count
/// as "below target".
pub fn fit_pair_rate(params: &ExperimentParams, target_g: f64) -> Result<f64> {
    if target_g.is_nan() || target_g <= 0.0 {
        return Err(Error::FitFailed(format!(
            "target crossover must be > 0, got {target_g}"
        )));
    }
    let g_star_of = |pair_rate: f64| -> Result<f64> {
        let p = params.with_pair_rate(pair_rate);
        Ok(match find_crossover(&p, DEFAULT_G_RANGE)? {
            CrossoverOutcome::Found(r) => r.g_star,
            CrossoverOutcome::NoCrossover { .. } => 0.0,
        })
    };
    let (mut lo, mut hi) = (1e-3, 1e6);
    let g_lo = g_star_of(lo)?;
    let g_hi = g_star_of(hi)?;
    if g_lo > target_g || g_hi < target_g {
        return Err(Error::FitFailed(format!(
            "target g = {target_g} outside attainable range [{g_lo}, {g_hi}]"
        )));
    }
    for _ in 0..80 {
        let mid = (lo * hi).sqrt();
        if hi / lo < 1.0 + 1e-6 {
            break;
        }
        if g_star_of(mid)? < target_g {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}
