//! Closed-form model of signal and noise coincidence rates.
//!
//! For each strategy and hypothesis the coincidence rate into the
//! state-identifying channel splits as `C_phi = SC_phi + NC_phi`, while the
//! orthogonal channel carries `C_perp = NC_perp`. `SC` is the true-pair
//! contribution, `NC` the accidental one.
//!
//! Accidentals between uncorrelated streams follow `NC = c_A * c_B * dT`.
//! In the classical strategy the local |H> projection removes half of the
//! unpolarized background, so with the target present
//! `NC_phi = eA*eB*S_A*(S_B + N/2)*dT` while the rejected half is observed
//! in the orthogonal projection, `NC_perp = eA*eB*S_A*(N/2)*dT`. In the
//! quantum strategy the central PBS mixes all light into two unpolarized
//! arms of rate `(S_A + S_B + N)/2`, and the diagonal filtering keeps the
//! (+,+)/(-,-) combinations: `NC_phi = (eA*eB/8)*(S_A + S_B + N)^2 * dT`.
//! Unpolarized light is an even mixture of the four Bell states, so the
//! orthogonal subspace collects three times that: `NC_perp = 3 * NC_phi`.
//! These splits are what reproduce the absent-target limits
//! `p_c(r|1) = 1/2` and `p_q(0|1) = 1/4` at every noise level.
//!
//! The target-absent hypothesis blocks the signal path: `S_B -> 0` and the
//! pair term vanish while the background stays.

use crate::error::{Error, Result};
use crate::params::{ExperimentParams, Hypothesis, Strategy};

/// Count rates at the two detectors of an accidental-rate estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinglesRates {
    /// Counting rate at detector D_A (counts/s).
    pub idler: f64,
    /// Counting rate at detector D_B (counts/s).
    pub signal: f64,
}

/// Accidental coincidence rate of two uncorrelated detectors,
/// `c_A * c_B * window`.
pub fn accidental_rate(singles: SinglesRates, window: f64) -> f64 {
    singles.idler * singles.signal * window
}

/// Coincidence rates for one strategy and hypothesis, decomposed into the
/// true-pair contribution `sc_phi` and the accidental contributions
/// `nc_phi`, `nc_perp`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountsTable {
    pub strategy: Strategy,
    pub hypothesis: Hypothesis,
    /// Pair contribution to the state-identifying channel (per second).
    pub sc_phi: f64,
    /// Accidental contribution to the state-identifying channel (per second).
    pub nc_phi: f64,
    /// Rate into the orthogonal channel (per second).
    pub nc_perp: f64,
}

impl CountsTable {
    /// Total rate of state-identifying coincidences.
    pub fn c_phi(&self) -> f64 {
        self.sc_phi + self.nc_phi
    }

    /// Total rate of orthogonal-channel coincidences.
    pub fn c_perp(&self) -> f64 {
        self.nc_perp
    }

    pub fn total(&self) -> f64 {
        self.c_phi() + self.c_perp()
    }
}

/// Classical-strategy coincidence rates.
pub fn classical_counts(params: &ExperimentParams, hypothesis: Hypothesis) -> CountsTable {
    let scale = params.eff_idler * params.eff_signal;
    let half_noise = params.background_rate / 2.0;
    let (sc_phi, nc_phi) = match hypothesis {
        Hypothesis::Present => (
            scale * params.pair_rate,
            scale * params.idler_rate * (params.signal_rate + half_noise) * params.window,
        ),
        Hypothesis::Absent => (0.0, scale * params.idler_rate * half_noise * params.window),
    };
    let nc_perp = scale * params.idler_rate * half_noise * params.window;
    CountsTable {
        strategy: Strategy::Classical,
        hypothesis,
        sc_phi,
        nc_phi,
        nc_perp,
    }
}

/// Quantum-strategy coincidence rates. The visibility correction is a
/// separate step; see [`apply_visibility`].
pub fn quantum_counts(params: &ExperimentParams, hypothesis: Hypothesis) -> CountsTable {
    let scale = params.eff_idler * params.eff_signal;
    let (signal, sc_phi) = match hypothesis {
        Hypothesis::Present => (params.signal_rate, scale * params.pair_rate),
        Hypothesis::Absent => (0.0, 0.0),
    };
    let combined = params.idler_rate + signal + params.background_rate;
    let nc_phi = scale / 8.0 * combined * combined * params.window;
    CountsTable {
        strategy: Strategy::Quantum,
        hypothesis,
        sc_phi,
        nc_phi,
        nc_perp: 3.0 * nc_phi,
    }
}

/// Redistribute the pair contribution of a quantum table for non-unit
/// two-photon interference visibility: with probability `v` the Bell
/// measurement succeeds, otherwise the pair behaves like unpolarized light
/// and splits 1/4 : 3/4 between the channels.
pub fn apply_visibility(counts: CountsTable, visibility: f64) -> Result<CountsTable> {
    if counts.strategy != Strategy::Quantum {
        return Err(Error::VisibilityOnClassical);
    }
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::InvalidParams(format!(
            "visibility must lie in [0, 1], got {visibility}"
        )));
    }
    let sc = counts.sc_phi;
    Ok(CountsTable {
        sc_phi: visibility * sc + (1.0 - visibility) * sc / 4.0,
        nc_perp: counts.nc_perp + (1.0 - visibility) * sc * 3.0 / 4.0,
        ..counts
    })
}

/// Conditional outcome probabilities for one hypothesis:
/// `p(0|x) = C_phi / (C_phi + C_perp)` and its complement.
pub fn conditional_row(counts: &CountsTable) -> Result<(f64, f64)> {
    let total = counts.total();
    if total <= 0.0 {
        return Err(Error::DegenerateCounts);
    }
    Ok((counts.c_phi() / total, counts.c_perp() / total))
}

/// Conditional probabilities p(r|x) for both hypotheses of one strategy,
/// with optional per-row standard errors (populated by the Monte Carlo
/// estimators, absent for analytic tables).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalTable {
    /// p(r = 0 | x = 0): state-identifying outcome given target present.
    pub phi_given_present: f64,
    /// p(r = 0 | x = 1): state-identifying outcome given target absent.
    pub phi_given_absent: f64,
    /// Binomial standard errors of the two rows, when estimated from counts.
    pub se_present: Option<f64>,
    pub se_absent: Option<f64>,
}

impl ConditionalTable {
    pub fn new(phi_given_present: f64, phi_given_absent: f64) -> Self {
        ConditionalTable {
            phi_given_present,
            phi_given_absent,
            se_present: None,
            se_absent: None,
        }
    }

    /// p(r | x) with r, x in {0, 1}.
    pub fn p(&self, r: u8, x: u8) -> f64 {
        let p0 = match x {
            0 => self.phi_given_present,
            _ => self.phi_given_absent,
        };
        match r {
            0 => p0,
            _ => 1.0 - p0,
        }
    }
}

/// Analytic conditional table for one strategy, with the visibility
/// correction applied on the quantum side.
///
/// A target-absent table with zero total rate (possible classically when
/// the background vanishes: no photon ever reaches the signal detectors) is
/// resolved by the unpolarized-light limit of the strategy, 1/2 classical
/// and 1/4 quantum, which the rates approach for any nonzero background.
/// A degenerate target-present table is a genuine error.
pub fn analytic_conditionals(
    params: &ExperimentParams,
    strategy: Strategy,
) -> Result<ConditionalTable> {
    params.validate()?;
    let table = |hyp: Hypothesis| -> Result<CountsTable> {
        Ok(match strategy {
            Strategy::Classical => classical_counts(params, hyp),
            Strategy::Quantum => apply_visibility(quantum_counts(params, hyp), params.visibility)?,
        })
    };
    let present = conditional_row(&table(Hypothesis::Present)?)?;
    let absent = match conditional_row(&table(Hypothesis::Absent)?) {
        Ok(row) => row,
        Err(Error::DegenerateCounts) => match strategy {
            Strategy::Classical => (0.5, 0.5),
            Strategy::Quantum => (0.25, 0.75),
        },
        Err(e) => return Err(e),
    };
    Ok(ConditionalTable::new(present.0, absent.0))
}
