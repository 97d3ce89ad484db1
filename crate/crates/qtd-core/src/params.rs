//! Shared experiment parameters and the strategy/hypothesis enums.

use crate::error::{Error, Result};
use std::fmt;

/// Detection strategy under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Separable polarization state, local projection onto |H> in the signal arm.
    Classical,
    /// Polarization entanglement, partial Bell-state analyzer.
    Quantum,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Classical => write!(f, "classical"),
            Strategy::Quantum => write!(f, "quantum"),
        }
    }
}

/// Target hypothesis. `Present` is x = 0, `Absent` is x = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    Present,
    Absent,
}

impl Hypothesis {
    /// Conventional index: 0 for present, 1 for absent.
    pub fn x(self) -> u8 {
        match self {
            Hypothesis::Present => 0,
            Hypothesis::Absent => 1,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Present => write!(f, "present"),
            Hypothesis::Absent => write!(f, "absent"),
        }
    }
}

/// All physical symbols of the experiment in one validated record.
///
/// Rates are photons per second incident on the detection system; the
/// detection efficiencies multiply them where counts are formed. The
/// coincidence `window` is the full gate width of the coincidence
/// electronics. `pair_rate` is the true-pair coincidence base rate: the rate
/// of source pairs arriving at the analyzer, so that the detected pair
/// coincidence rate is `eff_idler * eff_signal * pair_rate`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentParams {
    /// Idler photon rate S_A (photons/s) on the isolated arm.
    pub idler_rate: f64,
    /// Signal photon rate S_B (photons/s) returning from the target.
    pub signal_rate: f64,
    /// Unpolarized background photon rate N (photons/s) in the signal arm.
    pub background_rate: f64,
    /// Overall detection efficiency of the idler arm, in [0, 1].
    pub eff_idler: f64,
    /// Overall detection efficiency of the signal arm, in [0, 1].
    pub eff_signal: f64,
    /// Coincidence window (seconds), full gate width.
    pub window: f64,
    /// True-pair coincidence base rate (pairs/s).
    pub pair_rate: f64,
    /// Two-photon interference visibility, in [0, 1].
    pub visibility: f64,
    /// Prior probability that the target is present, p(x = 0).
    pub prior_present: f64,
    /// Acquisition time (seconds) for converting rates to counts.
    pub duration: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            idler_rate: 1000.0,
            signal_rate: 1000.0,
            background_rate: 0.0,
            eff_idler: 1.0,
            eff_signal: 1.0,
            window: 5e-9,
            pair_rate: 100.0,
            visibility: 0.9,
            prior_present: 0.5,
            duration: 1.0,
        }
    }
}

impl ExperimentParams {
    /// Noise-to-signal ratio g = N / S_B. Meaningful only when `signal_rate > 0`.
    pub fn noise_ratio(&self) -> f64 {
        self.background_rate / self.signal_rate
    }

    /// Copy with the background rate set from a noise-to-signal ratio.
    pub fn with_noise_ratio(mut self, g: f64) -> Self {
        self.background_rate = g * self.signal_rate;
        self
    }

    /// Copy with a different coincidence window.
    pub fn with_window(mut self, window: f64) -> Self {
        self.window = window;
        self
    }

    /// Copy with a different pair rate.
    pub fn with_pair_rate(mut self, pair_rate: f64) -> Self {
        self.pair_rate = pair_rate;
        self
    }

    /// Copy with a different acquisition time.
    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = duration;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |name: &str, v: f64| -> Result<()> {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
            Ok(())
        };
        finite_nonneg("idler_rate", self.idler_rate)?;
        finite_nonneg("signal_rate", self.signal_rate)?;
        finite_nonneg("background_rate", self.background_rate)?;
        finite_nonneg("pair_rate", self.pair_rate)?;
        finite_nonneg("duration", self.duration)?;
        let unit = |name: &str, v: f64| -> Result<()> {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
            Ok(())
        };
        unit("eff_idler", self.eff_idler)?;
        unit("eff_signal", self.eff_signal)?;
        unit("visibility", self.visibility)?;
        unit("prior_present", self.prior_present)?;
        if !self.window.is_finite() || self.window <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "window must be > 0, got {}",
                self.window
            )));
        }
        Ok(())
    }
}
