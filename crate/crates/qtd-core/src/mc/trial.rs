//! Seeded acquisition trials and conditional-probability estimation.

use crate::error::{Error, Result};
use crate::noise::ConditionalTable;
use crate::params::{ExperimentParams, Hypothesis, Strategy};

use super::coincidence::{count_coincidences, CoincidenceCounts, PairingSpec};
use super::event::DETECTOR_COUNT;
use super::stream::{generate_stream, JitterModel};

/// One simulated acquisition: parameters, labels, seed, and the resulting
/// coincidence and singles counts. Reproducible bit-exactly from
/// `(params, strategy, hypothesis, jitter, seed)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialRecord {
    pub params: ExperimentParams,
    pub strategy: Strategy,
    pub hypothesis: Hypothesis,
    pub seed: u64,
    pub counts: CoincidenceCounts,
    /// Detection events per detector channel, indexed by `Detector::index`.
    pub events_per_detector: [u64; DETECTOR_COUNT],
}

/// Derive a per-trial seed from a master seed and a trial index.
///
/// Counter-based splitmix64 finalizer over `master + (index+1)*phi64`, so
/// parallel and serial execution orders agree on every trial's stream.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run one acquisition: generate the stream and count coincidences.
///
/// The analytic model's `window` is the full gate width of the coincidence
/// electronics, so the symmetric matcher runs at half that: two detections
/// count as joint when they fall inside a common gate of width `window`,
/// i.e. `|t_i - t_j| <= window/2`. This is what makes the simulated
/// accidental rate reproduce `c_A * c_B * window`.
pub fn run_trial(
    params: &ExperimentParams,
    strategy: Strategy,
    hypothesis: Hypothesis,
    jitter: &JitterModel,
    seed: u64,
) -> Result<TrialRecord> {
    let events = generate_stream(params, strategy, hypothesis, jitter, seed)?;
    let spec = PairingSpec::for_strategy(strategy);
    let counts = count_coincidences(&events, params.window / 2.0, &spec)?;
    let mut events_per_detector = [0u64; DETECTOR_COUNT];
    for e in &events {
        events_per_detector[e.detector.index()] += 1;
    }
    Ok(TrialRecord {
        params: *params,
        strategy,
        hypothesis,
        seed,
        counts,
        events_per_detector,
    })
}

/// Binomial standard error sqrt(p(1-p)/n).
pub fn binomial_se(p: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Pool trial counts into conditional-probability estimates with binomial
/// standard errors. The trials must all belong to one strategy and must
/// cover both hypotheses; zero pooled coincidences for either hypothesis is
/// reported as degenerate.
pub fn estimate_conditionals(trials: &[TrialRecord]) -> Result<ConditionalTable> {
    let first = trials
        .first()
        .ok_or_else(|| Error::TrialSet("no trials given".into()))?;
    if trials.iter().any(|t| t.strategy != first.strategy) {
        return Err(Error::TrialSet("trials mix strategies".into()));
    }
    let pooled = |hyp: Hypothesis| -> CoincidenceCounts {
        let mut acc = CoincidenceCounts::default();
        for t in trials.iter().filter(|t| t.hypothesis == hyp) {
            acc.add(t.counts);
        }
        acc
    };
    let present = pooled(Hypothesis::Present);
    let absent = pooled(Hypothesis::Absent);
    if !trials.iter().any(|t| t.hypothesis == Hypothesis::Present)
        || !trials.iter().any(|t| t.hypothesis == Hypothesis::Absent)
    {
        return Err(Error::TrialSet("trials must cover both hypotheses".into()));
    }
    if present.total() == 0 || absent.total() == 0 {
        return Err(Error::DegenerateCounts);
    }
    let p_present = present.phi as f64 / present.total() as f64;
    let p_absent = absent.phi as f64 / absent.total() as f64;
    Ok(ConditionalTable {
        phi_given_present: p_present,
        phi_given_absent: p_absent,
        se_present: Some(binomial_se(p_present, present.total())),
        se_absent: Some(binomial_se(p_absent, absent.total())),
    })
}
