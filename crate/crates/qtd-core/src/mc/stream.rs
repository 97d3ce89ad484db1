//! Stochastic photon-event generation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Poisson};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::optics::{bsa_outcome_distribution, make_bell, BellKind, DetectorOutcome};
use crate::params::{ExperimentParams, Hypothesis, Strategy};

use super::event::{Detector, DetectorArm, Origin, PhotonEvent};

/// Per-detection Gaussian timing spread of the detectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JitterModel {
    /// Standard deviation in seconds.
    pub sigma: f64,
}

impl Default for JitterModel {
    fn default() -> Self {
        JitterModel { sigma: 50e-12 }
    }
}

impl JitterModel {
    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::InvalidParams(format!(
                "jitter sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Joint detector-pair distributions for source pairs at the analyzer,
/// derived once from the exact optics model.
struct QuantumRouting {
    /// Outcomes of a successful Bell measurement on the prepared state.
    phi: Vec<((Detector, Detector), f64)>,
    /// Outcomes when the pair behaves as unpolarized light: even mixture of
    /// the four Bell states.
    mixed: Vec<((Detector, Detector), f64)>,
}

fn outcome_to_detectors(outcome: DetectorOutcome) -> (Detector, Detector) {
    use Detector::*;
    match outcome {
        DetectorOutcome::APlusBPlus => (APlus, BPlus),
        DetectorOutcome::AMinusBMinus => (AMinus, BMinus),
        DetectorOutcome::APlusBMinus => (APlus, BMinus),
        DetectorOutcome::AMinusBPlus => (AMinus, BPlus),
        DetectorOutcome::APlusAMinus => (APlus, AMinus),
        DetectorOutcome::BPlusBMinus => (BPlus, BMinus),
        DetectorOutcome::BothAPlus => (APlus, APlus),
        DetectorOutcome::BothAMinus => (AMinus, AMinus),
        DetectorOutcome::BothBPlus => (BPlus, BPlus),
        DetectorOutcome::BothBMinus => (BMinus, BMinus),
    }
}

fn quantum_routing() -> &'static QuantumRouting {
    static ROUTING: OnceLock<QuantumRouting> = OnceLock::new();
    ROUTING.get_or_init(|| {
        let collect = |weights: Vec<(DetectorOutcome, f64)>| -> Vec<((Detector, Detector), f64)> {
            weights
                .into_iter()
                .filter(|(_, p)| *p > 1e-12)
                .map(|(o, p)| (outcome_to_detectors(o), p))
                .collect()
        };
        let phi_dist = bsa_outcome_distribution(&make_bell(BellKind::PhiPlus))
            .expect("prepared state is a valid two-photon input");
        let phi = collect(phi_dist.into_iter().collect());

        let mut mixed_acc: Vec<(DetectorOutcome, f64)> =
            DetectorOutcome::ALL.iter().map(|&o| (o, 0.0)).collect();
        for &kind in &BellKind::ALL {
            let dist = bsa_outcome_distribution(&make_bell(kind)).unwrap();
            for (o, p) in mixed_acc.iter_mut() {
                *p += 0.25 * dist[o];
            }
        }
        QuantumRouting {
            phi,
            mixed: collect(mixed_acc),
        }
    })
}

fn sample_weighted<R: Rng>(
    rng: &mut R,
    table: &[((Detector, Detector), f64)],
) -> (Detector, Detector) {
    let mut u: f64 = rng.random();
    for &(pair, p) in table {
        if u < p {
            return pair;
        }
        u -= p;
    }
    table.last().expect("non-empty routing table").0
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite mean");
    dist.sample(rng) as u64
}

struct EventBuilder {
    events: Vec<PhotonEvent>,
    duration: f64,
    jitter: Option<Normal<f64>>,
}

impl EventBuilder {
    fn push<R: Rng>(&mut self, rng: &mut R, time: f64, detector: Detector, origin: Origin) {
        let t = match &self.jitter {
            Some(n) => (time + n.sample(rng)).clamp(0.0, self.duration),
            None => time,
        };
        self.events.push(PhotonEvent {
            time: t,
            detector,
            origin,
        });
    }
}

/// Efficiency of the arm a detector belongs to.
fn arm_efficiency(params: &ExperimentParams, d: Detector) -> f64 {
    match d.arm() {
        DetectorArm::Idler => params.eff_idler,
        DetectorArm::Signal => params.eff_signal,
    }
}

/// A single unpolarized photon entering one input port of the analyzer:
/// its polarization picks the output arm of the central PBS, the diagonal
/// measurement then splits evenly. The result is a uniform choice among the
/// four detectors, with the arm fixed by the polarization draw.
fn route_unpolarized_quantum<R: Rng>(rng: &mut R, entry: DetectorArm) -> Detector {
    let horizontal = rng.random_bool(0.5);
    let plus = rng.random_bool(0.5);
    // H transmits (stays in the entry arm), V reflects into the other arm.
    let out_arm = if horizontal {
        entry
    } else {
        match entry {
            DetectorArm::Idler => DetectorArm::Signal,
            DetectorArm::Signal => DetectorArm::Idler,
        }
    };
    match (out_arm, plus) {
        (DetectorArm::Idler, true) => Detector::APlus,
        (DetectorArm::Idler, false) => Detector::AMinus,
        (DetectorArm::Signal, true) => Detector::BPlus,
        (DetectorArm::Signal, false) => Detector::BMinus,
    }
}

/// Generate the detection-event stream of one acquisition.
///
/// Pair emissions are Poisson with rate `pair_rate`; the two photons share
/// an emission time and receive independent detector jitter. Uncorrelated
/// source photons make up the rest of the `idler_rate`/`signal_rate`
/// singles, and background photons arrive at `background_rate` with a
/// uniformly random polarization. Every photon survives with its detection
/// arm's efficiency. Under the absent hypothesis the signal path is
/// blocked: signal strays and the pair correlation disappear (the idler
/// singles rate is unchanged) while the background remains.
///
/// Quantum-layout routing comes from the exact analyzer model: surviving
/// pairs draw a joint detector pair from the prepared-state distribution
/// with probability `visibility`, otherwise from the unpolarized (even
/// Bell mixture) distribution; lone photons route as unpolarized singles.
/// Classical-layout signal photons carry |H> and land in the H projection
/// channel; background photons split evenly between the H and V channels.
///
/// Identical arguments produce a bit-identical stream.
pub fn generate_stream(
    params: &ExperimentParams,
    strategy: Strategy,
    hypothesis: Hypothesis,
    jitter: &JitterModel,
    seed: u64,
) -> Result<Vec<PhotonEvent>> {
    params.validate()?;
    jitter.validate()?;
    if params.duration.is_nan() || params.duration <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "duration must be > 0, got {}",
            params.duration
        )));
    }
    if params.pair_rate > params.idler_rate || params.pair_rate > params.signal_rate {
        return Err(Error::InvalidParams(
            "pair_rate cannot exceed the singles rate of either arm".into(),
        ));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let duration = params.duration;
    let mut builder = EventBuilder {
        events: Vec::new(),
        duration,
        jitter: if jitter.sigma > 0.0 {
            Some(Normal::new(0.0, jitter.sigma).expect("validated sigma"))
        } else {
            None
        },
    };

    let pairs_active = hypothesis == Hypothesis::Present;

    // Source pairs.
    if pairs_active && params.pair_rate > 0.0 {
        let n = poisson_count(&mut rng, params.pair_rate * duration);
        let routing = quantum_routing();
        for _ in 0..n {
            let t = rng.random_range(0.0..duration);
            match strategy {
                Strategy::Classical => {
                    // Product state |HH>: idler to DA, signal through the
                    // H projection.
                    if rng.random_bool(params.eff_idler) {
                        builder.push(&mut rng, t, Detector::Da, Origin::Pair);
                    }
                    if rng.random_bool(params.eff_signal) {
                        builder.push(&mut rng, t, Detector::DbH, Origin::Pair);
                    }
                }
                Strategy::Quantum => {
                    let table = if rng.random_bool(params.visibility) {
                        &routing.phi
                    } else {
                        &routing.mixed
                    };
                    let (d1, d2) = sample_weighted(&mut rng, table);
                    let s1 = rng.random_bool(arm_efficiency(params, d1));
                    let s2 = rng.random_bool(arm_efficiency(params, d2));
                    match (s1, s2) {
                        (true, true) => {
                            builder.push(&mut rng, t, d1, Origin::Pair);
                            builder.push(&mut rng, t, d2, Origin::Pair);
                        }
                        // A lone survivor of an entangled pair is
                        // unpolarized; its sampled detector already reflects
                        // that marginal.
                        (true, false) => builder.push(&mut rng, t, d1, Origin::Pair),
                        (false, true) => builder.push(&mut rng, t, d2, Origin::Pair),
                        (false, false) => {}
                    }
                }
            }
        }
    }

    // Uncorrelated idler-side singles. With the target absent the pair
    // correlation is gone but the idler arm still sees its full rate.
    let stray_idler_rate = if pairs_active {
        params.idler_rate - params.pair_rate
    } else {
        params.idler_rate
    };
    {
        let n = poisson_count(&mut rng, stray_idler_rate * duration);
        for _ in 0..n {
            let t = rng.random_range(0.0..duration);
            let detector = match strategy {
                Strategy::Classical => Detector::Da,
                Strategy::Quantum => route_unpolarized_quantum(&mut rng, DetectorArm::Idler),
            };
            if rng.random_bool(arm_efficiency(params, detector)) {
                builder.push(&mut rng, t, detector, Origin::StraySignal);
            }
        }
    }

    // Uncorrelated signal-side singles; blocked under the absent hypothesis.
    if pairs_active {
        let n = poisson_count(&mut rng, (params.signal_rate - params.pair_rate) * duration);
        for _ in 0..n {
            let t = rng.random_range(0.0..duration);
            let detector = match strategy {
                Strategy::Classical => Detector::DbH, // |H>-polarized source light
                Strategy::Quantum => route_unpolarized_quantum(&mut rng, DetectorArm::Signal),
            };
            if rng.random_bool(arm_efficiency(params, detector)) {
                builder.push(&mut rng, t, detector, Origin::StraySignal);
            }
        }
    }

    // Unpolarized background in the signal port.
    {
        let n = poisson_count(&mut rng, params.background_rate * duration);
        for _ in 0..n {
            let t = rng.random_range(0.0..duration);
            let detector = match strategy {
                Strategy::Classical => {
                    if rng.random_bool(0.5) {
                        Detector::DbH
                    } else {
                        Detector::DbV
                    }
                }
                Strategy::Quantum => route_unpolarized_quantum(&mut rng, DetectorArm::Signal),
            };
            if rng.random_bool(arm_efficiency(params, detector)) {
                builder.push(&mut rng, t, detector, Origin::Background);
            }
        }
    }

    let mut events = builder.events;
    events.sort_unstable_by(PhotonEvent::stream_cmp);
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ExperimentParams {
        ExperimentParams {
            pair_rate: 100.0,
            duration: 20.0,
            ..Default::default()
        }
    }

    #[test]
    fn stream_is_sorted_and_bounded() {
        let p = params().with_noise_ratio(2.0);
        let events = generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            42,
        )
        .unwrap();
        assert!(!events.is_empty());
        for w in events.windows(2) {
            assert!(w[0].stream_cmp(&w[1]) != std::cmp::Ordering::Greater);
        }
        for e in &events {
            assert!(e.time >= 0.0 && e.time <= p.duration);
        }
    }

    #[test]
    fn identical_seeds_reproduce_bit_identical_streams() {
        let p = params().with_noise_ratio(1.0);
        let a = generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            7,
        )
        .unwrap();
        let b = generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            7,
        )
        .unwrap();
        assert_eq!(a, b);
        let c = generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            8,
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn no_background_means_empty_v_channel() {
        let p = params();
        let events = generate_stream(
            &p,
            Strategy::Classical,
            Hypothesis::Present,
            &JitterModel::default(),
            3,
        )
        .unwrap();
        assert!(events.iter().all(|e| e.detector != Detector::DbV));
    }

    #[test]
    fn absent_background_splits_evenly_between_projections() {
        let p = ExperimentParams {
            duration: 20.0,
            ..params().with_noise_ratio(1000.0)
        };
        let events = generate_stream(
            &p,
            Strategy::Classical,
            Hypothesis::Absent,
            &JitterModel::default(),
            9,
        )
        .unwrap();
        let h = events
            .iter()
            .filter(|e| e.detector == Detector::DbH)
            .count() as f64;
        let v = events
            .iter()
            .filter(|e| e.detector == Detector::DbV)
            .count() as f64;
        let n = h + v;
        assert!(n > 1e4);
        // 3-sigma binomial band around the even split.
        let sigma = (n * 0.25).sqrt();
        assert!((h - n / 2.0).abs() < 3.0 * sigma, "h = {h}, n = {n}");
    }

    #[test]
    fn unpolarized_quantum_routing_is_one_to_three() {
        // Background only, no pairs: phi-channel vs orthogonal accidentals
        // in ratio 1:3.
        let p = ExperimentParams {
            pair_rate: 0.0,
            duration: 30.0,
            ..ExperimentParams::default().with_noise_ratio(2000.0)
        };
        let events = generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            21,
        )
        .unwrap();
        let spec = super::super::coincidence::PairingSpec::quantum();
        let counts =
            super::super::coincidence::count_coincidences(&events, p.window / 2.0, &spec).unwrap();
        let n = counts.total() as f64;
        assert!(n > 300.0, "need enough accidentals, got {n}");
        let sigma = (n * 0.25 * 0.75).sqrt();
        assert!(
            ((counts.phi as f64) - 0.25 * n).abs() < 3.0 * sigma,
            "phi = {}, total = {}",
            counts.phi,
            counts.total()
        );
    }

    #[test]
    fn pair_rate_above_singles_is_rejected() {
        let p = ExperimentParams {
            pair_rate: 2000.0,
            ..params()
        };
        assert!(generate_stream(
            &p,
            Strategy::Quantum,
            Hypothesis::Present,
            &JitterModel::default(),
            1
        )
        .is_err());
    }

    #[test]
    fn mixed_routing_table_is_even_over_eight_outcomes() {
        let routing = quantum_routing();
        assert_eq!(routing.phi.len(), 2);
        for &(_, p) in &routing.phi {
            assert!((p - 0.5).abs() < 1e-12);
        }
        assert_eq!(routing.mixed.len(), 8);
        for &(_, p) in &routing.mixed {
            assert!((p - 0.125).abs() < 1e-12);
        }
        let phi_share: f64 = routing
            .mixed
            .iter()
            .filter(|((a, b), _)| {
                matches!(
                    (a, b),
                    (Detector::APlus, Detector::BPlus) | (Detector::AMinus, Detector::BMinus)
                )
            })
            .map(|&(_, p)| p)
            .sum();
        assert!((phi_share - 0.25).abs() < 1e-12);
    }
}
