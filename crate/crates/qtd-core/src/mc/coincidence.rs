//! Windowed coincidence matching over a time-sorted event stream.

use crate::error::{Error, Result};
use crate::params::Strategy;

use super::event::{Detector, PhotonEvent, DETECTOR_COUNT};

/// Which logical channel a matched detector pair feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    /// Projection onto the prepared state.
    Phi,
    /// Projection onto the orthogonal subspace.
    Perp,
}

/// Map from unordered detector pairs to counting channels. Pairs outside the
/// map do not form coincidences and do not consume events.
#[derive(Clone, Debug)]
pub struct PairingSpec {
    table: [[Option<Channel>; DETECTOR_COUNT]; DETECTOR_COUNT],
}

impl PairingSpec {
    fn empty() -> Self {
        PairingSpec {
            table: [[None; DETECTOR_COUNT]; DETECTOR_COUNT],
        }
    }

    fn insert(&mut self, a: Detector, b: Detector, ch: Channel) {
        self.table[a.index()][b.index()] = Some(ch);
        self.table[b.index()][a.index()] = Some(ch);
    }

    /// Classical layout: coincidences between the idler detector and each
    /// projection channel of the signal detector. The H projection
    /// identifies the prepared |HH> state; the V projection is orthogonal.
    pub fn classical() -> Self {
        let mut spec = Self::empty();
        spec.insert(Detector::Da, Detector::DbH, Channel::Phi);
        spec.insert(Detector::Da, Detector::DbV, Channel::Perp);
        spec
    }

    /// Quantum layout: the correlated diagonal pairs A+B+ and A-B- identify
    /// the prepared Bell state; every other two-fold event within the
    /// window, including two photons on one (number-resolving) detector,
    /// belongs to the orthogonal subspace.
    pub fn quantum() -> Self {
        let mut spec = Self::empty();
        let dets = [
            Detector::APlus,
            Detector::AMinus,
            Detector::BPlus,
            Detector::BMinus,
        ];
        for (i, &a) in dets.iter().enumerate() {
            for &b in dets.iter().skip(i) {
                spec.insert(a, b, Channel::Perp);
            }
        }
        spec.insert(Detector::APlus, Detector::BPlus, Channel::Phi);
        spec.insert(Detector::AMinus, Detector::BMinus, Channel::Phi);
        spec
    }

    pub fn for_strategy(strategy: Strategy) -> Self {
        match strategy {
            Strategy::Classical => Self::classical(),
            Strategy::Quantum => Self::quantum(),
        }
    }

    pub fn channel(&self, a: Detector, b: Detector) -> Option<Channel> {
        self.table[a.index()][b.index()]
    }
}

/// Coincidence counts per channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoincidenceCounts {
    pub phi: u64,
    pub perp: u64,
}

impl CoincidenceCounts {
    pub fn total(&self) -> u64 {
        self.phi + self.perp
    }

    pub fn add(&mut self, other: CoincidenceCounts) {
        self.phi += other.phi;
        self.perp += other.perp;
    }
}

/// Count coincidences within `|t_i - t_j| <= window` on the detector pairs
/// of `spec`, over a stream sorted by [`PhotonEvent::stream_cmp`].
///
/// Matching is greedy earliest-first with single use: events are scanned in
/// stream order and each unused event pairs with the earliest eligible
/// unused partner; both then drop out of further matching.
pub fn count_coincidences(
    events: &[PhotonEvent],
    window: f64,
    spec: &PairingSpec,
) -> Result<CoincidenceCounts> {
    if window < 0.0 || !window.is_finite() {
        return Err(Error::InvalidParams(format!(
            "window must be finite and >= 0, got {window}"
        )));
    }
    if events
        .windows(2)
        .any(|w| w[0].stream_cmp(&w[1]) == std::cmp::Ordering::Greater)
    {
        return Err(Error::UnsortedEvents);
    }
    let mut used = vec![false; events.len()];
    let mut counts = CoincidenceCounts::default();
    for i in 0..events.len() {
        if used[i] {
            continue;
        }
        for j in i + 1..events.len() {
            if events[j].time - events[i].time > window {
                break;
            }
            if used[j] {
                continue;
            }
            if let Some(ch) = spec.channel(events[i].detector, events[j].detector) {
                used[i] = true;
                used[j] = true;
                match ch {
                    Channel::Phi => counts.phi += 1,
                    Channel::Perp => counts.perp += 1,
                }
                break;
            }
        }
    }
    Ok(counts)
}
