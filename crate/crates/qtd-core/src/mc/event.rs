//! Timestamped detection events.

use std::fmt;
use std::io::{self, Write};

/// A physical detector channel.
///
/// The classical layout uses `Da` for the idler detector and the two
/// projection channels `DbH`/`DbV` of the signal detector. The quantum
/// layout uses the four diagonal-basis detectors behind the analyzer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Detector {
    Da = 0,
    DbH = 1,
    DbV = 2,
    APlus = 3,
    AMinus = 4,
    BPlus = 5,
    BMinus = 6,
}

/// Number of detector channels across both layouts.
pub const DETECTOR_COUNT: usize = 7;

/// Which physical arm a detector sits in, for efficiency accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectorArm {
    Idler,
    Signal,
}

impl Detector {
    pub const ALL: [Detector; DETECTOR_COUNT] = [
        Detector::Da,
        Detector::DbH,
        Detector::DbV,
        Detector::APlus,
        Detector::AMinus,
        Detector::BPlus,
        Detector::BMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn arm(self) -> DetectorArm {
        match self {
            Detector::Da | Detector::APlus | Detector::AMinus => DetectorArm::Idler,
            Detector::DbH | Detector::DbV | Detector::BPlus | Detector::BMinus => {
                DetectorArm::Signal
            }
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Detector::Da => "DA",
            Detector::DbH => "DB_H",
            Detector::DbV => "DB_V",
            Detector::APlus => "A+",
            Detector::AMinus => "A-",
            Detector::BPlus => "B+",
            Detector::BMinus => "B-",
        };
        write!(f, "{s}")
    }
}

/// Diagnostic tag recording where a photon came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// One photon of a source pair.
    Pair,
    /// Unpolarized background photon.
    Background,
    /// Uncorrelated source photon whose twin never reaches detection.
    StraySignal,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::Pair => "pair",
            Origin::Background => "background",
            Origin::StraySignal => "stray_signal",
        };
        write!(f, "{s}")
    }
}

/// One detection: a time (seconds from acquisition start), the detector
/// that fired, and the diagnostic origin tag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonEvent {
    pub time: f64,
    pub detector: Detector,
    pub origin: Origin,
}

impl PhotonEvent {
    /// Deterministic stream order: by time, ties broken by detector.
    pub fn stream_cmp(&self, other: &PhotonEvent) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.detector.cmp(&other.detector))
    }
}

/// Write a stream in the text dump format: one event per line,
/// `time_seconds detector origin`, in stream order.
pub fn write_stream<W: Write>(mut w: W, events: &[PhotonEvent]) -> io::Result<()> {
    for e in events {
        writeln!(w, "{:.12e} {} {}", e.time, e.detector, e.origin)?;
    }
    Ok(())
}
