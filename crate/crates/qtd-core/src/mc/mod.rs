//! Event-level stochastic simulator.
//!
//! Generates timestamped photon detections for either strategy under either
//! hypothesis, counts coincidences inside a window, and estimates the
//! conditional probabilities with binomial uncertainties. Runs with matched
//! parameters cross-check the closed-form rates of [`crate::noise`].

mod coincidence;
mod event;
mod stream;
mod trial;
pub mod validate;

pub use coincidence::{count_coincidences, Channel, CoincidenceCounts, PairingSpec};
pub use event::{write_stream, Detector, DetectorArm, Origin, PhotonEvent};
pub use stream::{generate_stream, JitterModel};
pub use trial::{derive_seed, estimate_conditionals, run_trial, TrialRecord};
