//! A desk-scale laboratory for linear-optics quantum target detection.
//!
//! A photon-pair source probes for a target immersed in unpolarized
//! background light. Two detection strategies are compared: a classical one
//! using a separable polarization state and a local projective measurement,
//! and a quantum one using polarization entanglement and a partial
//! Bell-state analyzer built from three polarizing beam splitters. Both rely
//! on two-photon coincidence detection; the figure of merit is the mutual
//! information between the measurement outcome and target presence.
//!
//! The crate is organized in four layers:
//!
//! * [`optics`] — exact small-Fock-space model of the analyzer: states,
//!   optical elements, detection operators, and outcome distributions for
//!   arbitrary inputs of up to two photons.
//! * [`noise`] — closed-form model of signal and accidental coincidence
//!   rates for both strategies and both hypotheses, including the
//!   two-photon-interference visibility correction.
//! * [`mc`] — event-level stochastic simulator: timestamped photon
//!   detections, windowed coincidence matching, and conditional-probability
//!   estimation with uncertainties. An independent check of [`noise`].
//! * [`info`] — entropies, mutual information, advantage curves over the
//!   noise/signal ratio, and the quantum/classical crossover finder.

pub mod error;
pub mod info;
pub mod mc;
pub mod noise;
pub mod optics;
pub mod params;

pub use error::{Error, Result};
pub use info::{AdvantagePoint, CrossoverOutcome, CrossoverResult};
pub use mc::{
    CoincidenceCounts, Detector, JitterModel, Origin, PairingSpec, PhotonEvent, TrialRecord,
};
pub use noise::{ConditionalTable, CountsTable, SinglesRates};
pub use optics::{BellKind, DetectorOutcome, FockState, Occupation, OpticalElement};
pub use params::{ExperimentParams, Hypothesis, Strategy};
