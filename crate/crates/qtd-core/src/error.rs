//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter record failed validation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An operation would push a mode occupation past the photon cap.
    #[error("occupation would exceed the photon cap of {cap}")]
    CapExceeded { cap: u8 },

    /// The operation requires a fixed total photon number.
    #[error("expected a {expected}-photon state, found total {found}")]
    PhotonNumber { expected: u32, found: u32 },

    /// The state is not normalized where normalization is required.
    #[error("state not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    /// A mixture component lies outside the one-photon-per-spatial-mode subspace.
    #[error("state outside the one-photon-per-spatial-mode subspace")]
    OutsideBellSubspace,

    /// Conditional probabilities requested from a table with zero total counts.
    #[error("degenerate counts: zero total coincidences")]
    DegenerateCounts,

    /// The visibility correction applies to the quantum strategy only.
    #[error("visibility correction applied to a classical counts table")]
    VisibilityOnClassical,

    /// The coincidence counter requires a time-sorted event stream.
    #[error("event stream is not sorted by time")]
    UnsortedEvents,

    /// A probability argument fell outside [0, 1].
    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(f64),

    /// A prior must be strictly inside (0, 1) for mutual information.
    #[error("prior {0} outside the open interval (0, 1)")]
    PriorRange(f64),

    /// Conditional estimation needs trials covering both hypotheses of one strategy.
    #[error("trial set invalid: {0}")]
    TrialSet(String),

    /// The one-parameter pair-rate fit could not bracket the target crossover.
    #[error("pair-rate fit failed: {0}")]
    FitFailed(String),
}
