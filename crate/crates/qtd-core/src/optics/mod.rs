//! Exact small-Fock-space model of the linear-optics Bell-state analyzer.
//!
//! The optical system has four modes indexed (a_H, a_V, b_H, b_V): two
//! spatial ports `a` (idler) and `b` (signal), each carrying horizontal and
//! vertical polarization. States live in the bosonic Fock space over these
//! modes with a configurable photon cap (default 2). Optical elements are
//! single-photon transfer matrices applied to states through creation-
//! operator substitution, which handles bosonic symmetrization (and hence
//! two-photon interference) exactly.

mod bsa;
mod element;
mod fock;

pub use bsa::{bell_weights, bsa_outcome_distribution, make_bell, BellKind, DetectorOutcome};
pub use element::{
    analyzer_matrix, apply_element, pbs_hv_matrix, OpticalElement, SpatialPort, MODES,
};
pub use fock::{inner_product, FockState, ModeMatrix, Occupation};

/// Mode indices of the analyzer input space.
pub mod mode {
    /// Horizontal polarization in spatial port `a` (idler).
    pub const A_H: usize = 0;
    /// Vertical polarization in spatial port `a`.
    pub const A_V: usize = 1;
    /// Horizontal polarization in spatial port `b` (signal).
    pub const B_H: usize = 2;
    /// Vertical polarization in spatial port `b`.
    pub const B_V: usize = 3;
}
