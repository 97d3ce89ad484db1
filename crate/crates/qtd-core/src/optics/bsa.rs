//! Bell states, detector outcomes, and the analyzer outcome distribution.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::element::analyzer_matrix;
use super::fock::{inner_product, FockState, Occupation};
use super::mode;

/// The four maximally entangled two-photon polarization states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellKind {
    /// (|HH> + |VV>)/sqrt(2)
    PhiPlus,
    /// (|HH> - |VV>)/sqrt(2)
    PhiMinus,
    /// (|HV> + |VH>)/sqrt(2)
    PsiPlus,
    /// (|HV> - |VH>)/sqrt(2)
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn index(self) -> usize {
        match self {
            BellKind::PhiPlus => 0,
            BellKind::PhiMinus => 1,
            BellKind::PsiPlus => 2,
            BellKind::PsiMinus => 3,
        }
    }
}

/// Normalized Bell state with one photon in each spatial port.
pub fn make_bell(kind: BellKind) -> FockState {
    let hh = Occupation([1, 0, 1, 0]); // a_H b_H
    let vv = Occupation([0, 1, 0, 1]); // a_V b_V
    let hv = Occupation([1, 0, 0, 1]); // a_H b_V
    let vh = Occupation([0, 1, 1, 0]); // a_V b_H
    let amp = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let comps = match kind {
        BellKind::PhiPlus => [(hh, amp), (vv, amp)],
        BellKind::PhiMinus => [(hh, amp), (vv, -amp)],
        BellKind::PsiPlus => [(hv, amp), (vh, amp)],
        BellKind::PsiMinus => [(hv, amp), (vh, -amp)],
    };
    FockState::from_components(&comps, 2).expect("bell states fit the default cap")
}

/// Joint outcome of the analyzer's four detectors for a two-photon input:
/// either two different detectors fire, or one detector receives both
/// photons (resolved here; the detector model of this module is ideal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetectorOutcome {
    APlusBPlus,
    AMinusBMinus,
    APlusBMinus,
    AMinusBPlus,
    APlusAMinus,
    BPlusBMinus,
    BothAPlus,
    BothAMinus,
    BothBPlus,
    BothBMinus,
}

impl DetectorOutcome {
    pub const ALL: [DetectorOutcome; 10] = [
        DetectorOutcome::APlusBPlus,
        DetectorOutcome::AMinusBMinus,
        DetectorOutcome::APlusBMinus,
        DetectorOutcome::AMinusBPlus,
        DetectorOutcome::APlusAMinus,
        DetectorOutcome::BPlusBMinus,
        DetectorOutcome::BothAPlus,
        DetectorOutcome::BothAMinus,
        DetectorOutcome::BothBPlus,
        DetectorOutcome::BothBMinus,
    ];

    /// True for the detector pairs identifying the phi-plus state.
    pub fn is_phi_channel(self) -> bool {
        matches!(
            self,
            DetectorOutcome::APlusBPlus | DetectorOutcome::AMinusBMinus
        )
    }

    /// Classify a two-photon occupation of the detector modes (A+, A-, B+, B-).
    fn from_occupation(occ: &Occupation) -> Option<DetectorOutcome> {
        match occ.0 {
            [1, 0, 1, 0] => Some(DetectorOutcome::APlusBPlus),
            [0, 1, 0, 1] => Some(DetectorOutcome::AMinusBMinus),
            [1, 0, 0, 1] => Some(DetectorOutcome::APlusBMinus),
            [0, 1, 1, 0] => Some(DetectorOutcome::AMinusBPlus),
            [1, 1, 0, 0] => Some(DetectorOutcome::APlusAMinus),
            [0, 0, 1, 1] => Some(DetectorOutcome::BPlusBMinus),
            [2, 0, 0, 0] => Some(DetectorOutcome::BothAPlus),
            [0, 2, 0, 0] => Some(DetectorOutcome::BothAMinus),
            [0, 0, 2, 0] => Some(DetectorOutcome::BothBPlus),
            [0, 0, 0, 2] => Some(DetectorOutcome::BothBMinus),
            _ => None,
        }
    }
}

/// Full outcome distribution of the three-PBS analyzer for a two-photon
/// input state. Probabilities sum to 1 within numerical precision.
pub fn bsa_outcome_distribution(input: &FockState) -> Result<BTreeMap<DetectorOutcome, f64>> {
    match input.total_photons() {
        Some(2) => {}
        Some(n) => {
            return Err(Error::PhotonNumber {
                expected: 2,
                found: n,
            })
        }
        None => {
            return Err(Error::InvalidParams(
                "input mixes different total photon numbers".into(),
            ))
        }
    }
    let norm = input.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    let out = input.apply_matrix(&analyzer_matrix());
    let mut dist: BTreeMap<DetectorOutcome, f64> = BTreeMap::new();
    for o in DetectorOutcome::ALL {
        dist.insert(o, 0.0);
    }
    for (occ, amp) in out.components() {
        let outcome = DetectorOutcome::from_occupation(occ)
            .expect("two-photon state maps to two-photon occupations");
        *dist.get_mut(&outcome).unwrap() += amp.norm_sqr();
    }
    Ok(dist)
}

/// Decompose a mixture of two-photon states from the one-photon-per-port
/// subspace into Bell-state weights. Weights sum to 1.
pub fn bell_weights(mixture: &[(f64, FockState)]) -> Result<[f64; 4]> {
    if mixture.is_empty() {
        return Err(Error::InvalidParams("empty mixture".into()));
    }
    let total_p: f64 = mixture.iter().map(|(p, _)| p).sum();
    if (total_p - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParams(format!(
            "mixture probabilities sum to {total_p}, expected 1"
        )));
    }
    let bells: Vec<FockState> = BellKind::ALL.iter().map(|&k| make_bell(k)).collect();
    let mut weights = [0.0; 4];
    for (p, state) in mixture {
        if *p < 0.0 {
            return Err(Error::InvalidParams("negative mixture probability".into()));
        }
        for (occ, _) in state.components() {
            let in_subspace = occ.0[mode::A_H] + occ.0[mode::A_V] == 1
                && occ.0[mode::B_H] + occ.0[mode::B_V] == 1;
            if !in_subspace {
                return Err(Error::OutsideBellSubspace);
            }
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm });
        }
        for (k, bell) in bells.iter().enumerate() {
            weights[k] += p * inner_product(bell, state).norm_sqr();
        }
    }
    Ok(weights)
}
