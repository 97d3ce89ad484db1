//! Fock states over the four optical modes and mode-transform application.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

use super::element::MODES;

/// Occupation numbers (n_aH, n_aV, n_bH, n_bV) of one basis ket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(pub [u8; MODES]);

impl Occupation {
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    /// Product of occupation factorials, exact for the small numbers used here.
    fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| (1..=n as u64).product::<u64>() as f64)
            .product()
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "|{a},{b},{c},{d}>")
    }
}

/// Single-photon transfer matrix over the four modes; rows are output modes,
/// columns input modes.
pub type ModeMatrix = [[Complex64; MODES]; MODES];

/// A (generally unnormalized) state in the bosonic Fock space over the four
/// modes, stored as a map from occupation vector to complex amplitude.
///
/// Every occupation respects the photon cap; constructors reject kets above
/// it rather than truncating.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    amps: BTreeMap<Occupation, Complex64>,
    cap: u8,
}

pub const DEFAULT_CAP: u8 = 2;

impl FockState {
    /// Single normalized basis ket.
    pub fn basis(occ: Occupation) -> Result<Self> {
        Self::basis_with_cap(occ, DEFAULT_CAP)
    }

    pub fn basis_with_cap(occ: Occupation, cap: u8) -> Result<Self> {
        if occ.total() > cap as u32 {
            return Err(Error::CapExceeded { cap });
        }
        let mut amps = BTreeMap::new();
        amps.insert(occ, Complex64::new(1.0, 0.0));
        Ok(FockState { amps, cap })
    }

    /// Build a state from explicit components. Amplitudes are taken as given;
    /// call [`FockState::normalize`] if a unit state is required.
    pub fn from_components(components: &[(Occupation, Complex64)], cap: u8) -> Result<Self> {
        let mut amps: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for &(occ, amp) in components {
            if occ.total() > cap as u32 {
                return Err(Error::CapExceeded { cap });
            }
            *amps.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        Ok(FockState { amps, cap })
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amps
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterate over (occupation, amplitude) pairs in deterministic order.
    pub fn components(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amps.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        for a in self.amps.values_mut() {
            *a /= n;
        }
        Ok(self)
    }

    /// Total photon number if it is sharp across all kets, `None` for
    /// superpositions of different totals.
    pub fn total_photons(&self) -> Option<u32> {
        let mut totals = self.amps.keys().map(|o| o.total());
        let first = totals.next()?;
        if totals.all(|t| t == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Apply a single-photon transfer matrix to the state.
    ///
    /// Each input creation operator is substituted by the corresponding
    /// linear combination of output creation operators and the resulting
    /// polynomial is expanded onto the output Fock basis, carrying the
    /// sqrt(n!) bosonic factors. Photon number is conserved, so the cap
    /// cannot be exceeded.
    pub fn apply_matrix(&self, u: &ModeMatrix) -> FockState {
        let zero = Complex64::new(0.0, 0.0);
        let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, amp) in &self.amps {
            // |n> = prod_k (a_k^dag)^{n_k} / sqrt(prod n_k!) |vac>
            let seed = *amp / occ.factorial_product().sqrt();
            let mut terms: BTreeMap<Occupation, Complex64> = BTreeMap::new();
            terms.insert(Occupation([0; MODES]), seed);
            for k in 0..MODES {
                for _ in 0..occ.0[k] {
                    let mut next: BTreeMap<Occupation, Complex64> = BTreeMap::new();
                    for (o, a) in &terms {
                        for (i, row) in u.iter().enumerate() {
                            let c = row[k];
                            if c == zero {
                                continue;
                            }
                            let mut raised = *o;
                            raised.0[i] += 1;
                            let boost = ((o.0[i] + 1) as f64).sqrt();
                            *next.entry(raised).or_insert(zero) += *a * c * boost;
                        }
                    }
                    terms = next;
                }
            }
            for (o, a) in terms {
                *out.entry(o).or_insert(zero) += a;
            }
        }
        FockState {
            amps: out,
            cap: self.cap,
        }
    }

    /// Probability of finding the system in basis ket `occ`.
    pub fn probability(&self, occ: &Occupation) -> f64 {
        self.amplitude(occ).norm_sqr()
    }
}

/// Hermitian inner product <a|b>.
pub fn inner_product(a: &FockState, b: &FockState) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (occ, amp_a) in a.components() {
        acc += amp_a.conj() * b.amplitude(occ);
    }
    acc
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (occ, amp) in &self.amps {
            writeln!(f, "{occ}: {:+.6} {:+.6}i", amp.re, amp.im)?;
        }
        Ok(())
    }
}
