//! Optical elements as single-photon transfer matrices, and the analyzer.

use num_complex::Complex64;

use super::fock::{FockState, ModeMatrix};
use super::mode;

/// Number of optical modes: (a_H, a_V, b_H, b_V).
pub const MODES: usize = 4;

/// One of the two spatial ports of the apparatus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpatialPort {
    A,
    B,
}

impl SpatialPort {
    fn h_index(self) -> usize {
        match self {
            SpatialPort::A => mode::A_H,
            SpatialPort::B => mode::B_H,
        }
    }

    fn v_index(self) -> usize {
        match self {
            SpatialPort::A => mode::A_V,
            SpatialPort::B => mode::B_V,
        }
    }
}

/// A linear optical element together with its port binding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpticalElement {
    /// Polarizing beam splitter across ports A and B: transmits H in place,
    /// reflects V into the other port.
    PbsHv,
    /// Half-wave plate in one spatial port at the given angle (radians).
    Hwp { port: SpatialPort, angle: f64 },
    /// Diagonal-basis separator in one port: a half-wave plate at pi/8
    /// followed by an H/V polarizing beam splitter. After this element the
    /// port's (H, V) mode pair reads as its (+, -) detector pair.
    PbsDiag { port: SpatialPort },
}

fn identity() -> ModeMatrix {
    let mut m = [[Complex64::new(0.0, 0.0); MODES]; MODES];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Central-PBS transfer matrix with an explicit reflection phase on the
/// V-polarized (reflected) paths. The analyzer uses phase 1, corresponding
/// to an interferometer tuned so that the joint detection operators take
/// their standard form; other unitary completions permute which Bell states
/// feed which detector pairs.
pub fn pbs_hv_matrix(reflection_phase: Complex64) -> ModeMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[Complex64::new(0.0, 0.0); MODES]; MODES];
    m[mode::A_H][mode::A_H] = one;
    m[mode::B_H][mode::B_H] = one;
    // V reflects into the other spatial port, polarization unchanged.
    m[mode::A_V][mode::B_V] = reflection_phase;
    m[mode::B_V][mode::A_V] = reflection_phase;
    m
}

fn hwp_matrix(port: SpatialPort, angle: f64) -> ModeMatrix {
    let (c, s) = ((2.0 * angle).cos(), (2.0 * angle).sin());
    let mut m = identity();
    let h = port.h_index();
    let v = port.v_index();
    m[h][h] = Complex64::new(c, 0.0);
    m[h][v] = Complex64::new(s, 0.0);
    m[v][h] = Complex64::new(s, 0.0);
    m[v][v] = Complex64::new(-c, 0.0);
    m
}

impl OpticalElement {
    /// Single-photon transfer matrix of this element on the four modes.
    pub fn transfer_matrix(&self) -> ModeMatrix {
        match *self {
            OpticalElement::PbsHv => pbs_hv_matrix(Complex64::new(1.0, 0.0)),
            OpticalElement::Hwp { port, angle } => hwp_matrix(port, angle),
            OpticalElement::PbsDiag { port } => hwp_matrix(port, std::f64::consts::FRAC_PI_8),
        }
    }
}

/// Pass a state through an element. Unitary, photon-number conserving.
pub fn apply_element(state: &FockState, element: &OpticalElement) -> FockState {
    state.apply_matrix(&element.transfer_matrix())
}

fn matmul(a: &ModeMatrix, b: &ModeMatrix) -> ModeMatrix {
    let mut m = [[Complex64::new(0.0, 0.0); MODES]; MODES];
    for i in 0..MODES {
        for j in 0..MODES {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, bk) in b.iter().enumerate() {
                acc += a[i][k] * bk[j];
            }
            m[i][j] = acc;
        }
    }
    m
}

/// Full transfer matrix of the three-PBS Bell-state analyzer.
///
/// A central PBS superposes the two input ports (a_H stays in the A arm,
/// b_V reflects into it; b_H stays in the B arm, a_V reflects into it), then
/// a diagonal separator in each arm splits the |+> and |-> components. With
/// output rows read as detector modes (A+, A-, B+, B-), the rows are the
/// joint detection operators
///
/// ```text
/// d_A+ = (a_H + b_V)/sqrt(2)    d_B+ = (a_V + b_H)/sqrt(2)
/// d_A- = (a_H - b_V)/sqrt(2)    d_B- = (b_H - a_V)/sqrt(2)
/// ```
pub fn analyzer_matrix() -> ModeMatrix {
    let central = OpticalElement::PbsHv.transfer_matrix();
    let diag_a = OpticalElement::PbsDiag {
        port: SpatialPort::A,
    }
    .transfer_matrix();
    let diag_b = OpticalElement::PbsDiag {
        port: SpatialPort::B,
    }
    .transfer_matrix();
    matmul(&matmul(&diag_b, &diag_a), &central)
}
