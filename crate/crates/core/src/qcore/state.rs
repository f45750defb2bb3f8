//! Single-qubit preparation and the frame-rotation channel.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;

use num_complex::Complex64;

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    /// Canonical ordering used for setting grids.
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    /// X and Y are the conjugate (frame-dependent) bases.
    pub fn is_conjugate(self) -> bool {
        !matches!(self, Basis::Z)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Basis::Z => "Z",
            Basis::X => "X",
            Basis::Y => "Y",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Plus,
    Minus,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Plus, Bit::Minus];

    /// +1 for `Plus`, -1 for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Bit::Plus => 1.0,
            Bit::Minus => -1.0,
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bit::Plus => "+",
            Bit::Minus => "-",
        })
    }
}

/// Which of the six BB84-style states a party prepares.
///
/// `phase_theta` turns on the phase-freedom variant of the `X+` check state,
/// `(|0⟩ + e^{iθ}|1⟩)/√2`. It has no effect on any other state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePrepSpec {
    pub basis: Basis,
    pub bit: Bit,
    pub phase_theta: Option<f64>,
}

impl StatePrepSpec {
    pub fn new(basis: Basis, bit: Bit) -> Self {
        StatePrepSpec {
            basis,
            bit,
            phase_theta: None,
        }
    }

    pub fn with_phase(mut self, theta: f64) -> Self {
        self.phase_theta = Some(wrap_angle(theta));
        self
    }

    /// True when this is the θ-variant check state.
    pub fn uses_phase_variant(&self) -> bool {
        self.phase_theta.is_some() && self.basis == Basis::X && self.bit == Bit::Plus
    }
}

impl fmt::Display for StatePrepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.basis, self.bit)?;
        if self.uses_phase_variant() {
            write!(f, "(θ={:.4})", self.phase_theta.unwrap_or_default())?;
        }
        Ok(())
    }
}

/// A normalized single-qubit pure state `amp0|0⟩ + amp1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubit {
    pub amp0: Complex64,
    pub amp1: Complex64,
}

impl PureQubit {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Self {
        PureQubit { amp0, amp1 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.amp0, self.amp1]
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PureQubit) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }
}

/// Prepare the state named by `spec`.
pub fn make_state(spec: StatePrepSpec) -> PureQubit {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if spec.uses_phase_variant() {
        let theta = spec.phase_theta.unwrap_or_default();
        return PureQubit::new(h, Complex64::from_polar(FRAC_1_SQRT_2, theta));
    }
    let s = spec.bit.sign();
    match spec.basis {
        Basis::Z => match spec.bit {
            Bit::Plus => PureQubit::new(one, zero),
            Bit::Minus => PureQubit::new(zero, one),
        },
        Basis::X => PureQubit::new(h, h * s),
        Basis::Y => PureQubit::new(h, Complex64::new(0.0, FRAC_1_SQRT_2 * s)),
    }
}

/// Apply the relative-phase unitary `diag(1, e^{iβ})`.
///
/// Leaves Z invariant and maps X → cos β·X + sin β·Y in the receiver's frame.
pub fn apply_frame_rotation(state: PureQubit, beta: f64) -> PureQubit {
    PureQubit::new(state.amp0, state.amp1 * Complex64::from_polar(1.0, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn six_states_match_definitions() {
        let z = make_state(StatePrepSpec::new(Basis::Z, Bit::Plus));
        assert!(close(z.amp0, Complex64::new(1.0, 0.0)) && close(z.amp1, Complex64::new(0.0, 0.0)));

        let zm = make_state(StatePrepSpec::new(Basis::Z, Bit::Minus));
        assert!(
            close(zm.amp0, Complex64::new(0.0, 0.0)) && close(zm.amp1, Complex64::new(1.0, 0.0))
        );

        let xm = make_state(StatePrepSpec::new(Basis::X, Bit::Minus));
        assert!(close(xm.amp0, Complex64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(xm.amp1, Complex64::new(-FRAC_1_SQRT_2, 0.0)));

        let ym = make_state(StatePrepSpec::new(Basis::Y, Bit::Minus));
        assert!(close(ym.amp1, Complex64::new(0.0, -FRAC_1_SQRT_2)));

        for b in Basis::ALL {
            for bit in Bit::ALL {
                let s = make_state(StatePrepSpec::new(b, bit));
                assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn opposite_bits_are_orthogonal() {
        for b in Basis::ALL {
            let p = make_state(StatePrepSpec::new(b, Bit::Plus));
            let m = make_state(StatePrepSpec::new(b, Bit::Minus));
            assert!(p.inner(&m).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_variant_at_quarter_turn_is_y_plus() {
        let s = make_state(StatePrepSpec::new(Basis::X, Bit::Plus).with_phase(FRAC_PI_2));
        let y = make_state(StatePrepSpec::new(Basis::Y, Bit::Plus));
        assert!(close(s.amp0, y.amp0) && close(s.amp1, y.amp1));
    }

    #[test]
    fn phase_variant_ignored_on_other_states() {
        let spec = StatePrepSpec::new(Basis::X, Bit::Minus).with_phase(1.0);
        assert!(!spec.uses_phase_variant());
        let s = make_state(spec);
        assert!(close(s.amp1, Complex64::new(-FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn rotation_examples() {
        let xp = make_state(StatePrepSpec::new(Basis::X, Bit::Plus));
        let same = apply_frame_rotation(xp, 0.0);
        assert!(close(same.amp0, xp.amp0) && close(same.amp1, xp.amp1));

        let rotated = apply_frame_rotation(xp, FRAC_PI_2);
        let y = make_state(StatePrepSpec::new(Basis::Y, Bit::Plus));
        assert!(close(rotated.amp0, y.amp0) && close(rotated.amp1, y.amp1));

        let zp = make_state(StatePrepSpec::new(Basis::Z, Bit::Plus));
        let zr = apply_frame_rotation(zp, 1.234);
        assert!(close(zr.amp0, zp.amp0) && close(zr.amp1, zp.amp1));
    }

    #[test]
    fn rotated_x_has_cos_beta_x_component() {
        // ⟨X⟩ = 2 Re(amp0* amp1) on a rotated |X+⟩ equals cos β, ⟨Y⟩ = sin β
        let xp = make_state(StatePrepSpec::new(Basis::X, Bit::Plus));
        for k in 0..24 {
            let beta = k as f64 * PI / 12.0;
            let r = apply_frame_rotation(xp, beta);
            let c = r.amp0.conj() * r.amp1;
            assert!((2.0 * c.re - beta.cos()).abs() < 1e-12);
            assert!((2.0 * c.im - beta.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!((wrap_angle(-FRAC_PI_2) - 1.5 * PI).abs() < 1e-12);
        assert!(wrap_angle(TAU) < 1e-12);
        assert!(wrap_angle(-1e-300) < TAU);
    }
}
