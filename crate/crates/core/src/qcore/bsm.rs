//! Linear-optics Bell-state measurement at Charlie.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::density::TwoQubitDensity;

/// What Charlie announces for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellOutcome {
    PsiPlus,
    PsiMinus,
    NoClick,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 3] = [
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
        BellOutcome::NoClick,
    ];
}

/// Outcome distribution `(pΨ+, pΨ−, pNoClick)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeProbs {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub no_click: f64,
}

impl OutcomeProbs {
    pub fn get(&self, outcome: BellOutcome) -> f64 {
        match outcome {
            BellOutcome::PsiPlus => self.psi_plus,
            BellOutcome::PsiMinus => self.psi_minus,
            BellOutcome::NoClick => self.no_click,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.psi_plus, self.psi_minus, self.no_click]
    }

    pub fn total(&self) -> f64 {
        self.psi_plus + self.psi_minus + self.no_click
    }
}

/// `(|01⟩ ± e^{iφ}|10⟩)/√2`
pub fn psi_vector(sign: f64, bsm_phase_offset: f64) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    [
        zero,
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(sign * FRAC_1_SQRT_2, bsm_phase_offset),
        zero,
    ]
}

/// Exact outcome probabilities of the Ψ±-resolving BSM.
///
/// Everything outside the Ψ± projectors is reported as `NoClick`.
pub fn bsm_outcome_probs(rho: &TwoQubitDensity, bsm_phase_offset: f64) -> OutcomeProbs {
    let clamp = |p: f64| p.clamp(0.0, 1.0);
    let psi_plus = clamp(rho.projection(&psi_vector(1.0, bsm_phase_offset)));
    let psi_minus = clamp(rho.projection(&psi_vector(-1.0, bsm_phase_offset)));
    // Tr ρ is 1 up to round-off; clicks never exceed it
    let no_click = clamp(1.0 - psi_plus - psi_minus);
    OutcomeProbs {
        psi_plus,
        psi_minus,
        no_click,
    }
}
