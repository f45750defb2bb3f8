//! Expectation values and QBERs from coincidence counts.

use crate::error::{QkdError, Result};
use crate::qcore::{Basis, BellOutcome, Bit};
use crate::simkit::{CountTable, SettingOutcome};

/// A two-party correlation `⟨M_A N_B⟩` estimated from Ψ± clicks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub value: f64,
    pub stderr: f64,
    /// Ψ± clicks in the denominator.
    pub n_effective: f64,
}

impl Expectation {
    /// Each click is a ±1 variable with mean `value`.
    fn from_sums(signed: f64, clicks: f64) -> Self {
        let value = signed / clicks;
        Expectation {
            value,
            stderr: ((1.0 - value * value).max(0.0) / clicks).sqrt(),
            n_effective: clicks,
        }
    }
}

/// Sign attached to an announcement when correlating bits.
///
/// In the conjugate bases Ψ+ heralds equal bits and Ψ− opposite ones, so
/// Ψ− counts enter with the lower sign. In Z both announcements herald
/// opposite bits and share a sign.
pub fn announcement_sign(outcome: BellOutcome, basis_a: Basis, basis_b: Basis) -> f64 {
    match outcome {
        BellOutcome::PsiPlus => 1.0,
        BellOutcome::PsiMinus if basis_a == Basis::Z && basis_b == Basis::Z => 1.0,
        BellOutcome::PsiMinus => -1.0,
        BellOutcome::NoClick => 0.0,
    }
}

fn lookup<'a>(
    table: &'a CountTable,
    alice: (Basis, Bit),
    bob: (Basis, Bit),
    what: &str,
) -> Result<&'a SettingOutcome> {
    table.get(alice, bob).ok_or_else(|| {
        QkdError::MissingSettings(format!(
            "{what} (needs {}{}⊗{}{})",
            alice.0, alice.1, bob.0, bob.1
        ))
    })
}

/// Signed and total Ψ± clicks of one setting.
fn signed_clicks(o: &SettingOutcome, basis_a: Basis, basis_b: Basis) -> (f64, f64) {
    let parity = o.setting.alice.bit.sign() * o.setting.bob.bit.sign();
    let signed = parity
        * (announcement_sign(BellOutcome::PsiPlus, basis_a, basis_b) * o.n_psi_plus
            + announcement_sign(BellOutcome::PsiMinus, basis_a, basis_b) * o.n_psi_minus);
    (signed, o.clicks())
}

/// `⟨M_A N_B⟩` from all four `(i, j)` settings of the basis pair, normalized
/// by the Ψ± clicks of those four settings.
pub fn expectation_full(table: &CountTable, basis_a: Basis, basis_b: Basis) -> Result<Expectation> {
    let label = format!("<{basis_a}{basis_b}>");
    let mut signed = 0.0;
    let mut clicks = 0.0;
    for i in Bit::ALL {
        for j in Bit::ALL {
            let o = lookup(table, (basis_a, i), (basis_b, j), &label)?;
            let (s, n) = signed_clicks(o, basis_a, basis_b);
            signed += s;
            clicks += n;
        }
    }
    if clicks <= 0.0 {
        return Err(QkdError::NoClicks(label));
    }
    Ok(Expectation::from_sums(signed, clicks))
}

/// `⟨X⁺_A N_B⟩` from Alice's X+ row alone.
///
/// Uses `(C⁺₊₊ − C⁺₊₋ − C⁻₊₊ + C⁻₊₋)` over the clicks of the two settings
/// `(X⁺, N⁺)` and `(X⁺, N⁻)`.
pub fn expectation_single_row(table: &CountTable, basis_b: Basis) -> Result<Expectation> {
    if basis_b == Basis::Z {
        return Err(QkdError::Config(format!(
            "single-row estimator needs Bob's X or Y basis, got {basis_b}"
        )));
    }
    let label = format!("<X+{basis_b}>");
    let mut signed = 0.0;
    let mut clicks = 0.0;
    for j in Bit::ALL {
        let o = lookup(table, (Basis::X, Bit::Plus), (basis_b, j), &label)?;
        let (s, n) = signed_clicks(o, Basis::X, basis_b);
        signed += s;
        clicks += n;
    }
    if clicks <= 0.0 {
        return Err(QkdError::NoClicks(label));
    }
    Ok(Expectation::from_sums(signed, clicks))
}

/// Bit error rate of the sifted key in one basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QberRecord {
    pub basis: Basis,
    /// Error fraction before any bit flip, can exceed 0.5.
    pub raw: f64,
    /// `min(raw, 1 − raw)`
    pub effective: f64,
    pub stderr: f64,
}

impl QberRecord {
    pub fn from_raw(basis: Basis, raw: f64, stderr: f64) -> Self {
        QberRecord {
            basis,
            raw,
            effective: raw.min(1.0 - raw),
            stderr,
        }
    }
}

/// QBER over whichever same-basis settings the table holds.
///
/// Z: a Ψ± click on equal bits is an error. X/Y: Ψ+ on opposite bits or
/// Ψ− on equal bits is an error.
pub fn qber(table: &CountTable, basis: Basis) -> Result<QberRecord> {
    let mut errors = 0.0;
    let mut clicks = 0.0;
    let mut found = false;
    for i in Bit::ALL {
        for j in Bit::ALL {
            let Some(o) = table.get((basis, i), (basis, j)) else {
                continue;
            };
            found = true;
            let equal = i == j;
            errors += match (basis, equal) {
                (Basis::Z, true) => o.clicks(),
                (Basis::Z, false) => 0.0,
                (_, true) => o.n_psi_minus,
                (_, false) => o.n_psi_plus,
            };
            clicks += o.clicks();
        }
    }
    if !found {
        return Err(QkdError::MissingSettings(format!("Q_{basis}")));
    }
    if clicks <= 0.0 {
        return Err(QkdError::NoClicks(format!("Q_{basis}")));
    }
    let raw = errors / clicks;
    Ok(QberRecord::from_raw(
        basis,
        raw,
        (raw * (1.0 - raw) / clicks).sqrt(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ChannelParams;
    use crate::simkit::{run_protocol, MenuMode, ProtocolConfig, StateMenu};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn ideal(beta: f64) -> CountTable {
        run_protocol(&ProtocolConfig {
            channel: ChannelParams::new(beta, 0.0, 0.0),
            ..ProtocolConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn aligned_xx_is_one() {
        let e = expectation_full(&ideal(0.0), Basis::X, Basis::X).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!(e.stderr.abs() < 1e-12);
        // four settings, half the shots click each
        assert!((e.n_effective - 2.0e5).abs() < 1e-6);
    }

    #[test]
    fn quarter_turn_xy_and_yx() {
        let t = ideal(FRAC_PI_2);
        assert!((expectation_full(&t, Basis::X, Basis::Y).unwrap().value - 1.0).abs() < 1e-12);
        assert!((expectation_full(&t, Basis::Y, Basis::X).unwrap().value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zz_is_minus_one() {
        for beta in [0.0, 0.7, 3.0] {
            let e = expectation_full(&ideal(beta), Basis::Z, Basis::Z).unwrap();
            assert!((e.value + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_row_matches_trig() {
        for beta in [0.0, 0.4, 2.2, 4.0] {
            let t = ideal(beta);
            let x = expectation_single_row(&t, Basis::X).unwrap();
            let y = expectation_single_row(&t, Basis::Y).unwrap();
            assert!((x.value - f64::cos(beta)).abs() < 1e-12);
            assert!((y.value - f64::sin(beta)).abs() < 1e-12);
            assert!((x.n_effective - 1.0e5).abs() < 1e-6);
        }
        assert!(expectation_single_row(&ideal(0.0), Basis::Z).is_err());
    }

    #[test]
    fn qber_ideal_and_rotated() {
        let t = ideal(FRAC_PI_3);
        assert_eq!(qber(&t, Basis::Z).unwrap().raw, 0.0);
        let qx = qber(&t, Basis::X).unwrap();
        assert!((qx.raw - 0.25).abs() < 1e-12);
        assert!((qx.effective - 0.25).abs() < 1e-12);

        let flipped = qber(&ideal(2.5), Basis::X).unwrap();
        assert!(flipped.raw > 0.5);
        assert!((flipped.effective - (1.0 - flipped.raw)).abs() < 1e-15);
    }

    #[test]
    fn missing_settings_are_reported() {
        let t = run_protocol(&ProtocolConfig {
            alice_menu: StateMenu::alice(MenuMode::OneCheck),
            ..ProtocolConfig::default()
        })
        .unwrap();
        assert!(matches!(
            expectation_full(&t, Basis::X, Basis::X),
            Err(QkdError::MissingSettings(_))
        ));
        assert!(matches!(
            qber(&t, Basis::Y),
            Err(QkdError::MissingSettings(_))
        ));
        // one-check Alice still yields a QBER from her X+ row
        assert!(qber(&t, Basis::X).is_ok());
    }

    #[test]
    fn zero_clicks_is_an_error() {
        let t = run_protocol(&ProtocolConfig {
            shots: 0,
            ..ProtocolConfig::default()
        })
        .unwrap();
        assert!(matches!(
            expectation_full(&t, Basis::X, Basis::X),
            Err(QkdError::NoClicks(_))
        ));
        assert!(matches!(qber(&t, Basis::Z), Err(QkdError::NoClicks(_))));
    }
}
