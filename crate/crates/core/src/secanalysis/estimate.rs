use std::collections::BTreeMap;

use crate::error::{QkdError, Result};
use crate::qcore::Basis;
use crate::simkit::CountTable;

use super::cparam::{c_parameter, CValue, CVariant};
use super::estimators::{expectation_full, expectation_single_row, qber, Expectation, QberRecord};
use super::keyrate::{key_rate_mdi, key_rate_rfi, key_rate_rfi_stderr, KeyRateBreakdown};

/// Correlations reported for every table: the four check pairs plus ZZ.
pub const EXPECTATION_PAIRS: [(Basis, Basis); 5] = [
    (Basis::X, Basis::X),
    (Basis::X, Basis::Y),
    (Basis::Y, Basis::X),
    (Basis::Y, Basis::Y),
    (Basis::Z, Basis::Z),
];

/// Everything the estimators can extract from one count table.
///
/// Estimators the table cannot support (menu too small) are absent.
/// Estimators that failed for statistical reasons are absent and their
/// error is kept in `issues`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SecurityEstimate {
    pub expectations: BTreeMap<(Basis, Basis), Expectation>,
    /// `⟨X⁺_A N_B⟩` keyed by Bob's basis.
    pub single_row: BTreeMap<Basis, Expectation>,
    pub qber: BTreeMap<Basis, QberRecord>,
    pub c: BTreeMap<CVariant, CValue>,
    pub issues: Vec<QkdError>,
}

impl SecurityEstimate {
    fn keep<T>(&mut self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(QkdError::MissingSettings(_)) => None,
            Err(e) => {
                self.issues.push(e);
                None
            }
        }
    }

    pub fn expectation(&self, a: Basis, b: Basis) -> Option<&Expectation> {
        self.expectations.get(&(a, b))
    }

    pub fn c_value(&self, variant: CVariant) -> Option<CValue> {
        self.c.get(&variant).copied()
    }

    /// Ordinary MDI rate from Q_X and Q_Z.
    pub fn mdi_rate(&self) -> Option<f64> {
        Some(key_rate_mdi(
            self.qber.get(&Basis::X)?,
            self.qber.get(&Basis::Z)?,
        ))
    }

    /// RFI-MDI rate for one C variant.
    pub fn rfi_rate(&self, variant: CVariant) -> Option<Result<KeyRateBreakdown>> {
        let qz = self.qber.get(&Basis::Z)?;
        let c = self.c_value(variant)?;
        Some(key_rate_rfi(qz.effective, c))
    }

    pub fn rfi_rate_stderr(&self, variant: CVariant) -> Option<Result<f64>> {
        let qz = self.qber.get(&Basis::Z)?;
        let c = self.c_value(variant)?;
        Some(key_rate_rfi_stderr(qz.effective, qz.stderr, c))
    }
}

/// Run every estimator the table supports.
pub fn analyze(table: &CountTable) -> SecurityEstimate {
    let mut est = SecurityEstimate::default();
    // the θ check state only stands in for X+ in the single-row estimator
    let phase_variant = table.uses_check_phase();
    for (a, b) in EXPECTATION_PAIRS {
        if phase_variant && a == Basis::X {
            continue;
        }
        if let Some(e) = est.keep(expectation_full(table, a, b)) {
            est.expectations.insert((a, b), e);
        }
    }
    for b in [Basis::X, Basis::Y] {
        if let Some(e) = est.keep(expectation_single_row(table, b)) {
            est.single_row.insert(b, e);
        }
    }
    for basis in Basis::ALL {
        if phase_variant && basis == Basis::X {
            continue;
        }
        if let Some(q) = est.keep(qber(table, basis)) {
            est.qber.insert(basis, q);
        }
    }
    for v in CVariant::ALL {
        if phase_variant && v != CVariant::C14 {
            continue;
        }
        if let Some(c) = est.keep(c_parameter(table, v)) {
            est.c.insert(v, c);
        }
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ChannelParams;
    use crate::simkit::{run_protocol, MenuMode, ProtocolConfig, StateMenu};

    fn run(mode: MenuMode, beta: f64) -> SecurityEstimate {
        analyze(
            &run_protocol(&ProtocolConfig {
                channel: ChannelParams::new(0.0, beta, 0.0),
                alice_menu: StateMenu::alice(mode),
                ..ProtocolConfig::default()
            })
            .unwrap(),
        )
    }

    #[test]
    fn six_state_estimate_is_complete() {
        let est = run(MenuMode::Six, 1.0);
        assert_eq!(est.expectations.len(), 5);
        assert_eq!(est.qber.len(), 3);
        assert_eq!(est.c.len(), 3);
        assert!(est.issues.is_empty());
        assert!((est.rfi_rate(CVariant::C44).unwrap().unwrap().r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_check_estimate_only_has_c14() {
        let est = run(MenuMode::OneCheck, 1.0);
        assert_eq!(
            est.c.keys().copied().collect::<Vec<_>>(),
            vec![CVariant::C14]
        );
        assert!(est.expectation(Basis::X, Basis::X).is_none());
        assert!(est.expectation(Basis::Z, Basis::Z).is_some());
        assert!(est.issues.is_empty());
    }

    #[test]
    fn phase_variant_table() {
        let table = run_protocol(&ProtocolConfig {
            alice_menu: StateMenu::alice(MenuMode::OneCheck),
            check_phase: Some(0.7),
            ..ProtocolConfig::default()
        })
        .unwrap();
        let est = analyze(&table);
        assert!(!est.qber.contains_key(&Basis::X));
        assert!((est.c_value(CVariant::C14).unwrap().value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mdi_rate_fails_at_quarter_turn() {
        let est = run(MenuMode::Six, std::f64::consts::FRAC_PI_2);
        assert!(est.mdi_rate().unwrap() <= 1e-12);
    }
}
