//! The rotation-invariant C parameter from 4, 2 or 1 of Alice's check states.

use std::fmt;

use crate::error::Result;
use crate::qcore::Basis;
use crate::simkit::CountTable;

use super::estimators::{expectation_full, expectation_single_row, Expectation};

/// Which of Alice's check-state sets the estimate uses (Bob always sends four).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CVariant {
    /// X±, Y±: `⟨XX⟩² + ⟨XY⟩² + ⟨YX⟩² + ⟨YY⟩²`
    C44,
    /// X±: `2(⟨XX⟩² + ⟨XY⟩²)`
    C24,
    /// X+ only: `2(⟨X⁺X⟩² + ⟨X⁺Y⟩²)`
    C14,
}

impl CVariant {
    pub const ALL: [CVariant; 3] = [CVariant::C44, CVariant::C24, CVariant::C14];

    pub fn name(self) -> &'static str {
        match self {
            CVariant::C44 => "c44",
            CVariant::C24 => "c24",
            CVariant::C14 => "c14",
        }
    }
}

impl fmt::Display for CVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A C estimate with its first-order standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CValue {
    pub value: f64,
    pub stderr: f64,
}

impl CValue {
    /// A value known without statistical error.
    pub fn exact(value: f64) -> Self {
        CValue { value, stderr: 0.0 }
    }
}

/// `scale · Σ e²` with delta-method error `scale · sqrt(Σ (2 e σ)²)`.
pub fn sum_of_squares(scale: f64, terms: &[Expectation]) -> CValue {
    let value = scale * terms.iter().map(|e| e.value * e.value).sum::<f64>();
    let var = terms
        .iter()
        .map(|e| (2.0 * e.value * e.stderr).powi(2))
        .sum::<f64>();
    CValue {
        value,
        stderr: scale * var.sqrt(),
    }
}

/// Estimate C from a count table.
///
/// Fails with `MissingSettings` when Alice's menu lacks the states the
/// variant needs, or `NoClicks` when they recorded no Ψ± events.
pub fn c_parameter(table: &CountTable, variant: CVariant) -> Result<CValue> {
    match variant {
        CVariant::C44 => {
            let terms = [
                expectation_full(table, Basis::X, Basis::X)?,
                expectation_full(table, Basis::X, Basis::Y)?,
                expectation_full(table, Basis::Y, Basis::X)?,
                expectation_full(table, Basis::Y, Basis::Y)?,
            ];
            Ok(sum_of_squares(1.0, &terms))
        }
        CVariant::C24 => {
            let terms = [
                expectation_full(table, Basis::X, Basis::X)?,
                expectation_full(table, Basis::X, Basis::Y)?,
            ];
            Ok(sum_of_squares(2.0, &terms))
        }
        CVariant::C14 => {
            let terms = [
                expectation_single_row(table, Basis::X)?,
                expectation_single_row(table, Basis::Y)?,
            ];
            Ok(sum_of_squares(2.0, &terms))
        }
    }
}
