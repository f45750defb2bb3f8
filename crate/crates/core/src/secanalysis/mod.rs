//! Estimators and security math: expectations, QBERs, the C parameter and
//! the MDI / RFI-MDI key rates.

pub mod cparam;
pub mod estimate;
pub mod estimators;
pub mod keyrate;

pub use cparam::{c_parameter, CValue, CVariant};
pub use estimate::{analyze, SecurityEstimate, EXPECTATION_PAIRS};
pub use estimators::{expectation_full, expectation_single_row, qber, Expectation, QberRecord};
pub use keyrate::{
    binary_entropy, key_rate_mdi, key_rate_mdi_value, key_rate_rfi, key_rate_rfi_stderr,
    KeyRateBreakdown,
};
