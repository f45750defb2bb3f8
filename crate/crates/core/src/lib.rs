//! Simulation and security analysis for reference-frame-independent,
//! measurement-device-independent QKD with reduced check-state menus.
//!
//! * [`qcore`] computes exact Bell-state-measurement probabilities for any
//!   pair of prepared states under frame rotation and noise.
//! * [`simkit`] turns those into coincidence-count tables, either as exact
//!   expected counts or seeded multinomial samples.
//! * [`secanalysis`] estimates expectations, QBERs, the rotation-invariant
//!   C parameter (from 4, 2 or 1 of Alice's check states) and key rates.

pub mod error;
pub mod qcore;
pub mod secanalysis;
pub mod simkit;

pub use error::{QkdError, Result};
