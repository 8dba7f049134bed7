//! Phase-field model of cell motility: an Allen–Cahn equation for the
//! cell indicator `rho` coupled through its gradient to an orientation
//! field `P`, together with the sharp-interface laws obtained in the
//! limit of thin interfaces and tools to compare the two.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod field;
pub mod forcing;
pub mod harness;
pub mod front_law;
pub mod phasefield_1d;
pub mod phasefield_2d;
pub mod profiles;
pub mod tridiag;

pub use error::{Error, Result};
