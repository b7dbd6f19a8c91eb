// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod queueing;
pub mod rhythm;
pub mod simulator;
pub mod trajectory;

pub use error::{Error, Result};
