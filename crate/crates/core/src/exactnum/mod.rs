//! Exact number kernel.
//!
//! Every witness value lives in ℚ\[√Δ\] ([`QuadNum`]); transcendental
//! constants only ever appear through rational [`Enclosure`]s, so all
//! inequality checks downstream are decided by exact comparisons.

mod enclosure;
mod intmath;
mod quad;
pub mod rational;

pub use enclosure::{
    exp_enclosure, exp_interval, exp_range, ln2_interval, ln_interval, log2_interval, sqrt_enclosure, sqrt_interval,
    Enclosure,
};
pub use intmath::{binomial, binomial_row, int_root, is_perfect_square};
pub use quad::{quad_arith, quad_sign, QuadNum, QuadOp};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("radicand mismatch: {0} vs {1}")]
    DeltaMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be positive")]
    ZeroRadicand,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
