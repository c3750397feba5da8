//! Pattern matrices, the sign-rank bound formula and its parameter
//! pipeline, and the small unbounded-error protocol for `MAJ`.

mod bound;
mod matrix;
mod upp;

use thiserror::Error;

pub use bound::{pipeline_bound, rs_bound, BoundInputs, BoundReport, PipelineReport, PIPELINE_MIN_LOG2};
pub use matrix::{Column, PatternMatrixSpec, DENSE_LIMIT};
pub use upp::{upp_protocol_sim, upp_translate, upp_validate, ProtocolOutcome, Translated, UppReport, UPP_MAX_LEN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("block count n = {n} does not divide N = {big_n}")]
    NotDivisible { big_n: u32, n: u32 },
    #[error("dense export of {0} entries exceeds the limit of {DENSE_LIMIT}")]
    TooLarge(String),
    #[error("base function has arity {got}, expected {expected}")]
    ArityMismatch { got: u32, expected: u32 },
    #[error("parameter regime: {0}")]
    ParameterRegime(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
