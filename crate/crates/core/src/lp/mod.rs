//! Exact linear programming and the LP characterizations of threshold
//! degree and of the rational-approximation quantity `R(f, d₀, d₁)`.
//!
//! Strict inequalities are encoded with unit margin (`f·p >= 1`), which
//! loses nothing by homogeneity. Every answer comes with a certificate
//! that is re-checked by plain arithmetic before it is returned.

mod fnspec;
mod ratdeg;
mod simplex;
mod threshold;
mod witness;

use thiserror::Error;

pub use fnspec::{FnKind, FnSpec, Polynomial, MAX_BLOCK, MAX_EXPLICIT_ARITY};
pub use ratdeg::{rational_bisect, rational_degree_feasible, rational_degree_search, rational_problem, RationalAnswer};
pub use simplex::{
    lp_solve, Constraint, LpCertificate, LpProblem, Objective, Relation, Sense, Variable, TABLEAU_LIMIT,
};
pub use threshold::{
    decide_dual, decide_primal, decide_threshold, extract_dual_witness, sign_rep_problem, threshold_degree,
    witness_problem, ThresholdAnswer, ThresholdDegree,
};
pub use witness::{class_l1, class_moments, DualWitness, PairCheck, ThresholdCheck, WitnessKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("resource bound: {0}")]
    ResourceBound(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("malformed problem: {0}")]
    Malformed(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("objective is unbounded")]
    Unbounded,
    #[error("certificate check failed: {0}")]
    CertificateCheck(String),
}
