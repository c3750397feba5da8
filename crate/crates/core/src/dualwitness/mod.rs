//! The univariate smooth dual witness `R` on the grid `{-n, …, n}`.
//!
//! For each `u ∈ [1, ⌊n^{2/3}⌋]` a polynomial `p_u` is supported on the
//! `2d` points `±u, ±uΔ, …, ±uΔ^{d-1}` (with `Δ = ⌊n^{1/(3d)}⌋`).
//! Combining them with weights `u²⁰/‖p_u‖₁` and alternating the sign
//! gives `R`, whose four properties (unit ℓ₁ norm, one-sided domination,
//! orthogonality to low-degree polynomials, smoothness near the origin)
//! are checked here exactly in ℚ\[√Δ\].

mod claims;
mod construction;
mod identity;
pub mod io;
mod params;
mod verify;

pub use claims::{verify_claims, verify_claims_at, ClaimInstance, ClaimReport, ClaimTally};
pub use construction::{
    build_witness, eval_p_u, eval_r_u, p_norm, support_norms, support_set, GridFn, WitnessCert,
};
pub use identity::check_combinatorial_identity;
pub use params::{
    delta_enclosure, e4_enclosure, lemma1_constant_enclosure, positive_floor_constant,
    witness_params, WitnessParams, WEIGHT_EXPONENT,
};
pub use verify::{
    verify_witness, verify_witness_at, DominationCheck, Moment, NormCheck, OrthogonalityCheck,
    RefinementStep, SmoothnessCheck, WitnessReport, ZeroPoint,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("n must be odd (got {0})")]
    EvenN(u64),
    #[error("degree d = {d} out of range for n = {n}: need 1 <= d and 2^(3d) <= n")]
    DegreeOutOfRange { n: u64, d: u32 },
    #[error("u = {u} outside [1, {u_max}]")]
    UOutOfRange { u: i64, u_max: u64 },
    #[error("t = {t} outside the grid [-{n}, {n}]")]
    PointOutOfRange { t: i64, n: u64 },
    #[error("witness data does not match its parameters: {0}")]
    ParamMismatch(String),
}

pub(crate) use params::{e_minus15_enclosure, rat_pow};
pub(crate) use verify::{ge_scaled, refine, status_of};
