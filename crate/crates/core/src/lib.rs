//! Exact-arithmetic tooling around the smooth dual witness for majority.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: rationals, the quadratic field ℚ\[√Δ\], integer roots,
//!   binomials and certified enclosures of `exp`, `sqrt` and `log2`.
//! - [`dualwitness`]: the univariate witness `R` on `{-n, …, n}`, its
//!   construction from the two-point-mass polynomials `p_u`, and exact
//!   verifiers for every inequality the construction relies on.
//! - [`lift`]: the lift of `R` to the hypercube `{-1,1}^{2n}` in
//!   Hamming-weight-class form and the `ψ₀/ψ₁` pair built from it.
//! - [`lp`]: an exact rational simplex with Farkas certificates, and
//!   threshold-degree / rational-degree oracles on top of it.
//! - [`patternmatrix`]: pattern matrices, the sign-rank bound formula and
//!   the unbounded-error protocol for majority.

pub mod dualwitness;
pub mod exactnum;
pub mod lift;
pub mod lp;
pub mod patternmatrix;

pub use exactnum::{Enclosure, QuadNum, Rational};

/// Default working precision (bits) for certified enclosures.
pub const DEFAULT_PRECISION: u32 = 128;

/// Hard cap for automatic precision doubling.
pub const PRECISION_CAP: u32 = 4096;

/// Outcome of a single certified check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The enclosures at the current precision straddle the threshold.
    Undecided,
}

impl Status {
    /// Combines two statuses: any failure dominates, then undecided.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Undecided, _) | (_, Status::Undecided) => Status::Undecided,
            _ => Status::Pass,
        }
    }

    pub fn all<I: IntoIterator<Item = Status>>(it: I) -> Status {
        it.into_iter().fold(Status::Pass, Status::and)
    }
}
