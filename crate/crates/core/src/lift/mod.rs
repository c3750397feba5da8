//! Lifting the grid witness to the hypercube `{-1,1}^{2n}`.
//!
//! Everything is kept in Hamming-weight-class form ([`SymFn`]): a
//! symmetric function is stored as one value per weight `k ∈ [0, m]`,
//! where the weight counts `-1` entries. Norms and correlations are sums
//! over classes weighted by `C(m, k)`, so the cube is never enumerated.

mod psi;
mod symfn;

pub use psi::{
    build_psi_pair, lift_witness, stated_lower_floor, verify_lift, verify_psi_pair,
    verify_psi_pair_at, LiftReport, Orientation, OrientationCheck, PsiPair, PsiReport, SmoothClass,
};
pub use symfn::{orthogonality_symmetric, weight_fraction_in_band, SymFn, SymFnError};
