use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::WitnessError;
use crate::exactnum::{exp_interval, exp_range, int_root, is_perfect_square, rational, sqrt_interval};
use crate::{Enclosure, Rational, DEFAULT_PRECISION};

/// Exponent of the weights `u^20` combining the `p_u`.
pub const WEIGHT_EXPONENT: u32 = 20;

/// Parameters of the construction for odd `n` and target degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub n: u64,
    pub d: u32,
    /// `Δ = ⌊n^{1/(3d)}⌋`.
    pub delta_int: u64,
    /// `⌊n^{2/3}⌋`, the largest `u`.
    pub u_max: u64,
    /// Enclosure of `δ = exp(-18/√Δ)` at the default precision.
    pub delta: Enclosure,
}

impl WitnessParams {
    pub fn grid_len(&self) -> usize {
        2 * self.n as usize + 1
    }

    pub fn delta_enclosure(&self, bits: u32) -> Enclosure {
        delta_enclosure(self.delta_int, bits)
    }
}

/// Validates `(n, d)` and derives `Δ`, `⌊n^{2/3}⌋` and the `δ` enclosure.
pub fn witness_params(n: u64, d: u32) -> Result<WitnessParams, WitnessError> {
    if n.is_multiple_of(2) {
        return Err(WitnessError::EvenN(n));
    }
    // d <= (1/3) log2 n  <=>  2^(3d) <= n
    if d < 1 || 3 * u64::from(d) >= 64 || (1u64 << (3 * d)) > n {
        return Err(WitnessError::DegreeOutOfRange { n, d });
    }
    let delta_int = int_root(&BigUint::from(n), 3 * d).to_u64().expect("root fits u64");
    assert!(delta_int >= 2, "Δ >= 2 follows from 2^(3d) <= n");
    let u_max = int_root(&(BigUint::from(n) * BigUint::from(n)), 3)
        .to_u64()
        .expect("root fits u64");
    debug_assert!(u_max as u128 * (delta_int as u128).pow(d - 1) <= n as u128);
    Ok(WitnessParams { n, d, delta_int, u_max, delta: delta_enclosure(delta_int, DEFAULT_PRECISION) })
}

/// Enclosure of `-c/√m + shift`.
fn neg_over_sqrt(c: i64, m: u64, shift: i64, bits: u32) -> Enclosure {
    let s = sqrt_interval(m, bits + 16);
    // x ↦ -c/x is increasing for x > 0
    let lo = rational::int(-c) / s.lo() + rational::int(shift);
    let hi = rational::int(-c) / s.hi() + rational::int(shift);
    Enclosure::new(lo, hi)
}

fn exp_neg_over_sqrt(c: i64, m: u64, shift: i64, bits: u32) -> Enclosure {
    if is_perfect_square(m) {
        let s = sqrt_interval(m, 0);
        let x = rational::int(-c) / s.lo() + rational::int(shift);
        return exp_interval(&x, bits);
    }
    exp_range(&neg_over_sqrt(c, m, shift, bits), bits)
}

/// `δ = exp(-18/√Δ)`.
pub fn delta_enclosure(delta_int: u64, bits: u32) -> Enclosure {
    exp_neg_over_sqrt(18, delta_int, 0, bits)
}

/// `exp(-18/√Δ - 4)`, the two-point mass fraction of `|p_u(u)|`.
pub fn lemma1_constant_enclosure(delta_int: u64, bits: u32) -> Enclosure {
    exp_neg_over_sqrt(18, delta_int, -4, bits)
}

/// `exp(-18/√2 - 4)`, the constant of the positive-side smoothness floor.
pub fn positive_floor_constant(bits: u32) -> Enclosure {
    exp_neg_over_sqrt(18, 2, -4, bits)
}

/// `e⁴`.
pub fn e4_enclosure(bits: u32) -> Enclosure {
    exp_interval(&rational::int(4), bits)
}

/// `e^{-15}`, the constant printed for the positive side.
pub(crate) fn e_minus15_enclosure(bits: u32) -> Enclosure {
    exp_interval(&rational::int(-15), bits)
}

pub(crate) fn rat_pow(base: u64, e: u32) -> Rational {
    rational::powi(&rational::int(base as i64), e as i64)
}
