//! The unbounded-error protocol for `MAJ` on `2n` effective bits: Bob
//! sends the index of a uniformly random relevant bit, Alice replies with
//! it, and Bob outputs that bit of `z = x|_S ⊙ w`. With probability `2β`
//! the protocol instead outputs `-1` outright, which breaks the exact
//! one-half tie that `MAJ` (`-1` when at least half the bits are `-1`)
//! would otherwise leave.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PatternError;
use crate::exactnum::rational;
use crate::{Enclosure, Rational};

/// Longest `z` the exhaustive validation accepts.
pub const UPP_MAX_LEN: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    /// Exact probability of outputting `-1`.
    #[serde(with = "rational::serde_str")]
    pub accept_prob: Rational,
    pub cost_bits: u64,
}

/// `⌈log₂(2n²)⌉ + 1`: the index message plus Alice's one-bit reply.
fn cost_bits(n: u64) -> u64 {
    let v = BigUint::from(2 * n * n);
    let floor = v.bits() - 1;
    let ceil = if v.count_ones() == 1 { floor } else { floor + 1 };
    ceil + 1
}

fn check_beta(beta: &Rational) -> Result<(), PatternError> {
    if beta.is_negative() || beta >= &rational::ratio(1, 2) {
        return Err(PatternError::InvalidInput("beta must lie in [0, 1/2)".into()));
    }
    Ok(())
}

pub fn upp_protocol_sim(z: &[i8], beta: &Rational) -> Result<ProtocolOutcome, PatternError> {
    check_beta(beta)?;
    if z.is_empty() || !z.len().is_multiple_of(2) {
        return Err(PatternError::InvalidInput("z must have even, positive length".into()));
    }
    let neg = z.iter().filter(|&&v| v < 0).count() as i64;
    let two_beta = beta * rational::int(2);
    let accept_prob = &two_beta + (Rational::one() - &two_beta) * rational::ratio(neg, z.len() as i64);
    Ok(ProtocolOutcome { accept_prob, cost_bits: cost_bits(z.len() as u64 / 2) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UppReport {
    pub n: u64,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub pass: bool,
    /// `min_z P[output = MAJ(z)] - 1/2`.
    #[serde(with = "rational::serde_str")]
    pub worst_margin: Rational,
    /// Number of `-1`s in the inputs attaining the worst margin.
    pub worst_weights: Vec<u64>,
    /// Weights where the protocol is not strictly better than a coin.
    pub failing_weights: Vec<u64>,
    pub inputs_checked: u64,
    pub cost_bits: u64,
}

/// Runs the protocol on every `z ∈ {-1,1}^{2n}` and checks
/// `P[output = MAJ(z)] > 1/2` exactly.
pub fn upp_validate(n: u64, beta: &Rational) -> Result<UppReport, PatternError> {
    check_beta(beta)?;
    if n == 0 || 2 * n > UPP_MAX_LEN {
        return Err(PatternError::InvalidInput(format!("2n must lie in [2, {UPP_MAX_LEN}]")));
    }
    let len = 2 * n as usize;
    let half = rational::ratio(1, 2);
    let mut worst: Option<Rational> = None;
    let mut worst_weights = Vec::new();
    let mut failing_weights = Vec::new();
    for mask in 0u32..(1 << len) {
        let z: Vec<i8> = (0..len).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let out = upp_protocol_sim(&z, beta)?;
        let weight = u64::from(mask.count_ones());
        let correct = if weight >= n { out.accept_prob } else { Rational::one() - out.accept_prob };
        let margin = correct - &half;
        if !margin.is_positive() && !failing_weights.contains(&weight) {
            failing_weights.push(weight);
        }
        match &worst {
            Some(w) if margin > *w => {}
            Some(w) if margin == *w => {
                if !worst_weights.contains(&weight) {
                    worst_weights.push(weight);
                }
            }
            _ => {
                worst = Some(margin);
                worst_weights = vec![weight];
            }
        }
    }
    failing_weights.sort_unstable();
    worst_weights.sort_unstable();
    Ok(UppReport {
        n,
        beta: beta.clone(),
        pass: failing_weights.is_empty(),
        worst_margin: worst.unwrap_or_else(Rational::zero),
        worst_weights,
        failing_weights,
        inputs_checked: 1 << len,
        cost_bits: cost_bits(n),
    })
}

/// A `log₂` sign-rank enclosure read as a communication cost: the two
/// agree up to an additive constant that is kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Translated {
    pub upp_cost: Enclosure,
    pub slack: String,
}

pub fn upp_translate(log2_signrank: &Enclosure) -> Translated {
    Translated { upp_cost: log2_signrank.clone(), slack: "±O(1)".into() }
}
