//! The sign-rank lower bound `γ / (2^{-n}·(n/N)^{d/2} + γ·Δ)` evaluated
//! in log space with certified intervals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PatternError;
use crate::exactnum::{exp_range, int_root, ln2_interval, log2_interval, rational};
use crate::{Enclosure, Rational};

/// Smallest `log₂ n` the parameter pipeline accepts.
pub const PIPELINE_MIN_LOG2: u64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Smoothness floor on `|φ|`.
    pub gamma: Enclosure,
    /// Fraction of inputs exempt from the floor.
    #[serde(with = "rational::serde_str")]
    pub delta_frac: Rational,
    pub d: u32,
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub gamma: Enclosure,
    #[serde(with = "rational::serde_str")]
    pub delta_frac: Rational,
    pub d: u32,
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub log2_bound: Enclosure,
    /// `true` when the exact rational fast path was taken.
    pub exact: bool,
}

fn log2_range(e: &Enclosure, w: u32) -> Enclosure {
    Enclosure::new(log2_interval(e.lo(), w).lo().clone(), log2_interval(e.hi(), w).hi().clone())
}

/// Enclosure of `log₂(2^x + 2^y)` for rational `x, y`.
fn log2_sum_exp(x: &Rational, y: &Rational, w: u32) -> Enclosure {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    let gap = hi - lo;
    // log₂(1 + 2^-D) lies in [0, 2^-D/ln 2] ⊂ [0, 2^{1-D}]
    if gap > rational::int(i64::from(w) + 10) {
        return Enclosure::new(hi.clone(), hi + rational::pow2(-(i64::from(w) + 9)));
    }
    let ln2 = ln2_interval(w + 16);
    let t = exp_range(&ln2.scale(&-gap), w + 16);
    let one = Rational::one();
    let g = Enclosure::new(
        log2_interval(&(&one + t.lo()), w + 16).lo().clone(),
        log2_interval(&(&one + t.hi()), w + 16).hi().clone(),
    );
    g.add_rational(hi)
}

/// `log₂γ - log₂(2^a + 2^b)`, or `log₂γ - a` when there is no `b` term.
fn combine(log2_gamma: &Enclosure, a: &Enclosure, b: Option<&Enclosure>, w: u32) -> Enclosure {
    let denom = match b {
        None => a.clone(),
        Some(b) => {
            let lo = log2_sum_exp(a.lo(), b.lo(), w);
            let hi = log2_sum_exp(a.hi(), b.hi(), w);
            Enclosure::new(lo.lo().clone(), hi.hi().clone())
        }
    };
    log2_gamma.sub(&denom)
}

/// Certified enclosure of `log₂` of the bound. With `d` even and `γ`
/// known exactly the bound is an exact rational and its `log₂` is exact
/// whenever it is a power of two.
pub fn rs_bound(b: &BoundInputs, bits: u32) -> Result<BoundReport, PatternError> {
    if !b.gamma.lo().is_positive() {
        return Err(PatternError::InvalidInput("gamma must be positive".into()));
    }
    if b.delta_frac.is_negative() || b.delta_frac > Rational::one() {
        return Err(PatternError::InvalidInput("delta_frac must lie in [0, 1]".into()));
    }
    if b.n == 0 || b.big_n == 0 {
        return Err(PatternError::InvalidInput("n and N must be positive".into()));
    }
    let ratio = Rational::new(BigInt::from(b.n), BigInt::from(b.big_n));
    let report = |log2_bound, exact| BoundReport {
        gamma: b.gamma.clone(),
        delta_frac: b.delta_frac.clone(),
        d: b.d,
        n: b.n,
        big_n: b.big_n,
        log2_bound,
        exact,
    };
    if b.d.is_multiple_of(2) && b.gamma.is_point() {
        let g = b.gamma.lo();
        let denom = rational::pow2(-(b.n as i64)) * rational::powi(&ratio, i64::from(b.d / 2)) + g * &b.delta_frac;
        return Ok(report(log2_interval(&(g / denom), bits), true));
    }
    let w = bits + 8;
    let log2_gamma = log2_range(&b.gamma, w);
    let a = log2_interval(&ratio, w).scale(&rational::ratio(i64::from(b.d), 2)).add_rational(&rational::int(-(b.n as i64)));
    let bterm = (!b.delta_frac.is_zero()).then(|| log2_gamma.add(&log2_interval(&b.delta_frac, w)));
    Ok(report(combine(&log2_gamma, &a, bterm.as_ref(), w).round_outward(bits), false))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    /// `n = 2^k`.
    pub log2_n: u64,
    pub d: u32,
    /// The formula's block count `4n`, as a power of two.
    pub theorem_log2_n: u64,
    /// The formula's `N = 4n²`, as a power of two.
    pub theorem_log2_big_n: u64,
    /// `log₂γ` for `γ = 1/(n⁴⁰·2^{4n})`, exact; a constant factor `c` in
    /// `γ` shifts every `log₂` below by `log₂ c`.
    #[serde(with = "rational::serde_str")]
    pub log2_gamma: Rational,
    /// `log₂` of the exception fraction `2·exp(-n^{1/3}/3)`.
    pub log2_delta_frac: Enclosure,
    pub log2_bound: Enclosure,
    /// The whole enclosure is at or below zero, so the bound says nothing.
    pub vacuous: bool,
}

/// Parses `"2^k"` or a plain power of two into `k`.
pub(crate) fn parse_power_of_two(s: &str) -> Result<u64, PatternError> {
    let bad = || PatternError::InvalidInput(format!("{s:?} is not a power of two"));
    if let Some(k) = s.trim().strip_prefix("2^") {
        return k.trim().parse().map_err(|_| bad());
    }
    let v: BigUint = s.trim().parse().map_err(|_| bad())?;
    if v.is_zero() || v.count_ones() != 1 {
        return Err(bad());
    }
    Ok(v.bits() - 1)
}

/// The main theorem's instantiation of the bound for `n = 2^k`: the
/// formula is applied with `4n` blocks over `N = 4n²` bits, smoothness
/// floor `γ = 1/(n⁴⁰·2^{4n})`, exception fraction `2·exp(-n^{1/3}/3)` and
/// `d = ⌊k/100⌋`.
pub fn pipeline_bound(n: &str, bits: u32) -> Result<PipelineReport, PatternError> {
    let k = parse_power_of_two(n)?;
    if k < PIPELINE_MIN_LOG2 {
        return Err(PatternError::ParameterRegime(format!(
            "n = 2^{k} is below 2^{PIPELINE_MIN_LOG2}; the instantiation is asymptotic"
        )));
    }
    let w = bits + 16;
    let d = (k / 100) as u32;
    let kk = rational::int(k as i64);
    let four_n = rational::pow2(k as i64 + 2);
    let log2_gamma = -(rational::int(40) * &kk) - &four_n;
    let a = Enclosure::point(-&four_n - rational::ratio(i64::from(d), 2) * &kk);

    // n^{1/3} = 2^{⌊k/3⌋} · 2^{(k mod 3)/3}
    let r = (k % 3) as usize;
    let scaled = BigUint::from(1u32) << (r + 3 * w as usize);
    let root = int_root(&scaled, 3);
    let cube = Enclosure::new(
        Rational::new(BigInt::from(root.clone()), BigInt::one() << w as usize),
        Rational::new(BigInt::from(root + 1u32), BigInt::one() << w as usize),
    )
    .scale(&rational::pow2((k / 3) as i64));
    let log2e = ln2_interval(w).recip();
    let log2_delta_frac =
        cube.mul(&log2e).scale(&rational::ratio(-1, 3)).add_rational(&Rational::one()).round_outward(bits);
    let gamma = Enclosure::point(log2_gamma.clone());
    let b = gamma.add(&log2_delta_frac);
    let log2_bound = combine(&gamma, &a, Some(&b), w).round_outward(bits);
    Ok(PipelineReport {
        log2_n: k,
        d,
        theorem_log2_n: k + 2,
        theorem_log2_big_n: 2 * k + 2,
        log2_gamma,
        vacuous: !log2_bound.hi().is_positive(),
        log2_delta_frac,
        log2_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};

    fn inputs(gamma: Rational, delta: Rational, d: u32, n: u64, big_n: u64) -> BoundInputs {
        BoundInputs { gamma: Enclosure::point(gamma), delta_frac: delta, d, n, big_n }
    }

    #[test]
    fn closed_forms() {
        let r = rs_bound(&inputs(rational::pow2(-5), int(0), 0, 5, 20), 64).unwrap();
        assert_eq!(r.log2_bound, Enclosure::point(int(0)));
        assert!(r.exact);
        let r = rs_bound(&inputs(rational::pow2(-5), int(0), 2, 5, 20), 64).unwrap();
        assert_eq!(r.log2_bound, Enclosure::point(int(2)));
    }

    #[test]
    fn doubling_d_adds_half_d_log_ratio() {
        let (n, big_n) = (4u64, 64u64);
        for d in [2u32, 4, 6] {
            let x = rs_bound(&inputs(rational::pow2(-4), int(0), d, n, big_n), 64).unwrap().log2_bound;
            let y = rs_bound(&inputs(rational::pow2(-4), int(0), 2 * d, n, big_n), 64).unwrap().log2_bound;
            assert!(x.is_point() && y.is_point());
            assert_eq!(y.lo() - x.lo(), ratio(i64::from(d), 2) * int(4));
        }
    }

    #[test]
    fn odd_d_and_nonzero_delta_enclose_float_value() {
        let b = inputs(ratio(1, 1000), ratio(1, 50), 3, 6, 54);
        let r = rs_bound(&b, 64).unwrap();
        assert!(!r.exact);
        let f = (1e-3f64) / (2f64.powi(-6) * (6.0f64 / 54.0).powf(1.5) + 1e-3 / 50.0);
        let v = f.log2();
        let (lo, hi) = (r.log2_bound.lo(), r.log2_bound.hi());
        assert!(rational_to_f64(lo) <= v + 1e-9 && v - 1e-9 <= rational_to_f64(hi));
        assert!(r.log2_bound.width() < rational::pow2(-50));
    }

    fn rational_to_f64(r: &Rational) -> f64 {
        use num_traits::ToPrimitive;
        r.to_f64().unwrap()
    }

    #[test]
    fn monotone_in_gamma_and_delta() {
        let base = |g: Rational, dl: Rational, n: u64| rs_bound(&inputs(g, dl, 2, n, 4 * n), 64).unwrap().log2_bound;
        let a = base(ratio(1, 100), ratio(1, 10), 3);
        let b = base(ratio(1, 50), ratio(1, 10), 3);
        let c = base(ratio(1, 100), ratio(1, 5), 3);
        assert!(a.hi() < b.lo());
        assert!(c.hi() < a.lo());
    }

    #[test]
    fn pipeline_regime_and_vacuous_range() {
        assert!(matches!(pipeline_bound("2^9", 64), Err(PatternError::ParameterRegime(_))));
        assert!(matches!(pipeline_bound("1000", 64), Err(PatternError::InvalidInput(_))));
        assert_eq!(parse_power_of_two("1024").unwrap(), 10);
        let r = pipeline_bound("2^10", 64).unwrap();
        assert_eq!(r.d, 0);
        assert!(r.vacuous);
        // both points sit in the vacuous range: (d/2)k - 40k < 0 for d < 80
        let a = pipeline_bound("2^1000", 64).unwrap();
        let b = pipeline_bound("2^2000", 64).unwrap();
        assert!(a.vacuous && b.vacuous);
        assert!(a.log2_bound.contains(&int(-35000)) || a.log2_bound.hi() <= &int(-35000));
        assert!(a.log2_bound.hi() - a.log2_bound.lo() < rational::pow2(-60));
        assert!(b.log2_bound.hi() <= &int(-60000) && b.log2_bound.lo() > &int(-60001));
    }

    #[test]
    fn pipeline_dominant_term() {
        let r = pipeline_bound("2^20000", 128).unwrap();
        assert_eq!(r.d, 200);
        // (d/2)·k - 40k with a correction below 2^-128
        assert!(r.log2_bound.hi() <= &int(1_200_000));
        assert!(r.log2_bound.lo() >= &(int(1_200_000) - rational::pow2(-120)));
        assert!(!r.vacuous);
    }
}
