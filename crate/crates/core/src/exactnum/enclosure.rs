use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::intmath::int_root;
use super::rational::{self, Rational};

/// Certified rational bracket `[lo, hi]` around a real value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "rational::serde_str")]
    lo: Rational,
    #[serde(with = "rational::serde_str")]
    hi: Rational,
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn add_rational(&self, r: &Rational) -> Enclosure {
        Enclosure { lo: &self.lo + r, hi: &self.hi + r }
    }

    pub fn scale(&self, r: &Rational) -> Enclosure {
        let (a, b) = (&self.lo * r, &self.hi * r);
        if r.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    /// Panics if `0` lies in the enclosure.
    pub fn recip(&self) -> Enclosure {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an enclosure containing zero"
        );
        Enclosure { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn div(&self, o: &Enclosure) -> Enclosure {
        self.mul(&o.recip())
    }

    /// Widens outward onto the dyadic grid `2^-w`.
    pub fn round_outward(&self, w: u32) -> Enclosure {
        Enclosure { lo: rational::round_down(&self.lo, w), hi: rational::round_up(&self.hi, w) }
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: (&self.lo).min(&o.lo).clone(),
            hi: (&self.hi).max(&o.hi).clone(),
        }
    }
}

fn pos(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// `[lo, hi] ∋ √m` with endpoints on the grid `2^-w`; a point for perfect
/// squares.
pub fn sqrt_interval(m: u64, w: u32) -> Enclosure {
    let r = int_root(&BigUint::from(m), 2);
    if &r * &r == BigUint::from(m) {
        return Enclosure::point(rational::from_biguint(&r));
    }
    let k = pos(int_root(&(BigUint::from(m) << (2 * w as usize)), 2));
    Enclosure::new(rational::dyadic(k.clone(), w), rational::dyadic(k + 1, w))
}

/// Certified enclosure of `√m` of width at most `2^-bits`: the unique
/// dyadic cell `[k/2^bits, (k+1)/2^bits]` containing it, so refinements
/// are nested. Exact point when `m` is a perfect square.
pub fn sqrt_enclosure(m: u64, bits: u32) -> Enclosure {
    assert!(m >= 1, "sqrt_enclosure needs m >= 1");
    sqrt_interval(m, bits)
}

/// Fixed-point bounds on `e^x` for `x >= 0`, as integers over `2^wp`.
fn exp_nonneg_fixed(x: &Rational, w: u32) -> (BigInt, BigInt, u32) {
    // reduce to r = x / 2^k <= 1/2, then square k times
    let k = if x.is_zero() { 0 } else { (rational::floor_log2(x) + 2).max(0) as u32 };
    let wp = w + k + 24;
    let r = x / rational::pow2(k as i64);
    let (p, q) = (r.numer().clone(), r.denom().clone());
    let one = BigInt::one() << wp as usize;
    let (mut tl, mut tu) = (one.clone(), one.clone());
    let (mut sl, mut su) = (one.clone(), one);
    let mut i = 1u64;
    loop {
        let qi = &q * BigInt::from(i);
        tl = (&tl * &p).div_floor(&qi);
        tu = ceil_div(&(&tu * &p), &qi);
        if tu <= BigInt::one() {
            // tail from term i on is at most twice term i (ratio <= 1/2)
            su += 2;
            break;
        }
        sl += &tl;
        su += &tu;
        i += 1;
    }
    for _ in 0..k {
        sl = (&sl * &sl) >> wp as usize;
        su = ceil_div(&(&su * &su), &(BigInt::one() << wp as usize));
    }
    (sl, su, wp)
}

/// Sound enclosure of `e^x` with relative width about `2^-w`.
pub fn exp_interval(x: &Rational, w: u32) -> Enclosure {
    if x.is_zero() {
        return Enclosure::point(Rational::one());
    }
    let (lo, hi, wp) = exp_nonneg_fixed(&x.abs(), w);
    if x.is_positive() {
        Enclosure::new(rational::dyadic(lo, wp), rational::dyadic(hi, wp))
    } else {
        let one = BigInt::one() << wp as usize;
        Enclosure::new(Rational::new(one.clone(), hi), Rational::new(one, lo))
    }
}

/// `e^x` over an enclosure of `x` (exp is increasing).
pub fn exp_range(x: &Enclosure, w: u32) -> Enclosure {
    let lo = exp_interval(x.lo(), w);
    let hi = exp_interval(x.hi(), w);
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}

/// Certified enclosure of `e^x` of width at most `2^-bits`.
///
/// For `x != 0` the result is the dyadic cell `[k/2^bits, (k+1)/2^bits]`
/// containing the (transcendental) value; cells at finer `bits` are
/// therefore nested inside coarser ones. `x = 0` gives the point `[1, 1]`.
pub fn exp_enclosure(x: &Rational, bits: u32) -> Enclosure {
    assert!(bits >= 1, "exp_enclosure needs bits >= 1");
    if x.is_zero() {
        return Enclosure::point(Rational::one());
    }
    let mut w = bits + 32;
    loop {
        let e = exp_interval(x, w);
        let k = rational::floor_scaled(e.lo(), bits);
        let cell_hi = rational::dyadic(&k + 1, bits);
        if e.hi() <= &cell_hi {
            return Enclosure::new(rational::dyadic(k, bits), cell_hi);
        }
        w *= 2;
    }
}

/// Fixed-point bounds on `atanh(z)` for rational `0 <= z <= 1/3`.
fn atanh_fixed(z: &Rational, wp: u32) -> (BigInt, BigInt) {
    debug_assert!(!z.is_negative() && *z <= rational::ratio(1, 3));
    let (p, q) = (z.numer().clone(), z.denom().clone());
    let (p2, q2) = (&p * &p, &q * &q);
    let mut pl = (&p << wp as usize).div_floor(&q);
    let mut pu = ceil_div(&(&p << wp as usize), &q);
    let (mut sl, mut su) = (pl.clone(), pu.clone());
    let mut i = 1u64;
    loop {
        pl = (&pl * &p2).div_floor(&q2);
        pu = ceil_div(&(&pu * &p2), &q2);
        if pu <= BigInt::one() {
            // tail <= z^(2i+1) / (1 - z^2) <= 9/8 ulp
            su += 2;
            break;
        }
        let odd = BigInt::from(2 * i + 1);
        sl += pl.div_floor(&odd);
        su += ceil_div(&pu, &odd);
        i += 1;
    }
    (sl, su)
}

/// `ln 2` to about `w` bits.
pub fn ln2_interval(w: u32) -> Enclosure {
    let wp = w + 8;
    let (lo, hi) = atanh_fixed(&rational::ratio(1, 3), wp);
    Enclosure::new(rational::dyadic(lo * 2, wp), rational::dyadic(hi * 2, wp))
}

/// `ln x` for rational `x > 0`, absolute width about `2^-w·|log2 x|`.
pub fn ln_interval(x: &Rational, w: u32) -> Enclosure {
    assert!(x.is_positive(), "ln of a non-positive number");
    let e = rational::floor_log2(x);
    let m = x / rational::pow2(e); // in [1, 2)
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let wp = w + 8 + (64 - (e.unsigned_abs()).leading_zeros());
    let (lo, hi) = atanh_fixed(&z, wp);
    let ln_m = Enclosure::new(rational::dyadic(lo * 2, wp), rational::dyadic(hi * 2, wp));
    ln_m.add(&ln2_interval(wp).scale(&rational::int(e)))
}

/// `log2 x` for rational `x > 0`; exact point when `x` is a power of two.
pub fn log2_interval(x: &Rational, w: u32) -> Enclosure {
    assert!(x.is_positive(), "log2 of a non-positive number");
    let e = rational::floor_log2(x);
    let m = x / rational::pow2(e);
    if m.is_one() {
        return Enclosure::point(rational::int(e));
    }
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let wp = w + 8;
    let (lo, hi) = atanh_fixed(&z, wp);
    let ln_m = Enclosure::new(rational::dyadic(lo * 2, wp), rational::dyadic(hi * 2, wp));
    // ln m >= 0 and ln 2 > 0
    let frac = ln_m.div(&ln2_interval(wp));
    frac.add_rational(&rational::int(e)).round_outward(wp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn f(r: &Rational) -> f64 {
        r.to_f64().unwrap()
    }

    /// Independent Taylor partial sum with the classical remainder bound
    /// `3/(k+1)!` for `e^1`.
    fn e_oracle(terms: u64) -> (Rational, Rational) {
        let mut sum = Rational::zero();
        let mut fact = Rational::one();
        for k in 0..terms {
            if k > 0 {
                fact *= int(k as i64);
            }
            sum += fact.recip();
        }
        let rem = int(3) / (fact * int(terms as i64));
        (sum.clone(), sum + rem)
    }

    #[test]
    fn exp_zero_is_exact() {
        assert_eq!(exp_enclosure(&int(0), 5), Enclosure::point(int(1)));
        assert_eq!(exp_enclosure(&int(0), 500), Enclosure::point(int(1)));
    }

    #[test]
    fn exp_one_matches_oracle() {
        let e = exp_enclosure(&int(1), 24);
        assert!(e.width() <= rational::pow2(-24));
        let (lo, hi) = e_oracle(30);
        // oracle interval is far narrower than 2^-24 and must overlap
        assert!(e.lo() <= &hi && &lo <= e.hi());
        assert!((f(e.lo()) - std::f64::consts::E).abs() < 1e-7);
    }

    #[test]
    fn exp_minus_four_is_positive() {
        let e = exp_enclosure(&int(-4), 24);
        assert!(e.lo().is_positive());
        assert!(e.width() <= rational::pow2(-24));
        assert!(e.contains(&ratio(183156, 10_000_000)) || (f(e.lo()) - 0.0183156).abs() < 1e-6);
        let tight = exp_interval(&int(-4), 200);
        assert!(tight.is_subset_of(&e));
        // e^-4 * e^4 brackets 1
        let prod = tight.mul(&exp_interval(&int(4), 200));
        assert!(prod.contains(&int(1)));
    }

    #[test]
    fn exp_interval_large_arguments() {
        let e = exp_interval(&ratio(-18, 1), 128);
        assert!((f(e.lo()) / (-18f64).exp() - 1.0).abs() < 1e-12);
        assert!(e.width() < e.lo() * rational::pow2(-100));
        let e = exp_interval(&int(30), 64);
        assert!((f(e.lo()) / 30f64.exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_enclosure(4, 10), Enclosure::point(int(2)));
        let s = sqrt_enclosure(2, 30);
        assert!(s.width() <= rational::pow2(-30));
        assert!((f(s.lo()) - std::f64::consts::SQRT_2).abs() < 1e-8);
        assert!(s.lo() * s.lo() <= int(2) && int(2) <= s.hi() * s.hi());
    }

    #[test]
    fn ln_and_log2() {
        let l = ln2_interval(100);
        assert!((f(l.lo()) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.width() < rational::pow2(-95));
        assert_eq!(log2_interval(&int(1024), 64), Enclosure::point(int(10)));
        assert_eq!(log2_interval(&ratio(1, 8), 64), Enclosure::point(int(-3)));
        let t = log2_interval(&int(3), 80);
        assert!((f(t.lo()) - 3f64.log2()).abs() < 1e-14);
        assert!(t.width() < rational::pow2(-70));
        let n = ln_interval(&ratio(1, 1000), 80);
        assert!((f(n.lo()) - (0.001f64).ln()).abs() < 1e-12);
        // ln(e^x) brackets x
        let ex = exp_interval(&ratio(7, 3), 100);
        let back = ln_interval(ex.lo(), 100).hull(&ln_interval(ex.hi(), 100));
        assert!(back.contains(&ratio(7, 3)));
    }

    proptest! {
        #[test]
        fn exp_nested_refinement(num in -4000i64..4000, den in 1i64..500, bits in 1u32..60) {
            let x = ratio(num, den);
            let coarse = exp_enclosure(&x, bits);
            let fine = exp_enclosure(&x, bits + 1 + (num.unsigned_abs() % 40) as u32);
            prop_assert!(coarse.lo() <= coarse.hi());
            prop_assert!(coarse.width() <= rational::pow2(-(bits as i64)));
            prop_assert!(fine.is_subset_of(&coarse));
        }

        #[test]
        fn sqrt_nested_and_bracketing(m in 1u64..100_000, bits in 1u32..80) {
            let coarse = sqrt_enclosure(m, bits);
            let fine = sqrt_enclosure(m, bits + 7);
            let mm = int(m as i64);
            prop_assert!(coarse.lo() * coarse.lo() <= mm && mm <= coarse.hi() * coarse.hi());
            prop_assert!(coarse.width() <= rational::pow2(-(bits as i64)));
            prop_assert!(fine.is_subset_of(&coarse));
        }

        #[test]
        fn exp_interval_is_sound(num in -3000i64..3000, den in 1i64..100) {
            let x = ratio(num, den);
            let e = exp_interval(&x, 60);
            let v = (num as f64 / den as f64).exp();
            prop_assert!(f(e.lo()) <= v * (1.0 + 1e-12) && v <= f(e.hi()) * (1.0 + 1e-12));
        }
    }
}
