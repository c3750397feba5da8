//! Rational helpers and the canonical `"num/den"` text form.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumError;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_biguint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// `base^e` for any integer exponent (base must be nonzero when `e < 0`).
pub fn powi(base: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

/// Canonical text form `"num/den"` (denominator always written).
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse(s: &str) -> Result<Rational, NumError> {
    let err = || NumError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn floor_to_int(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_to_int(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Largest `k` with `k / 2^w <= r`.
pub fn floor_scaled(r: &Rational, w: u32) -> BigInt {
    (r.numer() << w as usize).div_floor(r.denom())
}

/// Smallest `k` with `k / 2^w >= r`.
pub fn ceil_scaled(r: &Rational, w: u32) -> BigInt {
    -((-(r.numer() << w as usize)).div_floor(r.denom()))
}

pub fn dyadic(k: BigInt, w: u32) -> Rational {
    Rational::new(k, BigInt::one() << w as usize)
}

/// Rounds `r` down onto the grid `2^-w`.
pub fn round_down(r: &Rational, w: u32) -> Rational {
    dyadic(floor_scaled(r, w), w)
}

/// Rounds `r` up onto the grid `2^-w`.
pub fn round_up(r: &Rational, w: u32) -> Rational {
    dyadic(ceil_scaled(r, w), w)
}

/// `floor(log2 |r|)` for nonzero `r`.
pub fn floor_log2(r: &Rational) -> i64 {
    debug_assert!(!r.is_zero());
    let nb = r.numer().abs().bits() as i64;
    let db = r.denom().bits() as i64;
    let e = nb - db;
    // 2^(e-1) < |r| < 2^(e+1); settle the boundary exactly.
    if r.abs() >= pow2(e) {
        e
    } else {
        e - 1
    }
}

/// Serde adapter writing a rational as its canonical string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_opt_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&to_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_vec_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_roundtrip() {
        let r = ratio(-6, 4);
        assert_eq!(to_string(&r), "-3/2");
        assert_eq!(parse("-3/2").unwrap(), r);
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(to_string(&int(7)), "7/1");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn floor_log2_boundaries() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&int(7)), 2);
        assert_eq!(floor_log2(&ratio(1, 2)), -1);
        assert_eq!(floor_log2(&ratio(3, 8)), -2);
        assert_eq!(floor_log2(&ratio(-9, 1)), 3);
    }

    #[test]
    fn scaled_rounding_brackets() {
        let r = ratio(1, 3);
        let lo = round_down(&r, 10);
        let hi = round_up(&r, 10);
        assert!(lo <= r && r <= hi);
        assert_eq!(&hi - &lo, pow2(-10));
        assert_eq!(round_down(&ratio(-1, 3), 2), ratio(-1, 2));
    }
}
