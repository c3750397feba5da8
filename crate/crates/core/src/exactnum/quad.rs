use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::enclosure::{sqrt_interval, Enclosure};
use super::intmath::int_root;
use super::rational::{self, Rational};
use super::NumError;

/// Exact element `a + b·√delta` of ℚ\[√delta\].
///
/// When `delta` is a perfect square the `√delta` part is folded into `a`
/// on construction, so `b == 0` and the sign test stays total.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: Rational,
    b: Rational,
    delta: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadNum {
    pub fn new(a: Rational, b: Rational, delta: u64) -> Result<Self, NumError> {
        if delta == 0 {
            return Err(NumError::ZeroRadicand);
        }
        let root = int_root(&BigUint::from(delta), 2);
        if &root * &root == BigUint::from(delta) {
            let a = a + b * rational::from_biguint(&root);
            return Ok(QuadNum { a, b: Rational::zero(), delta });
        }
        Ok(QuadNum { a, b, delta })
    }

    /// Builds from parts already known to be canonical for `delta`.
    fn raw(a: Rational, b: Rational, delta: u64) -> Self {
        QuadNum { a, b, delta }
    }

    pub fn from_rational(a: Rational, delta: u64) -> Self {
        assert!(delta > 0, "radicand must be positive");
        QuadNum::raw(a, Rational::zero(), delta)
    }

    pub fn from_int(a: i64, delta: u64) -> Self {
        Self::from_rational(rational::int(a), delta)
    }

    pub fn zero(delta: u64) -> Self {
        Self::from_int(0, delta)
    }

    pub fn one(delta: u64) -> Self {
        Self::from_int(1, delta)
    }

    /// `√delta` itself.
    pub fn root(delta: u64) -> Self {
        QuadNum::new(Rational::zero(), Rational::one(), delta).expect("positive radicand")
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign, `-1`, `0` or `1`.
    pub fn signum(&self) -> i8 {
        quad_sign(self)
    }

    pub fn abs(&self) -> QuadNum {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Conjugate `a - b√delta`.
    pub fn conj(&self) -> QuadNum {
        QuadNum::raw(self.a.clone(), -&self.b, self.delta)
    }

    /// Field norm `a² - b²·delta`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rational::int(self.delta as i64)
    }

    pub fn scale(&self, r: &Rational) -> QuadNum {
        QuadNum::raw(&self.a * r, &self.b * r, self.delta)
    }

    pub fn recip(&self) -> Result<QuadNum, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // b = 0 or non-square delta, so the norm is nonzero.
        let n = self.norm();
        Ok(QuadNum::raw(&self.a / &n, -&self.b / &n, self.delta))
    }

    fn check(&self, other: &QuadNum) -> Result<(), NumError> {
        if self.delta != other.delta {
            Err(NumError::DeltaMismatch(self.delta, other.delta))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, y: &QuadNum) -> Result<QuadNum, NumError> {
        self.check(y)?;
        Ok(QuadNum::raw(&self.a + &y.a, &self.b + &y.b, self.delta))
    }

    pub fn checked_sub(&self, y: &QuadNum) -> Result<QuadNum, NumError> {
        self.check(y)?;
        Ok(QuadNum::raw(&self.a - &y.a, &self.b - &y.b, self.delta))
    }

    pub fn checked_mul(&self, y: &QuadNum) -> Result<QuadNum, NumError> {
        self.check(y)?;
        let dl = rational::int(self.delta as i64);
        let a = &self.a * &y.a + &self.b * &y.b * dl;
        let b = &self.a * &y.b + &self.b * &y.a;
        Ok(QuadNum::raw(a, b, self.delta))
    }

    pub fn checked_div(&self, y: &QuadNum) -> Result<QuadNum, NumError> {
        self.check(y)?;
        self.checked_mul(&y.recip()?)
    }

    /// Exact comparison of two elements of the same field.
    pub fn cmp_exact(&self, other: &QuadNum) -> Ordering {
        match (self - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Rational enclosure of the real value, `√delta` resolved to `bits`.
    pub fn to_enclosure(&self, bits: u32) -> Enclosure {
        if self.b.is_zero() {
            return Enclosure::point(self.a.clone());
        }
        let s = sqrt_interval(self.delta, bits);
        Enclosure::point(self.a.clone()).add(&s.scale(&self.b))
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.delta as f64).sqrt()
    }

    pub fn pow(&self, e: u32) -> QuadNum {
        let mut acc = QuadNum::one(self.delta);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Applies `op` to two elements of the same field.
pub fn quad_arith(x: &QuadNum, y: &QuadNum, op: QuadOp) -> Result<QuadNum, NumError> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

/// Exact sign of `a + b√delta`.
///
/// When `a` and `b` have opposite signs the larger of `a²` and
/// `b²·delta` decides.
pub fn quad_sign(x: &QuadNum) -> i8 {
    let sa = sgn(&x.a);
    let sb = sgn(&x.b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = &x.a * &x.a;
    let rhs = &x.b * &x.b * rational::int(x.delta as i64);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn sgn(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}·√{}", self.a, self.b, self.delta)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b QuadNum> for &'a QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'b QuadNum) -> QuadNum {
                self.$checked(rhs).expect("QuadNum operands from different fields")
            }
        }
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'b QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::raw(-&self.a, -&self.b, self.delta)
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    #[serde(with = "rational::serde_str")]
    a: Rational,
    #[serde(with = "rational::serde_str")]
    b: Rational,
    delta: u64,
}

impl Serialize for QuadNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadRepr { a: self.a.clone(), b: self.b.clone(), delta: self.delta }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QuadRepr::deserialize(d)?;
        QuadNum::new(r.a, r.b, r.delta).map_err(serde::de::Error::custom)
    }
}
