use num_bigint::BigInt;
use num_traits::One;

use super::params::{rat_pow, WitnessParams, WEIGHT_EXPONENT};
use super::verify::WitnessReport;
use super::WitnessError;
use crate::exactnum::{binomial, rational};
use crate::{QuadNum, Rational};

/// A function on the grid `{-n, …, n}` with values in ℚ\[√Δ\].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridFn {
    n: u64,
    delta: u64,
    values: Vec<QuadNum>,
}

impl GridFn {
    pub fn zero(n: u64, delta: u64) -> Self {
        GridFn { n, delta, values: vec![QuadNum::zero(delta); 2 * n as usize + 1] }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    fn index(&self, t: i64) -> Option<usize> {
        (t.unsigned_abs() <= self.n).then(|| (t + self.n as i64) as usize)
    }

    /// Value at `t`; zero off the grid.
    pub fn get(&self, t: i64) -> QuadNum {
        self.index(t).map_or_else(|| QuadNum::zero(self.delta), |i| self.values[i].clone())
    }

    pub fn at(&self, t: i64) -> &QuadNum {
        &self.values[self.index(t).expect("grid point")]
    }

    pub fn set(&mut self, t: i64, v: QuadNum) -> Result<(), WitnessError> {
        let i = self.index(t).ok_or(WitnessError::PointOutOfRange { t, n: self.n })?;
        if v.delta() != self.delta {
            return Err(WitnessError::ParamMismatch(format!(
                "value at t = {t} has radicand {}, expected {}",
                v.delta(),
                self.delta
            )));
        }
        self.values[i] = v;
        Ok(())
    }

    /// `(t, value)` over the whole grid in increasing `t`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &QuadNum)> + '_ {
        let n = self.n as i64;
        self.values.iter().enumerate().map(move |(i, v)| (i as i64 - n, v))
    }

    pub fn support(&self) -> Vec<i64> {
        self.iter().filter(|(_, v)| !v.is_zero()).map(|(t, _)| t).collect()
    }

    pub fn l1_norm(&self) -> QuadNum {
        self.values.iter().fold(QuadNum::zero(self.delta), |acc, v| acc + v.abs())
    }

    /// `Σ_t R(t)·t^k`.
    pub fn moment(&self, k: u32) -> QuadNum {
        self.iter().fold(QuadNum::zero(self.delta), |acc, (t, v)| {
            if v.is_zero() {
                acc
            } else {
                acc + v.scale(&rational::powi(&rational::int(t), k as i64))
            }
        })
    }
}

/// The constructed witness together with its parameters and, once
/// verified, the property report.
#[derive(Debug, Clone)]
pub struct WitnessCert {
    pub params: WitnessParams,
    pub r: GridFn,
    pub report: Option<WitnessReport>,
}

fn check_u(u: i64, p: &WitnessParams) -> Result<(), WitnessError> {
    if u < 1 || u as u64 > p.u_max {
        return Err(WitnessError::UOutOfRange { u, u_max: p.u_max });
    }
    Ok(())
}

fn check_t(t: i64, p: &WitnessParams) -> Result<(), WitnessError> {
    if t.unsigned_abs() > p.n {
        return Err(WitnessError::PointOutOfRange { t, n: p.n });
    }
    Ok(())
}

/// `S_u = {±u, ±uΔ, …, ±uΔ^{d-1}}`, sorted.
pub fn support_set(u: i64, p: &WitnessParams) -> Result<Vec<i64>, WitnessError> {
    check_u(u, p)?;
    let mut s = Vec::with_capacity(2 * p.d as usize);
    let mut v = u;
    for _ in 0..p.d {
        s.push(v);
        s.push(-v);
        v *= p.delta_int as i64;
    }
    s.sort_unstable();
    Ok(s)
}

/// `p_u(t) = C(2n, n+t)·r_u(t)` in closed form:
/// `(-1)^{n-t} ∏_i (t - uΔ^i√Δ) / ∏_{s ∈ S_u, s ≠ t} (t - s)` on `S_u`,
/// zero elsewhere.
pub fn eval_p_u(u: i64, t: i64, p: &WitnessParams) -> Result<QuadNum, WitnessError> {
    let support = support_set(u, p)?;
    check_t(t, p)?;
    let delta = p.delta_int;
    if !support.contains(&t) {
        return Ok(QuadNum::zero(delta));
    }
    let mut num = QuadNum::one(delta);
    let mut scale = u;
    for _ in 0..p.d {
        let factor = QuadNum::new(rational::int(t), rational::int(-scale), delta)
            .expect("positive radicand");
        num = num * factor;
        scale *= delta as i64;
    }
    let den = support
        .iter()
        .filter(|&&s| s != t)
        .fold(BigInt::one(), |acc, &s| acc * BigInt::from(t - s));
    let mut v = num.scale(&Rational::new(BigInt::one(), den));
    if (p.n as i64 - t).rem_euclid(2) == 1 {
        v = -v;
    }
    Ok(v)
}

/// `r_u(t) = p_u(t) / C(2n, n+t)`; the `(2n)!` normalisation is never formed.
pub fn eval_r_u(u: i64, t: i64, p: &WitnessParams) -> Result<QuadNum, WitnessError> {
    let pu = eval_p_u(u, t, p)?;
    let c = binomial(2 * p.n as i64, p.n as i64 + t);
    Ok(pu.scale(&rational::from_biguint(&c).recip()))
}

/// `‖p_u‖₁`, summed over the support.
pub fn p_norm(u: i64, p: &WitnessParams) -> Result<QuadNum, WitnessError> {
    let mut acc = QuadNum::zero(p.delta_int);
    for t in support_set(u, p)? {
        acc = acc + eval_p_u(u, t, p)?.abs();
    }
    Ok(acc)
}

/// `‖p_u‖₁` for `u = 1, …, u_max`, as used by [`build_witness`].
pub fn support_norms(p: &WitnessParams) -> Vec<QuadNum> {
    (1..=p.u_max as i64).map(|u| p_norm(u, p).expect("u in range")).collect()
}

/// Builds `R(t) = (-1)^t P(t) / ‖P‖₁` with
/// `P = Σ_u u^20 · p_u / ‖p_u‖₁`.
pub fn build_witness(p: &WitnessParams) -> WitnessCert {
    let delta = p.delta_int;
    let mut big_p = GridFn::zero(p.n, delta);
    for (u, norm) in (1..=p.u_max as i64).zip(support_norms(p)) {
        let weight = norm
            .recip()
            .expect("p_u is nonzero on its support")
            .scale(&rat_pow(u as u64, WEIGHT_EXPONENT));
        for t in support_set(u, p).expect("u in range") {
            let term = eval_p_u(u, t, p).expect("t in grid") * &weight;
            let cur = big_p.at(t).clone();
            big_p.set(t, cur + term).expect("t in grid");
        }
    }
    let inv = big_p.l1_norm().recip().expect("P is nonzero");
    let mut r = GridFn::zero(p.n, delta);
    for (t, v) in big_p.iter() {
        if v.is_zero() {
            continue;
        }
        let mut x = v * &inv;
        if t.rem_euclid(2) == 1 {
            x = -x;
        }
        r.set(t, x).expect("t in grid");
    }
    WitnessCert { params: p.clone(), r, report: None }
}

impl WitnessCert {
    /// Rebuilds a certificate from stored values, checking that the
    /// support lies on the grid and uses the parameters' radicand.
    pub fn from_values(
        params: WitnessParams,
        values: impl IntoIterator<Item = (i64, Rational, Rational)>,
    ) -> Result<Self, WitnessError> {
        let mut r = GridFn::zero(params.n, params.delta_int);
        for (t, a, b) in values {
            let v = QuadNum::new(a, b, params.delta_int)
                .map_err(|e| WitnessError::ParamMismatch(e.to_string()))?;
            r.set(t, v)?;
        }
        Ok(WitnessCert { params, r, report: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualwitness::witness_params;
    use crate::exactnum::rational::{int, ratio};

    fn q(a: Rational, b: Rational) -> QuadNum {
        QuadNum::new(a, b, 2).unwrap()
    }

    #[test]
    fn support_examples() {
        let p = witness_params(65, 2).unwrap();
        assert_eq!(support_set(1, &p).unwrap(), vec![-2, -1, 1, 2]);
        let p3 = witness_params(513, 3).unwrap();
        assert_eq!(support_set(3, &p3).unwrap(), vec![-12, -6, -3, 3, 6, 12]);
        let p1 = witness_params(9, 1).unwrap();
        assert_eq!(support_set(1, &p1).unwrap(), vec![-1, 1]);
        assert!(support_set(0, &p1).is_err());
        assert!(support_set(5, &p1).is_err());
    }

    #[test]
    fn p_u_closed_form_small() {
        let p = witness_params(9, 1).unwrap();
        assert_eq!(eval_p_u(1, 1, &p).unwrap(), q(ratio(1, 2), ratio(-1, 2)));
        assert_eq!(eval_p_u(1, -1, &p).unwrap(), q(ratio(1, 2), ratio(1, 2)));
        assert_eq!(eval_p_u(1, 1, &p).unwrap().signum(), -1);
        assert!(eval_p_u(1, 2, &p).unwrap().is_zero());
        assert!(eval_p_u(1, 0, &p).unwrap().is_zero());
        assert!(eval_p_u(1, 10, &p).is_err());
    }

    #[test]
    fn r_u_relation_and_sign() {
        let p = witness_params(9, 1).unwrap();
        for u in 1..=4 {
            for t in -9..=9 {
                let r = eval_r_u(u, t, &p).unwrap();
                let pu = eval_p_u(u, t, &p).unwrap();
                let c = rational::from_biguint(&binomial(18, 9 + t));
                assert_eq!(r.scale(&c), pu);
            }
        }
        assert_eq!(eval_r_u(1, 1, &p).unwrap().signum(), -1);
    }

    #[test]
    fn sign_law_on_positive_support() {
        for (n, d) in [(9, 1), (31, 1), (65, 2), (513, 3)] {
            let p = witness_params(n, d).unwrap();
            for u in 1..=p.u_max as i64 {
                for t in support_set(u, &p).unwrap().into_iter().filter(|&t| t > 0) {
                    let expect = if t % 2 == 0 { 1 } else { -1 };
                    assert_eq!(eval_p_u(u, t, &p).unwrap().signum(), expect, "n={n} u={u} t={t}");
                }
            }
        }
    }

    #[test]
    fn small_witness_shape() {
        let p = witness_params(9, 1).unwrap();
        let cert = build_witness(&p);
        assert_eq!(cert.r.l1_norm(), QuadNum::one(2));
        assert_eq!(cert.r.support(), vec![-4, -3, -2, -1, 1, 2, 3, 4]);
        assert!(cert.r.get(0).is_zero());
        assert_eq!(cert.r.get(1).signum(), 1);
        assert_eq!(cert.r.get(-1).signum(), -1);
    }

    #[test]
    fn disjoint_supports_for_d1() {
        // ‖P‖₁ = Σ u^20 exactly when the S_u are disjoint.
        for n in [9u64, 15, 31] {
            let p = witness_params(n, 1).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for u in 1..=p.u_max as i64 {
                for t in support_set(u, &p).unwrap() {
                    assert!(seen.insert(t));
                }
            }
            let mut big_p = GridFn::zero(n, p.delta_int);
            for (u, norm) in (1..=p.u_max as i64).zip(support_norms(&p)) {
                let w = norm.recip().unwrap().scale(&rat_pow(u as u64, 20));
                for t in support_set(u, &p).unwrap() {
                    big_p.set(t, eval_p_u(u, t, &p).unwrap() * &w).unwrap();
                }
            }
            let expected: Rational = (1..=p.u_max).map(|u| rat_pow(u, 20)).sum();
            assert_eq!(big_p.l1_norm(), QuadNum::from_rational(expected, p.delta_int));
        }
    }

    #[test]
    fn grid_rejects_foreign_values() {
        let mut g = GridFn::zero(3, 2);
        assert!(g.set(4, QuadNum::one(2)).is_err());
        assert!(g.set(1, QuadNum::one(3)).is_err());
        assert!(g.set(-3, QuadNum::from_rational(int(5), 2)).is_ok());
        assert_eq!(g.moment(1), QuadNum::from_int(-15, 2));
    }
}
