use serde::{Deserialize, Serialize};

use super::construction::{eval_p_u, p_norm};
use super::params::{delta_enclosure, e4_enclosure, lemma1_constant_enclosure, WitnessParams};
use super::verify::{ge_scaled, le_scaled, refine, RefinementStep};
use crate::exactnum::{binomial_row, rational};
use crate::{QuadNum, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimInstance {
    pub u: i64,
    pub j: u32,
}

/// Results of one inequality family over all `(u, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub status: Status,
    pub checked: u64,
    pub passed: u64,
    pub failures: Vec<ClaimInstance>,
    pub undecided: Vec<ClaimInstance>,
    /// Smallest certified slack (`lhs - rhs` for `>=`, `rhs - lhs` for
    /// `<=`), with transcendental constants at their sound endpoint.
    pub tightest: Option<(ClaimInstance, QuadNum)>,
}

impl ClaimTally {
    fn new() -> Self {
        ClaimTally {
            status: Status::Pass,
            checked: 0,
            passed: 0,
            failures: Vec::new(),
            undecided: Vec::new(),
            tightest: None,
        }
    }

    fn record(&mut self, at: ClaimInstance, (st, slack): (Status, QuadNum)) {
        self.checked += 1;
        match st {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failures.push(at),
            Status::Undecided => self.undecided.push(at),
        }
        self.status = self.status.and(st);
        match &self.tightest {
            Some((_, cur)) if cur.cmp_exact(&slack).is_le() => {}
            _ => self.tightest = Some((at, slack)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub status: Status,
    pub precision_bits: u32,
    pub refinement_trace: Vec<RefinementStep>,
    /// `|p_u(-u)| >= (√Δ+1)/2 · u^{-(d-1)} · Δ^{-(d-1)²/2}`.
    pub middle_mass: ClaimTally,
    /// `|p_u(-uΔ^j)| <= e⁴ Δ^{-(j²-3j-2)/2} · (middle-mass bound)`, `1 <= j < d`.
    pub tails_small: ClaimTally,
    /// `|r_u(-uΔ^j)| >= |r_u(uΔ^j)| >= exp(-18/√Δ)|r_u(-uΔ^j)|`.
    pub symmetry_r: ClaimTally,
    /// The same comparison for `p_u`.
    pub symmetry_p: ClaimTally,
    /// `|p_u(-u)| >= ‖p_u‖₁ / (8Δ²e⁴)`.
    pub mass_fraction: ClaimTally,
    /// `|p_u(-u)| >= |p_u(u)| >= exp(-18/√Δ - 4)/(8Δ²) · ‖p_u‖₁`.
    pub two_point: ClaimTally,
}

/// `Δ^{e/2}` in ℚ\[√Δ\] for any integer `e`.
fn delta_half_pow(delta: u64, e: i64) -> QuadNum {
    let d = rational::int(delta as i64);
    let whole = rational::powi(&d, e.div_euclid(2));
    if e.rem_euclid(2) == 0 {
        QuadNum::from_rational(whole, delta)
    } else {
        QuadNum::root(delta).scale(&whole)
    }
}

fn exact_ge(lhs: &QuadNum, rhs: &QuadNum) -> (Status, QuadNum) {
    let slack = lhs - rhs;
    let st = if slack.signum() >= 0 { Status::Pass } else { Status::Fail };
    (st, slack)
}

/// Checks every instance once at `bits` of enclosure precision.
pub fn verify_claims_at(p: &WitnessParams, bits: u32) -> ClaimReport {
    let delta = p.delta_int;
    let d = i64::from(p.d);
    let dl = delta_enclosure(delta, bits);
    let e4 = e4_enclosure(bits);
    let pair_const = lemma1_constant_enclosure(delta, bits);
    let row = binomial_row(2 * p.n);
    let n = p.n as i64;
    let binom = |t: i64| rational::from_biguint(&row[(n + t) as usize]);

    let mut middle_mass = ClaimTally::new();
    let mut tails_small = ClaimTally::new();
    let mut symmetry_r = ClaimTally::new();
    let mut symmetry_p = ClaimTally::new();
    let mut mass_fraction = ClaimTally::new();
    let mut two_point = ClaimTally::new();

    let half = rational::ratio(1, 2);
    let sqrt_plus_one_half = (QuadNum::root(delta) + QuadNum::one(delta)).scale(&half);
    let eight_delta_sq = rational::int(8 * (delta * delta) as i64);

    for u in 1..=p.u_max as i64 {
        let at0 = ClaimInstance { u, j: 0 };
        let pm = |t: i64| eval_p_u(u, t, p).expect("support point").abs();
        let p_minus_u = pm(-u);

        let middle = sqrt_plus_one_half
            .scale(&rational::powi(&rational::int(u), -(d - 1)))
            * delta_half_pow(delta, -(d - 1) * (d - 1));
        middle_mass.record(at0, exact_ge(&p_minus_u, &middle));

        let mut scale = u;
        for j in 0..d {
            let at = ClaimInstance { u, j: j as u32 };
            if j >= 1 {
                let base = &middle * &delta_half_pow(delta, -(j * j - 3 * j - 2));
                tails_small.record(at, le_scaled(&pm(-scale), &e4, &base));
            }
            let (pn, pp) = (pm(-scale), pm(scale));
            let rn = pn.scale(&binom(-scale).recip());
            let rp = pp.scale(&binom(scale).recip());
            symmetry_r.record(at, exact_ge(&rn, &rp));
            symmetry_r.record(at, ge_scaled(&rp, &dl, &rn));
            symmetry_p.record(at, exact_ge(&pn, &pp));
            symmetry_p.record(at, ge_scaled(&pp, &dl, &pn));
            scale *= delta as i64;
        }

        let norm = p_norm(u, p).expect("u in range");
        mass_fraction.record(at0, le_scaled(&norm, &e4, &p_minus_u.scale(&eight_delta_sq)));
        let p_u = pm(u);
        two_point.record(at0, exact_ge(&p_minus_u, &p_u));
        two_point.record(at0, ge_scaled(&p_u, &pair_const, &norm.scale(&eight_delta_sq.recip())));
    }

    let status = Status::all(
        [&middle_mass, &tails_small, &symmetry_r, &symmetry_p, &mass_fraction, &two_point]
            .map(|t| t.status),
    );
    ClaimReport {
        status,
        precision_bits: bits,
        refinement_trace: vec![RefinementStep { bits, status }],
        middle_mass,
        tails_small,
        symmetry_r,
        symmetry_p,
        mass_fraction,
        two_point,
    }
}

/// Checks the per-`u` inequalities behind the construction for every
/// `u ∈ [1, u_max]` and applicable `j`, refining precision while undecided.
pub fn verify_claims(p: &WitnessParams, bits: u32) -> ClaimReport {
    refine(bits, |b| verify_claims_at(p, b), |r| r.status, |r, trace| r.refinement_trace = trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualwitness::witness_params;
    use crate::DEFAULT_PRECISION;

    #[test]
    fn half_powers() {
        assert_eq!(delta_half_pow(2, 2), QuadNum::from_int(2, 2));
        assert_eq!(delta_half_pow(2, 1), QuadNum::root(2));
        assert_eq!(delta_half_pow(2, -1), QuadNum::root(2).scale(&rational::ratio(1, 2)));
        assert_eq!(delta_half_pow(3, -4), QuadNum::from_rational(rational::ratio(1, 9), 3));
        assert_eq!(&delta_half_pow(5, -3) * &delta_half_pow(5, 3), QuadNum::one(5));
    }

    #[test]
    fn smallest_instance() {
        let p = witness_params(9, 1).unwrap();
        let rep = verify_claims(&p, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass);
        // d = 1: the middle-mass bound is attained exactly
        let (_, slack) = rep.middle_mass.tightest.clone().unwrap();
        assert!(slack.is_zero());
        assert_eq!(rep.middle_mass.checked, 4);
        assert_eq!(rep.tails_small.checked, 0);
        assert_eq!(rep.symmetry_p.checked, 8);
    }

    #[test]
    fn symmetry_ratio_for_u1() {
        let p = witness_params(9, 1).unwrap();
        let a = eval_p_u(1, 1, &p).unwrap().abs();
        let b = eval_p_u(1, -1, &p).unwrap().abs();
        let ratio = a.checked_div(&b).unwrap();
        // (√2 - 1)/(√2 + 1) = 3 - 2√2
        assert_eq!(ratio, QuadNum::new(rational::int(3), rational::int(-2), 2).unwrap());
        assert!((ratio.to_f64() - 0.171_572_875).abs() < 1e-8);
        let dl = delta_enclosure(2, 64);
        assert!(QuadNum::from_rational(dl.hi().clone(), 2).cmp_exact(&ratio).is_lt());
    }

    #[test]
    fn two_point_norm_ratio_for_d1() {
        let p = witness_params(9, 1).unwrap();
        for u in 1..=4 {
            let norm = p_norm(u, &p).unwrap();
            let m = eval_p_u(u, -u, &p).unwrap().abs();
            // ‖p_u‖₁/|p_u(-u)| = 2√Δ/(√Δ+1) < 2
            let expect = QuadNum::root(2).scale(&rational::int(2))
                .checked_div(&(QuadNum::root(2) + QuadNum::one(2)))
                .unwrap();
            assert_eq!(norm.checked_div(&m).unwrap(), expect);
            assert!(expect.cmp_exact(&QuadNum::from_int(2, 2)).is_lt());
        }
    }
}
