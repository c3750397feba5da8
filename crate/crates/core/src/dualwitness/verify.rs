use serde::{Deserialize, Serialize};

use super::construction::WitnessCert;
use super::params::{e_minus15_enclosure, positive_floor_constant, rat_pow};
use crate::exactnum::rational::{self, Rational};
use crate::{Enclosure, QuadNum, Status, PRECISION_CAP};

/// One pass of the automatic precision loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementStep {
    pub bits: u32,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormCheck {
    pub status: Status,
    pub norm: QuadNum,
    /// `‖R‖₁ - 1`.
    pub margin: QuadNum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationCheck {
    pub status: Status,
    /// Enclosure of `δ = exp(-18/√Δ)`; margins use its upper endpoint.
    pub delta: Enclosure,
    pub worst_t: Option<i64>,
    /// `min_t R(t) - δ̄·|R(-t)|` over `t ∈ [1, n]`.
    pub worst_margin: QuadNum,
    pub failures: Vec<i64>,
    pub undecided: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Moment {
    pub k: u32,
    pub value: QuadNum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityCheck {
    pub status: Status,
    /// Moments `⟨R, t^k⟩` are required to vanish for `k <= d - 2`.
    pub max_degree: i64,
    pub moments: Vec<Moment>,
    /// Whether the top moment `k = d - 2` vanishes; `None` when `d < 2`.
    /// Only `k < d - 2` is claimed by the theorem statement, the
    /// degree count gives `k <= d - 2`.
    pub top_degree_vanishes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPoint {
    pub value: QuadNum,
    pub exempt: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessCheck {
    pub status: Status,
    /// Points `1 <= |t| <= u_max` are checked.
    pub range: u64,
    /// `20 / n^20`, the floor for `t < 0`.
    #[serde(with = "rational::serde_str")]
    pub negative_floor: Rational,
    /// `exp(-18/√2 - 4) / (8 n^15)`, the floor for `t > 0`.
    pub positive_floor: Enclosure,
    /// The printed constant `e^{-15} / (8 n^15)`, checked for information
    /// only; it exceeds the derivable floor.
    pub positive_floor_stated: Enclosure,
    pub stated_floor_status: Status,
    pub worst_negative: Option<(i64, QuadNum)>,
    pub worst_positive: Option<(i64, QuadNum)>,
    pub failures: Vec<i64>,
    pub undecided: Vec<i64>,
    pub zero_point: ZeroPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub status: Status,
    pub precision_bits: u32,
    pub refinement_trace: Vec<RefinementStep>,
    pub weight_exponent: u32,
    pub u_max: u64,
    pub l1_norm: NormCheck,
    pub domination: DominationCheck,
    pub orthogonality: OrthogonalityCheck,
    pub smoothness: SmoothnessCheck,
}

/// Certified `lhs >= c·base` for `base >= 0` and `c` enclosed: pass
/// against the upper endpoint, fail against the lower one.
pub(crate) fn ge_scaled(lhs: &QuadNum, c: &Enclosure, base: &QuadNum) -> (Status, QuadNum) {
    let margin = lhs - &base.scale(c.hi());
    if margin.signum() >= 0 {
        return (Status::Pass, margin);
    }
    if (lhs - &base.scale(c.lo())).signum() < 0 {
        (Status::Fail, margin)
    } else {
        (Status::Undecided, margin)
    }
}

/// Certified `lhs <= c·base` for `base >= 0`.
pub(crate) fn le_scaled(lhs: &QuadNum, c: &Enclosure, base: &QuadNum) -> (Status, QuadNum) {
    let margin = &base.scale(c.lo()) - lhs;
    if margin.signum() >= 0 {
        return (Status::Pass, margin);
    }
    if (&base.scale(c.hi()) - lhs).signum() < 0 {
        (Status::Fail, margin)
    } else {
        (Status::Undecided, margin)
    }
}

fn keep_min(slot: &mut Option<(i64, QuadNum)>, t: i64, m: QuadNum) {
    match slot {
        Some((_, cur)) if cur.cmp_exact(&m).is_le() => {}
        _ => *slot = Some((t, m)),
    }
}

/// Runs all four checks once at `bits` of enclosure precision.
pub fn verify_witness_at(cert: &WitnessCert, bits: u32) -> WitnessReport {
    let p = &cert.params;
    let r = &cert.r;
    let delta = p.delta_int;
    let n = p.n as i64;

    let norm = r.l1_norm();
    let margin = &norm - &QuadNum::one(delta);
    let l1_norm = NormCheck {
        status: if margin.is_zero() { Status::Pass } else { Status::Fail },
        norm,
        margin,
    };

    let dl = p.delta_enclosure(bits);
    let mut worst: Option<(i64, QuadNum)> = None;
    let (mut failures, mut undecided) = (Vec::new(), Vec::new());
    for t in 1..=n {
        let (st, m) = ge_scaled(r.at(t), &dl, &r.at(-t).abs());
        match st {
            Status::Fail => failures.push(t),
            Status::Undecided => undecided.push(t),
            Status::Pass => {}
        }
        keep_min(&mut worst, t, m);
    }
    let (worst_t, worst_margin) = worst.map_or((None, QuadNum::zero(delta)), |(t, m)| (Some(t), m));
    let domination = DominationCheck {
        status: status_of(&failures, &undecided),
        delta: dl,
        worst_t,
        worst_margin,
        failures,
        undecided,
    };

    let max_degree = i64::from(p.d) - 2;
    let moments: Vec<Moment> =
        (0..=max_degree.max(-1)).map(|k| Moment { k: k as u32, value: r.moment(k as u32) }).collect();
    let top_degree_vanishes = moments.last().map(|m| m.value.is_zero());
    let orthogonality = OrthogonalityCheck {
        status: if moments.iter().all(|m| m.value.is_zero()) { Status::Pass } else { Status::Fail },
        max_degree,
        moments,
        top_degree_vanishes,
    };

    let neg_floor = rational::int(20) / rat_pow(p.n, 20);
    let scale15 = (rational::int(8) * rat_pow(p.n, 15)).recip();
    let pos_floor = positive_floor_constant(bits).scale(&scale15);
    let pos_stated = e_minus15_enclosure(bits).scale(&scale15);
    let one = QuadNum::one(delta);
    let (mut worst_negative, mut worst_positive) = (None, None);
    let (mut failures, mut undecided) = (Vec::new(), Vec::new());
    let mut stated = Status::Pass;
    for t in 1..=p.u_max as i64 {
        let a = r.at(-t).abs();
        let m = &a - &QuadNum::from_rational(neg_floor.clone(), delta);
        if m.signum() < 0 {
            failures.push(-t);
        }
        keep_min(&mut worst_negative, -t, m);

        let a = r.at(t).abs();
        let (st, m) = ge_scaled(&a, &pos_floor, &one);
        match st {
            Status::Fail => failures.push(t),
            Status::Undecided => undecided.push(t),
            Status::Pass => {}
        }
        keep_min(&mut worst_positive, t, m);
        stated = stated.and(ge_scaled(&a, &pos_stated, &one).0);
    }
    failures.sort_unstable();
    let zero = r.at(0).clone();
    let smoothness = SmoothnessCheck {
        status: status_of(&failures, &undecided),
        range: p.u_max,
        negative_floor: neg_floor,
        positive_floor: pos_floor,
        positive_floor_stated: pos_stated,
        stated_floor_status: stated,
        worst_negative,
        worst_positive,
        failures,
        undecided,
        zero_point: ZeroPoint { exempt: true, value: zero },
    };

    let status = Status::all([
        l1_norm.status,
        domination.status,
        orthogonality.status,
        smoothness.status,
    ]);
    WitnessReport {
        status,
        precision_bits: bits,
        refinement_trace: vec![RefinementStep { bits, status }],
        weight_exponent: super::WEIGHT_EXPONENT,
        u_max: p.u_max,
        l1_norm,
        domination,
        orthogonality,
        smoothness,
    }
}

pub(crate) fn status_of<T>(failures: &[T], undecided: &[T]) -> Status {
    if !failures.is_empty() {
        Status::Fail
    } else if !undecided.is_empty() {
        Status::Undecided
    } else {
        Status::Pass
    }
}

/// Verifies the witness starting at `bits`, doubling the enclosure
/// precision while any check is undecided, up to the 4096-bit cap.
pub fn verify_witness(cert: &WitnessCert, bits: u32) -> WitnessReport {
    refine(bits, |b| verify_witness_at(cert, b), |r| r.status, |r, trace| r.refinement_trace = trace)
}

pub(crate) fn refine<R>(
    bits: u32,
    mut run: impl FnMut(u32) -> R,
    status: impl Fn(&R) -> Status,
    set_trace: impl Fn(&mut R, Vec<RefinementStep>),
) -> R {
    let mut bits = bits.max(1);
    let mut trace = Vec::new();
    loop {
        let mut report = run(bits);
        let st = status(&report);
        trace.push(RefinementStep { bits, status: st });
        if st != Status::Undecided || bits >= PRECISION_CAP {
            set_trace(&mut report, trace);
            return report;
        }
        bits = (bits * 2).min(PRECISION_CAP);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualwitness::{build_witness, witness_params, GridFn};
    use crate::DEFAULT_PRECISION;

    #[test]
    fn smallest_instance_passes() {
        let cert = build_witness(&witness_params(9, 1).unwrap());
        let rep = verify_witness(&cert, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.smoothness.zero_point.exempt);
        assert!(rep.smoothness.zero_point.value.is_zero());
        assert!(rep.orthogonality.moments.is_empty());
        assert_eq!(rep.orthogonality.top_degree_vanishes, None);
        assert_eq!(rep.refinement_trace.len(), 1);
    }

    #[test]
    fn negated_value_fails_domination() {
        let mut cert = build_witness(&witness_params(9, 1).unwrap());
        let v = cert.r.get(2);
        cert.r.set(2, -v).unwrap();
        let rep = verify_witness(&cert, DEFAULT_PRECISION);
        assert_eq!(rep.domination.status, Status::Fail);
        assert_eq!(rep.domination.failures, vec![2]);
        assert_eq!(rep.domination.worst_t, Some(2));
        assert_eq!(rep.domination.worst_margin.signum(), -1);
        assert_eq!(rep.l1_norm.status, Status::Pass);
    }

    #[test]
    fn zero_function_fails_norm() {
        let p = witness_params(9, 1).unwrap();
        let cert = WitnessCert { params: p, r: GridFn::zero(9, 2), report: None };
        let rep = verify_witness(&cert, 64);
        assert_eq!(rep.l1_norm.status, Status::Fail);
        assert_eq!(rep.status, Status::Fail);
    }

    #[test]
    fn enclosure_checks_are_three_valued() {
        let c = Enclosure::new(rational::ratio(1, 2), rational::ratio(3, 4));
        let base = QuadNum::one(2);
        let q = |a: i64, b: i64| QuadNum::from_rational(rational::ratio(a, b), 2);
        assert_eq!(ge_scaled(&q(4, 5), &c, &base).0, Status::Pass);
        assert_eq!(ge_scaled(&q(2, 5), &c, &base).0, Status::Fail);
        assert_eq!(ge_scaled(&q(3, 5), &c, &base).0, Status::Undecided);
        assert_eq!(le_scaled(&q(2, 5), &c, &base).0, Status::Pass);
        assert_eq!(le_scaled(&q(4, 5), &c, &base).0, Status::Fail);
        assert_eq!(le_scaled(&q(3, 5), &c, &base).0, Status::Undecided);
    }

    #[test]
    fn refinement_stops_at_cap() {
        let mut calls = Vec::new();
        let out = refine(
            1024,
            |b| {
                calls.push(b);
                Status::Undecided
            },
            |s| *s,
            |_, _| {},
        );
        assert_eq!(out, Status::Undecided);
        assert_eq!(calls, vec![1024, 2048, 4096]);
    }
}
