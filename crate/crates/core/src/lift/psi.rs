use serde::{Deserialize, Serialize};

use super::symfn::{orthogonality_symmetric, SymFn};
use crate::dualwitness::{
    delta_enclosure, e_minus15_enclosure, ge_scaled, positive_floor_constant, rat_pow, refine,
    status_of, DominationCheck, Moment, NormCheck, OrthogonalityCheck, RefinementStep, WitnessCert,
};
use crate::exactnum::{binomial, binomial_row, rational};
use crate::{Enclosure, QuadNum, Rational, Status, DEFAULT_PRECISION};

/// `R′(x) = R(n - |x|) / C(2n, |x|)`.
pub fn lift_witness(cert: &WitnessCert) -> SymFn {
    lift_grid(cert, false)
}

fn lift_grid(cert: &WitnessCert, reflect: bool) -> SymFn {
    let n = cert.params.n;
    let delta = cert.params.delta_int;
    let row = binomial_row(2 * n);
    let weights = (0..=2 * n)
        .map(|k| {
            let t = n as i64 - k as i64;
            let v = cert.r.at(if reflect { -t } else { t });
            v.scale(&rational::from_biguint(&row[k as usize]).recip())
        })
        .collect();
    SymFn::new(2 * n, delta, weights).expect("weight classes share the witness radicand")
}

/// The two functions fed into the composition theorem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiPair {
    pub psi0: SymFn,
    pub psi1: SymFn,
    /// Radicand of `δ = exp(-18/√Δ)`; kept apart from the value ring so
    /// that rational test pairs can use the same `δ`.
    pub delta_int: u64,
    pub delta_enclosure: Enclosure,
    pub phd_target: i64,
}

/// `ψ₁` lifts `R`, `ψ₀` lifts `t ↦ R(-t)`.
pub fn build_psi_pair(cert: &WitnessCert) -> PsiPair {
    let psi1 = lift_grid(cert, false);
    let psi0 = lift_grid(cert, true);
    let one = QuadNum::one(cert.params.delta_int);
    assert_eq!(psi0.l1_norm(), one, "ψ₀ is not normalized");
    assert_eq!(psi1.l1_norm(), one, "ψ₁ is not normalized");
    PsiPair {
        psi0,
        psi1,
        delta_int: cert.params.delta_int,
        delta_enclosure: delta_enclosure(cert.params.delta_int, DEFAULT_PRECISION),
        phd_target: i64::from(cert.params.d) - 2,
    }
}

/// Which Boolean function the pair is checked against. `MAJ` is `-1`
/// exactly when at least half of the bits are `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `f = ¬MAJ`: `f(x) = 1` iff `|x| >= n`.
    NegatedMajority,
    /// `f = MAJ`: `f(x) = 1` iff `|x| <= n - 1`.
    Majority,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::NegatedMajority, Orientation::Majority];

    /// `f` on weight class `k` of `{-1,1}^{2n}`.
    pub fn value(self, k: u64, n: u64) -> i8 {
        let maj = if k >= n { -1 } else { 1 };
        match self {
            Orientation::Majority => maj,
            Orientation::NegatedMajority => -maj,
        }
    }

    pub fn rule(self) -> &'static str {
        match self {
            Orientation::NegatedMajority => "f(x) = 1 iff |x| >= n",
            Orientation::Majority => "f(x) = 1 iff |x| <= n-1",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrientationCheck {
    pub orientation: Orientation,
    pub rule: String,
    pub status: Status,
    /// Weight class with the smallest margin `ψ_f(x) - δ̄·|ψ_{¬f}(x)|`.
    pub worst_k: Option<u64>,
    pub worst_margin: QuadNum,
    pub failures: Vec<u64>,
    pub undecided: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsiReport {
    pub status: Status,
    pub precision_bits: u32,
    pub refinement_trace: Vec<RefinementStep>,
    pub delta: Enclosure,
    pub phd_target: i64,
    /// `[‖ψ₀‖₁, ‖ψ₁‖₁]`.
    pub norms: Vec<QuadNum>,
    pub normalized: bool,
    pub nontrivial: bool,
    pub orientations: Vec<OrientationCheck>,
    /// The first orientation that passes, if any.
    pub recorded_orientation: Option<Orientation>,
    /// Pure high degree checks for `ψ₀` then `ψ₁`.
    pub phd: Vec<OrthogonalityCheck>,
}

fn orientation_check(pair: &PsiPair, o: Orientation, dl: &Enclosure) -> OrientationCheck {
    let m = pair.psi0.m();
    let n = m / 2;
    let (mut failures, mut undecided) = (Vec::new(), Vec::new());
    let mut worst: Option<(u64, QuadNum)> = None;
    for k in 0..=m {
        let (a, b) = (pair.psi0.weight(k as usize), pair.psi1.weight(k as usize));
        let (hi, lo) = if o.value(k, n) == 1 { (a, b) } else { (b, a) };
        let (st, margin) = ge_scaled(hi, dl, &lo.abs());
        match st {
            Status::Fail => failures.push(k),
            Status::Undecided => undecided.push(k),
            Status::Pass => {}
        }
        if worst.as_ref().is_none_or(|(_, w)| margin.cmp_exact(w).is_lt()) {
            worst = Some((k, margin));
        }
    }
    let (worst_k, worst_margin) =
        worst.map_or((None, QuadNum::zero(pair.psi0.delta())), |(k, w)| (Some(k), w));
    OrientationCheck {
        orientation: o,
        rule: o.rule().to_string(),
        status: status_of(&failures, &undecided),
        worst_k,
        worst_margin,
        failures,
        undecided,
    }
}

fn phd_check(g: &SymFn, target: i64) -> OrthogonalityCheck {
    let moments: Vec<Moment> = orthogonality_symmetric(g, target)
        .into_iter()
        .enumerate()
        .map(|(k, value)| Moment { k: k as u32, value })
        .collect();
    OrthogonalityCheck {
        status: if moments.iter().all(|m| m.value.is_zero()) { Status::Pass } else { Status::Fail },
        max_degree: target,
        top_degree_vanishes: moments.last().map(|m| m.value.is_zero()),
        moments,
    }
}

/// One pass of the composition-theorem preconditions at `bits`.
pub fn verify_psi_pair_at(pair: &PsiPair, bits: u32) -> PsiReport {
    assert_eq!(pair.psi0.m(), pair.psi1.m(), "ψ₀ and ψ₁ live on different cubes");
    assert_eq!(pair.psi0.m() % 2, 0, "the cube dimension must be even");
    let dl = delta_enclosure(pair.delta_int, bits);
    let orientations: Vec<OrientationCheck> =
        Orientation::BOTH.iter().map(|&o| orientation_check(pair, o, &dl)).collect();
    let recorded_orientation =
        orientations.iter().find(|c| c.status == Status::Pass).map(|c| c.orientation);
    let orient_status = if recorded_orientation.is_some() {
        Status::Pass
    } else if orientations.iter().any(|c| c.status == Status::Undecided) {
        Status::Undecided
    } else {
        Status::Fail
    };

    let norms = vec![pair.psi0.l1_norm(), pair.psi1.l1_norm()];
    let one = QuadNum::one(pair.psi0.delta());
    let normalized = norms.iter().all(|v| *v == one);
    let nontrivial = norms.iter().all(|v| v.signum() > 0);
    let phd = vec![phd_check(&pair.psi0, pair.phd_target), phd_check(&pair.psi1, pair.phd_target)];

    let status = Status::all([
        orient_status,
        phd[0].status,
        phd[1].status,
        if nontrivial { Status::Pass } else { Status::Fail },
    ]);
    PsiReport {
        status,
        precision_bits: bits,
        refinement_trace: vec![RefinementStep { bits, status }],
        delta: dl,
        phd_target: pair.phd_target,
        norms,
        normalized,
        nontrivial,
        orientations,
        recorded_orientation,
        phd,
    }
}

/// Checks both orientations, pure high degree up to `phd_target` and
/// nontriviality, refining the `δ` enclosure while undecided.
pub fn verify_psi_pair(pair: &PsiPair, bits: u32) -> PsiReport {
    refine(bits, |b| verify_psi_pair_at(pair, b), |r| r.status, |r, t| r.refinement_trace = t)
}

/// Smoothness of `R′` on the weight band `|k - n| <= ⌊n^{2/3}⌋`, `k ≠ n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmoothClass {
    pub status: Status,
    pub range: u64,
    /// Floor `c` for classes above `n` (grid points `t < 0`).
    #[serde(with = "rational::serde_str")]
    pub upper_floor: Rational,
    /// Floor `c` for classes below `n` (grid points `t > 0`).
    pub lower_floor: Enclosure,
    /// `|R′[k]|·C(2n,k) >= c` on every class of the band.
    pub class_status: Status,
    /// `|R′[k]| >= c/2^{2n}` on every class of the band.
    pub cube_status: Status,
    pub failures: Vec<u64>,
    pub undecided: Vec<u64>,
    pub middle_value: QuadNum,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiftReport {
    pub status: Status,
    pub precision_bits: u32,
    pub refinement_trace: Vec<RefinementStep>,
    pub m: u64,
    pub l1_norm: NormCheck,
    /// Indexed by `t`: weight `n - t` against weight `n + t`.
    pub domination: DominationCheck,
    pub orthogonality: OrthogonalityCheck,
    pub smoothness: SmoothClass,
}

fn verify_lift_at(cert: &WitnessCert, lifted: &SymFn, bits: u32) -> LiftReport {
    let p = &cert.params;
    let (n, delta) = (p.n, p.delta_int);
    let one = QuadNum::one(delta);

    let norm = lifted.l1_norm();
    let margin = &norm - &one;
    let l1_norm =
        NormCheck { status: if margin.is_zero() { Status::Pass } else { Status::Fail }, norm, margin };

    let dl = p.delta_enclosure(bits);
    let (mut failures, mut undecided) = (Vec::new(), Vec::new());
    let mut worst: Option<(i64, QuadNum)> = None;
    for t in 1..=n {
        let lo = lifted.weight((n - t) as usize);
        let hi = lifted.weight((n + t) as usize);
        let (st, m) = ge_scaled(lo, &dl, &hi.abs());
        match st {
            Status::Fail => failures.push(t as i64),
            Status::Undecided => undecided.push(t as i64),
            Status::Pass => {}
        }
        if worst.as_ref().is_none_or(|(_, w)| m.cmp_exact(w).is_lt()) {
            worst = Some((t as i64, m));
        }
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

    let orthogonality = phd_check(lifted, i64::from(p.d) - 2);

    let upper_floor = rational::int(20) / rat_pow(n, 20);
    let scale15 = (rational::int(8) * rat_pow(n, 15)).recip();
    let lower_floor = positive_floor_constant(bits).scale(&scale15);
    let cube = rational::pow2(-2 * n as i64);
    let upper_q = QuadNum::from_rational(upper_floor.clone(), delta);
    let (mut failures, mut undecided) = (Vec::new(), Vec::new());
    let (mut class_status, mut cube_status) = (Status::Pass, Status::Pass);
    for off in 1..=p.u_max {
        for k in [n - off, n + off] {
            let v = lifted.weight(k as usize).abs();
            let scaled = v.scale(&rational::from_biguint(&binomial(2 * n as i64, k as i64)));
            let (cs, qs) = if k > n {
                let ok = |x: QuadNum| if x.signum() >= 0 { Status::Pass } else { Status::Fail };
                (ok(&scaled - &upper_q), ok(&v - &upper_q.scale(&cube)))
            } else {
                (ge_scaled(&scaled, &lower_floor, &one).0, ge_scaled(&v, &lower_floor.scale(&cube), &one).0)
            };
            class_status = class_status.and(cs);
            cube_status = cube_status.and(qs);
            match cs.and(qs) {
                Status::Fail => failures.push(k),
                Status::Undecided => undecided.push(k),
                Status::Pass => {}
            }
        }
    }
    failures.sort_unstable();
    undecided.sort_unstable();
    let smoothness = SmoothClass {
        status: status_of(&failures, &undecided),
        range: p.u_max,
        upper_floor,
        lower_floor,
        class_status,
        cube_status,
        failures,
        undecided,
        middle_value: lifted.weight(n as usize).clone(),
    };

    let status = Status::all([
        l1_norm.status,
        domination.status,
        orthogonality.status,
        smoothness.status,
    ]);
    LiftReport {
        status,
        precision_bits: bits,
        refinement_trace: vec![RefinementStep { bits, status }],
        m: 2 * n,
        l1_norm,
        domination,
        orthogonality,
        smoothness,
    }
}

/// Norm, domination, orthogonality and smoothness of `R′`, checked in
/// weight-class form.
pub fn verify_lift(cert: &WitnessCert, bits: u32) -> LiftReport {
    let lifted = lift_witness(cert);
    refine(bits, |b| verify_lift_at(cert, &lifted, b), |r| r.status, |r, t| r.refinement_trace = t)
}

/// Weaker companion floor used in the smoothness discussion, exposed for
/// reports: `e^{-15}/(8n^15)`.
pub fn stated_lower_floor(n: u64, bits: u32) -> Enclosure {
    e_minus15_enclosure(bits).scale(&(rational::int(8) * rat_pow(n, 15)).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualwitness::{build_witness, witness_params};

    fn cert(n: u64, d: u32) -> WitnessCert {
        build_witness(&witness_params(n, d).unwrap())
    }

    #[test]
    fn lift_examples() {
        let c = cert(9, 1);
        let g = lift_witness(&c);
        assert_eq!(g.m(), 18);
        assert_eq!(g.l1_norm(), QuadNum::one(2));
        let c8 = rational::from_biguint(&binomial(18, 8));
        assert_eq!(g.weight(8), &c.r.get(1).scale(&c8.recip()));
        assert!(g.weight(9).is_zero());
        assert!(orthogonality_symmetric(&g, -1).is_empty());
        let rep = verify_lift(&c, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.smoothness.middle_value.is_zero());
    }

    #[test]
    fn psi_pair_examples() {
        let pair = build_psi_pair(&cert(9, 1));
        for k in 0..=18usize {
            assert_eq!(pair.psi0.weight(k), pair.psi1.weight(18 - k));
        }
        assert!(pair.psi0.weight(9).is_zero() && pair.psi1.weight(9).is_zero());
        assert_eq!(pair.phd_target, -1);
        let rep = verify_psi_pair(&pair, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.recorded_orientation, Some(Orientation::NegatedMajority));
        assert_eq!(rep.orientations[1].status, Status::Fail);
        assert!(rep.normalized && rep.nontrivial);
    }

    #[test]
    fn swapped_pair_uses_opposite_orientation() {
        let mut pair = build_psi_pair(&cert(65, 2));
        std::mem::swap(&mut pair.psi0, &mut pair.psi1);
        let rep = verify_psi_pair(&pair, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.recorded_orientation, Some(Orientation::Majority));
        assert_eq!(rep.orientations[0].status, Status::Fail);
        assert_eq!(rep.phd[0].moments.len(), 1);
    }

    #[test]
    fn constant_function_has_no_pure_high_degree() {
        let one = SymFn::from_rationals(2, vec![rational::int(1); 3]).unwrap();
        let pair = PsiPair {
            psi0: one.clone(),
            psi1: one,
            delta_int: 2,
            delta_enclosure: delta_enclosure(2, 64),
            phd_target: 0,
        };
        let rep = verify_psi_pair(&pair, 64);
        assert_eq!(rep.phd[0].status, Status::Fail);
        assert_eq!(rep.phd[0].moments[0].value, QuadNum::from_int(4, 1));
        assert_eq!(rep.status, Status::Fail);
        assert!(!rep.normalized && rep.nontrivial);
    }

    #[test]
    fn zero_pair_is_trivial() {
        let z = SymFn::from_rationals(2, vec![rational::int(0); 3]).unwrap();
        let pair = PsiPair {
            psi0: z.clone(),
            psi1: z,
            delta_int: 2,
            delta_enclosure: delta_enclosure(2, 64),
            phd_target: 0,
        };
        let rep = verify_psi_pair(&pair, 64);
        assert!(!rep.nontrivial);
        assert_eq!(rep.status, Status::Fail);
    }

    #[test]
    fn orientation_values() {
        assert_eq!(Orientation::Majority.value(3, 3), -1);
        assert_eq!(Orientation::Majority.value(2, 3), 1);
        assert_eq!(Orientation::NegatedMajority.value(3, 3), 1);
    }
}
