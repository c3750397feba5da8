use majsign::dualwitness::{build_witness, witness_params};
use majsign::lift::{build_psi_pair, lift_witness, verify_lift, verify_psi_pair, Orientation, SymFn};
use majsign::{QuadNum, Rational, Status, DEFAULT_PRECISION};
use num_bigint::BigInt;
use proptest::prelude::*;

const INSTANCES: [(u64, u32); 6] = [(9, 1), (15, 1), (31, 1), (65, 2), (127, 2), (513, 3)];

/// Sums `|g(x)|` over every point of the cube, enumerated as bit masks.
fn pointwise_l1(g: &SymFn) -> QuadNum {
    let m = g.m() as usize;
    let mut x = vec![1i8; m];
    let mut acc = QuadNum::zero(g.delta());
    for mask in 0u64..(1 << m) {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = if mask >> i & 1 == 1 { -1 } else { 1 };
        }
        acc = acc + g.eval(&x).abs();
    }
    acc
}

#[test]
fn lift_and_psi_pair_on_every_instance() {
    for (n, d) in INSTANCES {
        let cert = build_witness(&witness_params(n, d).unwrap());
        let lift = verify_lift(&cert, DEFAULT_PRECISION);
        assert_eq!(lift.status, Status::Pass, "({n},{d})");
        let pair = build_psi_pair(&cert);
        let rep = verify_psi_pair(&pair, DEFAULT_PRECISION);
        assert_eq!(rep.status, Status::Pass, "({n},{d})");
        assert_eq!(rep.recorded_orientation, Some(Orientation::NegatedMajority));
        assert_eq!(rep.phd[1].moments.len() as i64, i64::from(d) - 1);
    }
}

#[test]
fn pointwise_norm_matches_weight_classes_for_smallest_pair() {
    let cert = build_witness(&witness_params(9, 1).unwrap());
    let g = lift_witness(&cert);
    assert_eq!(pointwise_l1(&g), QuadNum::one(2));
    let pair = build_psi_pair(&cert);
    assert_eq!(pointwise_l1(&pair.psi0), pair.psi0.l1_norm());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pointwise_norm_matches_on_small_cubes(
        m in 1u64..=12,
        vals in proptest::collection::vec((-50i64..50, -50i64..50, 1i64..9), 13),
    ) {
        let w: Vec<QuadNum> = vals[..=m as usize]
            .iter()
            .map(|&(a, b, den)| {
                let den = BigInt::from(den);
                QuadNum::new(Rational::new(a.into(), den.clone()), Rational::new(b.into(), den), 3).unwrap()
            })
            .collect();
        let g = SymFn::new(m, 3, w).unwrap();
        prop_assert_eq!(pointwise_l1(&g), g.l1_norm());
    }
}
