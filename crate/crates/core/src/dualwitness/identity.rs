use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactnum::{binomial_row, rational};
use crate::Rational;

/// `Σ_{t=-n}^{n} (-1)^t C(2n, n+t) p(t)` for `p(t) = Σ_k coeffs[k]·t^k`.
///
/// Vanishes whenever `deg p < 2n`.
pub fn check_combinatorial_identity(n: u64, coeffs: &[Rational]) -> Rational {
    let row = binomial_row(2 * n);
    let n = n as i64;
    let mut total = Rational::zero();
    for t in -n..=n {
        // Horner
        let tv = rational::int(t);
        let value = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &tv + c);
        let c = Rational::from_integer(BigInt::from(row[(n + t) as usize].clone()));
        if t.rem_euclid(2) == 0 {
            total += c * value;
        } else {
            total -= c * value;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::int;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        for (a, b) in [(0, 0), (1, 0), (3, -7), (-2, 5)] {
            assert!(check_combinatorial_identity(1, &[int(a), int(b)]).is_zero());
        }
        assert!(check_combinatorial_identity(2, &[int(0), int(0), int(0), int(1)]).is_zero());
        assert_eq!(check_combinatorial_identity(1, &[int(0), int(0), int(1)]), int(-2));
    }

    proptest! {
        #[test]
        fn vanishes_below_degree_2n(n in 1u64..12, seed in proptest::collection::vec(-50i64..50, 1..24)) {
            let deg = (2 * n as usize).min(seed.len());
            let coeffs: Vec<Rational> = seed[..deg].iter().map(|&c| int(c)).collect();
            prop_assert!(check_combinatorial_identity(n, &coeffs).is_zero());
        }

        #[test]
        fn degree_2n_leading_term_survives(n in 1u64..10) {
            let mut coeffs = vec![int(0); 2 * n as usize + 1];
            coeffs[2 * n as usize] = int(1);
            prop_assert!(!check_combinatorial_identity(n, &coeffs).is_zero());
        }
    }
}
