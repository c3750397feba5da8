use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest `r` with `r^k <= n`, by integer binary search.
///
/// `k = 0` is rejected by assertion; `n = 0` yields 0.
pub fn int_root(n: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "root index must be positive");
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    // 2^(bits/k + 1) is an upper bound for the root.
    let mut lo = BigUint::zero();
    let mut hi = BigUint::one() << (n.bits() / u64::from(k) + 1) as usize;
    // invariant: lo^k <= n < hi^k
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), k as usize) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = int_root(&BigUint::from(n), 2);
    &r * &r == BigUint::from(n)
}

/// Binomial coefficient `C(m, k)`; returns 0 whenever `k < 0` or `k > m`.
pub fn binomial(m: i64, k: i64) -> BigUint {
    if m < 0 || k < 0 || k > m {
        return BigUint::zero();
    }
    let k = k.min(m - k) as u64;
    let m = m as u64;
    // c_i = C(m - k + i, i) stays integral at every step.
    let mut c = BigUint::one();
    for i in 1..=k {
        c = c * BigUint::from(m - k + i) / BigUint::from(i);
    }
    c
}

/// The full row `C(m, 0), …, C(m, m)`.
pub fn binomial_row(m: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..m {
        c = c * BigUint::from(m - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    row
}
