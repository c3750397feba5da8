use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::witness::{DualWitness, WitnessKind};
use super::{lp_solve, FnSpec, LpCertificate, LpError, LpProblem, Polynomial, Relation};
use crate::exactnum::rational;
use crate::Rational;

/// Variables: coefficients of `p₀` (degree `<= d0`) then `p₁` (degree
/// `<= d1`). Per class, two rows in the order `−`, `+`:
/// `f = 1`: `ε·p₀ ∓ p₁ >= 1`; `f = -1`: `ε·p₁ ∓ p₀ >= 1`.
pub fn rational_problem(f: &FnSpec, d0: u32, d1: u32, eps: &Rational) -> LpProblem {
    let (b0, b1) = (f.basis(d0), f.basis(d1));
    let mut p = LpProblem::new();
    for b in &b0 {
        p.add_var(format!("p0{b:?}"), true);
    }
    for b in &b1 {
        p.add_var(format!("p1{b:?}"), true);
    }
    let off = b0.len();
    for c in 0..f.classes() {
        let (main, other, main_off, other_off) =
            if f.value(c) == 1 { (&b0, &b1, 0, off) } else { (&b1, &b0, off, 0) };
        for sgn in [-1, 1] {
            let mut row: Vec<(usize, Rational)> =
                main.iter().enumerate().map(|(j, b)| (main_off + j, eps * f.feature(b, c))).collect();
            row.extend(other.iter().enumerate().map(|(j, b)| (other_off + j, f.feature(b, c) * rational::int(sgn))));
            row.retain(|(_, v)| !v.is_zero());
            p.add_constraint(row, Relation::Ge, rational::int(1));
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum RationalAnswer {
    Feasible { p0: Polynomial, p1: Polynomial },
    Infeasible { witness: DualWitness },
}

/// Decides whether polynomials `p₀, p₁` of degrees `<= d0, d1` satisfy
/// `|p₁| < ε·p₀` on `f⁻¹(1)` and `|p₀| < ε·p₁` on `f⁻¹(-1)`. Either answer
/// is re-verified exactly.
pub fn rational_degree_feasible(f: &FnSpec, d0: u32, d1: u32, eps: &Rational) -> Result<RationalAnswer, LpError> {
    if !eps.is_positive() {
        return Err(LpError::Malformed("eps must be positive".into()));
    }
    let (b0, b1) = (f.basis(d0), f.basis(d1));
    match lp_solve(&rational_problem(f, d0, d1, eps))? {
        LpCertificate::Feasible { point, .. } => {
            let p0 = Polynomial { degree: d0, basis: b0.clone(), coeffs: point[..b0.len()].to_vec() };
            let p1 = Polynomial { degree: d1, basis: b1, coeffs: point[b0.len()..].to_vec() };
            let ok = (0..f.classes()).all(|c| {
                let (v0, v1) = (p0.eval_class(f, c), p1.eval_class(f, c));
                if f.value(c) == 1 {
                    v1.abs() < eps * v0
                } else {
                    v0.abs() < eps * v1
                }
            });
            if !ok {
                return Err(LpError::CertificateCheck("rational pair fails the strict inequalities".into()));
            }
            Ok(RationalAnswer::Feasible { p0, p1 })
        }
        LpCertificate::Infeasible { ray } => {
            let mut psi0 = Vec::with_capacity(f.classes());
            let mut psi1 = Vec::with_capacity(f.classes());
            for c in 0..f.classes() {
                let (a, b) = (&ray[2 * c], &ray[2 * c + 1]);
                let mult = rational::from_biguint(&f.multiplicity(c));
                let main = eps * (a + b) / &mult;
                let other = (b - a) / &mult;
                if f.value(c) == 1 {
                    psi0.push(main);
                    psi1.push(other);
                } else {
                    psi0.push(other);
                    psi1.push(main);
                }
            }
            let w = DualWitness {
                kind: WitnessKind::RationalPair,
                phd: d0,
                phd1: Some(d1),
                eps: Some(eps.clone()),
                psi: psi0,
                psi1: Some(psi1),
            };
            w.ensure(f)?;
            Ok(RationalAnswer::Infeasible { witness: w })
        }
    }
}

/// Smallest `d` with `rational_degree_feasible(f, d, d, eps)` feasible.
/// Degree `arity` always works (`p₀ = 1 + f`, `p₁ = 1 - f`).
pub fn rational_degree_search(f: &FnSpec, eps: &Rational) -> Result<u32, LpError> {
    for d in 0..=f.arity() {
        if matches!(rational_degree_feasible(f, d, d, eps)?, RationalAnswer::Feasible { .. }) {
            return Ok(d);
        }
    }
    Err(LpError::CertificateCheck("no rational representation up to full degree".into()))
}

/// Bisects `ε` over `[lo, hi]` for `steps` rounds, keeping `lo` infeasible
/// and `hi` feasible, so that `R(f, d0, d1) ∈ [lo, hi]` on return.
pub fn rational_bisect(
    f: &FnSpec,
    d0: u32,
    d1: u32,
    lo: Rational,
    hi: Rational,
    steps: u32,
) -> Result<(Rational, Rational), LpError> {
    let feasible = |e: &Rational| -> Result<bool, LpError> {
        Ok(matches!(rational_degree_feasible(f, d0, d1, e)?, RationalAnswer::Feasible { .. }))
    };
    if !feasible(&hi)? || (lo.is_positive() && feasible(&lo)?) {
        return Err(LpError::Malformed("bisection bracket does not straddle the threshold".into()));
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..steps {
        let mid = (&lo + &hi) / rational::int(2);
        if mid.is_zero() {
            break;
        }
        if feasible(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};

    #[test]
    fn eps_two_at_degree_zero_is_feasible() {
        for f in [FnSpec::maj(3).unwrap(), FnSpec::parity(2).unwrap()] {
            assert!(matches!(rational_degree_feasible(&f, 0, 0, &int(2)).unwrap(), RationalAnswer::Feasible { .. }));
        }
    }

    #[test]
    fn maj2_at_half() {
        let f = FnSpec::maj(2).unwrap();
        match rational_degree_feasible(&f, 0, 0, &ratio(1, 2)).unwrap() {
            RationalAnswer::Feasible { .. } => {}
            RationalAnswer::Infeasible { witness } => {
                let chk = witness.check_pair(&f);
                assert!(chk.ok(), "{chk:?}");
            }
        }
    }

    #[test]
    fn search_examples() {
        let constant = FnSpec::symmetric(3, vec![1; 4]).unwrap();
        assert_eq!(rational_degree_search(&constant, &ratio(1, 10)).unwrap(), 0);
        let parity = FnSpec::parity(2).unwrap().to_explicit().unwrap();
        assert_eq!(rational_degree_search(&parity, &ratio(1, 3)).unwrap(), 2);
    }

    #[test]
    fn infeasible_pair_dominates_exactly() {
        let f = FnSpec::parity(2).unwrap().to_explicit().unwrap();
        let RationalAnswer::Infeasible { witness } = rational_degree_feasible(&f, 1, 1, &ratio(1, 3)).unwrap() else {
            panic!("parity has no degree-1 rational pair")
        };
        let eps = ratio(1, 3);
        let psi1 = witness.psi1.as_ref().unwrap();
        for c in 0..4 {
            if f.value(c) == 1 {
                assert!(witness.psi[c] >= &eps * psi1[c].abs());
            } else {
                assert!(psi1[c] >= &eps * witness.psi[c].abs());
            }
        }
    }

    #[test]
    fn bisection_brackets_threshold() {
        let f = FnSpec::maj(3).unwrap();
        let (lo, hi) = rational_bisect(&f, 1, 1, ratio(1, 1000), int(2), 8).unwrap();
        assert!(lo < hi);
        assert!(matches!(rational_degree_feasible(&f, 1, 1, &hi).unwrap(), RationalAnswer::Feasible { .. }));
        assert!(rational_degree_feasible(&f, 0, 0, &int(0)).is_err());
    }
}
