use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::witness::{DualWitness, WitnessKind};
use super::{lp_solve, FnSpec, LpCertificate, LpError, LpProblem, Polynomial, Relation};
use crate::exactnum::rational;
use crate::Rational;

/// `f(x)·p(x) >= 1` on every class, one free coefficient per basis
/// element of degree `<= d`. Row `c` belongs to class `c`.
pub fn sign_rep_problem(f: &FnSpec, d: u32) -> LpProblem {
    let basis = f.basis(d);
    let mut p = LpProblem::new();
    for b in &basis {
        p.add_var(format!("c{b:?}"), true);
    }
    for c in 0..f.classes() {
        let s = rational::int(f.value(c) as i64);
        let row = basis
            .iter()
            .enumerate()
            .map(|(j, b)| (j, f.feature(b, c) * &s))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        p.add_constraint(row, Relation::Ge, rational::int(1));
    }
    p
}

/// The dual system: class masses `μ >= 0` with `Σ μ_c f(c) χ(c) = 0` for
/// every basis element of degree `<= d`, and `Σ μ = 1`.
pub fn witness_problem(f: &FnSpec, d: u32) -> LpProblem {
    let basis = f.basis(d);
    let mut p = LpProblem::new();
    for c in 0..f.classes() {
        p.add_var(format!("mu{c}"), false);
    }
    for b in &basis {
        let row = (0..f.classes())
            .map(|c| (c, f.feature(b, c) * rational::int(f.value(c) as i64)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        p.add_constraint(row, Relation::Eq, Rational::zero());
    }
    p.add_constraint((0..f.classes()).map(|c| (c, rational::int(1))).collect(), Relation::Eq, rational::int(1));
    p
}

fn witness_from_masses(f: &FnSpec, d: u32, mu: &[Rational]) -> Result<DualWitness, LpError> {
    let total = mu.iter().fold(Rational::zero(), |a, v| a + v);
    if !total.is_positive() {
        return Err(LpError::MalformedCertificate("ray touches no function constraint".into()));
    }
    let psi = mu
        .iter()
        .enumerate()
        .map(|(c, m)| m * rational::int(f.value(c) as i64) / (&total * rational::from_biguint(&f.multiplicity(c))))
        .collect();
    let w = DualWitness { kind: WitnessKind::Threshold, phd: d, phd1: None, eps: None, psi, psi1: None };
    w.ensure(f)?;
    Ok(w)
}

/// Turns a Farkas ray of [`sign_rep_problem`]`(f, d)` into `ψ = μ·f`
/// (spread evenly over each class), normalized to `‖ψ‖₁ = 1` and
/// re-verified.
pub fn extract_dual_witness(cert: &LpCertificate, f: &FnSpec, d: u32) -> Result<DualWitness, LpError> {
    let LpCertificate::Infeasible { ray } = cert else {
        return Err(LpError::MalformedCertificate("certificate is feasible".into()));
    };
    if ray.len() != f.classes() {
        return Err(LpError::MalformedCertificate(format!(
            "ray has {} components for {} classes",
            ray.len(),
            f.classes()
        )));
    }
    if ray.iter().any(Signed::is_negative) {
        return Err(LpError::MalformedCertificate("negative multiplier".into()));
    }
    witness_from_masses(f, d, ray)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum ThresholdAnswer {
    Representable { polynomial: Polynomial },
    Witness { witness: DualWitness },
}

fn check_rep(f: &FnSpec, poly: &Polynomial) -> Result<(), LpError> {
    let ok = (0..f.classes()).all(|c| (poly.eval_class(f, c) * rational::int(f.value(c) as i64)).is_positive());
    if ok {
        Ok(())
    } else {
        Err(LpError::CertificateCheck("polynomial does not sign-represent f".into()))
    }
}

/// Solves the primal formulation.
pub fn decide_primal(f: &FnSpec, d: u32) -> Result<ThresholdAnswer, LpError> {
    let cert = lp_solve(&sign_rep_problem(f, d))?;
    match &cert {
        LpCertificate::Feasible { point, .. } => {
            let polynomial = Polynomial { degree: d, basis: f.basis(d), coeffs: point.clone() };
            check_rep(f, &polynomial)?;
            Ok(ThresholdAnswer::Representable { polynomial })
        }
        LpCertificate::Infeasible { .. } => Ok(ThresholdAnswer::Witness { witness: extract_dual_witness(&cert, f, d)? }),
    }
}

/// Solves the dual formulation; a Farkas ray `z` there yields the
/// sign-representation `p = -Σ z_χ χ`.
pub fn decide_dual(f: &FnSpec, d: u32) -> Result<ThresholdAnswer, LpError> {
    let basis = f.basis(d);
    match lp_solve(&witness_problem(f, d))? {
        LpCertificate::Feasible { point, .. } => Ok(ThresholdAnswer::Witness { witness: witness_from_masses(f, d, &point)? }),
        LpCertificate::Infeasible { ray } => {
            let polynomial = Polynomial { degree: d, coeffs: ray[..basis.len()].iter().map(|z| -z).collect(), basis };
            check_rep(f, &polynomial)?;
            Ok(ThresholdAnswer::Representable { polynomial })
        }
    }
}

/// Picks whichever formulation gives the smaller tableau.
pub fn decide_threshold(f: &FnSpec, d: u32) -> Result<ThresholdAnswer, LpError> {
    let (r, c) = (f.classes(), f.basis(d).len());
    let primal = r * (2 * c + 2 * r);
    let dual = (c + 1) * (r + c + 1);
    if primal <= dual {
        decide_primal(f, d)
    } else {
        decide_dual(f, d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdDegree {
    pub degree: u32,
    pub polynomial: Polynomial,
    /// Witness that degree `degree - 1` does not suffice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<DualWitness>,
}

/// Smallest `d` admitting a sign-representation, scanning upward from 0.
pub fn threshold_degree(f: &FnSpec) -> Result<ThresholdDegree, LpError> {
    let mut witness = None;
    for d in 0..=f.arity() {
        match decide_threshold(f, d)? {
            ThresholdAnswer::Representable { polynomial } => {
                return Ok(ThresholdDegree { degree: d, polynomial, witness })
            }
            ThresholdAnswer::Witness { witness: w } => witness = Some(w),
        }
    }
    Err(LpError::CertificateCheck("no sign-representation up to full degree".into()))
}
