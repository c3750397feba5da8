//! Dense-tableau simplex over exact rationals.
//!
//! Columns are laid out in a fixed order: structural variables (a free
//! variable takes two columns, `x⁺` then `x⁻`), then one slack per
//! inequality row, then artificials. Pivoting is deterministic: Dantzig's
//! rule while the objective keeps moving, Bland's rule on that column
//! order once a long degenerate run shows up, so nothing can cycle.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LpError;
use crate::exactnum::rational;
use crate::Rational;

/// Largest tableau (rows × columns) the solver agrees to build.
pub const TABLEAU_LIMIT: usize = 6_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// Free variables range over all of ℚ; the others are nonnegative.
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<(usize, Rational)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpProblem {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Objective>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, free: bool) -> usize {
        self.variables.push(Variable { name: name.into(), free });
        self.variables.len() - 1
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<(usize, Rational)>) {
        self.objective = Some(Objective { sense, coeffs });
    }

    fn validate(&self) -> Result<(), LpError> {
        let nv = self.variables.len();
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= nv) {
                return Err(LpError::Malformed(format!("constraint {i} uses unknown variable {j}")));
            }
        }
        if let Some(o) = &self.objective {
            if let Some((j, _)) = o.coeffs.iter().find(|(j, _)| *j >= nv) {
                return Err(LpError::Malformed(format!("objective uses unknown variable {j}")));
            }
        }
        Ok(())
    }

    fn lhs(&self, c: &Constraint, x: &[Rational]) -> Rational {
        c.coeffs.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j])
    }

    /// Objective value at `x` (zero when there is no objective).
    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .as_ref()
            .map_or_else(Rational::zero, |o| o.coeffs.iter().fold(Rational::zero(), |a, (j, c)| a + c * &x[*j]))
    }

    /// Exact membership test for a candidate point.
    pub fn check_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.variables.len() {
            return false;
        }
        if self.variables.iter().zip(x).any(|(v, xi)| !v.free && xi.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let l = self.lhs(c, x);
            match c.rel {
                Relation::Ge => l >= c.rhs,
                Relation::Le => l <= c.rhs,
                Relation::Eq => l == c.rhs,
            }
        })
    }

    /// `Σ μ_i a_i` per variable.
    pub fn combine(&self, ray: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.variables.len()];
        for (c, mu) in self.constraints.iter().zip(ray) {
            if mu.is_zero() {
                continue;
            }
            for (j, a) in &c.coeffs {
                acc[*j] += a * mu;
            }
        }
        acc
    }

    /// Exact re-check of a Farkas ray: `μ ≥ 0` on `≥` rows, `μ ≤ 0` on
    /// `≤` rows, `Σ μ_i a_i` zero on free variables and nonpositive on the
    /// others, and `Σ μ_i b_i > 0`. Any feasible `x` would then satisfy
    /// `0 ≥ Σ μ_i a_i·x ≥ Σ μ_i b_i > 0`.
    pub fn check_ray(&self, ray: &[Rational]) -> bool {
        if ray.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(ray).all(|(c, mu)| match c.rel {
            Relation::Ge => !mu.is_negative(),
            Relation::Le => !mu.is_positive(),
            Relation::Eq => true,
        });
        let comb = self.combine(ray);
        let cols_ok = self
            .variables
            .iter()
            .zip(&comb)
            .all(|(v, s)| if v.free { s.is_zero() } else { !s.is_positive() });
        let rhs = self.constraints.iter().zip(ray).fold(Rational::zero(), |a, (c, mu)| a + &c.rhs * mu);
        signs_ok && cols_ok && rhs.is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpCertificate {
    Feasible {
        #[serde(with = "rational::serde_vec_str")]
        point: Vec<Rational>,
        #[serde(with = "rational::serde_opt_str", default, skip_serializing_if = "Option::is_none")]
        objective: Option<Rational>,
    },
    /// Multipliers, one per constraint, normalized to `Σ μ_i b_i = 1`.
    Infeasible {
        #[serde(with = "rational::serde_vec_str")]
        ray: Vec<Rational>,
    },
}

impl LpCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpCertificate::Feasible { .. })
    }
}

struct Tableau {
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    rc: Vec<Rational>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.t[r][j].clone();
        if !p.is_one() {
            let inv = p.recip();
            for v in self.t[r].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[r] *= &inv;
        }
        let nz: Vec<usize> = (0..self.t[r].len()).filter(|&k| !self.t[r][k].is_zero()).collect();
        let (prow, prhs) = (self.t[r].clone(), self.rhs[r].clone());
        for i in 0..self.t.len() {
            if i == r || self.t[i][j].is_zero() {
                continue;
            }
            let f = self.t[i][j].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                self.t[i][k] -= d;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.rc[j].is_zero() {
            let f = self.rc[j].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                self.rc[k] -= d;
            }
        }
        self.basis[r] = j;
    }

    fn set_costs(&mut self, cost: &[Rational]) {
        let mut rc = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (k, v) in self.t[i].iter().enumerate() {
                if !v.is_zero() {
                    rc[k] -= &cost[b] * v;
                }
            }
        }
        self.rc = rc;
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).fold(Rational::zero(), |a, (&b, v)| a + &cost[b] * v)
    }

    /// Entering column: most negative reduced cost (lowest index on
    /// ties) until as many consecutive degenerate pivots as there are
    /// candidate columns, then Bland's lowest-index rule for the rest of
    /// the phase. Bland's rule cannot cycle, so the phase terminates.
    /// `Ok(())` at optimality, `Err(())` when unbounded.
    fn optimize(&mut self, allowed: usize) -> Result<(), ()> {
        let degenerate_run = allowed.max(8);
        let mut stalled = 0;
        loop {
            let entering = if stalled >= degenerate_run {
                (0..allowed).find(|&k| self.rc[k].is_negative())
            } else {
                (0..allowed)
                    .filter(|&k| self.rc[k].is_negative())
                    .fold(None, |best: Option<usize>, k| match best {
                        Some(b) if self.rc[b] <= self.rc[k] => Some(b),
                        _ => Some(k),
                    })
            };
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][j];
                if !a.is_positive() {
                    continue;
                }
                let q = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, bq)) => q < *bq || (q == *bq && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, q));
                }
            }
            let (r, q) = best.ok_or(())?;
            if q.is_zero() {
                stalled += 1;
            } else if stalled < degenerate_run {
                stalled = 0;
            }
            self.pivot(r, j);
        }
    }
}

/// Solves `prob` exactly. Feasible problems return a point (optimal when
/// an objective is present); infeasible ones return a Farkas ray. Both are
/// re-checked before being handed back.
pub fn lp_solve(prob: &LpProblem) -> Result<LpCertificate, LpError> {
    prob.validate()?;
    let m = prob.constraints.len();
    let mut col_of = Vec::with_capacity(prob.variables.len());
    let mut ncols = 0;
    for v in &prob.variables {
        col_of.push(ncols);
        ncols += if v.free { 2 } else { 1 };
    }
    let slack_of: Vec<Option<usize>> = prob
        .constraints
        .iter()
        .map(|c| {
            (c.rel != Relation::Eq).then(|| {
                ncols += 1;
                ncols - 1
            })
        })
        .collect();
    let n_real = ncols;
    // rows whose sign-normalized slack has coefficient +1 start basic on it
    let sign: Vec<bool> = prob.constraints.iter().map(|c| c.rhs.is_negative()).collect();
    let mut init_col = vec![0; m];
    let mut n_art = 0;
    for i in 0..m {
        let slack_plus = match prob.constraints[i].rel {
            Relation::Le => !sign[i],
            Relation::Ge => sign[i],
            Relation::Eq => false,
        };
        init_col[i] = if slack_plus {
            slack_of[i].unwrap()
        } else {
            n_art += 1;
            n_real + n_art - 1
        };
    }
    ncols += n_art;
    if m.saturating_mul(ncols) > TABLEAU_LIMIT {
        return Err(LpError::ResourceBound(format!("tableau of {m} × {ncols} exceeds {TABLEAU_LIMIT} entries")));
    }

    let mut t = vec![vec![Rational::zero(); ncols]; m];
    let mut rhs = vec![Rational::zero(); m];
    for (i, c) in prob.constraints.iter().enumerate() {
        let s = if sign[i] { -Rational::one() } else { Rational::one() };
        for (j, a) in &c.coeffs {
            let v = a * &s;
            t[i][col_of[*j]] += &v;
            if prob.variables[*j].free {
                t[i][col_of[*j] + 1] -= v;
            }
        }
        if let Some(sc) = slack_of[i] {
            let coef = if c.rel == Relation::Ge { -Rational::one() } else { Rational::one() };
            t[i][sc] = coef * &s;
        }
        if init_col[i] >= n_real {
            t[i][init_col[i]] = Rational::one();
        }
        rhs[i] = &c.rhs * &s;
    }
    let mut tab = Tableau { t, rhs, basis: init_col.clone(), rc: Vec::new() };

    if n_art > 0 {
        let mut cost = vec![Rational::zero(); ncols];
        for c in cost.iter_mut().skip(n_real) {
            *c = Rational::one();
        }
        tab.set_costs(&cost);
        tab.optimize(ncols).expect("phase one is bounded below by zero");
        let w = tab.value(&cost);
        if w.is_positive() {
            let mut ray: Vec<Rational> = (0..m)
                .map(|i| {
                    let y = &cost[init_col[i]] - &tab.rc[init_col[i]];
                    if sign[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            let total = prob.constraints.iter().zip(&ray).fold(Rational::zero(), |a, (c, mu)| a + &c.rhs * mu);
            for mu in ray.iter_mut() {
                *mu /= &total;
            }
            if !prob.check_ray(&ray) {
                return Err(LpError::CertificateCheck("Farkas ray failed re-verification".into()));
            }
            return Ok(LpCertificate::Infeasible { ray });
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if tab.basis[r] >= n_real {
                if let Some(j) = (0..n_real).find(|&k| !tab.t[r][k].is_zero()) {
                    tab.pivot(r, j);
                }
            }
        }
    }

    if let Some(obj) = &prob.objective {
        let mut cost = vec![Rational::zero(); ncols];
        let flip = obj.sense == Sense::Maximize;
        for (j, c) in &obj.coeffs {
            let c = if flip { -c.clone() } else { c.clone() };
            cost[col_of[*j]] += &c;
            if prob.variables[*j].free {
                cost[col_of[*j] + 1] -= c;
            }
        }
        tab.set_costs(&cost);
        if tab.optimize(n_real).is_err() {
            return Err(LpError::Unbounded);
        }
    }

    let mut colval = vec![Rational::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        colval[b] = tab.rhs[i].clone();
    }
    let point: Vec<Rational> = prob
        .variables
        .iter()
        .enumerate()
        .map(|(v, var)| {
            let c = col_of[v];
            if var.free {
                &colval[c] - &colval[c + 1]
            } else {
                colval[c].clone()
            }
        })
        .collect();
    if !prob.check_point(&point) {
        return Err(LpError::CertificateCheck("primal point failed re-verification".into()));
    }
    let objective = prob.objective.as_ref().map(|_| prob.objective_value(&point));
    Ok(LpCertificate::Feasible { point, objective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, ratio};

    #[test]
    fn contradictory_pair_gives_unit_ray() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", true);
        p.add_constraint(vec![(x, int(1))], Relation::Ge, int(1));
        p.add_constraint(vec![(x, int(-1))], Relation::Ge, int(0));
        assert_eq!(lp_solve(&p).unwrap(), LpCertificate::Infeasible { ray: vec![int(1), int(1)] });
    }

    #[test]
    fn simplex_of_two() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", false);
        let y = p.add_var("y", false);
        p.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Eq, int(1));
        let LpCertificate::Feasible { point, .. } = lp_solve(&p).unwrap() else { panic!() };
        assert_eq!(&point[0] + &point[1], int(1));
        assert!(p.check_point(&point));
    }

    #[test]
    fn beale_cycling_instance_terminates() {
        let mut p = LpProblem::new();
        let x: Vec<usize> = (4..=7).map(|i| p.add_var(format!("x{i}"), false)).collect();
        let row = |c: [Rational; 4]| x.iter().copied().zip(c).collect::<Vec<_>>();
        p.add_constraint(row([ratio(1, 4), int(-60), ratio(-1, 25), int(9)]), Relation::Le, int(0));
        p.add_constraint(row([ratio(1, 2), int(-90), ratio(-1, 50), int(3)]), Relation::Le, int(0));
        p.add_constraint(row([int(0), int(0), int(1), int(0)]), Relation::Le, int(1));
        p.set_objective(Sense::Minimize, row([ratio(-3, 4), int(150), ratio(-1, 50), int(6)]));
        let LpCertificate::Feasible { point, objective } = lp_solve(&p).unwrap() else { panic!() };
        assert_eq!(objective, Some(ratio(-1, 20)));
        assert_eq!(point, vec![ratio(1, 25), int(0), int(1), int(0)]);
    }

    #[test]
    fn unbounded_is_reported() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", false);
        p.add_constraint(vec![(x, int(1))], Relation::Ge, int(1));
        p.set_objective(Sense::Maximize, vec![(x, int(1))]);
        assert_eq!(lp_solve(&p), Err(LpError::Unbounded));
        p.set_objective(Sense::Minimize, vec![(x, int(1))]);
        assert!(matches!(lp_solve(&p).unwrap(), LpCertificate::Feasible { objective: Some(v), .. } if v == int(1)));
    }

    #[test]
    fn le_rows_and_negative_rhs() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", false);
        let y = p.add_var("y", true);
        p.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Le, int(-3));
        p.add_constraint(vec![(y, int(1))], Relation::Ge, int(-1));
        let cert = lp_solve(&p).unwrap();
        let LpCertificate::Infeasible { ray } = cert else { panic!() };
        assert!(ray[0] <= int(0) && ray[1] >= int(0));
        assert!(p.check_ray(&ray));
        p.constraints[1].rhs = int(-5);
        assert!(lp_solve(&p).unwrap().is_feasible());
    }

    #[test]
    fn bad_index_is_malformed() {
        let mut p = LpProblem::new();
        p.add_constraint(vec![(3, int(1))], Relation::Ge, int(0));
        assert!(matches!(lp_solve(&p), Err(LpError::Malformed(_))));
    }

    #[test]
    fn tampered_ray_is_rejected() {
        let mut p = LpProblem::new();
        let x = p.add_var("x", true);
        p.add_constraint(vec![(x, int(1))], Relation::Ge, int(1));
        p.add_constraint(vec![(x, int(-1))], Relation::Ge, int(0));
        assert!(!p.check_ray(&[int(1), int(2)]));
        assert!(!p.check_ray(&[int(-1), int(-1)]));
        assert!(p.check_ray(&[int(3), int(3)]));
    }
}
