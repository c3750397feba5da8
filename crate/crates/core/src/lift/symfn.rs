use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{binomial, binomial_row, rational};
use crate::{QuadNum, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymFnError {
    #[error("expected {expected} weight classes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("weight class {k} has radicand {got}, expected {expected}")]
    MixedRadicand { k: usize, got: u64, expected: u64 },
}

/// A symmetric function on `{-1,1}^m`, one value per Hamming weight.
///
/// Serialized as `{"m", "weights": [{"k", "a", "b"}, …], "delta_int"}`
/// with every weight class listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SymFnFile", try_from = "SymFnFile")]
pub struct SymFn {
    m: u64,
    delta: u64,
    weights: Vec<QuadNum>,
}

impl SymFn {
    pub fn new(m: u64, delta: u64, weights: Vec<QuadNum>) -> Result<Self, SymFnError> {
        if weights.len() != m as usize + 1 {
            return Err(SymFnError::WrongLength { expected: m as usize + 1, got: weights.len() });
        }
        if let Some((k, w)) = weights.iter().enumerate().find(|(_, w)| w.delta() != delta) {
            return Err(SymFnError::MixedRadicand { k, got: w.delta(), expected: delta });
        }
        Ok(SymFn { m, delta, weights })
    }

    /// Rational-valued symmetric function (radicand 1).
    pub fn from_rationals(m: u64, values: Vec<Rational>) -> Result<Self, SymFnError> {
        Self::new(m, 1, values.into_iter().map(|v| QuadNum::from_rational(v, 1)).collect())
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn weight(&self, k: usize) -> &QuadNum {
        &self.weights[k]
    }

    pub fn weights(&self) -> &[QuadNum] {
        &self.weights
    }

    /// Value at a point of the cube.
    pub fn eval(&self, x: &[i8]) -> &QuadNum {
        assert_eq!(x.len() as u64, self.m, "point has the wrong arity");
        &self.weights[x.iter().filter(|&&v| v < 0).count()]
    }

    /// `Σ_k C(m,k)·|g[k]|`.
    pub fn l1_norm(&self) -> QuadNum {
        let row = binomial_row(self.m);
        self.weights.iter().zip(&row).fold(QuadNum::zero(self.delta), |acc, (w, c)| {
            acc + w.abs().scale(&rational::from_biguint(c))
        })
    }

    /// Pointwise negation composed with complement: `x ↦ g(x̄)`.
    pub fn reflect(&self) -> SymFn {
        let mut w = self.weights.clone();
        w.reverse();
        SymFn { m: self.m, delta: self.delta, weights: w }
    }
}

#[derive(Serialize, Deserialize)]
struct WeightValue {
    k: usize,
    #[serde(with = "rational::serde_str")]
    a: Rational,
    #[serde(with = "rational::serde_str")]
    b: Rational,
}

#[derive(Serialize, Deserialize)]
struct SymFnFile {
    m: u64,
    weights: Vec<WeightValue>,
    delta_int: u64,
}

impl From<SymFn> for SymFnFile {
    fn from(g: SymFn) -> Self {
        let weights = g
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| WeightValue { k, a: w.a().clone(), b: w.b().clone() })
            .collect();
        SymFnFile { m: g.m, weights, delta_int: g.delta }
    }
}

impl TryFrom<SymFnFile> for SymFn {
    type Error = String;

    fn try_from(f: SymFnFile) -> Result<Self, String> {
        let mut w = vec![QuadNum::zero(f.delta_int); f.m as usize + 1];
        for v in f.weights {
            let slot = w.get_mut(v.k).ok_or_else(|| format!("weight class {} out of range", v.k))?;
            *slot = QuadNum::new(v.a, v.b, f.delta_int).map_err(|e| e.to_string())?;
        }
        SymFn::new(f.m, f.delta_int, w).map_err(|e| e.to_string())
    }
}

/// Moments `⟨g, (Σ x_i)^j⟩ = Σ_k C(m,k)·g[k]·(m-2k)^j` for `j = 0..=kmax`.
///
/// All zero certifies `⟨g, p⟩ = 0` for every polynomial of degree at most
/// `kmax`: symmetrizing `p` leaves a univariate polynomial in `Σ x_i` of
/// no larger degree. Negative `kmax` yields an empty list.
pub fn orthogonality_symmetric(g: &SymFn, kmax: i64) -> Vec<QuadNum> {
    if kmax < 0 {
        return Vec::new();
    }
    let row = binomial_row(g.m);
    (0..=kmax)
        .map(|j| {
            (0..=g.m as usize).fold(QuadNum::zero(g.delta), |acc, k| {
                if g.weights[k].is_zero() {
                    return acc;
                }
                let s = rational::int(g.m as i64 - 2 * k as i64);
                let c = rational::from_biguint(&row[k]) * rational::powi(&s, j);
                acc + g.weights[k].scale(&c)
            })
        })
        .collect()
}

/// Exact fraction of `{-1,1}^{2n}` with Hamming weight in `[n-width, n+width]`.
pub fn weight_fraction_in_band(n: u64, width: u64) -> Rational {
    assert!(width <= n, "band wider than the cube");
    let count = ((n - width)..=(n + width))
        .map(|k| binomial(2 * n as i64, k as i64))
        .fold(BigUint::zero(), |a, c| a + c);
    rational::from_biguint(&count) / rational::from_biguint(&(BigUint::one() << (2 * n) as usize))
}
