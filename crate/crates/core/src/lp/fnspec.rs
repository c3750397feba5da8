//! Boolean functions `{-1,1}^n → {-1,1}` in one of three representations,
//! and the polynomial bases the LPs are written in.
//!
//! `-1` plays the role of "true": `AND(x) = -1` iff every bit is `-1`,
//! and `MAJ(x) = -1` iff at least half of the bits are `-1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LpError;
use crate::exactnum::{binomial, rational};
use crate::Rational;

/// Largest explicit truth table.
pub const MAX_EXPLICIT_ARITY: u32 = 20;
/// Largest block in the symmetric representations.
pub const MAX_BLOCK: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnKind {
    /// One value per point; index bit `i` set means `x_{i+1} = -1`.
    Explicit,
    /// One value per Hamming weight `k`.
    Symmetric,
    /// One value per weight pair `(k₁, k₂)` of the two blocks, at index
    /// `k₁·(n₂+1) + k₂`.
    BlockSymmetric { n1: u32, n2: u32 },
}

/// File format: `{"arity", "kind", "values"}` plus `"blocks": [n₁, n₂]`
/// for the block-symmetric kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FnSpecFile", try_from = "FnSpecFile")]
pub struct FnSpec {
    arity: u32,
    kind: FnKind,
    values: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct FnSpecFile {
    arity: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<[u32; 2]>,
    values: Vec<i8>,
}

impl From<FnSpec> for FnSpecFile {
    fn from(f: FnSpec) -> Self {
        let (kind, blocks) = match f.kind {
            FnKind::Explicit => ("explicit", None),
            FnKind::Symmetric => ("symmetric", None),
            FnKind::BlockSymmetric { n1, n2 } => ("block_symmetric", Some([n1, n2])),
        };
        FnSpecFile { arity: f.arity, kind: kind.into(), blocks, values: f.values }
    }
}

impl TryFrom<FnSpecFile> for FnSpec {
    type Error = LpError;

    fn try_from(f: FnSpecFile) -> Result<Self, LpError> {
        let spec = match (f.kind.as_str(), f.blocks) {
            ("explicit", None) => FnSpec::explicit(f.arity, f.values)?,
            ("symmetric", None) => FnSpec::symmetric(f.arity, f.values)?,
            ("block_symmetric", Some([n1, n2])) => FnSpec::block_symmetric(n1, n2, f.values)?,
            (k, _) => return Err(LpError::InvalidFunction(format!("unknown kind or blocks for {k:?}"))),
        };
        if spec.arity != f.arity {
            return Err(LpError::InvalidFunction(format!("arity {} does not match blocks", f.arity)));
        }
        Ok(spec)
    }
}

fn check_values(values: &[i8], expected: usize) -> Result<(), LpError> {
    if values.len() != expected {
        return Err(LpError::InvalidFunction(format!("expected {expected} values, got {}", values.len())));
    }
    if values.iter().any(|&v| v != 1 && v != -1) {
        return Err(LpError::InvalidFunction("values must be -1 or 1".into()));
    }
    Ok(())
}

fn too_large(what: &str, v: u32, max: u32) -> LpError {
    LpError::ResourceBound(format!("{what} {v} exceeds the limit {max}"))
}

impl FnSpec {
    pub fn explicit(arity: u32, values: Vec<i8>) -> Result<Self, LpError> {
        if arity > MAX_EXPLICIT_ARITY {
            return Err(too_large("explicit arity", arity, MAX_EXPLICIT_ARITY));
        }
        check_values(&values, 1 << arity)?;
        Ok(FnSpec { arity, kind: FnKind::Explicit, values })
    }

    pub fn symmetric(arity: u32, values: Vec<i8>) -> Result<Self, LpError> {
        if arity > MAX_BLOCK {
            return Err(too_large("symmetric arity", arity, MAX_BLOCK));
        }
        check_values(&values, arity as usize + 1)?;
        Ok(FnSpec { arity, kind: FnKind::Symmetric, values })
    }

    pub fn block_symmetric(n1: u32, n2: u32, values: Vec<i8>) -> Result<Self, LpError> {
        if n1.max(n2) > MAX_BLOCK {
            return Err(too_large("block size", n1.max(n2), MAX_BLOCK));
        }
        check_values(&values, (n1 as usize + 1) * (n2 as usize + 1))?;
        Ok(FnSpec { arity: n1 + n2, kind: FnKind::BlockSymmetric { n1, n2 }, values })
    }

    /// `MAJ_m`.
    pub fn maj(m: u32) -> Result<Self, LpError> {
        Self::symmetric(m, (0..=m).map(|k| if 2 * k >= m { -1 } else { 1 }).collect())
    }

    pub fn parity(m: u32) -> Result<Self, LpError> {
        Self::symmetric(m, (0..=m).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect())
    }

    pub fn and(m: u32) -> Result<Self, LpError> {
        Self::symmetric(m, (0..=m).map(|k| if k == m { -1 } else { 1 }).collect())
    }

    pub fn or(m: u32) -> Result<Self, LpError> {
        Self::symmetric(m, (0..=m).map(|k| if k >= 1 { -1 } else { 1 }).collect())
    }

    /// `MAJ_h(x) ∧ MAJ_h(y)` with `h` bits per side.
    pub fn maj_and_maj(h: u32) -> Result<Self, LpError> {
        let maj = |k: u32| 2 * k >= h;
        let values = (0..=h)
            .flat_map(|k1| (0..=h).map(move |k2| if maj(k1) && maj(k2) { -1 } else { 1 }))
            .collect();
        Self::block_symmetric(h, h, values)
    }

    /// Built-in by name; `arity` is the total number of bits (split evenly
    /// for `maj_and_maj`).
    pub fn builtin(name: &str, arity: u32) -> Result<Self, LpError> {
        match name {
            "maj" => Self::maj(arity),
            "parity" => Self::parity(arity),
            "and" => Self::and(arity),
            "or" => Self::or(arity),
            "maj_and_maj" if arity.is_multiple_of(2) => Self::maj_and_maj(arity / 2),
            "maj_and_maj" => Err(LpError::InvalidFunction("maj_and_maj needs an even arity".into())),
            _ => Err(LpError::InvalidFunction(format!("unknown built-in function {name:?}"))),
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn kind(&self) -> FnKind {
        self.kind
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Number of classes (points, weights or weight pairs).
    pub fn classes(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, class: usize) -> i8 {
        self.values[class]
    }

    /// Number of cube points in a class.
    pub fn multiplicity(&self, class: usize) -> BigUint {
        match self.kind {
            FnKind::Explicit => BigUint::one(),
            FnKind::Symmetric => binomial(self.arity as i64, class as i64),
            FnKind::BlockSymmetric { n1, n2 } => {
                let (k1, k2) = (class / (n2 as usize + 1), class % (n2 as usize + 1));
                binomial(n1 as i64, k1 as i64) * binomial(n2 as i64, k2 as i64)
            }
        }
    }

    /// `f` at a cube point.
    pub fn eval(&self, x: &[i8]) -> i8 {
        assert_eq!(x.len(), self.arity as usize, "point has the wrong arity");
        let neg = |s: &[i8]| s.iter().filter(|&&v| v < 0).count();
        match self.kind {
            FnKind::Explicit => {
                let idx = x.iter().enumerate().fold(0usize, |a, (i, &v)| if v < 0 { a | 1 << i } else { a });
                self.values[idx]
            }
            FnKind::Symmetric => self.values[neg(x)],
            FnKind::BlockSymmetric { n1, n2 } => {
                let (a, b) = x.split_at(n1 as usize);
                self.values[neg(a) * (n2 as usize + 1) + neg(b)]
            }
        }
    }

    pub fn negate(&self) -> FnSpec {
        FnSpec { arity: self.arity, kind: self.kind, values: self.values.iter().map(|v| -v).collect() }
    }

    /// Expands to a full truth table.
    pub fn to_explicit(&self) -> Result<FnSpec, LpError> {
        if self.arity > MAX_EXPLICIT_ARITY {
            return Err(too_large("explicit arity", self.arity, MAX_EXPLICIT_ARITY));
        }
        let m = self.arity as usize;
        let values = (0..1usize << m)
            .map(|mask| {
                let x: Vec<i8> = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                self.eval(&x)
            })
            .collect();
        FnSpec::explicit(self.arity, values)
    }

    /// Basis of polynomials of degree at most `d` in this representation:
    /// variable subsets (1-based, by size then lexicographic) for explicit
    /// tables, powers `[j]` of `Σx_i` for symmetric ones, and pairs
    /// `[a, b]` for `s₁^a·s₂^b` in the block case.
    pub fn basis(&self, d: u32) -> Vec<Vec<u32>> {
        match self.kind {
            FnKind::Explicit => {
                let mut out = Vec::new();
                for size in 0..=d.min(self.arity) {
                    subsets(self.arity, size, &mut Vec::new(), 1, &mut out);
                }
                out
            }
            FnKind::Symmetric => (0..=d.min(self.arity)).map(|j| vec![j]).collect(),
            FnKind::BlockSymmetric { n1, n2 } => (0..=d)
                .flat_map(|t| (0..=t).rev().map(move |a| vec![a, t - a]))
                .filter(|ab| ab[0] <= n1 && ab[1] <= n2)
                .collect(),
        }
    }

    /// Value of basis element `label` on `class`.
    pub fn feature(&self, label: &[u32], class: usize) -> Rational {
        match self.kind {
            FnKind::Explicit => {
                let flips = label.iter().filter(|&&i| class >> (i - 1) & 1 == 1).count();
                rational::int(if flips % 2 == 0 { 1 } else { -1 })
            }
            FnKind::Symmetric => {
                rational::powi(&rational::int(self.arity as i64 - 2 * class as i64), label[0] as i64)
            }
            FnKind::BlockSymmetric { n1, n2 } => {
                let (k1, k2) = (class / (n2 as usize + 1), class % (n2 as usize + 1));
                let s1 = rational::int(n1 as i64 - 2 * k1 as i64);
                let s2 = rational::int(n2 as i64 - 2 * k2 as i64);
                rational::powi(&s1, label[0] as i64) * rational::powi(&s2, label[1] as i64)
            }
        }
    }
}

fn subsets(n: u32, size: u32, cur: &mut Vec<u32>, from: u32, out: &mut Vec<Vec<u32>>) {
    if cur.len() as u32 == size {
        out.push(cur.clone());
        return;
    }
    for i in from..=n {
        cur.push(i);
        subsets(n, size, cur, i + 1, out);
        cur.pop();
    }
}

/// A polynomial written in the basis of [`FnSpec::basis`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub degree: u32,
    pub basis: Vec<Vec<u32>>,
    #[serde(with = "rational::serde_vec_str")]
    pub coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn eval_class(&self, f: &FnSpec, class: usize) -> Rational {
        self.basis
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .fold(Rational::zero(), |acc, (b, c)| acc + c * f.feature(b, class))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(FnSpec::maj(2).unwrap().values(), &[1, -1, -1]);
        assert_eq!(FnSpec::maj(3).unwrap().values(), &[1, 1, -1, -1]);
        assert_eq!(FnSpec::and(2).unwrap().values(), &[1, 1, -1]);
        assert_eq!(FnSpec::or(2).unwrap().values(), &[1, -1, -1]);
        assert_eq!(FnSpec::parity(3).unwrap().values(), &[1, -1, 1, -1]);
        let mm = FnSpec::maj_and_maj(2).unwrap();
        assert_eq!(mm.values(), &[1, 1, 1, 1, -1, -1, 1, -1, -1]);
        assert_eq!(mm.arity(), 4);
        assert!(FnSpec::builtin("maj_and_maj", 3).is_err());
        assert!(FnSpec::builtin("xor", 3).is_err());
    }

    #[test]
    fn explicit_expansion_and_multiplicities() {
        let mm = FnSpec::maj_and_maj(2).unwrap();
        let e = mm.to_explicit().unwrap();
        assert_eq!(e.classes(), 16);
        // x = (-1, 1 | -1, -1): MAJ of both halves is -1
        assert_eq!(e.value(0b1101), -1);
        let total: BigUint = (0..mm.classes()).map(|c| mm.multiplicity(c)).sum();
        assert_eq!(total, BigUint::from(16u32));
        let s = FnSpec::maj(4).unwrap();
        let total: BigUint = (0..s.classes()).map(|c| s.multiplicity(c)).sum();
        assert_eq!(total, BigUint::from(16u32));
    }

    #[test]
    fn bases() {
        let e = FnSpec::explicit(3, vec![1; 8]).unwrap();
        assert_eq!(e.basis(1), vec![vec![], vec![1], vec![2], vec![3]]);
        assert_eq!(e.basis(3).len(), 8);
        assert_eq!(e.feature(&[1, 3], 0b101), rational::int(1));
        assert_eq!(e.feature(&[1, 2], 0b101), rational::int(-1));
        let b = FnSpec::maj_and_maj(1).unwrap();
        assert_eq!(b.basis(2), vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn validation_and_file_format() {
        assert!(FnSpec::explicit(2, vec![1, 1, 1]).is_err());
        assert!(FnSpec::symmetric(2, vec![1, 0, 1]).is_err());
        assert!(matches!(FnSpec::explicit(21, vec![]), Err(LpError::ResourceBound(_))));
        let f = FnSpec::maj_and_maj(1).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"{"arity":2,"kind":"block_symmetric","blocks":[1,1],"values":[1,1,1,-1]}"#);
        assert_eq!(serde_json::from_str::<FnSpec>(&js).unwrap(), f);
        let bad = r#"{"arity":3,"kind":"block_symmetric","blocks":[1,1],"values":[1,1,1,-1]}"#;
        assert!(serde_json::from_str::<FnSpec>(bad).is_err());
    }
}
