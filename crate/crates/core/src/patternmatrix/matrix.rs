//! The `(N, n, φ)` pattern matrix.
//!
//! Rows are `x ∈ {-1,1}^N`, indexed so that bit `i` of the row index set
//! means `x_{i+1} = -1` (so `x₁` varies fastest). The `N` coordinates
//! split into `n` consecutive blocks of size `N/n`. Columns are pairs
//! `(S, w)`: `S = (s₁, …, s_n)` picks one coordinate per block and `w ∈
//! {-1,1}^n`. Columns run over `S` in lexicographic order (`s₁` most
//! significant), and for each `S` over `w` in lexicographic order (`w₁`
//! most significant, `+1` before `-1`). The entry is `φ(x|_S ⊙ w)`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::PatternError;
use crate::lp::FnSpec;

/// Largest dense export, in entries.
pub const DENSE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrixSpec {
    big_n: u32,
    n: u32,
    phi: FnSpec,
}

/// A decoded column: global 1-based coordinates `S` and the mask `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub s: Vec<u32>,
    pub w: Vec<i8>,
}

impl Column {
    /// `S=1.4/w=+-` style label, used as the CSV header.
    pub fn label(&self) -> String {
        let s: Vec<String> = self.s.iter().map(u32::to_string).collect();
        format!("S={}/w={}", s.join("."), sign_string(&self.w))
    }
}

fn sign_string(v: &[i8]) -> String {
    v.iter().map(|&b| if b < 0 { '-' } else { '+' }).collect()
}

impl PatternMatrixSpec {
    pub fn new(big_n: u32, n: u32, phi: FnSpec) -> Result<Self, PatternError> {
        if n == 0 || !big_n.is_multiple_of(n) {
            return Err(PatternError::NotDivisible { big_n, n });
        }
        if phi.arity() != n {
            return Err(PatternError::ArityMismatch { got: phi.arity(), expected: n });
        }
        Ok(PatternMatrixSpec { big_n, n, phi })
    }

    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn block(&self) -> u32 {
        self.big_n / self.n
    }

    /// `2^N`.
    pub fn rows(&self) -> BigUint {
        BigUint::from(1u32) << self.big_n as usize
    }

    /// `(N/n)^n · 2^n`.
    pub fn cols(&self) -> BigUint {
        BigUint::from(self.block()).pow(self.n) << self.n as usize
    }

    pub fn entry(&self, x: &[i8], col: &Column) -> i8 {
        assert_eq!(x.len(), self.big_n as usize, "row has the wrong length");
        let z: Vec<i8> = col.s.iter().zip(&col.w).map(|(&s, &w)| x[s as usize - 1] * w).collect();
        self.phi.eval(&z)
    }

    pub fn row_point(&self, row: u64) -> Vec<i8> {
        (0..self.big_n).map(|i| if row >> i & 1 == 1 { -1 } else { 1 }).collect()
    }

    pub fn column(&self, index: &BigUint) -> Column {
        let n = self.n as usize;
        let b = self.block();
        let w_mask = index & ((BigUint::from(1u32) << n) - 1u32);
        let mut s_index = index >> n;
        let w = (0..n).map(|i| if w_mask.bit((n - 1 - i) as u64) { -1 } else { 1 }).collect();
        let mut s = vec![0u32; n];
        for i in (0..n).rev() {
            let local = (&s_index % b).to_u32().expect("block offset fits");
            s_index /= b;
            s[i] = i as u32 * b + local + 1;
        }
        Column { s, w }
    }

    /// Entry by row and column index.
    pub fn entry_at(&self, row: u64, col: &BigUint) -> i8 {
        self.entry(&self.row_point(row), &self.column(col))
    }

    fn dense_dims(&self) -> Result<(u64, u64), PatternError> {
        let total = self.rows() * self.cols();
        if total > BigUint::from(DENSE_LIMIT) {
            return Err(PatternError::TooLarge(total.to_string()));
        }
        Ok((self.rows().to_u64().unwrap(), self.cols().to_u64().unwrap()))
    }

    pub fn dense(&self) -> Result<Vec<Vec<i8>>, PatternError> {
        let (r, c) = self.dense_dims()?;
        let cols: Vec<Column> = (0..c).map(|j| self.column(&BigUint::from(j))).collect();
        Ok((0..r)
            .map(|i| {
                let x = self.row_point(i);
                cols.iter().map(|col| self.entry(&x, col)).collect()
            })
            .collect())
    }

    /// CSV with a header of column labels; each row starts with `x` as a
    /// `+`/`-` string in coordinate order.
    pub fn to_csv(&self) -> Result<String, PatternError> {
        let (r, c) = self.dense_dims()?;
        let cols: Vec<Column> = (0..c).map(|j| self.column(&BigUint::from(j))).collect();
        let mut out = String::from("x");
        for col in &cols {
            out.push(',');
            out.push_str(&col.label());
        }
        out.push('\n');
        for i in 0..r {
            let x = self.row_point(i);
            out.push_str(&sign_string(&x));
            for col in &cols {
                write!(out, ",{}", self.entry(&x, col)).unwrap();
            }
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> FnSpec {
        FnSpec::explicit(1, vec![1, -1]).unwrap()
    }

    #[test]
    fn two_by_one_identity_matrix() {
        let m = PatternMatrixSpec::new(2, 1, identity()).unwrap();
        assert_eq!(
            m.dense().unwrap(),
            vec![vec![1, -1, 1, -1], vec![-1, 1, 1, -1], vec![1, -1, -1, 1], vec![-1, 1, -1, 1]]
        );
        let csv = m.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), "x,S=1/w=+,S=1/w=-,S=2/w=+,S=2/w=-");
        assert_eq!(csv.lines().nth(2).unwrap(), "-+,-1,1,1,-1");
    }

    #[test]
    fn dimension_formula() {
        for n in 1..=4u32 {
            let phi = FnSpec::maj(4 * n).unwrap();
            let m = PatternMatrixSpec::new(4 * n * n, 4 * n, phi).unwrap();
            assert_eq!(m.rows(), BigUint::from(1u32) << (4 * n * n) as usize);
            assert_eq!(m.cols(), BigUint::from(n).pow(4 * n) << (4 * n) as usize);
        }
    }

    #[test]
    fn column_decoding() {
        let m = PatternMatrixSpec::new(6, 2, FnSpec::parity(2).unwrap()).unwrap();
        assert_eq!(m.cols(), BigUint::from(36u32));
        assert_eq!(m.column(&BigUint::from(0u32)), Column { s: vec![1, 4], w: vec![1, 1] });
        assert_eq!(m.column(&BigUint::from(1u32)), Column { s: vec![1, 4], w: vec![1, -1] });
        assert_eq!(m.column(&BigUint::from(2u32)), Column { s: vec![1, 4], w: vec![-1, 1] });
        assert_eq!(m.column(&BigUint::from(4u32)), Column { s: vec![1, 5], w: vec![1, 1] });
        assert_eq!(m.column(&BigUint::from(35u32)), Column { s: vec![3, 6], w: vec![-1, -1] });
    }

    #[test]
    fn dense_and_oracle_agree() {
        let m = PatternMatrixSpec::new(6, 3, FnSpec::maj(3).unwrap()).unwrap();
        let d = m.dense().unwrap();
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, m.entry_at(i as u64, &BigUint::from(j)));
            }
        }
    }

    #[test]
    fn every_row_sees_the_whole_image() {
        let m = PatternMatrixSpec::new(4, 2, FnSpec::and(2).unwrap()).unwrap();
        for row in m.dense().unwrap() {
            assert!(row.contains(&1) && row.contains(&-1));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            PatternMatrixSpec::new(5, 2, FnSpec::maj(2).unwrap()),
            Err(PatternError::NotDivisible { big_n: 5, n: 2 })
        );
        assert!(matches!(PatternMatrixSpec::new(4, 2, FnSpec::maj(3).unwrap()), Err(PatternError::ArityMismatch { .. })));
        let big = PatternMatrixSpec::new(16, 4, FnSpec::maj(4).unwrap()).unwrap();
        assert!(matches!(big.dense(), Err(PatternError::TooLarge(_))));
        assert_eq!(big.entry_at(0, &BigUint::from(0u32)), 1);
    }
}
