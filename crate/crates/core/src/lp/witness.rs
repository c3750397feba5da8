use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{FnSpec, LpError};
use crate::exactnum::rational;
use crate::lift::SymFn;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A single `ψ` showing the threshold degree exceeds `phd`.
    Threshold,
    /// A pair `(ψ₀, ψ₁)` bounding `R(f, d₀, d₁)` from below by `eps`.
    RationalPair,
}

/// Dual object, stored as the common per-point value on each class of the
/// function's representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualWitness {
    pub kind: WitnessKind,
    /// `ψ` (or `ψ₀`) is orthogonal to every polynomial of degree `<= phd`.
    pub phd: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phd1: Option<u32>,
    #[serde(with = "rational::serde_opt_str", default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Rational>,
    #[serde(with = "rational::serde_vec_str")]
    pub psi: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub psi1: Option<Vec<Rational>>,
}

mod opt_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactnum::rational;
    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.iter().map(rational::to_string).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| v.iter().map(|s| rational::parse(s).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

/// `Σ_x |g(x)|` for a per-class function.
pub fn class_l1(f: &FnSpec, g: &[Rational]) -> Rational {
    g.iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (c, v)| acc + v.abs() * rational::from_biguint(&f.multiplicity(c)))
}

/// `⟨g, χ⟩` for every basis element of degree `<= d`.
pub fn class_moments(f: &FnSpec, g: &[Rational], d: u32) -> Vec<Rational> {
    let mult: Vec<Rational> = (0..f.classes()).map(|c| rational::from_biguint(&f.multiplicity(c))).collect();
    f.basis(d)
        .iter()
        .map(|b| {
            (0..f.classes())
                .filter(|&c| !g[c].is_zero())
                .fold(Rational::zero(), |acc, c| acc + &g[c] * &mult[c] * f.feature(b, c))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub pure_high_degree: bool,
    pub sign_agreement: bool,
    pub nontrivial: bool,
    pub normalized: bool,
}

impl ThresholdCheck {
    pub fn ok(&self) -> bool {
        self.pure_high_degree && self.sign_agreement && self.nontrivial
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    /// `ψ₀(x) >= ε|ψ₁(x)|` wherever `f(x) = 1`.
    pub dominates_on_true: bool,
    /// `ψ₁(x) >= ε|ψ₀(x)|` wherever `f(x) = -1`.
    pub dominates_on_false: bool,
    pub phd0: bool,
    pub phd1: bool,
    pub nontrivial: bool,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.dominates_on_true && self.dominates_on_false && self.phd0 && self.phd1 && self.nontrivial
    }
}

impl DualWitness {
    pub fn l1_norm(&self, f: &FnSpec) -> Rational {
        class_l1(f, &self.psi)
    }

    /// Weight-class form, available for symmetric functions.
    pub fn to_symfn(&self, f: &FnSpec) -> Option<SymFn> {
        (f.kind() == super::FnKind::Symmetric)
            .then(|| SymFn::from_rationals(f.arity() as u64, self.psi.clone()).expect("one value per weight"))
    }

    pub fn check_threshold(&self, f: &FnSpec) -> ThresholdCheck {
        assert_eq!(self.psi.len(), f.classes(), "witness and function disagree on the class count");
        let norm = self.l1_norm(f);
        ThresholdCheck {
            pure_high_degree: class_moments(f, &self.psi, self.phd).iter().all(Zero::is_zero),
            sign_agreement: self.psi.iter().enumerate().all(|(c, v)| !(v * rational::int(f.value(c) as i64)).is_negative()),
            nontrivial: norm.is_positive(),
            normalized: norm == rational::int(1),
        }
    }

    pub fn check_pair(&self, f: &FnSpec) -> PairCheck {
        let psi1 = self.psi1.as_ref().expect("pair witness carries ψ₁");
        let eps = self.eps.as_ref().expect("pair witness carries ε");
        let dom = |a: &Rational, b: &Rational| *a >= eps * b.abs();
        let classes = 0..f.classes();
        PairCheck {
            dominates_on_true: classes.clone().filter(|&c| f.value(c) == 1).all(|c| dom(&self.psi[c], &psi1[c])),
            dominates_on_false: classes.filter(|&c| f.value(c) == -1).all(|c| dom(&psi1[c], &self.psi[c])),
            phd0: class_moments(f, &self.psi, self.phd).iter().all(Zero::is_zero),
            phd1: class_moments(f, psi1, self.phd1.unwrap_or(self.phd)).iter().all(Zero::is_zero),
            nontrivial: class_l1(f, &self.psi).is_positive() && class_l1(f, psi1).is_positive(),
        }
    }

    pub(crate) fn ensure(&self, f: &FnSpec) -> Result<(), LpError> {
        let ok = match self.kind {
            WitnessKind::Threshold => self.check_threshold(f).ok(),
            WitnessKind::RationalPair => self.check_pair(f).ok(),
        };
        if ok {
            Ok(())
        } else {
            Err(LpError::CertificateCheck(format!("{:?} witness failed re-verification", self.kind)))
        }
    }
}
