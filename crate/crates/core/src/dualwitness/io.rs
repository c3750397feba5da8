//! Witness file format.
//!
//! ```json
//! {"n": 9, "d": 1, "delta_int": 2,
//!  "values": [{"t": -4, "a": "…/…", "b": "…/…"}, …],
//!  "report": {…}, "manifest": {…}}
//! ```
//!
//! Only nonzero grid values are listed, in increasing `t`; rationals use the
//! canonical `"num/den"` form. Keys are written in the order above, so two
//! files for the same parameters are byte-identical.

use serde::{Deserialize, Serialize};

use super::{witness_params, WitnessCert, WitnessError, WitnessReport};
use crate::exactnum::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridValue {
    pub t: i64,
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub n: u64,
    pub d: u32,
    pub delta_int: u64,
    pub values: Vec<GridValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<serde_json::Value>,
}

impl WitnessFile {
    pub fn from_cert(cert: &WitnessCert) -> Self {
        let values = cert
            .r
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(t, v)| GridValue { t, a: v.a().clone(), b: v.b().clone() })
            .collect();
        WitnessFile {
            n: cert.params.n,
            d: cert.params.d,
            delta_int: cert.params.delta_int,
            values,
            report: cert.report.clone(),
            manifest: None,
        }
    }

    /// Revalidates `(n, d)` and rebuilds the grid function. The stored
    /// report is carried along but not trusted.
    pub fn into_cert(self) -> Result<WitnessCert, WitnessError> {
        let params = witness_params(self.n, self.d)?;
        if params.delta_int != self.delta_int {
            return Err(WitnessError::ParamMismatch(format!(
                "delta_int {} does not match Δ = {} for (n, d) = ({}, {})",
                self.delta_int, params.delta_int, self.n, self.d
            )));
        }
        let mut cert =
            WitnessCert::from_values(params, self.values.into_iter().map(|g| (g.t, g.a, g.b)))?;
        cert.report = self.report;
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualwitness::build_witness;

    #[test]
    fn file_roundtrip_and_key_order() {
        let cert = build_witness(&witness_params(9, 1).unwrap());
        let text = serde_json::to_string(&WitnessFile::from_cert(&cert)).unwrap();
        assert!(text.starts_with(r#"{"n":9,"d":1,"delta_int":2,"values":[{"t":-4,"a":""#));
        let back: WitnessFile = serde_json::from_str(&text).unwrap();
        let cert2 = back.into_cert().unwrap();
        assert_eq!(cert2.r, cert.r);
    }

    #[test]
    fn rejects_inconsistent_files() {
        let cert = build_witness(&witness_params(9, 1).unwrap());
        let mut f = WitnessFile::from_cert(&cert);
        f.delta_int = 3;
        assert!(matches!(f.into_cert(), Err(WitnessError::ParamMismatch(_))));
        let mut f = WitnessFile::from_cert(&cert);
        f.values[0].t = 10;
        assert!(matches!(f.into_cert(), Err(WitnessError::PointOutOfRange { .. })));
        let mut f = WitnessFile::from_cert(&cert);
        f.n = 10;
        assert!(matches!(f.into_cert(), Err(WitnessError::EvenN(10))));
    }
}
