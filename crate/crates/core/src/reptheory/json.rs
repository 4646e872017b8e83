use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Rep;
use crate::freealg::ParamEnv;
use crate::matkit::CMat;
use crate::{Error, Result, C64};

/// Serialized form of a [`Rep`].
///
/// ```json
/// {"n":2,"generators":["x","y","z"],"params":{"c":[2.0,0.0]},
///  "matrices":{"x":[[[0,0],[1,0]],[[0,0],[0,0]]], ...}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    pub n: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, [f64; 2]>,
    pub matrices: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl RepJson {
    pub fn from_rep(r: &Rep) -> Self {
        RepJson {
            n: r.n,
            generators: r.generators.clone(),
            params: r.env.bindings.iter().map(|(k, v)| (k.clone(), pair(*v))).collect(),
            matrices: r
                .generators
                .iter()
                .zip(&r.images)
                .map(|(g, m)| {
                    let rows = m
                        .to_rows()
                        .into_iter()
                        .map(|row| row.into_iter().map(pair).collect())
                        .collect();
                    (g.clone(), rows)
                })
                .collect(),
        }
    }

    pub fn to_rep(&self) -> Result<Rep> {
        if self.n == 0 {
            return Err(Error::Schema("n must be positive".into()));
        }
        if let Some(extra) = self.matrices.keys().find(|k| !self.generators.contains(k)) {
            return Err(Error::Schema(format!("matrix for undeclared generator `{extra}`")));
        }
        let mut images = Vec::new();
        for g in &self.generators {
            let rows = self
                .matrices
                .get(g)
                .ok_or_else(|| Error::Schema(format!("missing matrix for `{g}`")))?;
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                return Err(Error::Schema(format!("matrix `{g}` is not {0}×{0}", self.n)));
            }
            let rows: Vec<Vec<C64>> = rows
                .iter()
                .map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect())
                .collect();
            images.push(CMat::from_rows(&rows));
        }
        let env: ParamEnv = self
            .params
            .iter()
            .map(|(k, [re, im])| (k.as_str(), C64::new(*re, *im)))
            .collect();
        Rep::new(self.generators.clone(), images, env)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let r = Rep::new(
            vec!["x".into(), "y".into()],
            vec![
                CMat::diag(&[C64::new(-1.0, 0.5), C64::new(1.0, -0.5)]),
                CMat::m2(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.25, 0.0), C64::new(0.0, 0.0)),
            ],
            ParamEnv::new().with("c", C64::new(2.0, 0.1)),
        )
        .unwrap();
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back: RepJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_rep().unwrap(), r);
    }

    #[test]
    fn schema_errors() {
        let bad = r#"{"n":2,"generators":["x"],"matrices":{"x":[[[0,0]]]}}"#;
        let j: RepJson = serde_json::from_str(bad).unwrap();
        assert!(matches!(j.to_rep(), Err(Error::Schema(_))));
        let missing = r#"{"n":1,"generators":["x","y"],"matrices":{"x":[[[0,0]]]}}"#;
        let j: RepJson = serde_json::from_str(missing).unwrap();
        assert!(matches!(j.to_rep(), Err(Error::Schema(_))));
        let extra = r#"{"n":1,"generators":["x"],"matrices":{"x":[[[0,0]]],"w":[[[0,0]]]}}"#;
        let j: RepJson = serde_json::from_str(extra).unwrap();
        assert!(matches!(j.to_rep(), Err(Error::Schema(_))));
        assert!(serde_json::from_str::<RepJson>(r#"{"n":1}"#).is_err());
    }
}
