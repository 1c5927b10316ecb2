//! JSON interchange format for the four object kinds.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use qhm_core::{Matrix, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Clifford,
    Osystem,
    Orthomul,
    Qhm,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Clifford => "clifford",
            Kind::Osystem => "osystem",
            Kind::Orthomul => "orthomul",
            Kind::Qhm => "qhm",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float,
}

/// A serialized object. `dims` is `[2m, n]` for Clifford systems, `[m, n]`
/// for O-systems and maps, and `[p, q]` for orthogonal multiplications.
/// Rational entries are `"p/q"` (or integer) strings, float entries are
/// numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDocument {
    pub kind: Kind,
    pub dims: [usize; 2],
    pub scalars: ScalarMode,
    pub matrices: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    pub meta: BTreeMap<String, Value>,
}

/// Provenance written into `meta`.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub command: String,
    pub seed: u64,
}

impl Provenance {
    fn to_meta(&self) -> BTreeMap<String, Value> {
        BTreeMap::from([
            ("command".to_string(), Value::from(self.command.clone())),
            ("seed".to_string(), Value::from(self.seed)),
            ("version".to_string(), Value::from(env!("CARGO_PKG_VERSION"))),
        ])
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => Value::String(r.to_string()),
        Scalar::Approx(v) => Value::from(*v),
    }
}

/// Rows of a matrix; rational strings when every entry is exact.
pub fn matrix_to_json(m: &Matrix, exact: bool) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    if exact {
                        scalar_to_json(&m.get(i, j))
                    } else {
                        Value::from(m.get_f64(i, j))
                    }
                })
                .collect()
        })
        .collect()
}

fn parse_rational(v: &Value) -> Result<BigRational, CliError> {
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(CliError::Format(format!("expected a rational string, found {other}"))),
    };
    if let Some((_, den)) = text.split_once('/') {
        if den.trim().parse::<i64>().is_ok_and(|d| d == 0) {
            return Err(CliError::Format(format!("zero denominator in {text:?}")));
        }
    }
    let r = BigRational::from_str(&text).map_err(|e| CliError::Format(format!("bad rational {text:?}: {e}")))?;
    if r.denom().is_zero() {
        return Err(CliError::Format(format!("zero denominator in {text:?}")));
    }
    Ok(r)
}

fn parse_float(v: &Value) -> Result<f64, CliError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Format(format!("expected a finite number, found {v}")))
}

fn parse_matrix(rows: &[Vec<Value>], mode: ScalarMode, index: usize) -> Result<Matrix, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(CliError::Format(format!("matrix {} is empty or ragged", index + 1)));
    }
    let flat = rows.iter().flatten();
    Ok(match mode {
        ScalarMode::Rational => Matrix::from_rationals(r, c, flat.map(parse_rational).collect::<Result<_, _>>()?),
        ScalarMode::Float => Matrix::from_f64s(r, c, flat.map(parse_float).collect::<Result<_, _>>()?),
    })
}

impl ObjectDocument {
    pub fn new(kind: Kind, dims: [usize; 2], matrices: &[Matrix], provenance: &Provenance) -> Self {
        let exact = matrices.iter().all(Matrix::is_exact);
        ObjectDocument {
            kind,
            dims,
            scalars: if exact { ScalarMode::Rational } else { ScalarMode::Float },
            matrices: matrices.iter().map(|m| matrix_to_json(m, exact)).collect(),
            meta: provenance.to_meta(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Format(format!("invalid document: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    /// The matrices, after checking them against `kind` and `dims`.
    pub fn matrices(&self) -> Result<Vec<Matrix>, CliError> {
        let mats: Vec<Matrix> = self
            .matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| parse_matrix(rows, self.scalars, i))
            .collect::<Result<_, _>>()?;
        let [a, b] = self.dims;
        let shape_err = |what: String| Err(CliError::Format(format!("{} document with dims {:?}: {what}", self.kind, self.dims)));
        match self.kind {
            Kind::Clifford | Kind::Osystem | Kind::Qhm => {
                if mats.len() != b {
                    return shape_err(format!("{} matrices, expected {b}", mats.len()));
                }
                if let Some(m) = mats.iter().find(|m| m.shape() != (a, a)) {
                    return shape_err(format!("matrix of shape {:?}, expected {a}×{a}", m.shape()));
                }
            }
            Kind::Orthomul => {
                if mats.len() != a {
                    return shape_err(format!("{} slices, expected {a}", mats.len()));
                }
                let n_out = mats.first().map_or(0, Matrix::rows);
                if let Some(m) = mats.iter().find(|m| m.shape() != (n_out, b)) {
                    return shape_err(format!("slice of shape {:?}, expected {n_out}×{b}", m.shape()));
                }
            }
        }
        if mats.is_empty() {
            return shape_err("no matrices".into());
        }
        Ok(mats)
    }
}
