use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DiagonalSemigroup, MatrixSemigroup, MultiplicationC0, NilpotentShift, RiemannLiouville, Semigroup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("backend {0:?} needs field {1:?}")]
    Missing(String, &'static str),
    #[error("unknown backend {0:?}")]
    Unknown(String),
    #[error("invalid backend parameters: {0}")]
    Invalid(String),
}

/// A complex number written either as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexJson> for C64 {
    fn from(c: ComplexJson) -> Self {
        match c {
            ComplexJson::Real(x) => C64::new(x, 0.0),
            ComplexJson::Pair([re, im]) => C64::new(re, im),
        }
    }
}

/// `{"backend": name, "n": int, "lambdas": [...], "matrix": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendSpec {
    pub backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<ComplexJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<ComplexJson>>>,
}

impl BackendSpec {
    fn n(&self, min: usize) -> Result<usize, ConfigError> {
        let n = self.n.ok_or_else(|| ConfigError::Missing(self.backend.clone(), "n"))?;
        if n < min {
            return Err(ConfigError::Invalid(format!("{} needs n >= {min}, got {n}", self.backend)));
        }
        Ok(n)
    }

    pub fn build(&self) -> Result<Box<dyn Semigroup>, ConfigError> {
        Ok(match self.backend.as_str() {
            "nilpotent_shift" => Box::new(NilpotentShift::new(self.n(2)?)),
            "riemann_liouville" => Box::new(RiemannLiouville::new(self.n(2)?)),
            "multiplication_c0" => Box::new(MultiplicationC0::new(self.n(10)?)),
            "diagonal" => {
                let l = self.lambdas.as_ref().ok_or_else(|| ConfigError::Missing(self.backend.clone(), "lambdas"))?;
                if l.is_empty() {
                    return Err(ConfigError::Invalid("empty lambdas".into()));
                }
                Box::new(DiagonalSemigroup::new(l.iter().map(|&c| c.into()).collect()))
            }
            "matrix" => {
                let rows = self.matrix.as_ref().ok_or_else(|| ConfigError::Missing(self.backend.clone(), "matrix"))?;
                let n = rows.len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return Err(ConfigError::Invalid("matrix must be square and nonempty".into()));
                }
                let a = Array2::from_shape_fn((n, n), |(i, j)| C64::from(rows[i][j]));
                Box::new(MatrixSemigroup::new(a))
            }
            other => return Err(ConfigError::Unknown(other.to_string())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_backend() {
        let cases = [
            r#"{"backend":"nilpotent_shift","n":16}"#,
            r#"{"backend":"riemann_liouville","n":16}"#,
            r#"{"backend":"multiplication_c0","n":16}"#,
            r#"{"backend":"diagonal","lambdas":[1, [2, 0.5]]}"#,
            r#"{"backend":"matrix","matrix":[[0, 1],[[-1, 0], 0]]}"#,
        ];
        let dims = [16, 16, 16, 2, 2];
        for (s, d) in cases.iter().zip(dims) {
            let spec: BackendSpec = serde_json::from_str(s).unwrap();
            assert_eq!(spec.build().unwrap().dim(), d, "{s}");
        }
    }

    #[test]
    fn reports_bad_specs() {
        let spec: BackendSpec = serde_json::from_str(r#"{"backend":"nilpotent_shift"}"#).unwrap();
        assert!(matches!(spec.build(), Err(ConfigError::Missing(_, "n"))));
        let spec: BackendSpec = serde_json::from_str(r#"{"backend":"heat"}"#).unwrap();
        assert!(matches!(spec.build(), Err(ConfigError::Unknown(_))));
        let spec: BackendSpec = serde_json::from_str(r#"{"backend":"matrix","matrix":[[1,2]]}"#).unwrap();
        assert!(matches!(spec.build(), Err(ConfigError::Invalid(_))));
    }
}
