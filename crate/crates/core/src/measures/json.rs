use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{Atom, CompactDistribution, CompactMeasure, MeasureError, Piece};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub t: f64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Polynomial piece; `coeffs[k]` multiplies `t^k` in the global variable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MeasureJson {
    #[serde(default)]
    pub atoms: Vec<AtomJson>,
    #[serde(default)]
    pub pieces: Vec<PieceJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub components: Vec<MeasureJson>,
}

impl TryFrom<MeasureJson> for CompactMeasure {
    type Error = MeasureError;

    fn try_from(j: MeasureJson) -> Result<Self, MeasureError> {
        let atoms = j.atoms.iter().map(|a| Atom { t: a.t, weight: C64::new(a.re, a.im) }).collect();
        let pieces = j
            .pieces
            .iter()
            .map(|p| Piece { a: p.a, b: p.b, coeffs: p.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect() })
            .collect();
        CompactMeasure::new(atoms, pieces)
    }
}

impl From<CompactMeasure> for MeasureJson {
    fn from(m: CompactMeasure) -> Self {
        Self {
            atoms: m.atoms().iter().map(|a| AtomJson { t: a.t, re: a.weight.re, im: a.weight.im }).collect(),
            pieces: m
                .pieces()
                .iter()
                .map(|p| PieceJson { a: p.a, b: p.b, coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect() })
                .collect(),
        }
    }
}

impl TryFrom<DistributionJson> for CompactDistribution {
    type Error = MeasureError;

    fn try_from(j: DistributionJson) -> Result<Self, MeasureError> {
        let comps = j.components.into_iter().map(CompactMeasure::try_from).collect::<Result<Vec<_>, _>>()?;
        match j.order {
            Some(p) => CompactDistribution::with_order(p, comps),
            None => CompactDistribution::new(comps),
        }
    }
}

impl From<CompactDistribution> for DistributionJson {
    fn from(d: CompactDistribution) -> Self {
        Self { order: Some(d.order()), components: d.components().iter().cloned().map(MeasureJson::from).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::standard::*;

    #[test]
    fn measure_round_trip() {
        for m in [two_point(), four_point(), step_density()] {
            let s = serde_json::to_string(&m).unwrap();
            let back: CompactMeasure = serde_json::from_str(&s).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn parses_documented_schema() {
        let s = r#"{"atoms":[{"t":1.0,"re":1.0,"im":1.0},{"t":2.0,"re":-1.0,"im":-1.0}],
                   "pieces":[{"a":1.0,"b":2.0,"coeffs":[[0.5,0.0]]}]}"#;
        let m: CompactMeasure = serde_json::from_str(s).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert!(!m.is_real());
        assert!((m.mass() - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn invalid_json_measure_is_rejected() {
        let s = r#"{"atoms":[{"t":-1.0,"re":1.0}]}"#;
        assert!(serde_json::from_str::<CompactMeasure>(s).is_err());
    }

    #[test]
    fn distribution_round_trip() {
        let d = CompactDistribution::new(vec![two_point(), step_density()]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: CompactDistribution = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"order":3,"components":[{"atoms":[]}]}"#;
        assert!(serde_json::from_str::<CompactDistribution>(bad).is_err());
    }
}
