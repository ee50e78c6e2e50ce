use serde::{Deserialize, Serialize};

use super::{check_mass, SpectralError};
use crate::calculus::func_calc;
use crate::complexfn::{ray_max, DEFAULT_DECAY_FLOOR};
use crate::linalg::{op_norm, spec_radius};
use crate::measures::CompactMeasure;
use crate::semigroups::MultiplicationC0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub u: f64,
    pub norm: f64,
    pub spectral_radius: f64,
    pub sup: f64,
    /// `|norm - sup|`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub n: usize,
    pub rows: Vec<SharpnessRow>,
    pub note: String,
}

/// `|F(-uA)|` on the multiplication semigroup of `C_0[0, 1]`, sampled on
/// `n` grid points, against `sup_{s > 0} |F(s)|`.
pub fn sharpness_demo(n: usize, mu: &CompactMeasure, u_list: &[f64]) -> Result<SharpnessReport, SpectralError> {
    check_mass(mu)?;
    if !mu.is_real() {
        return Err(SpectralError::NotReal);
    }
    let sup = ray_max(mu, DEFAULT_DECAY_FLOOR)?.value;
    let backend = MultiplicationC0::new(n);
    let rows = u_list
        .iter()
        .map(|&u| {
            let op = func_calc(&backend, mu, u).operator;
            let norm = op_norm(&op).value;
            let rho = spec_radius(&op).map(|r| r.value).unwrap_or(f64::NAN);
            SharpnessRow { u, norm, spectral_radius: rho, sup, gap: (norm - sup).abs() }
        })
        .collect();
    Ok(SharpnessReport {
        n,
        rows,
        note: "grid model only: the continuum algebra has no nontrivial idempotents, which is flagged here, not proven"
            .into(),
    })
}

/// CSV with columns `n, u, norm, sup, gap`.
pub fn sharpness_csv(reports: &[SharpnessReport]) -> String {
    let mut out = String::from("n,u,norm,sup,gap\n");
    for rep in reports {
        for r in &rep.rows {
            out.push_str(&format!("{},{},{},{},{}\n", rep.n, r.u, r.norm, r.sup, r.gap));
        }
    }
    out
}
