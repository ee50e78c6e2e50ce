use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ep_calc, func_calc, CalcError, OperatorValue};
use crate::complexfn::{ray_max, RayMaximum, DEFAULT_DECAY_FLOOR};
use crate::linalg::{op_norm, spec_radius, Operator, SpecRadiusError};
use crate::measures::{CompactDistribution, CompactMeasure};
use crate::semigroups::Semigroup;

pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub u: f64,
    #[serde(rename = "norm_F")]
    pub norm_f: f64,
    #[serde(rename = "rho_F")]
    pub rho_f: f64,
    pub ray_max_value: f64,
    /// `norm_F - ray_max_value`.
    pub margin: f64,
    pub norm_converged: bool,
    pub quadrature_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub backend: String,
    pub measure: String,
    pub ray: RayMaximum,
    pub rows: Vec<SweepRow>,
    /// Largest `u` of the leading run of rows with positive margin.
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizedReport {
    pub backend: String,
    pub measure: String,
    pub ray: RayMaximum,
    /// `(max_x |F(x)|)^2`.
    pub target: f64,
    pub rows: Vec<SweepRow>,
    pub eta: Option<f64>,
    /// Max entry of `F(-uA) F~(-uA) - (mu * conj mu)(-uA)` over the grid.
    pub max_path_residual: f64,
}

/// `{k / n : k_lo <= k <= k_hi}`.
pub fn grid_aligned(n: usize, k_lo: usize, k_hi: usize) -> Vec<f64> {
    (k_lo..=k_hi).map(|k| k as f64 / n as f64).collect()
}

pub fn empirical_eta(rows: &[SweepRow]) -> Option<f64> {
    rows.iter().take_while(|r| r.margin > 0.0).last().map(|r| r.u)
}

fn check_mass(mu: &CompactMeasure) -> Result<(), CalcError> {
    let m = mu.mass().norm();
    if m > MASS_TOL {
        return Err(CalcError::MassNotZero(m));
    }
    Ok(())
}

fn check_backend(backend: &dyn Semigroup) -> Result<(), CalcError> {
    if !backend.flags().quasinilpotent {
        return Err(CalcError::NotQuasinilpotent(backend.tag()));
    }
    Ok(())
}

fn row(u: f64, value: &OperatorValue, target: f64) -> SweepRow {
    let est = op_norm(&value.operator);
    let rho = radius(&value.operator);
    SweepRow {
        u,
        norm_f: est.value,
        rho_f: rho,
        ray_max_value: target,
        margin: est.value - target,
        norm_converged: est.converged,
        quadrature_budget: value.quadrature_budget,
    }
}

/// Spectral radius; on disagreement the larger estimate is kept.
fn radius(op: &Operator) -> f64 {
    match spec_radius(op) {
        Ok(r) => r.value,
        Err(SpecRadiusError::Inconsistent { power, gelfand }) => power.max(gelfand),
    }
}

/// `|F(-uA)|` against `max_{x>=0} |F(x)|` over `u_grid`.
pub fn sweep(backend: &dyn Semigroup, mu: &CompactMeasure, u_grid: &[f64]) -> Result<SweepReport, CalcError> {
    check_mass(mu)?;
    if !mu.is_real() {
        return Err(CalcError::NotReal);
    }
    check_backend(backend)?;
    let ray = ray_max(mu, DEFAULT_DECAY_FLOOR)?;
    let rows: Vec<SweepRow> = u_grid.par_iter().map(|&u| row(u, &func_calc(backend, mu, u), ray.value)).collect();
    Ok(SweepReport { backend: backend.tag(), measure: super::measure_tag(mu), ray, eta: empirical_eta(&rows), rows })
}

/// `|F(-uA) F~(-uA)|` against `(max_x |F(x)|)^2`, where `F~` is the
/// transform of `conj_reflect(mu)`. The product is also formed through the
/// convolution `mu * conj_reflect(mu)` and the two paths are compared.
pub fn symmetrized_sweep(
    backend: &dyn Semigroup,
    mu: &CompactMeasure,
    u_grid: &[f64],
) -> Result<SymmetrizedReport, CalcError> {
    check_mass(mu)?;
    check_backend(backend)?;
    let ray = ray_max(mu, DEFAULT_DECAY_FLOOR)?;
    let target = ray.value * ray.value;
    let tilde = mu.conj_reflect();
    let nu = mu.convolve(&tilde);
    let results: Vec<(SweepRow, f64)> = u_grid
        .par_iter()
        .map(|&u| {
            let f = func_calc(backend, mu, u);
            let g = func_calc(backend, &tilde, u);
            let direct = f.operator.compose(&g.operator);
            let conv = func_calc(backend, &nu, u);
            let residual = direct.sub(&conv.operator).max_abs();
            let value = OperatorValue {
                operator: direct,
                provenance: conv.provenance.clone(),
                quadrature_budget: conv.quadrature_budget,
                time_rounding: conv.time_rounding,
            };
            (row(u, &value, target), residual)
        })
        .collect();
    let max_path_residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let rows: Vec<SweepRow> = results.into_iter().map(|r| r.0).collect();
    Ok(SymmetrizedReport {
        backend: backend.tag(),
        measure: super::measure_tag(mu),
        ray,
        target,
        eta: empirical_eta(&rows),
        rows,
        max_path_residual,
    })
}

/// Same comparison for a distribution of order `p`, evaluated through the
/// generator. Meaningful only as exploratory output on surrogate models.
pub fn ep_sweep(backend: &dyn Semigroup, phi: &CompactDistribution, u_grid: &[f64]) -> Result<SweepReport, CalcError> {
    let f0 = phi.laplace(num_complex::Complex64::new(0.0, 0.0)).norm();
    if f0 > MASS_TOL {
        return Err(CalcError::MassNotZero(f0));
    }
    if !phi.is_real() {
        return Err(CalcError::NotReal);
    }
    check_backend(backend)?;
    if backend.generator().is_none() {
        return Err(CalcError::NoGenerator(backend.tag()));
    }
    let ray = ray_max(phi, DEFAULT_DECAY_FLOOR)?;
    let rows: Result<Vec<SweepRow>, CalcError> =
        u_grid.par_iter().map(|&u| Ok(row(u, &ep_calc(backend, phi, u)?, ray.value))).collect();
    let rows = rows?;
    let measure = format!("order {} distribution", phi.order());
    Ok(SweepReport { backend: backend.tag(), measure, ray, eta: empirical_eta(&rows), rows })
}

/// CSV with columns `u, norm_F, rho_F, ray_max, margin`.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("u,norm_F,rho_F,ray_max,margin\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.u, r.norm_f, r.rho_f, r.ray_max_value, r.margin));
    }
    out
}
