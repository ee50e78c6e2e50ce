use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{check_mass, SpectralError};
use crate::complexfn::{babylem_radius, ray_max, DEFAULT_DECAY_FLOOR};
use crate::measures::CompactMeasure;
use crate::semigroups::Semigroup;

/// Strict-inequality threshold for `rho < sup |F|`.
pub const CRITERION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterSet {
    /// `a_chi`, one per coordinate.
    pub lambdas: Vec<C64>,
    /// `m -> {k : Re lambda_k <= m}` for `m = 0, 1, ..` up to the first slice
    /// that holds everything.
    pub slices: BTreeMap<u32, Vec<usize>>,
    /// `m -> max |lambda_k|` over the slice.
    pub radii: BTreeMap<u32, f64>,
    /// Max `|-log(T(t)_kk) / t - lambda_k|` at a small probe time.
    pub reconstruction_error: f64,
}

impl CharacterSet {
    pub fn from_lambdas(lambdas: Vec<C64>) -> Self {
        let top = lambdas.iter().map(|l| l.re).fold(0.0, f64::max).ceil().max(0.0) as u32;
        let mut slices = BTreeMap::new();
        let mut radii = BTreeMap::new();
        for m in 0..=top {
            let idx: Vec<usize> = (0..lambdas.len()).filter(|&k| lambdas[k].re <= m as f64).collect();
            let r = idx.iter().map(|&k| lambdas[k].norm()).fold(0.0, f64::max);
            slices.insert(m, idx);
            radii.insert(m, r);
        }
        Self { lambdas, slices, radii, reconstruction_error: 0.0 }
    }

    /// `Lambda_m`; slices above the stored range are the whole set.
    pub fn slice(&self, m: u32) -> Vec<usize> {
        match self.slices.get(&m) {
            Some(s) => s.clone(),
            None => (0..self.lambdas.len()).filter(|&k| self.lambdas[k].re <= m as f64).collect(),
        }
    }

    pub fn radius(&self, m: u32) -> f64 {
        self.slice(m).iter().map(|&k| self.lambdas[k].norm()).fold(0.0, f64::max)
    }
}

/// Characters `chi_k(T(t)) = e^{-t lambda_k}` of a diagonal model.
pub fn character_set(backend: &dyn Semigroup) -> Result<CharacterSet, SpectralError> {
    let lambdas = backend.diagonal_exponents().ok_or_else(|| SpectralError::NotDiagonal(backend.tag()))?;
    let lambdas: Vec<C64> = lambdas.to_vec();
    let mut cs = CharacterSet::from_lambdas(lambdas);
    // small enough that the principal logarithm recovers lambda
    let t = 1.0 / (1.0 + cs.lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max));
    let diag = backend.operator(t).diagonal();
    cs.reconstruction_error =
        cs.lambdas.iter().zip(diag.iter()).map(|(l, d)| (-d.ln() / t - l).norm()).fold(0.0, f64::max);
    Ok(cs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub u: f64,
    /// `max_k |F(u lambda_k)|`, which is both the spectral radius and the
    /// norm of `F(-uA)` on a diagonal model.
    pub rho: f64,
    pub norm: f64,
    /// Index attaining `rho`.
    pub argmax: usize,
    pub sup: f64,
    /// `sup - rho`.
    pub margin: f64,
    pub satisfied: bool,
    /// Largest `m` with `u R_m < r`, if any.
    pub window_m: Option<u32>,
}

/// `rho(F(-uA)) < sup_{x > 0} |F(x)|` for each `u`.
pub fn criterion_check(
    cs: &CharacterSet,
    mu: &CompactMeasure,
    u_list: &[f64],
) -> Result<Vec<CriterionRow>, SpectralError> {
    check_mass(mu)?;
    let sup = ray_max(mu, DEFAULT_DECAY_FLOOR)?.value;
    let r = babylem_radius(mu)?.r;
    let rows = u_list
        .iter()
        .map(|&u| {
            let (argmax, rho) = cs
                .lambdas
                .iter()
                .map(|l| mu.laplace(l * u).norm())
                .enumerate()
                .fold((0, 0.0), |best, (k, v)| if v > best.1 { (k, v) } else { best });
            let margin = sup - rho;
            let window_m = cs.radii.iter().rev().find(|(_, &rm)| u * rm < r).map(|(&m, _)| m);
            CriterionRow {
                u,
                rho,
                norm: rho,
                argmax,
                sup,
                margin,
                satisfied: margin > CRITERION_TOL * sup.max(1.0),
                window_m,
            }
        })
        .collect();
    Ok(rows)
}
