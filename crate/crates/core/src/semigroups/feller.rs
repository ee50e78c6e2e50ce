//! Sampling harness for the equivalent norm `|x|_1 = sup_{t >= 0} |T(t) x|`
//! that turns a quasinilpotent semigroup into a semigroup of contractions.
//!
//! The supremum is taken over a finite probe grid, so the report can
//! falsify the contraction property but not prove it.

use std::collections::BTreeMap;

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Semigroup;
use crate::linalg::{op_norm, random_vector, vec_norm, CVector, Operator};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FellerError {
    #[error("backend {0} is not flagged quasinilpotent")]
    NotQuasinilpotent(String),
    #[error("no probe times given")]
    NoProbeTimes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FellerOptions {
    /// Every `basis_stride`-th coordinate vector is a test vector.
    pub basis_stride: usize,
    pub random_vectors: usize,
    pub seed: u64,
}

impl Default for FellerOptions {
    fn default() -> Self {
        Self { basis_stride: 32, random_vectors: 8, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantCheck {
    pub tag: String,
    /// Largest sampled `|R x|_1 / |x|_1`.
    pub norm1_estimate: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormReport {
    pub norm1_samples: BTreeMap<usize, f64>,
    /// `1 - max |T(s) x|_1 / |x|_1` over probe times `s` and test vectors.
    pub contraction_margin: f64,
    pub worst_time: f64,
    pub commutant_bound_checks: Vec<CommutantCheck>,
}

impl RenormReport {
    /// Largest `|R|_1 - |R|` over the commutant probes.
    pub fn commutant_excess(&self) -> f64 {
        self.commutant_bound_checks.iter().map(|c| c.norm1_estimate - c.norm).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `n` equispaced probe times `delta, 2 delta, ..., n delta`.
pub fn equispaced_times(n: usize, delta: f64) -> Vec<f64> {
    (1..=n).map(|j| j as f64 * delta).collect()
}

/// `T(1)`, `T(1/2)^2` and `\int_0^1 T(t) dt`, all in the commutant.
pub fn standard_probes(backend: &dyn Semigroup) -> Vec<(String, Operator)> {
    let half = backend.operator(0.5);
    vec![
        ("T(1)".to_string(), backend.operator(1.0)),
        ("T(1/2)^2".to_string(), half.compose(&half)),
        ("int_0^1 T(t) dt".to_string(), time_integral(backend, 0.0, 1.0)),
    ]
}

/// `\int_a^b T(t) dt`: exact on piecewise-constant models, otherwise
/// composite 32-point Gauss-Legendre on 8 panels.
fn time_integral(backend: &dyn Semigroup, a: f64, b: f64) -> Operator {
    let mut acc = backend.operator(0.0).zeros_like();
    if let Some(cells) = backend.constant_cells(a, b) {
        for c in cells {
            acc = acc.add_scaled(C64::new(c.hi - c.lo, 0.0), &backend.operator(c.time));
        }
        return acc;
    }
    let rule = GaussLegendre::new(32);
    let panels = 8;
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        for (t, w) in rule.on(a + p as f64 * h, a + (p + 1) as f64 * h) {
            acc = acc.add_scaled(C64::new(w, 0.0), &backend.operator(t));
        }
    }
    acc
}

struct Norm1 {
    ops: Vec<Operator>,
}

impl Norm1 {
    fn eval(&self, x: &CVector) -> f64 {
        self.ops.iter().map(|op| vec_norm(&op.apply(x))).fold(vec_norm(x), f64::max)
    }
}

pub fn feller_renorm(
    backend: &dyn Semigroup,
    probe_times: &[f64],
    probe_operators: &[(String, Operator)],
    opts: &FellerOptions,
) -> Result<RenormReport, FellerError> {
    if !backend.flags().quasinilpotent {
        return Err(FellerError::NotQuasinilpotent(backend.tag()));
    }
    if probe_times.is_empty() {
        return Err(FellerError::NoProbeTimes);
    }
    let n = backend.dim();
    let norm1 = Norm1 { ops: probe_times.iter().map(|&t| backend.operator(t)).collect() };

    let mut vectors: Vec<(usize, CVector)> = Vec::new();
    for (slot, i) in (0..n).step_by(opts.basis_stride.max(1)).enumerate() {
        let mut e = Array1::zeros(n);
        e[i] = C64::new(1.0, 0.0);
        vectors.push((slot, e));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let base = vectors.len();
    for k in 0..opts.random_vectors {
        vectors.push((base + k, random_vector(n, &mut rng)));
    }
    let samples: Vec<f64> = vectors.par_iter().map(|(_, x)| norm1.eval(x)).collect();

    let worst: Vec<(f64, f64)> = norm1
        .ops
        .par_iter()
        .zip(probe_times)
        .map(|(ts, &s)| {
            let ratio =
                vectors.iter().zip(&samples).map(|((_, x), &nx)| norm1.eval(&ts.apply(x)) / nx).fold(0.0, f64::max);
            (ratio, s)
        })
        .collect();
    let (max_ratio, worst_time) = worst.into_iter().fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });

    let commutant_bound_checks = probe_operators
        .par_iter()
        .map(|(tag, r)| {
            let norm1_estimate =
                vectors.iter().zip(&samples).map(|((_, x), &nx)| norm1.eval(&r.apply(x)) / nx).fold(0.0, f64::max);
            CommutantCheck { tag: tag.clone(), norm1_estimate, norm: op_norm(r).value }
        })
        .collect();

    Ok(RenormReport {
        norm1_samples: vectors.iter().map(|(i, _)| *i).zip(samples).collect(),
        contraction_margin: 1.0 - max_ratio,
        worst_time,
        commutant_bound_checks,
    })
}
