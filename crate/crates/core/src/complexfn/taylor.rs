use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{ComplexFnError, Transform};

pub const CONTOUR_NODES: usize = 256;
pub const MAX_ORDER: usize = 12;

/// Taylor coefficients `c_0..c_{count-1}` of `F` at `center` from the
/// trapezoidal rule on the circle `|z - center| = radius`.
pub fn taylor_coefficients(f: &dyn Transform, center: C64, radius: f64, nodes: usize, count: usize) -> Vec<C64> {
    let samples: Vec<(C64, C64)> = (0..nodes)
        .map(|j| {
            let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            (w, f.eval(center + w * radius))
        })
        .collect();
    (0..count)
        .map(|k| {
            let s: C64 = samples.iter().map(|(w, v)| v * w.powi(-(k as i32))).sum();
            s / (nodes as f64 * radius.powi(k as i32))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingOrder {
    pub m: usize,
    /// `F^(m)(alpha) / m!`.
    pub coeff: C64,
    pub coefficients: Vec<C64>,
    pub radius: f64,
}

/// Default contour radius at a ray maximizer.
pub fn default_radius(f: &dyn Transform, alpha: f64) -> f64 {
    (alpha / 4.0).min(1.0 / f.time_scale())
}

/// Smallest `m >= 1` with `|c_m| radius^m > tol`.
pub fn vanishing_order(f: &dyn Transform, alpha: f64, radius: f64, tol: f64) -> Result<VanishingOrder, ComplexFnError> {
    let coefficients = taylor_coefficients(f, C64::new(alpha, 0.0), radius, CONTOUR_NODES, MAX_ORDER + 1);
    for (m, &c) in coefficients.iter().enumerate().skip(1) {
        if c.norm() * radius.powi(m as i32) > tol {
            return Ok(VanishingOrder { m, coeff: c, coefficients, radius });
        }
    }
    Err(ComplexFnError::OrderNotFound { max_order: MAX_ORDER })
}
