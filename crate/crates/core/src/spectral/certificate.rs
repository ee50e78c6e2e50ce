use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{criterion_check, CharacterSet, SpectralError};
use crate::complexfn::geometry::{distance_to_polygon, winding_number};
use crate::complexfn::{ray_max, separation_curve, CurveOptions, DEFAULT_DECAY_FLOOR};
use crate::measures::CompactMeasure;

const ARC_POINTS: usize = 256;
const GAMMA_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaCheck {
    pub index: usize,
    pub lambda: C64,
    /// `|F(u alpha_k)| - |F(u lambda)|`.
    pub modulus_margin: f64,
    pub winding: i32,
    pub distance_to_curve: f64,
    pub in_slice: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub u: f64,
    pub m: u32,
    pub alpha_k: f64,
    /// `|F(u alpha_k)|`.
    pub level: f64,
    #[serde(rename = "R_m")]
    pub r_m: f64,
    pub r: f64,
    pub radius: f64,
    pub vertices: Vec<C64>,
    /// `min |F(u z)| - level` over samples of `Gamma_k0`.
    pub gamma_min_excess: f64,
    pub lambdas: Vec<LambdaCheck>,
    /// Indices outside `Lambda_m` with `Re lambda > m` that the curve encloses.
    pub flagged: Vec<usize>,
    pub passed: bool,
}

/// Builds `Gamma_k` for `z -> F(u z)` with semicircle beyond `R_m` and
/// certifies that it separates `Lambda_m` from the level set of `|F(u .)|`.
pub fn separation_certificate(
    cs: &CharacterSet,
    mu: &CompactMeasure,
    u: f64,
    m: u32,
) -> Result<Certificate, SpectralError> {
    let fail = |point: C64, reason: String| SpectralError::CertificateFailed { point, reason };
    let crit = criterion_check(cs, mu, &[u])?.remove(0);
    if !crit.satisfied {
        return Err(fail(cs.lambdas[crit.argmax], format!("criterion fails: rho {} vs sup {}", crit.rho, crit.sup)));
    }
    let r_m = cs.radius(m);
    let ray = ray_max(mu, DEFAULT_DECAY_FLOOR)?;
    let sc = separation_curve(mu, u, r_m, &ray, &CurveOptions::default())?;
    if sc.radius <= r_m {
        return Err(fail(sc.v_k, format!("semicircle radius {} is not beyond R_m = {r_m}", sc.radius)));
    }
    let level = ray.value;
    let f = |z: C64| mu.laplace(z * u).norm();

    let mut gamma_min_excess = f64::INFINITY;
    for w in sc.gamma_k0_vertices.windows(2) {
        for j in 0..GAMMA_SAMPLES {
            let z = w[0] + (w[1] - w[0]) * (j as f64 / GAMMA_SAMPLES as f64);
            gamma_min_excess = gamma_min_excess.min(f(z) - level);
        }
    }
    // the curve starts at the maximizer itself, where the excess is zero
    let tol = 1e-9 * level;
    if gamma_min_excess < -tol {
        return Err(fail(C64::new(sc.alpha_k, 0.0), format!("|F(uz)| drops below the level by {}", -gamma_min_excess)));
    }

    let poly = sc.closed_polygon(ARC_POINTS);
    let slice = cs.slice(m);
    let mut checks = Vec::with_capacity(cs.lambdas.len());
    let mut flagged = Vec::new();
    for (k, &lambda) in cs.lambdas.iter().enumerate() {
        let in_slice = slice.binary_search(&k).is_ok();
        let distance = distance_to_polygon(lambda, &poly);
        let winding = winding_number(lambda, &poly);
        let modulus_margin = level - f(lambda);
        if distance <= 1e-12 * (1.0 + lambda.norm()) {
            return Err(fail(lambda, "lies on the curve".into()));
        }
        if in_slice {
            if modulus_margin <= 0.0 {
                return Err(fail(lambda, format!("|F(u lambda)| exceeds the level by {}", -modulus_margin)));
            }
            if winding != 1 {
                return Err(fail(lambda, format!("winding number {winding}")));
            }
        } else if lambda.re > m as f64 && winding != 0 {
            flagged.push(k);
        }
        checks.push(LambdaCheck { index: k, lambda, modulus_margin, winding, distance_to_curve: distance, in_slice });
    }
    Ok(Certificate {
        u,
        m,
        alpha_k: sc.alpha_k,
        level,
        r_m,
        r: sc.baby.r,
        radius: sc.radius,
        vertices: poly,
        gamma_min_excess,
        lambdas: checks,
        flagged,
        passed: true,
    })
}
