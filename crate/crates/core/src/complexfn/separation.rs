use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{
    babylem_radius, jordan_curve, BabyLemma, ComplexFnError, CurveOptions, JordanCurve, RayMaximum, Scaled, Transform,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCurve {
    pub u: f64,
    /// Maximizer of `x -> |F(u x)|`.
    pub alpha_k: f64,
    /// Axis endpoint, `Re v_k = 0`.
    pub v_k: C64,
    /// Path `alpha_k -> a1 -> ... -> a2 -> v_k`.
    pub gamma_k0_vertices: Vec<C64>,
    pub radius: f64,
    pub r_m: f64,
    pub baby: BabyLemma,
    pub curve: JordanCurve,
}

impl SeparationCurve {
    /// `Gamma_k0`, the left semicircle of radius `|v_k|` from `v_k` to
    /// `conj v_k`, and `conj Gamma_k0` back to `alpha_k`; counter-clockwise.
    pub fn closed_polygon(&self, arc_points: usize) -> Vec<C64> {
        let mut poly = self.gamma_k0_vertices.clone();
        for k in 1..arc_points {
            let theta = PI / 2.0 + PI * k as f64 / arc_points as f64;
            poly.push(C64::from_polar(self.radius, theta));
        }
        poly.push(self.v_k.conj());
        let n = self.gamma_k0_vertices.len();
        poly.extend(self.gamma_k0_vertices[1..n - 1].iter().rev().map(|z| z.conj()));
        poly
    }
}

/// Curve for `z -> F(u z)` reaching the imaginary axis above `R_m`.
pub fn separation_curve(
    f: &dyn Transform,
    u: f64,
    r_m: f64,
    ray: &RayMaximum,
    opts: &CurveOptions,
) -> Result<SeparationCurve, ComplexFnError> {
    let baby = babylem_radius(f)?;
    if u * r_m >= baby.r {
        return Err(ComplexFnError::WindowViolation { window: u * r_m, r: baby.r });
    }
    let scaled = Scaled { inner: f, u };
    let scaled_ray = RayMaximum { alpha: ray.alpha / u, window: ray.window / u, ..*ray };
    let opts = CurveOptions { min_axis_radius: opts.min_axis_radius.max(r_m), ..opts.clone() };
    let curve = jordan_curve(&scaled, &scaled_ray, &opts)?;
    let mut gamma = vec![C64::new(curve.alpha, 0.0)];
    gamma.extend_from_slice(&curve.gamma1_vertices);
    gamma.push(curve.a3);
    Ok(SeparationCurve {
        u,
        alpha_k: curve.alpha,
        v_k: curve.a3,
        gamma_k0_vertices: gamma,
        radius: curve.a3.norm(),
        r_m,
        baby,
        curve,
    })
}
