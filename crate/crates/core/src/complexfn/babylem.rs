use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{ComplexFnError, Transform};

const CIRCLE_SAMPLES: usize = 2048;
const RADIAL_STEPS: usize = 400;
const RING_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BabyLemma {
    /// Radius with `sup_{|z| <= r} |F| < delta_circle`.
    pub r: f64,
    /// Zero-free circle.
    #[serde(rename = "R")]
    pub big_r: f64,
    /// Certified lower bound for `min_{|z| = R} |F|`.
    pub delta_circle: f64,
    /// Sampled `sup_{|z| <= r} |F|`, inflated by the sampling correction.
    pub disk_sup: f64,
}

impl BabyLemma {
    pub fn margin(&self) -> f64 {
        self.delta_circle - self.disk_sup
    }
}

/// `(min, max)` of `|F|` on a circle, corrected by the largest jump between
/// neighbouring samples so that the bounds hold between samples too.
fn circle_bounds(f: &dyn Transform, radius: f64, samples: usize) -> (f64, f64) {
    let vals: Vec<f64> =
        (0..samples).map(|j| f.eval(C64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64)).norm()).collect();
    let jump = (0..samples).map(|j| (vals[j] - vals[(j + 1) % samples]).abs()).fold(0.0, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(0.0, f64::max);
    (lo - jump, hi + jump)
}

pub fn babylem_radius(f: &dyn Transform) -> Result<BabyLemma, ComplexFnError> {
    let scale = 1.0 / f.time_scale();
    let mut best: Option<(f64, f64)> = None;
    for samples in [CIRCLE_SAMPLES, 4 * CIRCLE_SAMPLES] {
        for j in 0..17 {
            let radius = 0.125 * 2f64.powf(j as f64 / 2.0) * scale;
            let (lo, _) = circle_bounds(f, radius, samples);
            if lo > 0.0 && best.is_none_or(|(_, d)| lo > d) {
                best = Some((radius, lo));
            }
        }
        if best.is_some() {
            break;
        }
    }
    let (big_r, delta_circle) = best.ok_or(ComplexFnError::NoCircleFound)?;
    // sup over a disk is attained on its boundary; ring sups increase with r
    let mut r = 0.0;
    let mut disk_sup = 0.0;
    for i in 1..RADIAL_STEPS {
        let radius = big_r * i as f64 / RADIAL_STEPS as f64;
        let (_, hi) = circle_bounds(f, radius, RING_SAMPLES);
        if hi > 0.5 * delta_circle {
            break;
        }
        r = radius;
        disk_sup = hi;
    }
    if r == 0.0 {
        return Err(ComplexFnError::NoCircleFound);
    }
    Ok(BabyLemma { r, big_r, delta_circle, disk_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::standard::*;

    #[test]
    fn radii_for_standard_measures() {
        for m in [two_point(), four_point(), step_density()] {
            let b = babylem_radius(&m).unwrap();
            assert!(b.r < b.big_r);
            assert!(b.delta_circle > 0.0);
            assert!(b.margin() >= 1e-3, "{b:?}");
        }
    }
}
