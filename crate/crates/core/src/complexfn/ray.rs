use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::taylor::taylor_coefficients;
use super::{ComplexFnError, Transform};

pub const DEFAULT_DECAY_FLOOR: f64 = 1e-12;
const GRID: usize = 4096;
const CANDIDATES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayMaximum {
    pub alpha: f64,
    /// `|F(alpha)|`, which equals `sign * F(alpha)` for real transforms.
    pub value: f64,
    pub sign_flipped: bool,
    /// Right end of the searched window.
    pub window: f64,
}

impl RayMaximum {
    /// `+1` or `-1`, so that `sign() * F(alpha) = value` for real `F`.
    pub fn sign(&self) -> f64 {
        if self.sign_flipped {
            -1.0
        } else {
            1.0
        }
    }
}

/// Maximizer of `|F|` on `[0, inf)`.
pub fn ray_max(f: &dyn Transform, decay_floor: f64) -> Result<RayMaximum, ComplexFnError> {
    let ts = f.time_scale();
    let scale = if ts > 1e-12 { 1.0 / ts } else { 1.0 };
    let mut window = 8.0 * scale;
    let (xs, vals) = loop {
        let n = GRID.max((window / scale * 64.0) as usize);
        let xs: Vec<f64> = (0..=n).map(|i| window * i as f64 / n as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| f.eval_real(x).norm()).collect();
        let gmax = vals.iter().copied().fold(0.0, f64::max);
        let tail = f.tail_bound(window);
        if gmax < decay_floor && tail < decay_floor {
            return Err(ComplexFnError::AllZero);
        }
        if tail < decay_floor * gmax || window > 1e6 * scale {
            break (xs, vals);
        }
        window *= 2.0;
    };

    // local maxima of the samples, best first
    let mut peaks: Vec<usize> =
        (1..xs.len() - 1).filter(|&i| vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]).collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    peaks.truncate(CANDIDATES);
    if peaks.is_empty() {
        let i = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
        peaks.push(i.clamp(1, xs.len() - 2));
    }
    let (alpha, value) = peaks
        .iter()
        .map(|&i| refine(f, xs[i - 1], xs[i + 1]))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });

    let v = f.eval_real(alpha);
    let sign_flipped = f.is_real() && v.re < 0.0;
    Ok(RayMaximum { alpha, value, sign_flipped, window })
}

/// Golden-section search for the maximum of `|F|` on `[a, b]`, then Newton
/// on `d/dx |F|^2 / 2 = Re(conj(F) F')`.
fn refine(f: &dyn Transform, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = |x: f64| f.eval_real(x).norm();
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if (b - a) <= 1e-13 * (1.0 + b.abs()) {
            break;
        }
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + phi * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - phi * (b - a);
            g1 = g(x1);
        }
    }
    let (lo, hi) = (a - 10.0 * (b - a) - 1e-6, b + 10.0 * (b - a) + 1e-6);
    let mut x = 0.5 * (a + b);
    let radius = (0.1 / f.time_scale()).min(0.5 * x.max(1e-300));
    for _ in 0..6 {
        let c = taylor_coefficients(f, C64::new(x, 0.0), radius, 64, 3);
        let h = (c[0].conj() * c[1]).re;
        let dh = c[1].norm_sqr() + (c[0].conj() * c[2] * 2.0).re;
        if dh >= 0.0 {
            break;
        }
        let next = x - h / dh;
        // values near a flat maximum only differ by rounding
        if !(lo..=hi).contains(&next) || g(next) < g(x) * (1.0 - 1e-14) {
            break;
        }
        let done = (next - x).abs() <= 1e-15 * x.abs();
        x = next;
        if done {
            break;
        }
    }
    (x, g(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::standard::*;

    #[test]
    fn two_point_maximum_is_at_ln2() {
        let r = ray_max(&two_point(), DEFAULT_DECAY_FLOOR).unwrap();
        assert!((r.alpha - 2f64.ln()).abs() < 1e-9, "{}", r.alpha);
        assert!((r.value - 0.25).abs() < 1e-15);
        assert!(!r.sign_flipped);
    }

    #[test]
    fn negated_measure_flips_sign() {
        let m = -two_point();
        let r = ray_max(&m, DEFAULT_DECAY_FLOOR).unwrap();
        assert!(r.sign_flipped);
        assert!((r.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_measure_is_rejected() {
        let z = crate::measures::CompactMeasure::zero();
        assert_eq!(ray_max(&z, DEFAULT_DECAY_FLOOR), Err(ComplexFnError::AllZero));
    }
}
