use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::{Flags, Semigroup};
use crate::linalg::{CVector, Operator};

/// Riemann-Liouville fractional integration `I^t` on `[0, 1]`, sampled at
/// `x_i = (i + 1) h` with `h = 1 / n`.
///
/// The discrete family is the convolution quadrature generated by the
/// trapezoidal rule: `T(t)` is the lower triangular Toeplitz matrix of
/// `((h / 2) (1 + z) / (1 - z))^t` in the truncated power series algebra.
/// `T(1)` is the trapezoidal cumulative integral (with `f(0) = 0`), the
/// family satisfies `T(s) T(t) = T(s + t)` up to rounding, and the spectral
/// radius of `T(t)` is `(h / 2)^t`.
#[derive(Debug)]
pub struct RiemannLiouville {
    n: usize,
    cache: Mutex<HashMap<u64, Arc<CVector>>>,
}

impl RiemannLiouville {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "riemann_liouville needs n >= 2");
        Self { n, cache: Mutex::new(HashMap::new()) }
    }

    pub fn step(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Coefficients of `log((1 + z) / (1 - z)) = 2 sum z^(2k+1) / (2k+1)`.
    fn log_symbol(&self) -> Vec<f64> {
        (0..self.n).map(|j| if j % 2 == 1 { 2.0 / j as f64 } else { 0.0 }).collect()
    }

    /// Toeplitz coefficients of `T(t)`.
    pub fn coefficients(&self, t: f64) -> Arc<CVector> {
        let key = t.to_bits();
        if let Some(c) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Arc::clone(c);
        }
        let n = self.n;
        // g = exp(t L): k g_k = t sum_j j L_j g_{k-j}, and j L_j = 2 for odd j
        let mut g = vec![0.0f64; n];
        g[0] = 1.0;
        let mut odd_sum = [0.0f64; 2];
        // odd_sum[p] = sum of g_i over i < k with i % 2 == p
        for k in 1..n {
            odd_sum[(k - 1) % 2] += g[k - 1];
            g[k] = 2.0 * t / k as f64 * odd_sum[(k - 1) % 2];
        }
        let scale = (0.5 * self.step()).powf(t);
        let c = Arc::new(Array1::from_iter(g.into_iter().map(|x| C64::new(x * scale, 0.0))));
        self.cache.lock().expect("cache poisoned").insert(key, Arc::clone(&c));
        c
    }
}

impl Semigroup for RiemannLiouville {
    fn tag(&self) -> String {
        format!("riemann_liouville(n={})", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn flags(&self) -> Flags {
        Flags { quasinilpotent: true, contractive: false, nilpotent_horizon: None }
    }

    fn operator(&self, t: f64) -> Operator {
        Operator::LowerToeplitz((*self.coefficients(t)).clone())
    }

    /// `log(h / 2) I + log((1 + z) / (1 - z))`.
    fn generator(&self) -> Option<Operator> {
        let mut c: CVector = self.log_symbol().into_iter().map(|x| C64::new(x, 0.0)).collect();
        c[0] += C64::new((0.5 * self.step()).ln(), 0.0);
        Some(Operator::LowerToeplitz(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_one_is_trapezoid_cumulative_integral() {
        let rl = RiemannLiouville::new(20);
        let c = rl.coefficients(1.0);
        let h = rl.step();
        assert!((c[0].re - 0.5 * h).abs() < 1e-15);
        for k in 1..20 {
            assert!((c[k].re - h).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn t_two_matches_the_square() {
        let rl = RiemannLiouville::new(64);
        let sq = rl.operator(1.0).compose(&rl.operator(1.0));
        let two = rl.operator(2.0);
        assert!(sq.sub(&two).max_abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_identity() {
        let rl = RiemannLiouville::new(8);
        let op = rl.operator(0.0);
        assert_eq!(op, op.identity_like());
    }

    #[test]
    fn cached_coefficients_are_shared() {
        let rl = RiemannLiouville::new(8);
        let a = rl.coefficients(0.5);
        let b = rl.coefficients(0.5);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
