use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use num_complex::Complex64 as C64;

use super::{random_vector, vec_norm, CVector, Operator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000, seed: 0x5eed }
    }
}

/// Result of the Krylov iteration. `value` is always a lower bound for the
/// largest singular value (it is `|M x|` for a unit vector `x`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

pub fn op_norm(m: &Operator) -> NormEstimate {
    op_norm_with(m, &NormOptions::default())
}

/// Spectral norm. Diagonal operators use the closed form `max |d_k|`;
/// everything else runs Lanczos on `M^* M`.
pub fn op_norm_with(m: &Operator, opts: &NormOptions) -> NormEstimate {
    if let Operator::Diagonal(d) = m {
        let value = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        return NormEstimate { value, converged: true, iterations: 0 };
    }
    lanczos(m, opts)
}

/// Largest Krylov basis kept before a restart.
const MAX_BASIS: usize = 400;

/// Lanczos with full reorthogonalization on `M^* M`, restarted from the top
/// Ritz vector when the basis fills up. Ritz values never exceed the largest
/// eigenvalue, so every iterate is a lower bound for `sigma_max^2`.
fn lanczos(m: &Operator, opts: &NormOptions) -> NormEstimate {
    let n = m.dim();
    if n == 0 || m.max_abs() == 0.0 {
        return NormEstimate { value: 0.0, converged: true, iterations: 0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start = random_vector(n, &mut rng);
    let mut best = 0.0f64;
    let mut matvecs = 0;
    let basis_cap = n.min(MAX_BASIS);
    while matvecs < opts.max_iter {
        let ns = vec_norm(&start);
        let mut basis: Vec<CVector> = vec![start.mapv(|z| z / ns)];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut prev_theta = 0.0f64;
        loop {
            let q = basis.last().expect("nonempty basis");
            let mut w = m.apply_adjoint(&m.apply(q));
            matvecs += 1;
            alpha.push(dot(q, &w).re);
            // two passes of Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for b in &basis {
                    let h = dot(b, &w);
                    w.zip_mut_with(b, |x, y| *x -= h * y);
                }
            }
            let b_next = vec_norm(&w);
            let theta = top_eigenvalue(&alpha, &beta);
            best = best.max(theta);
            let s = top_eigenvector(&alpha, &beta, theta);
            let residual = b_next * s.last().copied().unwrap_or(0.0).abs();
            let invariant = b_next <= 1e-14 * theta.max(f64::MIN_POSITIVE) || basis.len() == n;
            // the Ritz value error is of order residual^2 / gap; asking for
            // the plain residual keeps clustered spectra honest too
            let settled = residual <= opts.tol.sqrt() * 1e-3 * theta && (theta - prev_theta).abs() <= opts.tol * theta;
            if invariant || settled {
                return NormEstimate { value: best.sqrt(), converged: true, iterations: matvecs };
            }
            prev_theta = theta;
            if basis.len() >= basis_cap || matvecs >= opts.max_iter {
                // restart from the Ritz vector
                let mut y = CVector::zeros(n);
                for (b, &c) in basis.iter().zip(&s) {
                    y.zip_mut_with(b, |x, v| *x += c * v);
                }
                start = y;
                break;
            }
            beta.push(b_next);
            basis.push(w.mapv(|z| z / b_next));
        }
    }
    NormEstimate { value: best.sqrt(), converged: false, iterations: matvecs }
}

fn dot(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Number of eigenvalues of the symmetric tridiagonal `(alpha, beta)` below `x`.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &a) in alpha.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] };
        d = a - x - b2 / d;
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a symmetric tridiagonal matrix, by bisection.
fn top_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let radius = |i: usize| {
        let l = if i > 0 { beta[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < k { beta[i].abs() } else { 0.0 };
        l + r
    };
    let mut hi = (0..k).map(|i| alpha[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let mut lo = (0..k).map(|i| alpha[i] - radius(i)).fold(f64::INFINITY, f64::min);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(alpha, beta, mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Unit eigenvector for the top eigenvalue `theta`, by one step of inverse
/// iteration with a shift just above `theta`; `T - sigma I` is then negative
/// definite and the tridiagonal solve needs no pivoting.
fn top_eigenvector(alpha: &[f64], beta: &[f64], theta: f64) -> Vec<f64> {
    let k = alpha.len();
    let sigma = theta + 1e-10 * theta.abs().max(1e-300) + 1e-300;
    let mut x = vec![1.0; k];
    for _ in 0..2 {
        // Thomas algorithm on (T - sigma I) y = x
        let mut c = vec![0.0; k];
        let mut d = vec![0.0; k];
        for i in 0..k {
            let sub = if i > 0 { beta[i - 1] } else { 0.0 };
            let diag = alpha[i] - sigma - if i > 0 { sub * c[i - 1] } else { 0.0 };
            let sup = if i + 1 < k { beta[i] } else { 0.0 };
            c[i] = sup / diag;
            d[i] = (x[i] - if i > 0 { sub * d[i - 1] } else { 0.0 }) / diag;
        }
        for i in (0..k.saturating_sub(1)).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        let nrm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = d.iter().map(|v| v / nrm).collect();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use ndarray::{arr1, Array2};

    #[test]
    fn identity_has_unit_norm() {
        let e = op_norm(&Operator::Dense(identity(5)));
        assert!(e.converged);
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_closed_form_and_dense_path_agree() {
        let d = arr1(&[C64::new(3.0, 0.0), C64::new(0.0, -4.0)]);
        assert_eq!(op_norm(&Operator::Diagonal(d.clone())).value, 4.0);
        let dense = op_norm(&Operator::Dense(Array2::from_diag(&d)));
        assert!(dense.converged);
        assert!((dense.value - 4.0).abs() < 1e-10);
    }

    #[test]
    fn zero_operator() {
        let e = op_norm(&Operator::Dense(Array2::zeros((3, 3))));
        assert_eq!(e.value, 0.0);
        assert!(e.converged);
    }
}
