//! Spectral radius by two independent estimates: block power iteration with
//! Rayleigh-Ritz values, and the Gelfand limit `|M^(2^k)|^(2^-k)` computed
//! by normalized repeated squaring.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{norm_fro, random_vector, small_eigenvalues, CMatrix, Operator};

const BLOCK: usize = 4;
const MAX_ITER: usize = 10_000;
const GELFAND_LEVELS: usize = 40;
pub const AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecRadius {
    pub value: f64,
    pub power: f64,
    pub gelfand: f64,
    /// True when the value is read off a triangular/diagonal structure.
    pub exact: bool,
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SpecRadiusError {
    #[error("power iteration ({power}) and Gelfand ({gelfand}) estimates disagree")]
    Inconsistent { power: f64, gelfand: f64 },
}

pub fn spec_radius(m: &Operator) -> Result<SpecRadius, SpecRadiusError> {
    if m.is_triangular() {
        let value = m.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
        return Ok(SpecRadius { value, power: value, gelfand: value, exact: true });
    }
    let dense = m.to_dense();
    let gelfand = gelfand_estimate(&dense);
    let power = block_power(&dense, 0x5eed);
    if (power - gelfand).abs() > AGREEMENT_TOL * power.max(gelfand).max(1.0) {
        return Err(SpecRadiusError::Inconsistent { power, gelfand });
    }
    Ok(SpecRadius { value: power, power, gelfand, exact: false })
}

/// `lim |M^(2^k)|^(2^-k)` with the running scale kept in log form.
pub(crate) fn gelfand_estimate(m: &CMatrix) -> f64 {
    let mut b = m.clone();
    let mut log_scale = 0.0f64;
    let mut weight = 1.0f64;
    let mut last = f64::NAN;
    for _ in 0..=GELFAND_LEVELS {
        let nb = norm_fro(&b);
        if nb == 0.0 {
            return 0.0;
        }
        b.mapv_inplace(|z| z / nb);
        log_scale += weight * nb.ln();
        // estimate after this level: scale * |B|^(weight) with |B| = 1
        let est = log_scale.exp();
        if (est - last).abs() <= 1e-15 * est {
            return est;
        }
        last = est;
        b = b.dot(&b);
        weight *= 0.5;
    }
    last
}

fn orthonormalize(q: &mut CMatrix) {
    let k = q.ncols();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let qi = q.column(i).to_owned();
                let proj: C64 = qi.iter().zip(q.column(j)).map(|(a, b)| a.conj() * b).sum();
                let mut col = q.column_mut(j);
                col.zip_mut_with(&qi, |c, &a| *c -= proj * a);
            }
        }
        let nrm = q.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            q.column_mut(j).mapv_inplace(|z| z / nrm);
        }
    }
}

/// Largest Ritz-value modulus from subspace iteration with `BLOCK` vectors.
pub(crate) fn block_power(m: &CMatrix, seed: u64) -> f64 {
    let n = m.nrows();
    let k = BLOCK.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = Array2::zeros((n, k));
    for j in 0..k {
        q.column_mut(j).assign(&random_vector(n, &mut rng));
    }
    orthonormalize(&mut q);
    let mut history: Vec<f64> = Vec::new();
    for it in 0..MAX_ITER {
        let z = m.dot(&q);
        let h = q.t().mapv(|c| c.conj()).dot(&z);
        let est = small_eigenvalues(&h).iter().map(|l| l.norm()).fold(0.0, f64::max);
        q = z;
        if norm_fro(&q) == 0.0 {
            return 0.0;
        }
        orthonormalize(&mut q);
        history.push(est);
        if it >= 8 {
            let w = &history[history.len() - 4..];
            let spread =
                w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - w.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            if spread <= 1e-13 * est.max(1e-300) {
                return est;
            }
        }
    }
    *history.last().unwrap_or(&0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr1;

    #[test]
    fn nilpotent_shift_matrix_is_zero() {
        let mut m = Array2::<C64>::zeros((6, 6));
        for i in 1..6 {
            m[[i, i - 1]] = C64::new(1.0, 0.0);
        }
        let r = spec_radius(&Operator::Dense(m.clone())).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(gelfand_estimate(&m), 0.0);
    }

    #[test]
    fn diagonal_max_modulus() {
        let d = arr1(&[C64::new(0.5, 0.0), C64::new(0.0, -2.0), C64::new(1.0, 1.0)]);
        let r = spec_radius(&Operator::Diagonal(d)).unwrap();
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn rotation_pair_is_found_by_block_iteration() {
        let c = |x: f64| C64::new(x, 0.0);
        let mut m = Array2::<C64>::zeros((3, 3));
        m[[0, 1]] = c(-2.0);
        m[[1, 0]] = c(2.0);
        m[[2, 2]] = c(1.0);
        m[[2, 0]] = c(0.3);
        let r = spec_radius(&Operator::Dense(m)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }
}
