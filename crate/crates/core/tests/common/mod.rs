#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use semigroup_calculus::linalg::{CMatrix, Operator};

pub fn to_na(m: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

/// Largest singular value from a full SVD.
pub fn svd_norm(op: &Operator) -> f64 {
    let m = to_na(&op.to_dense());
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

pub fn max_entry_diff(a: &Operator, b: &Operator) -> f64 {
    let (a, b) = (a.to_dense(), b.to_dense());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense `n x n` matrix with the given diagonal.
pub fn dense_diag(d: &[C64]) -> CMatrix {
    let n = d.len();
    CMatrix::from_shape_fn((n, n), |(i, j)| if i == j { d[i] } else { C64::new(0.0, 0.0) })
}
