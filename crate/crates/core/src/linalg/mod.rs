//! Dense and structured complex linear algebra used by the calculus.
//!
//! Everything is hand-rolled on top of `ndarray`: the matrices involved are
//! either small and dense or large and structured (diagonal, lower
//! triangular Toeplitz), and the structured cases matter for performance.

mod eig;
mod expm;
mod lu;
mod norm;
mod operator;
mod spectral_radius;

pub use eig::small_eigenvalues;
pub use expm::expm;
pub use lu::{Lu, LuError};
pub use norm::{op_norm, op_norm_with, NormEstimate, NormOptions};
pub use operator::Operator;
pub use spectral_radius::{spec_radius, SpecRadius, SpecRadiusError};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

/// Induced 1-norm (max column sum).
pub fn norm_1(m: &CMatrix) -> f64 {
    m.columns().into_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn norm_fro(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus; used for exactness checks.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_norm(x: &CVector) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Seeded complex Gaussian-ish vector (uniform real and imaginary parts).
pub fn random_vector(n: usize, rng: &mut impl rand::Rng) -> CVector {
    Array1::from_shape_fn(n, |_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `count` points drawn uniformly from the box `re x im`, reproducible from `seed`.
pub fn random_points(seed: u64, count: usize, re: (f64, f64), im: (f64, f64)) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |(lo, hi): (f64, f64)| if hi > lo { rng.gen_range(lo..hi) } else { lo };
    (0..count).map(|_| C64::new(draw(re), draw(im))).collect()
}
