use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::{Flags, Semigroup};
use crate::linalg::{CVector, Operator};

/// `T(t) = diag(exp(-t lambda_k))`, a truncation of a diagonal model whose
/// characters are the `lambda_k`.
#[derive(Debug, Clone)]
pub struct DiagonalSemigroup {
    lambdas: CVector,
}

impl DiagonalSemigroup {
    pub fn new(lambdas: Vec<C64>) -> Self {
        Self { lambdas: Array1::from_vec(lambdas) }
    }

    /// `lambda_k = 1, 2, ..., n`.
    pub fn integers(n: usize) -> Self {
        Self::new((1..=n).map(|k| C64::new(k as f64, 0.0)).collect())
    }

    pub fn lambdas(&self) -> &CVector {
        &self.lambdas
    }
}

impl Semigroup for DiagonalSemigroup {
    fn tag(&self) -> String {
        format!("diagonal(n={})", self.lambdas.len())
    }

    fn dim(&self) -> usize {
        self.lambdas.len()
    }

    fn flags(&self) -> Flags {
        Flags { quasinilpotent: false, contractive: self.lambdas.iter().all(|l| l.re >= 0.0), nilpotent_horizon: None }
    }

    fn operator(&self, t: f64) -> Operator {
        Operator::Diagonal(self.lambdas.mapv(|l| (-l * t).exp()))
    }

    fn generator(&self) -> Option<Operator> {
        Some(Operator::Diagonal(self.lambdas.mapv(|l| -l)))
    }

    fn diagonal_exponents(&self) -> Option<CVector> {
        Some(self.lambdas.clone())
    }
}

/// The semigroup `f(x) -> x^t f(x)` on `C_0[0, 1]` sampled at `x_j = j / n`.
/// Norms are sup norms, so they reduce to maxima over the grid.
#[derive(Debug, Clone)]
pub struct MultiplicationC0 {
    n: usize,
    exponents: CVector,
}

impl MultiplicationC0 {
    pub fn new(n: usize) -> Self {
        assert!(n >= 10, "multiplication_c0 needs n >= 10");
        let exponents = (1..=n).map(|j| C64::new(-(j as f64 / n as f64).ln(), 0.0)).collect();
        Self { n, exponents }
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.n).map(move |j| j as f64 / self.n as f64)
    }
}

impl Semigroup for MultiplicationC0 {
    fn tag(&self) -> String {
        format!("multiplication_c0(n={})", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn flags(&self) -> Flags {
        Flags { quasinilpotent: false, contractive: true, nilpotent_horizon: None }
    }

    fn operator(&self, t: f64) -> Operator {
        Operator::Diagonal(self.grid().map(|x| C64::new(x.powf(t), 0.0)).collect())
    }

    fn generator(&self) -> Option<Operator> {
        Some(Operator::Diagonal(self.exponents.mapv(|l| -l)))
    }

    fn diagonal_exponents(&self) -> Option<CVector> {
        Some(self.exponents.clone())
    }
}
