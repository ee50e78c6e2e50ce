//! Finite-dimensional model semigroups `(T(t))_{t>0}`.
//!
//! Every backend hands out `T(t)` as an [`Operator`] in its natural
//! representation. Backends whose `T(t)` is piecewise constant in `t`
//! expose the pieces through [`Semigroup::constant_cells`], which lets the
//! calculus integrate against them exactly.

mod config;
mod diagonal;
mod feller;
mod matrix;
mod rl;
mod shift;

pub use config::{BackendSpec, ComplexJson, ConfigError};
pub use diagonal::{DiagonalSemigroup, MultiplicationC0};
pub use feller::{
    equispaced_times, feller_renorm, standard_probes, CommutantCheck, FellerError, FellerOptions, RenormReport,
};
pub use matrix::MatrixSemigroup;
pub use rl::RiemannLiouville;
pub use shift::NilpotentShift;

use serde::{Deserialize, Serialize};

use crate::linalg::{CMatrix, CVector, Operator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flags {
    pub quasinilpotent: bool,
    pub contractive: bool,
    /// `T(t) = 0` for all `t >= h`.
    pub nilpotent_horizon: Option<f64>,
}

/// Interval `[lo, hi)` of times on which `T(t) = T(time)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub time: f64,
}

pub trait Semigroup: Send + Sync {
    fn tag(&self) -> String;

    fn dim(&self) -> usize;

    fn flags(&self) -> Flags;

    /// `T(t)` for `t >= 0` (`T(0)` is the identity).
    fn operator(&self, t: f64) -> Operator;

    fn materialize(&self, t: f64) -> CMatrix {
        self.operator(t).to_dense()
    }

    fn apply(&self, t: f64, x: &CVector) -> CVector {
        self.operator(t).apply(x)
    }

    /// Bounded generator, for models that have one.
    fn generator(&self) -> Option<Operator> {
        None
    }

    /// The time actually used when `T(t)` is requested.
    fn snap(&self, t: f64) -> f64 {
        t
    }

    /// Pieces of `[a, b]` on which `T` is constant and nonzero, when `T` is
    /// piecewise constant in `t`.
    fn constant_cells(&self, _a: f64, _b: f64) -> Option<Vec<Cell>> {
        None
    }

    /// `lambda_k` with `T(t) = diag(exp(-t lambda_k))`, for diagonal models.
    fn diagonal_exponents(&self) -> Option<CVector> {
        None
    }
}

/// The rescaled semigroup `t -> T(u t)`; its generator is `u A`.
pub struct TimeScaled<'a> {
    pub inner: &'a dyn Semigroup,
    pub u: f64,
}

impl<'a> TimeScaled<'a> {
    pub fn new(inner: &'a dyn Semigroup, u: f64) -> Self {
        assert!(u > 0.0 && u.is_finite(), "time scale must be positive");
        Self { inner, u }
    }
}

impl Semigroup for TimeScaled<'_> {
    fn tag(&self) -> String {
        format!("{}@u={}", self.inner.tag(), self.u)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn flags(&self) -> Flags {
        let f = self.inner.flags();
        Flags { nilpotent_horizon: f.nilpotent_horizon.map(|h| h / self.u), ..f }
    }

    fn operator(&self, t: f64) -> Operator {
        self.inner.operator(self.u * t)
    }

    fn generator(&self) -> Option<Operator> {
        self.inner.generator().map(|g| g.scale(num_complex::Complex64::new(self.u, 0.0)))
    }

    fn snap(&self, t: f64) -> f64 {
        self.inner.snap(self.u * t) / self.u
    }

    fn constant_cells(&self, a: f64, b: f64) -> Option<Vec<Cell>> {
        let u = self.u;
        self.inner
            .constant_cells(u * a, u * b)
            .map(|cells| cells.into_iter().map(|c| Cell { lo: c.lo / u, hi: c.hi / u, time: c.time / u }).collect())
    }

    fn diagonal_exponents(&self) -> Option<CVector> {
        self.inner.diagonal_exponents().map(|l| l.mapv(|z| z * self.u))
    }
}
