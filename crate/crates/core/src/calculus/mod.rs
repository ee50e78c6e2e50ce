//! The calculus `F(-uA) = \int T(u t) d mu(t)`, resolvents as Laplace
//! integrals, the distributional extension `sum_j A^j G_j(-A)`, and numerical
//! checks of the resolvent estimates and lower bounds built on them.

mod ep;
mod func_calc;
mod lemmas;
mod resolvent;
mod sweep;

pub use ep::ep_calc;
pub use func_calc::{func_calc, func_calc_with, measure_tag, FuncCalcOptions, OperatorValue, Provenance};
pub use lemmas::{
    lemma_24_check, lemma_27_check, Lemma24Options, Lemma24Report, Lemma24Row, Lemma27Options, Lemma27Report,
    Lemma27Row,
};
pub use resolvent::{
    resolvent, resolvent_check, ResolventCheckReport, ResolventCheckRow, ResolventMethod, ResolventValue,
};
pub use sweep::{
    empirical_eta, ep_sweep, grid_aligned, rows_to_csv, sweep, symmetrized_sweep, SweepReport, SweepRow,
    SymmetrizedReport, MASS_TOL,
};

pub use crate::linalg::{op_norm, op_norm_with, spec_radius, NormEstimate, NormOptions, SpecRadius};

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::complexfn::ComplexFnError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalcError {
    #[error("measure has mass {0:e}, expected zero")]
    MassNotZero(f64),
    #[error("measure is not real")]
    NotReal,
    #[error("backend {0} is not quasinilpotent")]
    NotQuasinilpotent(String),
    #[error("backend {0} has no bounded generator")]
    NoGenerator(String),
    #[error("Laplace integral for the resolvent at {lambda} diverges: {reason}")]
    DivergentIntegral { lambda: C64, reason: String },
    #[error("generator is singular or ill-conditioned (condition {condition:e})")]
    SingularGenerator { condition: f64 },
    #[error("A + lambda is singular at lambda = {0}")]
    SingularResolvent(C64),
    #[error("bound violated at lambda = {lambda} by {}", -margin)]
    BoundViolation { lambda: C64, margin: f64 },
    #[error("two-path identity residual {residual:e} exceeds {tol:e} at lambda = {lambda}")]
    IdentityMismatch { lambda: C64, residual: f64, tol: f64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    ComplexFn(#[from] ComplexFnError),
}

/// `\int_lo^hi e^{z t} dt`, stable for small `z (hi - lo)`.
pub(crate) fn exp_integral(z: C64, lo: f64, hi: f64) -> C64 {
    let len = hi - lo;
    let w = z * len;
    let phi = if w.norm() < 1e-3 {
        // (e^w - 1) / w
        C64::new(1.0, 0.0) + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    } else {
        (w.exp() - 1.0) / w
    };
    (z * lo).exp() * phi * len
}
