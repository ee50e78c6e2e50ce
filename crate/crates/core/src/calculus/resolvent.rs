use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{exp_integral, CalcError};
use crate::linalg::{spec_radius, Operator, SpecRadiusError};
use crate::quadrature::GaussLegendre;
use crate::semigroups::Semigroup;

/// Length of the quadrature window for backends without exact structure;
/// the tail beyond it is summed as a geometric series in `e^{lambda H} T(H)`.
const WINDOW: f64 = 1.0;
const PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolventMethod {
    Diagonal,
    Cells,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventValue {
    pub operator: Operator,
    pub method: ResolventMethod,
    pub quadrature_budget: f64,
}

/// `R(lambda) = -\int_0^inf e^{lambda t} T(t) dt`, which equals
/// `(A + lambda)^{-1}` whenever the integral converges.
pub fn resolvent(backend: &dyn Semigroup, lambda: C64) -> Result<ResolventValue, CalcError> {
    if let Some(ls) = backend.diagonal_exponents() {
        if let Some(l) = ls.iter().find(|l| (lambda - **l).re >= 0.0) {
            return Err(CalcError::DivergentIntegral {
                lambda,
                reason: format!("Re(lambda - lambda_k) >= 0 for lambda_k = {l}"),
            });
        }
        let d = ls.mapv(|l| (lambda - l).inv());
        return Ok(ResolventValue {
            operator: Operator::Diagonal(d),
            method: ResolventMethod::Diagonal,
            quadrature_budget: 0.0,
        });
    }

    if let Some(h) = backend.flags().nilpotent_horizon {
        if let Some(cells) = backend.constant_cells(0.0, h) {
            let mut acc = backend.operator(0.0).zeros_like();
            for c in cells {
                acc = acc.add_scaled(-exp_integral(lambda, c.lo, c.hi), &backend.operator(c.time));
            }
            return Ok(ResolventValue { operator: acc, method: ResolventMethod::Cells, quadrature_budget: 0.0 });
        }
    }

    let rule = GaussLegendre::new(32);
    let fine = windowed(backend, &rule, lambda, PANELS);
    let coarse = windowed(backend, &rule, lambda, PANELS / 2);
    let step = backend.operator(WINDOW).scale((lambda * WINDOW).exp());
    let rho = match spec_radius(&step) {
        Ok(r) => r.value,
        Err(SpecRadiusError::Inconsistent { power, gelfand }) => power.max(gelfand),
    };
    if rho >= 1.0 - 1e-9 {
        return Err(CalcError::DivergentIntegral {
            lambda,
            reason: format!("spectral radius of e^(lambda H) T(H) is {rho}"),
        });
    }
    let tail = step
        .identity_like()
        .sub(&step)
        .inverse()
        .map_err(|_| CalcError::DivergentIntegral { lambda, reason: "I - e^(lambda H) T(H) is singular".into() })?;
    let budget = fine.sub(&coarse).fro_norm() * tail.norm_upper_bound();
    let operator = tail.compose(&fine).scale(C64::new(-1.0, 0.0));
    Ok(ResolventValue { operator, method: ResolventMethod::Quadrature, quadrature_budget: budget })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventCheckRow {
    pub lambda: C64,
    pub nu: C64,
    pub method: ResolventMethod,
    /// Max entry of `R(lambda) - R(nu) - (nu - lambda) R(lambda) R(nu)`,
    /// relative to `max(1, max entry of R(lambda) - R(nu))`.
    pub identity_residual: f64,
    /// Max entry of `(A + lambda) R(lambda) - I`, when a generator exists.
    pub generator_residual: Option<f64>,
    pub quadrature_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventCheckReport {
    pub backend: String,
    pub tol: f64,
    pub rows: Vec<ResolventCheckRow>,
    pub max_identity_residual: f64,
    pub max_generator_residual: Option<f64>,
    pub passed: bool,
}

/// Resolvent identity on each pair, plus the generator identity where the
/// backend exposes `A`.
pub fn resolvent_check(
    backend: &dyn Semigroup,
    pairs: &[(C64, C64)],
    tol: f64,
) -> Result<ResolventCheckReport, CalcError> {
    let generator = backend.generator();
    let mut rows = Vec::with_capacity(pairs.len());
    for &(lambda, nu) in pairs {
        let rl = resolvent(backend, lambda)?;
        let rn = resolvent(backend, nu)?;
        let lhs = rl.operator.sub(&rn.operator);
        let rhs = rl.operator.compose(&rn.operator).scale(nu - lambda);
        let identity_residual = lhs.sub(&rhs).max_abs() / lhs.max_abs().max(1.0);
        let generator_residual = generator.as_ref().map(|a| {
            let shifted = a.add_scaled(lambda, &a.identity_like());
            shifted.compose(&rl.operator).sub(&a.identity_like()).max_abs()
        });
        rows.push(ResolventCheckRow {
            lambda,
            nu,
            method: rl.method,
            identity_residual,
            generator_residual,
            quadrature_budget: rl.quadrature_budget.max(rn.quadrature_budget),
        });
    }
    let max_identity_residual = rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max);
    let max_generator_residual = rows.iter().filter_map(|r| r.generator_residual).reduce(f64::max);
    let passed = max_identity_residual <= tol && max_generator_residual.is_none_or(|g| g <= tol);
    Ok(ResolventCheckReport {
        backend: backend.tag(),
        tol,
        rows,
        max_identity_residual,
        max_generator_residual,
        passed,
    })
}

fn windowed(backend: &dyn Semigroup, rule: &GaussLegendre, lambda: C64, panels: usize) -> Operator {
    let mut acc = backend.operator(0.0).zeros_like();
    let h = WINDOW / panels as f64;
    for k in 0..panels {
        for (t, w) in rule.on(k as f64 * h, (k + 1) as f64 * h) {
            acc = acc.add_scaled((lambda * t).exp() * w, &backend.operator(t));
        }
    }
    acc
}
