use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ep_calc, exp_integral, func_calc, resolvent, CalcError};
use crate::linalg::{op_norm, Operator};
use crate::measures::{CompactDistribution, CompactMeasure};
use crate::quadrature::GaussLegendre;
use crate::semigroups::{Semigroup, TimeScaled};

const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma24Options {
    pub u: f64,
    /// Refuse backends that are not quasinilpotent contractions and grid
    /// points with `Re lambda < 0`.
    pub check_hypotheses: bool,
    pub tol: f64,
}

impl Default for Lemma24Options {
    fn default() -> Self {
        Self { u: 1.0, check_hypotheses: true, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma24Row {
    pub lambda: C64,
    /// Power-iteration estimate of `|(F(-A) - F(lambda)) R(lambda)|`.
    pub lhs: f64,
    pub lhs_converged: bool,
    /// `sqrt(|M|_1 |M|_inf)`, a certified upper bound.
    pub lhs_upper: f64,
    pub bound: f64,
    /// `bound - lhs`, using `lhs_upper` when the norm iteration did not converge.
    pub margin: f64,
    /// Max entry of `F(-A) R - (F(lambda) R + K(lambda))`.
    pub identity_residual: f64,
    pub quadrature_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma24Report {
    pub backend: String,
    pub measure: String,
    pub u: f64,
    pub bound: f64,
    pub tol: f64,
    pub rows: Vec<Lemma24Row>,
    pub min_margin: f64,
    pub max_identity_residual: f64,
    pub passed: bool,
}

impl Lemma24Report {
    /// Turns the report into an error for the first failing row.
    pub fn ensure(&self, identity_tol: f64) -> Result<(), CalcError> {
        for r in &self.rows {
            if r.margin < -(self.tol + r.quadrature_budget) {
                return Err(CalcError::BoundViolation { lambda: r.lambda, margin: r.margin });
            }
            if r.identity_residual > identity_tol {
                return Err(CalcError::IdentityMismatch {
                    lambda: r.lambda,
                    residual: r.identity_residual,
                    tol: identity_tol,
                });
            }
        }
        Ok(())
    }
}

/// Checks `|(F(-uA) - F(lambda)) R_u(lambda)| <= \int t d|mu|` where `R_u` is
/// the resolvent of `uA`, and evaluates the two sides of
/// `F(-uA) R = F(lambda) R + \int [\int_0^t e^{lambda (v - t)} T(uv) dv] d mu(t)`
/// independently.
pub fn lemma_24_check(
    backend: &dyn Semigroup,
    mu: &CompactMeasure,
    lambdas: &[C64],
    opts: &Lemma24Options,
) -> Result<Lemma24Report, CalcError> {
    let flags = backend.flags();
    if opts.check_hypotheses {
        if !flags.quasinilpotent {
            return Err(CalcError::NotQuasinilpotent(backend.tag()));
        }
        if !flags.contractive {
            return Err(CalcError::Hypothesis(format!("{} is not a contraction semigroup", backend.tag())));
        }
        if let Some(l) = lambdas.iter().find(|l| l.re < 0.0) {
            return Err(CalcError::Hypothesis(format!("Re lambda < 0 at {l}")));
        }
    }
    let scaled = TimeScaled::new(backend, opts.u);
    let f_op = func_calc(&scaled, mu, 1.0);
    let bound = mu.tv_moment(1);
    let f_upper = f_op.operator.norm_upper_bound();

    let rows: Result<Vec<Lemma24Row>, CalcError> = lambdas
        .par_iter()
        .map(|&lambda| {
            let r = resolvent(&scaled, lambda)?;
            let f_lambda = mu.laplace(lambda);
            let product = f_op.operator.compose(&r.operator);
            let fr = r.operator.scale(f_lambda);
            let diff = product.sub(&fr);
            let est = op_norm(&diff);
            let lhs_upper = diff.norm_upper_bound();
            let effective = if est.converged { est.value } else { lhs_upper };

            let (k, k_budget) = inner_kernel(&scaled, mu, lambda);
            let residual = product.sub(&fr.add(&k)).max_abs();
            let budget = f_op.quadrature_budget * r.operator.norm_upper_bound()
                + r.quadrature_budget * (f_upper + f_lambda.norm())
                + k_budget;
            Ok(Lemma24Row {
                lambda,
                lhs: est.value,
                lhs_converged: est.converged,
                lhs_upper,
                bound,
                margin: bound - effective,
                identity_residual: residual,
                quadrature_budget: budget,
            })
        })
        .collect();
    let rows = rows?;
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let max_identity_residual = rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r.margin >= -(opts.tol + r.quadrature_budget));
    Ok(Lemma24Report {
        backend: backend.tag(),
        measure: f_op.provenance.measure.clone(),
        u: opts.u,
        bound,
        tol: opts.tol,
        rows,
        min_margin,
        max_identity_residual,
        passed,
    })
}

/// `\int [\int_0^t e^{lambda (v - t)} T(v) dv] d mu(t)` and a crude error
/// estimate for the parts that needed quadrature.
fn inner_kernel(backend: &dyn Semigroup, mu: &CompactMeasure, lambda: C64) -> (Operator, f64) {
    let mut acc = backend.operator(0.0).zeros_like();
    let mut budget = 0.0;
    for a in mu.atoms() {
        let (op, b) = inner_at(backend, lambda, a.t);
        acc = acc.add_scaled(a.weight, &op);
        budget += b * a.weight.norm();
    }
    let rule = GaussLegendre::new(32);
    for p in mu.pieces() {
        let panels = 4;
        let h = (p.b - p.a) / panels as f64;
        for k in 0..panels {
            for (t, w) in rule.on(p.a + k as f64 * h, p.a + (k + 1) as f64 * h) {
                let (op, b) = inner_at(backend, lambda, t);
                let weight = p.eval(t) * w;
                acc = acc.add_scaled(weight, &op);
                budget += b * weight.norm();
            }
        }
    }
    (acc, budget)
}

/// `\int_0^t e^{lambda (v - t)} T(v) dv`.
fn inner_at(backend: &dyn Semigroup, lambda: C64, t: f64) -> (Operator, f64) {
    if let Some(ls) = backend.diagonal_exponents() {
        let d = ls.mapv(|l| (-l * t).exp() * exp_integral(lambda - l, -t, 0.0));
        return (Operator::Diagonal(d), 0.0);
    }
    if let Some(cells) = backend.constant_cells(0.0, t) {
        let mut acc = backend.operator(0.0).zeros_like();
        for c in cells {
            acc = acc.add_scaled(exp_integral(lambda, c.lo - t, c.hi - t), &backend.operator(c.time));
        }
        return (acc, 0.0);
    }
    let rule = GaussLegendre::new(32);
    let integrate = |panels: usize| {
        let mut acc = backend.operator(0.0).zeros_like();
        let h = t / panels as f64;
        for k in 0..panels {
            for (v, w) in rule.on(k as f64 * h, (k + 1) as f64 * h) {
                acc = acc.add_scaled((lambda * (v - t)).exp() * w, &backend.operator(v));
            }
        }
        acc
    };
    let fine = integrate(16);
    let coarse = integrate(8);
    let budget = fine.sub(&coarse).fro_norm();
    (fine, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma27Options {
    pub u: f64,
    pub tol: f64,
}

impl Default for Lemma27Options {
    fn default() -> Self {
        Self { u: 1.0, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma27Row {
    pub lambda: C64,
    pub lhs: f64,
    pub lhs_converged: bool,
    pub lhs_upper: f64,
    pub bound: f64,
    pub margin: f64,
    /// Relative max-entry residual of the rearranged expression for `B`.
    pub identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma27Report {
    pub backend: String,
    pub order: usize,
    pub u: f64,
    pub condition: f64,
    pub tol: f64,
    pub rows: Vec<Lemma27Row>,
    pub min_margin: f64,
    pub max_identity_residual: f64,
    pub passed: bool,
}

impl Lemma27Report {
    pub fn ensure(&self, identity_tol: f64) -> Result<(), CalcError> {
        for r in &self.rows {
            if r.margin < -self.tol {
                return Err(CalcError::BoundViolation { lambda: r.lambda, margin: r.margin });
            }
            if r.identity_residual > identity_tol {
                return Err(CalcError::IdentityMismatch {
                    lambda: r.lambda,
                    residual: r.identity_residual,
                    tol: identity_tol,
                });
            }
        }
        Ok(())
    }
}

fn signed_power(a: &Operator, a_inv: &Operator, e: i64) -> Operator {
    if e >= 0 {
        a.powi(e as usize)
    } else {
        a_inv.powi((-e) as usize)
    }
}

/// `B = (F(-A) - F(lambda)) A^{-p} (A + lambda)^{-1}` against
/// `sum c_m |A^{m-p}| + sum d_m sum_{k<m} |lambda|^k |A^{m-1-k-p}|`, with `A`
/// replaced by `uA`.
pub fn lemma_27_check(
    backend: &dyn Semigroup,
    phi: &CompactDistribution,
    lambdas: &[C64],
    opts: &Lemma27Options,
) -> Result<Lemma27Report, CalcError> {
    let generator = backend.generator().ok_or_else(|| CalcError::NoGenerator(backend.tag()))?;
    if let Some(l) = lambdas.iter().find(|l| l.re < 0.0) {
        return Err(CalcError::Hypothesis(format!("Re lambda < 0 at {l}")));
    }
    let u = opts.u;
    let a = generator.scale(C64::new(u, 0.0));
    let (a_inv, condition) = a.condition_1().map_err(|_| CalcError::SingularGenerator { condition: f64::INFINITY })?;
    if condition > CONDITION_LIMIT {
        return Err(CalcError::SingularGenerator { condition });
    }
    let p = phi.order();
    let moments = phi.moments();
    let f_op = ep_calc(backend, phi, u)?.operator;
    let g_ops: Vec<Operator> = phi.components().iter().map(|mu| func_calc(backend, mu, u).operator).collect();
    let a_neg_p = a_inv.powi(p);
    let norms = |e: i64| op_norm(&signed_power(&a, &a_inv, e)).value;
    // |A^e| for every exponent that can appear
    let lo = -(p as i64) - 1;
    let pow_norms: Vec<f64> = (lo..=p as i64).map(norms).collect();
    let pow_norm = |e: i64| pow_norms[(e - lo) as usize];

    let rows: Result<Vec<Lemma27Row>, CalcError> = lambdas
        .par_iter()
        .map(|&lambda| {
            let shifted = a.add_scaled(lambda, &a.identity_like());
            let r = shifted.inverse().map_err(|_| CalcError::SingularResolvent(lambda))?;
            let f_lambda = phi.laplace(lambda);
            let b = f_op.sub(&a.identity_like().scale(f_lambda)).compose(&a_neg_p).compose(&r);

            let mut b2 = a.zeros_like();
            let mut bound = 0.0;
            for (m, (mu, g)) in phi.components().iter().zip(&g_ops).enumerate() {
                let (c_m, d_m) = moments[m];
                let e = m as i64 - p as i64;
                bound += c_m * pow_norm(e);
                let g_lambda = mu.laplace(lambda);
                let first = signed_power(&a, &a_inv, e).compose(&g.sub(&g.identity_like().scale(g_lambda))).compose(&r);
                let mut poly_part = a.zeros_like();
                for k in 0..m {
                    bound += d_m * lambda.norm().powi(k as i32) * pow_norm(e - 1 - k as i64);
                    poly_part = poly_part.add_scaled((-lambda).powi(k as i32), &a.powi(m - 1 - k));
                }
                b2 = b2.add(&first).add(&poly_part.compose(&a_neg_p).scale(g_lambda));
            }
            let scale = b.max_abs().max(1.0);
            let residual = b.sub(&b2).max_abs() / scale;
            let est = op_norm(&b);
            let lhs_upper = b.norm_upper_bound();
            let effective = if est.converged { est.value } else { lhs_upper };
            Ok(Lemma27Row {
                lambda,
                lhs: est.value,
                lhs_converged: est.converged,
                lhs_upper,
                bound,
                margin: bound - effective,
                identity_residual: residual,
            })
        })
        .collect();
    let rows = rows?;
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let max_identity_residual = rows.iter().map(|r| r.identity_residual).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r.margin >= -opts.tol);
    Ok(Lemma27Report {
        backend: backend.tag(),
        order: p,
        u,
        condition,
        tol: opts.tol,
        rows,
        min_margin,
        max_identity_residual,
        passed,
    })
}
