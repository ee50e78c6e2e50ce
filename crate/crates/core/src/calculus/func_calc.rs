use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::linalg::Operator;
use crate::measures::{poly, CompactMeasure};
use crate::quadrature::GaussLegendre;
use crate::semigroups::Semigroup;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuncCalcOptions {
    /// Gauss-Legendre order used per density piece when `T` has no exact
    /// cell structure.
    pub gl_order: usize,
}

impl Default for FuncCalcOptions {
    fn default() -> Self {
        Self { gl_order: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub backend: String,
    pub measure: String,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorValue {
    pub operator: Operator,
    pub provenance: Provenance,
    /// Frobenius-norm estimate of the quadrature error (zero when every
    /// contribution was integrated in closed form).
    pub quadrature_budget: f64,
    /// Largest `|snap(u t) - u t|` over the atoms.
    pub time_rounding: f64,
}

/// Short human-readable description of a measure.
pub fn measure_tag(mu: &CompactMeasure) -> String {
    let atoms: Vec<String> = mu
        .atoms()
        .iter()
        .map(|a| {
            if a.weight.im == 0.0 {
                format!("{}@{}", a.weight.re, a.t)
            } else {
                format!("({}{:+}i)@{}", a.weight.re, a.weight.im, a.t)
            }
        })
        .collect();
    let pieces: Vec<String> = mu.pieces().iter().map(|p| format!("p{}[{},{}]", p.coeffs.len() - 1, p.a, p.b)).collect();
    let mut parts = atoms;
    parts.extend(pieces);
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

pub fn func_calc(backend: &dyn Semigroup, mu: &CompactMeasure, u: f64) -> OperatorValue {
    func_calc_with(backend, mu, u, &FuncCalcOptions::default())
}

/// `F(-uA) = \int T(u t) d mu(t)`.
///
/// Atoms are exact. Density pieces are integrated in closed form when the
/// backend is diagonal or piecewise constant in time, and by a fixed
/// Gauss-Legendre rule otherwise.
pub fn func_calc_with(backend: &dyn Semigroup, mu: &CompactMeasure, u: f64, opts: &FuncCalcOptions) -> OperatorValue {
    assert!(u > 0.0 && u.is_finite(), "u must be positive");
    let provenance = Provenance { backend: backend.tag(), measure: measure_tag(mu), u };
    if let Some(lambdas) = backend.diagonal_exponents() {
        let d = lambdas.mapv(|l| mu.laplace(l * u));
        return OperatorValue {
            operator: Operator::Diagonal(d),
            provenance,
            quadrature_budget: 0.0,
            time_rounding: 0.0,
        };
    }

    let mut acc = backend.operator(0.0).zeros_like();
    let mut rounding = 0.0f64;
    for a in mu.atoms() {
        let t = u * a.t;
        rounding = rounding.max((backend.snap(t) - t).abs());
        acc = acc.add_scaled(a.weight, &backend.operator(t));
    }

    let mut budget = 0.0;
    let rule = GaussLegendre::new(opts.gl_order);
    for p in mu.pieces() {
        if let Some(cells) = backend.constant_cells(u * p.a, u * p.b) {
            for c in cells {
                let w = poly::moment_integral(&p.coeffs, c.lo / u, c.hi / u, 0);
                acc = acc.add_scaled(w, &backend.operator(c.time));
            }
            continue;
        }
        let coarse = gauss_piece(backend, &rule, p.a, p.b, &p.coeffs, u, 1);
        let fine = gauss_piece(backend, &rule, p.a, p.b, &p.coeffs, u, 2);
        budget += fine.sub(&coarse).fro_norm();
        acc = acc.add(&coarse);
    }
    OperatorValue { operator: acc, provenance, quadrature_budget: budget, time_rounding: rounding }
}

fn gauss_piece(
    backend: &dyn Semigroup,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    coeffs: &[C64],
    u: f64,
    panels: usize,
) -> Operator {
    let mut acc = backend.operator(0.0).zeros_like();
    let h = (b - a) / panels as f64;
    for k in 0..panels {
        for (t, w) in rule.on(a + k as f64 * h, a + (k + 1) as f64 * h) {
            let weight = poly::eval(coeffs, C64::new(t, 0.0)) * w;
            acc = acc.add_scaled(weight, &backend.operator(u * t));
        }
    }
    acc
}
