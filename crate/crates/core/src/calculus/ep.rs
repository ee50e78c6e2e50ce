use num_complex::Complex64 as C64;

use super::{func_calc, CalcError, OperatorValue, Provenance};
use crate::measures::CompactDistribution;
use crate::semigroups::Semigroup;

/// `F(-uA) = sum_j (uA)^j G_j(-uA)` for `F = sum_j (-z)^j L mu_j`.
pub fn ep_calc(backend: &dyn Semigroup, phi: &CompactDistribution, u: f64) -> Result<OperatorValue, CalcError> {
    let generator = backend.generator().ok_or_else(|| CalcError::NoGenerator(backend.tag()))?;
    let a = generator.scale(C64::new(u, 0.0));
    let mut power = a.identity_like();
    let mut acc = a.zeros_like();
    let mut budget = 0.0;
    let mut rounding = 0.0f64;
    let mut tags = Vec::new();
    for (j, mu) in phi.components().iter().enumerate() {
        if j > 0 {
            power = power.compose(&a);
        }
        if mu.is_zero() {
            continue;
        }
        let g = func_calc(backend, mu, u);
        budget += g.quadrature_budget * power.norm_upper_bound();
        rounding = rounding.max(g.time_rounding);
        tags.push(format!("A^{j}[{}]", g.provenance.measure));
        acc = acc.add(&power.compose(&g.operator));
    }
    let measure = if tags.is_empty() { "0".into() } else { tags.join(" + ") };
    Ok(OperatorValue {
        operator: acc,
        provenance: Provenance { backend: backend.tag(), measure, u },
        quadrature_budget: budget,
        time_rounding: rounding,
    })
}
