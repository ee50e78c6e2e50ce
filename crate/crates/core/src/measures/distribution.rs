use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::json::DistributionJson;
use super::{CompactMeasure, MeasureError};

/// Distribution of order `p` with compact support: `phi = sum_j mu_j^{(j)}`
/// acting through the transform `sum_j (-z)^j L mu_j(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionJson", into = "DistributionJson")]
pub struct CompactDistribution {
    components: Vec<CompactMeasure>,
}

impl CompactDistribution {
    pub fn new(components: Vec<CompactMeasure>) -> Result<Self, MeasureError> {
        if components.is_empty() {
            return Err(MeasureError::NoComponents);
        }
        Ok(Self { components })
    }

    /// Like [`new`](Self::new) but checks the declared order.
    pub fn with_order(order: usize, components: Vec<CompactMeasure>) -> Result<Self, MeasureError> {
        if components.len() != order + 1 {
            return Err(MeasureError::ComponentCount { order, got: components.len() });
        }
        Self::new(components)
    }

    pub fn from_measure(mu: CompactMeasure) -> Self {
        Self { components: vec![mu] }
    }

    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[CompactMeasure] {
        &self.components
    }

    pub fn is_real(&self) -> bool {
        self.components.iter().all(CompactMeasure::is_real)
    }

    pub fn support_min(&self) -> f64 {
        self.components.iter().map(CompactMeasure::support_min).fold(f64::INFINITY, f64::min)
    }

    pub fn support_max(&self) -> f64 {
        self.components.iter().map(CompactMeasure::support_max).fold(0.0, f64::max)
    }

    pub fn laplace(&self, z: C64) -> C64 {
        let mut power = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        for mu in &self.components {
            acc += power * mu.laplace(z);
            power *= -z;
        }
        acc
    }

    /// `(c_m, d_m)`: first and zeroth total-variation moments per component.
    pub fn moments(&self) -> Vec<(f64, f64)> {
        self.components.iter().map(|mu| (mu.tv_moment(1), mu.tv_moment(0))).collect()
    }
}
