use ndarray::Array1;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::CharacterSet;
use crate::linalg::{op_norm, Operator};
use crate::semigroups::Semigroup;

/// Coordinate projections onto `Lambda_m`, stored as 0/1 diagonals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentChain {
    pub m_list: Vec<u32>,
    pub projections: Vec<Vec<u8>>,
    pub covered_indices: Vec<Vec<usize>>,
    pub dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub idempotent: bool,
    pub nested: bool,
    pub exhaustive: bool,
}

impl ChainCheck {
    pub fn all(&self) -> bool {
        self.idempotent && self.nested && self.exhaustive
    }
}

impl IdempotentChain {
    pub fn operator(&self, i: usize) -> Operator {
        Operator::Diagonal(self.projections[i].iter().map(|&b| C64::new(b as f64, 0.0)).collect())
    }

    /// `P^2 = P`, `P_n P_{n+1} = P_n` and coverage, in integer arithmetic.
    pub fn check(&self) -> ChainCheck {
        let idempotent = self.projections.iter().all(|p| p.iter().all(|&b| b * b == b));
        let nested = self.projections.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(&a, &b)| a * b == a));
        let exhaustive = (0..self.dim).all(|k| self.projections.iter().any(|p| p[k] == 1));
        ChainCheck { idempotent, nested, exhaustive }
    }
}

pub fn build_idempotents(cs: &CharacterSet, m_list: &[u32]) -> IdempotentChain {
    let mut m_list = m_list.to_vec();
    m_list.sort_unstable();
    m_list.dedup();
    let dim = cs.lambdas.len();
    let covered_indices: Vec<Vec<usize>> = m_list.iter().map(|&m| cs.slice(m)).collect();
    let projections = covered_indices
        .iter()
        .map(|idx| {
            let mut p = vec![0u8; dim];
            for &k in idx {
                p[k] = 1;
            }
            p
        })
        .collect();
    IdempotentChain { m_list, projections, covered_indices, dim }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub m: u32,
    /// `(t, |P - P T(t)|)`.
    pub gaps: Vec<(f64, f64)>,
    /// Max deviation from `max_k |1 - e^{-t lambda_k}|` over the covered set.
    pub closed_form_error: f64,
    /// Linear extrapolation of the two smallest samples to `t = 0`.
    pub limit_estimate: f64,
    /// `max |lambda_k|` over the covered set, the norm of the generator of
    /// `P T(t)`.
    pub generator_bound: f64,
}

/// `|P_n - P_n T(t)|` on `t_grid` for every projection of the chain.
pub fn bounded_generator_check(backend: &dyn Semigroup, chain: &IdempotentChain, t_grid: &[f64]) -> Vec<GeneratorRow> {
    let lambdas: Array1<C64> = backend.diagonal_exponents().unwrap_or_else(|| Array1::zeros(0));
    let mut ts = t_grid.to_vec();
    ts.sort_by(f64::total_cmp);
    (0..chain.m_list.len())
        .map(|i| {
            let p = chain.operator(i);
            let gaps: Vec<(f64, f64)> =
                ts.iter().map(|&t| (t, op_norm(&p.sub(&p.compose(&backend.operator(t)))).value)).collect();
            let covered = &chain.covered_indices[i];
            let closed_form_error = if lambdas.is_empty() {
                f64::NAN
            } else {
                gaps.iter()
                    .map(|&(t, g)| {
                        let want = covered.iter().map(|&k| (1.0 - (-lambdas[k] * t).exp()).norm()).fold(0.0, f64::max);
                        (g - want).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let limit_estimate = match gaps.as_slice() {
                [(t0, g0), (t1, g1), ..] => g0 - t0 * (g1 - g0) / (t1 - t0),
                [(_, g0)] => *g0,
                [] => f64::NAN,
            };
            let generator_bound =
                covered.iter().map(|&k| lambdas.get(k).map_or(f64::NAN, |l| l.norm())).fold(0.0, f64::max);
            GeneratorRow { m: chain.m_list[i], gaps, closed_form_error, limit_estimate, generator_bound }
        })
        .collect()
}
