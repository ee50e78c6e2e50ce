use ndarray::Array1;
use num_complex::Complex64 as C64;

use super::{Cell, Flags, Semigroup};
use crate::linalg::Operator;

/// Right translation on `L^2(0, 1)` discretized on `n` uniform cells.
///
/// `T(t)` shifts by `k = round(t n)` cells and fills with zeros. Off-grid
/// times are rounded; [`NilpotentShift::rounding`] reports by how much.
#[derive(Debug, Clone)]
pub struct NilpotentShift {
    n: usize,
}

impl NilpotentShift {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "nilpotent_shift needs n >= 2");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of cells shifted at time `t`.
    pub fn steps(&self, t: f64) -> usize {
        (t * self.n as f64 + 0.5).floor().max(0.0) as usize
    }

    /// `snap(t) - t`.
    pub fn rounding(&self, t: f64) -> f64 {
        self.snap(t) - t
    }

    pub fn grid_time(&self, k: usize) -> f64 {
        k as f64 / self.n as f64
    }
}

impl Semigroup for NilpotentShift {
    fn tag(&self) -> String {
        format!("nilpotent_shift(n={})", self.n)
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn flags(&self) -> Flags {
        Flags { quasinilpotent: true, contractive: true, nilpotent_horizon: Some(1.0) }
    }

    fn operator(&self, t: f64) -> Operator {
        let mut c = Array1::zeros(self.n);
        let k = self.steps(t);
        if k < self.n {
            c[k] = C64::new(1.0, 0.0);
        }
        Operator::LowerToeplitz(c)
    }

    fn snap(&self, t: f64) -> f64 {
        self.grid_time(self.steps(t))
    }

    fn constant_cells(&self, a: f64, b: f64) -> Option<Vec<Cell>> {
        let nf = self.n as f64;
        let mut cells = Vec::new();
        if b <= a {
            return Some(cells);
        }
        let first = self.steps(a);
        let last = self.steps(b).min(self.n - 1);
        for k in first..=last {
            let lo = a.max((k as f64 - 0.5) / nf);
            let hi = b.min((k as f64 + 0.5) / nf);
            if hi > lo {
                cells.push(Cell { lo, hi, time: self.grid_time(k) });
            }
        }
        Some(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn horizon_kills_everything() {
        let s = NilpotentShift::new(16);
        assert_eq!(max_abs(&s.materialize(1.0)), 0.0);
        assert_eq!(max_abs(&s.materialize(3.7)), 0.0);
    }

    #[test]
    fn grid_semigroup_law_is_exact() {
        let s = NilpotentShift::new(32);
        for (i, j) in [(1, 2), (5, 9), (16, 15), (20, 20)] {
            let (a, b) = (s.grid_time(i), s.grid_time(j));
            let prod = s.operator(a).compose(&s.operator(b));
            assert_eq!(prod, s.operator(a + b));
        }
    }

    #[test]
    fn partial_isometry() {
        let s = NilpotentShift::new(10);
        let m = s.materialize(0.3);
        let g = m.t().mapv(|z| z.conj()).dot(&m);
        for i in 0..10 {
            for j in 0..10 {
                let want = if i == j && i < 7 { 1.0 } else { 0.0 };
                assert_eq!(g[[i, j]], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn off_grid_times_round() {
        let s = NilpotentShift::new(10);
        assert_eq!(s.steps(0.26), 3);
        assert!((s.rounding(0.26) - 0.04).abs() < 1e-15);
        assert_eq!(s.steps(0.0), 0);
    }

    #[test]
    fn cells_tile_the_interval() {
        let s = NilpotentShift::new(8);
        let cells = s.constant_cells(0.0, 2.0).unwrap();
        assert_eq!(cells.first().unwrap().lo, 0.0);
        // last nonzero cell ends where T becomes zero
        assert!((cells.last().unwrap().hi - 7.5 / 8.0).abs() < 1e-15);
        for w in cells.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
    }
}
