use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;

use super::{Flags, Semigroup};
use crate::linalg::{expm, op_norm, CMatrix, Operator};

/// `T(t) = exp(t A)` for a square matrix `A`.
#[derive(Debug)]
pub struct MatrixSemigroup {
    a: CMatrix,
    contractive: bool,
    cache: Mutex<HashMap<u64, Arc<CMatrix>>>,
}

impl MatrixSemigroup {
    pub fn new(a: CMatrix) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "generator must be square");
        let contractive = numerical_abscissa(&a) <= 1e-12;
        Self { a, contractive, cache: Mutex::new(HashMap::new()) }
    }

    pub fn exp(&self, t: f64) -> Arc<CMatrix> {
        let key = t.to_bits();
        if let Some(m) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Arc::clone(m);
        }
        let m = Arc::new(expm(&self.a.mapv(|z| z * t)));
        self.cache.lock().expect("cache poisoned").insert(key, Arc::clone(&m));
        m
    }
}

/// Largest eigenvalue of the Hermitian part; `exp(tA)` is a contraction
/// for all `t >= 0` iff it is `<= 0`.
fn numerical_abscissa(a: &CMatrix) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let h = (a + &a.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    // shift to positive semidefinite, then the top eigenvalue is the norm
    let shift = crate::linalg::norm_1(&h);
    let mut p = h;
    for i in 0..n {
        p[[i, i]] += C64::new(shift, 0.0);
    }
    op_norm(&Operator::Dense(p)).value - shift
}

impl Semigroup for MatrixSemigroup {
    fn tag(&self) -> String {
        format!("matrix(n={})", self.a.nrows())
    }

    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn flags(&self) -> Flags {
        Flags { quasinilpotent: false, contractive: self.contractive, nilpotent_horizon: None }
    }

    fn operator(&self, t: f64) -> Operator {
        Operator::Dense((*self.exp(t)).clone())
    }

    fn generator(&self) -> Option<Operator> {
        Some(Operator::Dense(self.a.clone()))
    }
}
