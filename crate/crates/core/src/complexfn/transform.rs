use num_complex::Complex64 as C64;

use crate::measures::{CompactDistribution, CompactMeasure};

/// An entire function given as a Laplace transform, with the decay
/// information needed to truncate searches along the positive ray.
pub trait Transform: Send + Sync {
    fn eval(&self, z: C64) -> C64;

    /// Upper bound for `sup_{y >= x} |F(y)|` on the real axis, `x >= 0`.
    fn tail_bound(&self, x: f64) -> f64;

    /// Characteristic time (right end of the support); `1 / time_scale`
    /// is the natural length scale in the `z` plane.
    fn time_scale(&self) -> f64;

    /// `F(conj z) = conj F(z)`.
    fn is_real(&self) -> bool;

    fn eval_real(&self, x: f64) -> C64 {
        self.eval(C64::new(x, 0.0))
    }
}

impl Transform for CompactMeasure {
    fn eval(&self, z: C64) -> C64 {
        self.laplace(z)
    }

    fn tail_bound(&self, x: f64) -> f64 {
        self.tv_moment(0) * (-x.max(0.0) * self.support_min().min(1e300)).exp()
    }

    fn time_scale(&self) -> f64 {
        self.support_max().max(f64::MIN_POSITIVE)
    }

    fn is_real(&self) -> bool {
        CompactMeasure::is_real(self)
    }
}

impl Transform for CompactDistribution {
    fn eval(&self, z: C64) -> C64 {
        self.laplace(z)
    }

    fn tail_bound(&self, x: f64) -> f64 {
        // y^j e^{-y s} decreases for y >= j / s
        self.components()
            .iter()
            .enumerate()
            .map(|(j, mu)| {
                if mu.is_zero() {
                    return 0.0;
                }
                let s = mu.support_min();
                let y = x.max(j as f64 / s);
                mu.tv_moment(0) * y.powi(j as i32) * (-y * s).exp()
            })
            .sum()
    }

    fn time_scale(&self) -> f64 {
        self.support_max().max(f64::MIN_POSITIVE)
    }

    fn is_real(&self) -> bool {
        CompactDistribution::is_real(self)
    }
}

/// `z -> F(u z)`.
pub struct Scaled<'a> {
    pub inner: &'a dyn Transform,
    pub u: f64,
}

impl Transform for Scaled<'_> {
    fn eval(&self, z: C64) -> C64 {
        self.inner.eval(z * self.u)
    }

    fn tail_bound(&self, x: f64) -> f64 {
        self.inner.tail_bound(x * self.u)
    }

    fn time_scale(&self) -> f64 {
        self.inner.time_scale() * self.u
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }
}
