use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64 as C64;

use super::{CMatrix, CVector};

/// A linear operator on `C^n`, kept in the cheapest representation that is
/// closed under the operations applied to it.
///
/// `LowerToeplitz(c)` is the matrix `M[i][j] = c[i - j]` for `i >= j`, zero
/// above the diagonal. Such matrices commute and form the truncated power
/// series algebra `C[z]/(z^n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(CMatrix),
    Diagonal(CVector),
    LowerToeplitz(CVector),
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn toeplitz_product(a: &CVector, b: &CVector) -> CVector {
    let n = a.len();
    let mut out = Array1::zeros(n);
    for (i, &ai) in a.iter().enumerate() {
        if ai == ZERO {
            continue;
        }
        for (j, &bj) in b.iter().take(n - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Dense(m) => m.nrows(),
            Operator::Diagonal(d) | Operator::LowerToeplitz(d) => d.len(),
        }
    }

    pub fn identity_like(&self) -> Operator {
        let n = self.dim();
        match self {
            Operator::Dense(_) => Operator::Dense(super::identity(n)),
            Operator::Diagonal(_) => Operator::Diagonal(Array1::from_elem(n, C64::new(1.0, 0.0))),
            Operator::LowerToeplitz(_) => {
                let mut c = Array1::zeros(n);
                if n > 0 {
                    c[0] = C64::new(1.0, 0.0);
                }
                Operator::LowerToeplitz(c)
            }
        }
    }

    pub fn zeros_like(&self) -> Operator {
        let n = self.dim();
        match self {
            Operator::Dense(_) => Operator::Dense(Array2::zeros((n, n))),
            Operator::Diagonal(_) => Operator::Diagonal(Array1::zeros(n)),
            Operator::LowerToeplitz(_) => Operator::LowerToeplitz(Array1::zeros(n)),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Diagonal(d) => Array2::from_diag(d),
            Operator::LowerToeplitz(c) => {
                let n = c.len();
                Array2::from_shape_fn((n, n), |(i, j)| if i >= j { c[i - j] } else { ZERO })
            }
        }
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        match self {
            Operator::Dense(m) => m.dot(x),
            Operator::Diagonal(d) => d * x,
            Operator::LowerToeplitz(c) => {
                let n = c.len();
                let mut y = Array1::zeros(n);
                for (k, &ck) in c.iter().enumerate() {
                    if ck == ZERO {
                        continue;
                    }
                    Zip::from(y.slice_mut(ndarray::s![k..]))
                        .and(x.slice(ndarray::s![..n - k]))
                        .for_each(|yi, &xi| *yi += ck * xi);
                }
                y
            }
        }
    }

    pub fn apply_adjoint(&self, x: &CVector) -> CVector {
        match self {
            Operator::Dense(m) => m.t().mapv(|z| z.conj()).dot(x),
            Operator::Diagonal(d) => d.mapv(|z| z.conj()) * x,
            Operator::LowerToeplitz(c) => {
                let n = c.len();
                let mut y = Array1::zeros(n);
                for (k, &ck) in c.iter().enumerate() {
                    if ck == ZERO {
                        continue;
                    }
                    let ck = ck.conj();
                    Zip::from(y.slice_mut(ndarray::s![..n - k]))
                        .and(x.slice(ndarray::s![k..]))
                        .for_each(|yi, &xi| *yi += ck * xi);
                }
                y
            }
        }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Operator) -> Operator {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => Operator::Diagonal(a * b),
            (Operator::LowerToeplitz(a), Operator::LowerToeplitz(b)) => Operator::LowerToeplitz(toeplitz_product(a, b)),
            (Operator::Diagonal(d), _) => {
                let mut m = other.to_dense();
                for (mut row, &di) in m.rows_mut().into_iter().zip(d) {
                    row.mapv_inplace(|z| z * di);
                }
                Operator::Dense(m)
            }
            (_, Operator::Diagonal(d)) => {
                let mut m = self.to_dense();
                for (mut col, &dj) in m.columns_mut().into_iter().zip(d) {
                    col.mapv_inplace(|z| z * dj);
                }
                Operator::Dense(m)
            }
            _ => Operator::Dense(self.to_dense().dot(&other.to_dense())),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: C64, other: &Operator) -> Operator {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        match (self, other) {
            (Operator::Diagonal(a), Operator::Diagonal(b)) => Operator::Diagonal(a + &b.mapv(|z| z * s)),
            (Operator::LowerToeplitz(a), Operator::LowerToeplitz(b)) => Operator::LowerToeplitz(a + &b.mapv(|z| z * s)),
            _ => Operator::Dense(self.to_dense() + &other.to_dense().mapv(|z| z * s)),
        }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        self.add_scaled(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add_scaled(C64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, s: C64) -> Operator {
        match self {
            Operator::Dense(m) => Operator::Dense(m.mapv(|z| z * s)),
            Operator::Diagonal(d) => Operator::Diagonal(d.mapv(|z| z * s)),
            Operator::LowerToeplitz(c) => Operator::LowerToeplitz(c.mapv(|z| z * s)),
        }
    }

    /// Frobenius norm (an upper bound for the spectral norm).
    pub fn fro_norm(&self) -> f64 {
        match self {
            Operator::Dense(m) => super::norm_fro(m),
            Operator::Diagonal(d) => d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            Operator::LowerToeplitz(c) => {
                let n = c.len();
                c.iter().enumerate().map(|(k, z)| (n - k) as f64 * z.norm_sqr()).sum::<f64>().sqrt()
            }
        }
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_1(&self) -> f64 {
        match self {
            Operator::Dense(m) => super::norm_1(m),
            Operator::Diagonal(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
            // column 0 carries every coefficient
            Operator::LowerToeplitz(c) => c.iter().map(|z| z.norm()).sum(),
        }
    }

    /// Induced infinity-norm (max row sum).
    pub fn norm_inf(&self) -> f64 {
        match self {
            Operator::Dense(m) => {
                m.rows().into_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
            }
            Operator::Diagonal(_) | Operator::LowerToeplitz(_) => self.norm_1(),
        }
    }

    /// `sqrt(|M|_1 |M|_inf)`, an upper bound for the spectral norm.
    pub fn norm_upper_bound(&self) -> f64 {
        (self.norm_1() * self.norm_inf()).sqrt().min(self.fro_norm())
    }

    pub fn inverse(&self) -> Result<Operator, super::LuError> {
        match self {
            Operator::Dense(m) => Ok(Operator::Dense(super::Lu::new(m)?.inverse())),
            Operator::Diagonal(d) => {
                if d.iter().any(|z| *z == ZERO) {
                    return Err(super::LuError::Singular);
                }
                Ok(Operator::Diagonal(d.mapv(|z| z.inv())))
            }
            Operator::LowerToeplitz(c) => {
                let n = c.len();
                if n == 0 {
                    return Ok(self.clone());
                }
                if c[0] == ZERO {
                    return Err(super::LuError::Singular);
                }
                // reciprocal power series
                let inv0 = c[0].inv();
                let mut b: Vec<C64> = vec![ZERO; n];
                b[0] = inv0;
                let nz: Vec<usize> = (1..n).filter(|&j| c[j] != ZERO).collect();
                for k in 1..n {
                    let mut s = ZERO;
                    for &j in nz.iter().take_while(|&&j| j <= k) {
                        s += c[j] * b[k - j];
                    }
                    b[k] = -inv0 * s;
                }
                Ok(Operator::LowerToeplitz(Array1::from_vec(b)))
            }
        }
    }

    /// 1-norm condition number, computed through the explicit inverse.
    pub fn condition_1(&self) -> Result<(Operator, f64), super::LuError> {
        let inv = self.inverse()?;
        let cond = self.norm_1() * inv.norm_1();
        if !cond.is_finite() {
            return Err(super::LuError::Singular);
        }
        Ok((inv, cond))
    }

    /// `self^k` for `k >= 0`.
    pub fn powi(&self, k: usize) -> Operator {
        let mut out = self.identity_like();
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Largest entry modulus of the dense form, without materializing it.
    pub fn max_abs(&self) -> f64 {
        match self {
            Operator::Dense(m) => super::max_abs(m),
            Operator::Diagonal(d) | Operator::LowerToeplitz(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    /// Diagonal entries of the matrix.
    pub fn diagonal(&self) -> CVector {
        match self {
            Operator::Dense(m) => m.diag().to_owned(),
            Operator::Diagonal(d) => d.clone(),
            Operator::LowerToeplitz(c) => Array1::from_elem(c.len(), c.first().copied().unwrap_or(ZERO)),
        }
    }

    /// True when the operator is (lower or upper) triangular, so its
    /// eigenvalues are the diagonal entries.
    pub fn is_triangular(&self) -> bool {
        match self {
            Operator::Diagonal(_) | Operator::LowerToeplitz(_) => true,
            Operator::Dense(m) => {
                let n = m.nrows();
                let lower = (0..n).all(|i| (i + 1..n).all(|j| m[[i, j]] == ZERO));
                let upper = (0..n).all(|i| (0..i).all(|j| m[[i, j]] == ZERO));
                lower || upper
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, random_vector};
    use rand::SeedableRng;

    fn rand_toeplitz(n: usize, seed: u64) -> Operator {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Operator::LowerToeplitz(random_vector(n, &mut rng))
    }

    #[test]
    fn toeplitz_products_match_dense() {
        let a = rand_toeplitz(9, 1);
        let b = rand_toeplitz(9, 2);
        let ab = a.compose(&b);
        assert!(matches!(ab, Operator::LowerToeplitz(_)));
        let dense = a.to_dense().dot(&b.to_dense());
        assert!(max_abs(&(ab.to_dense() - dense)) < 1e-13);
    }

    #[test]
    fn matvec_and_adjoint_match_dense() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x = random_vector(9, &mut rng);
        let a = rand_toeplitz(9, 3);
        let d = a.to_dense();
        let y = a.apply(&x);
        let ya = a.apply_adjoint(&x);
        assert!((&y - &d.dot(&x)).iter().all(|z| z.norm() < 1e-13));
        let dh = d.t().mapv(|z| z.conj());
        assert!((&ya - &dh.dot(&x)).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn structured_inverses_match_dense() {
        let a = rand_toeplitz(7, 11);
        let inv = a.inverse().unwrap();
        let prod = a.to_dense().dot(&inv.to_dense());
        assert!(max_abs(&(prod - crate::linalg::identity(7))) < 1e-10);
        let d = Operator::Diagonal(Array1::from_vec(vec![C64::new(2.0, 1.0), C64::new(-0.5, 0.0)]));
        let di = d.inverse().unwrap();
        assert!(max_abs(&(d.compose(&di).to_dense() - crate::linalg::identity(2))) < 1e-15);
        let z = Operator::LowerToeplitz(Array1::from_vec(vec![ZERO, C64::new(1.0, 0.0)]));
        assert!(z.inverse().is_err());
    }

    #[test]
    fn norm_bounds_bracket_the_spectral_norm() {
        let a = rand_toeplitz(12, 4);
        let est = crate::linalg::op_norm(&a);
        assert!(est.value <= a.norm_upper_bound() + 1e-12);
    }

    #[test]
    fn mixed_kinds_fall_back_to_dense() {
        let a = rand_toeplitz(4, 7);
        let d = Operator::Diagonal(Array1::from_vec(vec![C64::new(2.0, 0.0); 4]));
        let ad = a.compose(&d);
        assert!(matches!(ad, Operator::Dense(_)));
        assert!(max_abs(&(ad.to_dense() - a.to_dense().mapv(|z| z * 2.0))) < 1e-15);
        let da = d.compose(&a);
        assert!(max_abs(&(da.to_dense() - a.to_dense().mapv(|z| z * 2.0))) < 1e-15);
        assert!(a.is_triangular());
    }
}
