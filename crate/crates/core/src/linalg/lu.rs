use ndarray::Array2;
use num_complex::Complex64 as C64;
use thiserror::Error;

use super::{identity, CMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LuError {
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
}

/// LU factorization with partial pivoting, `P A = L U` packed in one array.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Result<Self, LuError> {
        let (n, m) = a.dim();
        if n != m {
            return Err(LuError::NotSquare(n, m));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[[i, k]].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot == 0.0 {
                return Err(LuError::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap([k, j], [p, j]);
                }
                perm.swap(k, p);
            }
            let d = lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] / d;
                lu[[i, k]] = f;
                if f != C64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[[k, j]];
                        lu[[i, j]] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        let cols = b.ncols();
        let mut x = Array2::zeros((n, cols));
        for i in 0..n {
            x.row_mut(i).assign(&b.row(self.perm[i]));
        }
        for c in 0..cols {
            for i in 0..n {
                let mut s = x[[i, c]];
                for k in 0..i {
                    s -= self.lu[[i, k]] * x[[k, c]];
                }
                x[[i, c]] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[[i, c]];
                for k in i + 1..n {
                    s -= self.lu[[i, k]] * x[[k, c]];
                }
                x[[i, c]] = s / self.lu[[i, i]];
            }
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        self.solve(&identity(self.dim()))
    }
}
