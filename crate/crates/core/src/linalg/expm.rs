//! Matrix exponential by scaling and squaring with a degree-13 Padé core
//! (Higham's 2005 parameters).

use num_complex::Complex64 as C64;

use super::{identity, norm_1, CMatrix, Lu};

const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return a.clone();
    }
    let norm = norm_1(a);
    if norm == 0.0 {
        return identity(n);
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a.mapv(|z| z / 2f64.powi(s));
    let id = identity(n);
    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = &B13;
    let inner_u = &a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]);
    let u = a.dot(&(a6.dot(&inner_u) + &a6 * c(b[7]) + &a4 * c(b[5]) + &a2 * c(b[3]) + &id * c(b[1])));
    let inner_v = &a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]);
    let v = a6.dot(&inner_v) + &a6 * c(b[6]) + &a4 * c(b[4]) + &a2 * c(b[2]) + &id * c(b[0]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = Lu::new(&q).expect("Pade denominator is nonsingular after scaling").solve(&p);
    for _ in 0..s {
        r = r.dot(&r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use ndarray::Array2;

    #[test]
    fn zero_gives_identity() {
        let z = Array2::<C64>::zeros((4, 4));
        assert_eq!(expm(&z), identity(4));
    }

    #[test]
    fn diagonal_is_entrywise() {
        let d = [c(-1.0), C64::new(0.5, 2.0), c(-30.0)];
        let a = Array2::from_diag(&ndarray::arr1(&d));
        let e = expm(&a);
        for (i, di) in d.iter().enumerate() {
            assert!((e[[i, i]] - di.exp()).norm() < 1e-13 * di.exp().norm().max(1.0));
        }
        let mut off = e.clone();
        for i in 0..3 {
            off[[i, i]] = c(0.0);
        }
        assert!(max_abs(&off) < 1e-15);
    }

    #[test]
    fn nilpotent_jordan_block() {
        // exp of [[0,1],[0,0]] scaled by 7 is [[1,7],[0,1]]
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 1]] = c(7.0);
        let e = expm(&a);
        assert!((e[[0, 1]] - c(7.0)).norm() < 1e-13);
        assert!((e[[0, 0]] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        let t = 2.3f64;
        let mut a = Array2::<C64>::zeros((2, 2));
        a[[0, 1]] = c(-t);
        a[[1, 0]] = c(t);
        let e = expm(&a);
        assert!((e[[0, 0]] - c(t.cos())).norm() < 1e-13);
        assert!((e[[1, 0]] - c(t.sin())).norm() < 1e-13);
    }
}
