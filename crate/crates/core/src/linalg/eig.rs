use num_complex::Complex64 as C64;

use super::CMatrix;

/// All eigenvalues of a small dense matrix (intended for k <= 8, such as
/// Rayleigh-Ritz projections): characteristic polynomial by
/// Faddeev-LeVerrier, roots by Durand-Kerner.
pub fn small_eigenvalues(m: &CMatrix) -> Vec<C64> {
    let k = m.nrows();
    if k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![m[[0, 0]]];
    }
    // p(x) = x^k + c[k-1] x^(k-1) + ... + c[0]
    let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
    coeffs[k] = C64::new(1.0, 0.0);
    let mut mk = CMatrix::zeros((k, k));
    for j in 1..=k {
        // M_j = A M_{j-1} + c_{k-j+1} I ; c_{k-j} = -tr(A M_j)/j
        let mut next = m.dot(&mk);
        for i in 0..k {
            next[[i, i]] += coeffs[k - j + 1];
        }
        mk = next;
        let am = m.dot(&mk);
        let tr: C64 = (0..k).map(|i| am[[i, i]]).sum();
        coeffs[k - j] = -tr / j as f64;
    }
    polish_roots(&coeffs)
}

fn eval(c: &[C64], x: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ci| acc * x + ci)
}

fn polish_roots(c: &[C64]) -> Vec<C64> {
    let k = c.len() - 1;
    let bound = 1.0 + c[..k].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..k).map(|i| seed.powu(i as u32) * bound * 0.5).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..k {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..k {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = C64::new(1e-300, 0.0);
            }
            let step = eval(c, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm() / roots[i].norm().max(1e-300));
        }
        if delta < 1e-15 {
            break;
        }
    }
    // Newton polish on p itself
    let dc: Vec<C64> = c.iter().enumerate().skip(1).map(|(i, &ci)| ci * i as f64).collect();
    for r in &mut roots {
        for _ in 0..3 {
            let d = eval(&dc, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= eval(c, *r) / d;
        }
    }
    roots
}
