//! Dense polynomials in the global abscissa `t`, stored lowest degree first.

use num_complex::Complex64 as C64;

/// Drops trailing zero coefficients (keeps at least the constant term).
pub fn trim(mut c: Vec<C64>) -> Vec<C64> {
    while c.len() > 1 && c.last().is_some_and(|z| *z == C64::new(0.0, 0.0)) {
        c.pop();
    }
    if c.is_empty() {
        c.push(C64::new(0.0, 0.0));
    }
    c
}

pub fn is_zero(c: &[C64]) -> bool {
    c.iter().all(|z| *z == C64::new(0.0, 0.0))
}

pub fn degree(c: &[C64]) -> usize {
    c.len().saturating_sub(1)
}

pub fn eval(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ci| acc * t + ci)
}

pub fn eval_real(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci)
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default()).collect()
}

pub fn scale(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|&c| c * s).collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn pow(a: &[C64], k: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for _ in 0..k {
        out = mul(&out, a);
    }
    out
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

/// Binomial coefficients C(k, 0..=k) as floats.
fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for j in 1..k {
        row[j] = row[j - 1] * (k - j + 1) as f64 / j as f64;
    }
    row
}

/// Coefficients of `q(s) = p(s + a)`.
pub fn taylor_shift(c: &[C64], a: f64) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); c.len()];
    for (k, &ck) in c.iter().enumerate() {
        let row = binomial_row(k);
        let mut apow = 1.0;
        // (s + a)^k = sum_j C(k, j) s^j a^(k - j)
        for j in (0..=k).rev() {
            out[j] += ck * row[j] * apow;
            apow *= a;
        }
    }
    out
}

/// `\int_a^b t^k p(t) dt`, exact.
pub fn moment_integral(c: &[C64], a: f64, b: f64, k: usize) -> C64 {
    c.iter()
        .enumerate()
        .map(|(i, &ci)| {
            let n = (i + k + 1) as i32;
            ci * ((b.powi(n) - a.powi(n)) / n as f64)
        })
        .sum()
}

pub fn moment_integral_real(c: &[f64], a: f64, b: f64, k: usize) -> f64 {
    c.iter()
        .enumerate()
        .map(|(i, &ci)| {
            let n = (i + k + 1) as i32;
            ci * (b.powi(n) - a.powi(n)) / n as f64
        })
        .sum()
}

/// `\int_0^h s^k e^{-z s} ds` for `k = 0..=deg`.
pub fn exp_moments(z: C64, h: f64, deg: usize) -> Vec<C64> {
    let w = z * h;
    let mut j = vec![C64::new(0.0, 0.0); deg + 1];
    if w.norm() <= (deg as f64).max(2.0) {
        // power series in w, scaled by h^(k+1)
        for (k, jk) in j.iter_mut().enumerate() {
            let mut term = C64::new(1.0, 0.0);
            let mut sum = C64::new(0.0, 0.0);
            for n in 0..200 {
                let contrib = term / (n + k + 1) as f64;
                sum += contrib;
                if n > 4 && contrib.norm() <= 1e-18 * sum.norm() {
                    break;
                }
                term *= -w / (n + 1) as f64;
            }
            *jk = sum * h.powi(k as i32 + 1);
        }
    } else {
        let e = (-w).exp();
        let mut prev = (C64::new(1.0, 0.0) - e) / z;
        j[0] = prev;
        for (k, jk) in j.iter_mut().enumerate().skip(1) {
            let next = (prev * k as f64 - e * h.powi(k as i32)) / z;
            *jk = next;
            prev = next;
        }
    }
    j
}

/// `\int_a^b p(t) e^{-z t} dt`, closed form through a local expansion at `a`.
pub fn laplace_piece(c: &[C64], a: f64, b: f64, z: C64) -> C64 {
    let local = taylor_shift(c, a);
    let moments = exp_moments(z, b - a, degree(&local));
    let sum: C64 = local.iter().zip(&moments).map(|(&q, &m)| q * m).sum();
    (-z * a).exp() * sum
}

/// Real roots of `p` strictly inside `(a, b)` where `p` changes sign.
///
/// Recursive on the derivative: between consecutive critical points the
/// polynomial is monotone, so each sign change is bracketed and bisected.
pub fn sign_change_roots(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let crit = sign_change_roots(&derivative(&c), a, b);
    let mut knots = Vec::with_capacity(crit.len() + 2);
    knots.push(a);
    knots.extend(crit);
    knots.push(b);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (eval_real(&c, lo), eval_real(&c, hi));
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        let sign_lo = flo.signum();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval_real(&c, mid).signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        if r > a && r < b {
            roots.push(r);
        }
    }
    roots
}
