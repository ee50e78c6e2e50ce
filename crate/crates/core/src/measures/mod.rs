//! Compactly supported measures on the open half-line and order-`p`
//! distributions built from them.
//!
//! A [`CompactMeasure`] is a finite sum of point masses plus a piecewise
//! polynomial density. That class is closed under convolution and every
//! quantity the rest of the crate needs (mass, total-variation moments,
//! Laplace transform) has a closed form on it.

mod distribution;
mod json;
pub mod poly;

pub use distribution::CompactDistribution;
pub use json::{AtomJson, DistributionJson, MeasureJson, PieceJson};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::adaptive_simpson;

/// Atom locations (and piece breakpoints) closer than this are merged.
pub const LOCATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("location {0} is not inside (0, inf)")]
    InvalidLocation(f64),
    #[error("empty or reversed interval [{a}, {b}]")]
    EmptyInterval { a: f64, b: f64 },
    #[error("non-finite weight or coefficient")]
    NonFinite,
    #[error("distribution of order {order} needs {} components, got {got}", order + 1)]
    ComponentCount { order: usize, got: usize },
    #[error("distribution needs at least one component")]
    NoComponents,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub t: f64,
    pub weight: C64,
}

/// Density `sum_k coeffs[k] t^k` on `[a, b]` (global powers of `t`).
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub coeffs: Vec<C64>,
}

impl Piece {
    pub fn eval(&self, t: f64) -> C64 {
        poly::eval(&self.coeffs, C64::new(t, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct CompactMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
}

fn check_location(t: f64) -> Result<(), MeasureError> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(MeasureError::InvalidLocation(t))
    }
}

impl CompactMeasure {
    /// Validates and canonicalizes: atoms sorted and merged, pieces refined
    /// so interiors are disjoint, zero atoms and zero pieces dropped.
    pub fn new(atoms: Vec<Atom>, pieces: Vec<Piece>) -> Result<Self, MeasureError> {
        for a in &atoms {
            check_location(a.t)?;
            if !(a.weight.re.is_finite() && a.weight.im.is_finite()) {
                return Err(MeasureError::NonFinite);
            }
        }
        for p in &pieces {
            check_location(p.a)?;
            check_location(p.b)?;
            if p.b <= p.a {
                return Err(MeasureError::EmptyInterval { a: p.a, b: p.b });
            }
            if p.coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(MeasureError::NonFinite);
            }
        }
        Ok(Self::canonical(atoms, pieces))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit point mass at `t`.
    pub fn dirac(t: f64) -> Result<Self, MeasureError> {
        Self::new(vec![Atom { t, weight: C64::new(1.0, 0.0) }], Vec::new())
    }

    /// Real point masses given as `(location, weight)` pairs.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self, MeasureError> {
        Self::new(atoms.iter().map(|&(t, w)| Atom { t, weight: C64::new(w, 0.0) }).collect(), Vec::new())
    }

    /// Lebesgue measure restricted to `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self, MeasureError> {
        Self::density(a, b, vec![C64::new(1.0, 0.0)])
    }

    pub fn density(a: f64, b: f64, coeffs: Vec<C64>) -> Result<Self, MeasureError> {
        Self::new(Vec::new(), vec![Piece { a, b, coeffs }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    /// `(support_min, support_max)`, or `None` for the zero measure.
    pub fn support(&self) -> Option<(f64, f64)> {
        let lo = self.atoms.iter().map(|a| a.t).chain(self.pieces.iter().map(|p| p.a)).fold(f64::INFINITY, f64::min);
        let hi =
            self.atoms.iter().map(|a| a.t).chain(self.pieces.iter().map(|p| p.b)).fold(f64::NEG_INFINITY, f64::max);
        lo.is_finite().then_some((lo, hi))
    }

    pub fn support_min(&self) -> f64 {
        self.support().map_or(f64::INFINITY, |s| s.0)
    }

    pub fn support_max(&self) -> f64 {
        self.support().map_or(0.0, |s| s.1)
    }

    pub fn is_real(&self) -> bool {
        self.atoms.iter().all(|a| a.weight.im == 0.0)
            && self.pieces.iter().all(|p| p.coeffs.iter().all(|c| c.im == 0.0))
    }

    /// Total mass `\int d mu`.
    pub fn mass(&self) -> C64 {
        let atoms: C64 = self.atoms.iter().map(|a| a.weight).sum();
        let pieces: C64 = self.pieces.iter().map(|p| poly::moment_integral(&p.coeffs, p.a, p.b, 0)).sum();
        atoms + pieces
    }

    /// `\int t^k d|mu|(t)`.
    pub fn tv_moment(&self, k: u32) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight.norm() * a.t.powi(k as i32)).sum();
        let pieces: f64 = self.pieces.iter().map(|p| piece_tv_moment(p, k)).sum();
        atoms + pieces
    }

    /// Laplace transform `\int e^{-z t} d mu(t)`.
    pub fn laplace(&self, z: C64) -> C64 {
        let atoms: C64 = self.atoms.iter().map(|a| a.weight * (-z * a.t).exp()).sum();
        let pieces: C64 = self.pieces.iter().map(|p| poly::laplace_piece(&p.coeffs, p.a, p.b, z)).sum();
        atoms + pieces
    }

    /// Complex-conjugated measure; its transform is `conj(F(conj z))`.
    pub fn conj_reflect(&self) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom { t: a.t, weight: a.weight.conj() }).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { a: p.a, b: p.b, coeffs: p.coeffs.iter().map(|c| c.conj()).collect() })
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == C64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self {
            atoms: self.atoms.iter().map(|a| Atom { t: a.t, weight: a.weight * s }).collect(),
            pieces: self.pieces.iter().map(|p| Piece { a: p.a, b: p.b, coeffs: poly::scale(&p.coeffs, s) }).collect(),
        }
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        for x in &self.atoms {
            for y in &other.atoms {
                atoms.push(Atom { t: x.t + y.t, weight: x.weight * y.weight });
            }
        }
        for (atom_side, piece_side) in [(&self.atoms, &other.pieces), (&other.atoms, &self.pieces)] {
            for x in atom_side {
                for p in piece_side {
                    // w * p(t - s) on [a + s, b + s]
                    let shifted = poly::taylor_shift(&p.coeffs, -x.t);
                    pieces.push(Piece { a: p.a + x.t, b: p.b + x.t, coeffs: poly::scale(&shifted, x.weight) });
                }
            }
        }
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.extend(convolve_pieces(p, q));
            }
        }
        Self::canonical(atoms, pieces)
    }

    fn canonical(mut atoms: Vec<Atom>, pieces: Vec<Piece>) -> Self {
        atoms.sort_by(|x, y| x.t.total_cmp(&y.t));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if (a.t - last.t).abs() <= LOCATION_TOL => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.weight != C64::new(0.0, 0.0));
        Self { atoms: merged, pieces: refine_pieces(pieces) }
    }
}

/// Splits overlapping pieces on the common breakpoint grid and sums them.
fn refine_pieces(pieces: Vec<Piece>) -> Vec<Piece> {
    let pieces: Vec<Piece> = pieces.into_iter().filter(|p| !poly::is_zero(&p.coeffs)).collect();
    if pieces.is_empty() {
        return pieces;
    }
    let mut breaks: Vec<f64> = pieces.iter().flat_map(|p| [p.a, p.b]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() <= LOCATION_TOL);
    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let mut acc: Vec<C64> = vec![C64::new(0.0, 0.0)];
        let mut covered = false;
        for p in &pieces {
            if p.a <= mid && mid <= p.b {
                acc = poly::add(&acc, &p.coeffs);
                covered = true;
            }
        }
        let acc = poly::trim(acc);
        if covered && !poly::is_zero(&acc) {
            out.push(Piece { a: lo, b: hi, coeffs: acc });
        }
    }
    out
}

/// Convolution of two polynomial pieces: piecewise polynomial on the
/// Minkowski-sum breakpoints.
fn convolve_pieces(p: &Piece, q: &Piece) -> Vec<Piece> {
    let mut knots = vec![p.a + q.a, p.a + q.b, p.b + q.a, p.b + q.b];
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|x, y| (*x - *y).abs() <= LOCATION_TOL);
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    for w in knots.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        // integration limits in tau, each constant or of the form t - c
        let lower = if p.a >= mid - q.b { vec![C64::new(p.a, 0.0)] } else { vec![C64::new(-q.b, 0.0), one] };
        let upper = if p.b <= mid - q.a { vec![C64::new(p.b, 0.0)] } else { vec![C64::new(-q.a, 0.0), one] };
        let mut result = vec![C64::new(0.0, 0.0)];
        for (i, &pi) in p.coeffs.iter().enumerate() {
            for (k, &qk) in q.coeffs.iter().enumerate() {
                // (t - tau)^k = sum_l C(k, l) t^(k-l) (-tau)^l
                let mut binom = 1.0;
                for l in 0..=k {
                    if l > 0 {
                        binom = binom * (k - l + 1) as f64 / l as f64;
                    }
                    let n = i + l + 1;
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    let tau_int = poly::scale(
                        &poly::add(&poly::pow(&upper, n), &poly::scale(&poly::pow(&lower, n), -one)),
                        C64::new(1.0 / n as f64, 0.0),
                    );
                    let mut t_pow = vec![C64::new(0.0, 0.0); k - l + 1];
                    t_pow[k - l] = pi * qk * (binom * sign);
                    result = poly::add(&result, &poly::mul(&t_pow, &tau_int));
                }
            }
        }
        out.push(Piece { a: w[0], b: w[1], coeffs: poly::trim(result) });
    }
    out
}

fn piece_tv_moment(p: &Piece, k: u32) -> f64 {
    // Common phase: |p| = |real polynomial| and the integral is exact.
    let pivot = p.coeffs.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
    let scale = pivot.norm();
    if scale == 0.0 {
        return 0.0;
    }
    let phase = pivot.conj() / scale;
    let rotated: Vec<C64> = p.coeffs.iter().map(|c| c * phase).collect();
    if rotated.iter().all(|c| c.im.abs() <= 1e-14 * scale) {
        let real: Vec<f64> = rotated.iter().map(|c| c.re).collect();
        let mut knots = vec![p.a];
        knots.extend(poly::sign_change_roots(&real, p.a, p.b));
        knots.push(p.b);
        knots.windows(2).map(|w| poly::moment_integral_real(&real, w[0], w[1], k as usize).abs()).sum()
    } else {
        let f = |t: f64| t.powi(k as i32) * p.eval(t).norm();
        adaptive_simpson(&f, p.a, p.b, 1e-12)
    }
}

impl Add for &CompactMeasure {
    type Output = CompactMeasure;
    fn add(self, rhs: &CompactMeasure) -> CompactMeasure {
        let atoms = self.atoms.iter().chain(&rhs.atoms).copied().collect();
        let pieces = self.pieces.iter().chain(&rhs.pieces).cloned().collect();
        CompactMeasure::canonical(atoms, pieces)
    }
}

impl Add for CompactMeasure {
    type Output = CompactMeasure;
    fn add(self, rhs: CompactMeasure) -> CompactMeasure {
        &self + &rhs
    }
}

impl Neg for &CompactMeasure {
    type Output = CompactMeasure;
    fn neg(self) -> CompactMeasure {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Neg for CompactMeasure {
    type Output = CompactMeasure;
    fn neg(self) -> CompactMeasure {
        -&self
    }
}

impl Sub for &CompactMeasure {
    type Output = CompactMeasure;
    fn sub(self, rhs: &CompactMeasure) -> CompactMeasure {
        self + &(-rhs)
    }
}

impl Sub for CompactMeasure {
    type Output = CompactMeasure;
    fn sub(self, rhs: CompactMeasure) -> CompactMeasure {
        &self - &rhs
    }
}

impl Mul<C64> for &CompactMeasure {
    type Output = CompactMeasure;
    fn mul(self, s: C64) -> CompactMeasure {
        self.scale(s)
    }
}

impl Mul<C64> for CompactMeasure {
    type Output = CompactMeasure;
    fn mul(self, s: C64) -> CompactMeasure {
        self.scale(s)
    }
}

/// The three real mass-zero measures used throughout tests and configs.
pub mod standard {
    use super::*;

    /// `delta_1 - delta_2`, transform `e^{-s} - e^{-2s}`.
    pub fn two_point() -> CompactMeasure {
        CompactMeasure::from_atoms(&[(1.0, 1.0), (2.0, -1.0)]).expect("valid")
    }

    /// `delta_1 - 3 delta_2 + delta_3 + delta_4`.
    pub fn four_point() -> CompactMeasure {
        CompactMeasure::from_atoms(&[(1.0, 1.0), (2.0, -3.0), (3.0, 1.0), (4.0, 1.0)]).expect("valid")
    }

    /// `(chi_[1,2] - chi_[2,3]) dt`.
    pub fn step_density() -> CompactMeasure {
        let lo = CompactMeasure::indicator(1.0, 2.0).expect("valid");
        let hi = CompactMeasure::indicator(2.0, 3.0).expect("valid");
        &lo - &hi
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn standard_measures_have_zero_mass() {
        assert_eq!(two_point().mass(), c(0.0, 0.0));
        assert_eq!(four_point().mass(), c(0.0, 0.0));
        assert!(step_density().mass().norm() < 1e-15);
    }

    #[test]
    fn tv_moments_of_standard_measures() {
        assert_eq!(two_point().tv_moment(1), 3.0);
        assert_eq!(two_point().tv_moment(0), 2.0);
        let d = step_density();
        assert!((d.tv_moment(1) - 4.0).abs() < 1e-14);
        // quadrature oracle on |density|
        let density = |t: f64| if t < 2.0 { 1.0f64 } else { -1.0 };
        let oracle = simpson(|t| t * density(t).abs(), 1.0, 3.0, 2000);
        assert!((d.tv_moment(1) - oracle).abs() < 1e-10);
    }

    #[test]
    fn sign_changing_piece_splits_at_roots() {
        // density (t - 2) on [1, 3]: |.| integrates to 1
        let m = CompactMeasure::density(1.0, 3.0, vec![c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(m.mass().norm() < 1e-15);
        assert!((m.tv_moment(0) - 1.0).abs() < 1e-14);
        let oracle = simpson(|t| t * (t - 2.0).abs(), 1.0, 3.0, 20_000);
        assert!((m.tv_moment(1) - oracle).abs() < 1e-10);
    }

    #[test]
    fn complex_piece_uses_modulus_quadrature() {
        // (1 + i t) on [1, 2]: |p| = sqrt(1 + t^2)
        let m = CompactMeasure::density(1.0, 2.0, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let oracle = simpson(|t| (1.0 + t * t).sqrt(), 1.0, 2.0, 20_000);
        assert!((m.tv_moment(0) - oracle).abs() < 1e-10);
    }

    #[test]
    fn laplace_closed_forms() {
        let s = c(0.7, 0.2);
        let f = two_point().laplace(s);
        assert!((f - ((-s).exp() - (-2.0 * s).exp())).norm() < 1e-15);
        let g = step_density().laplace(c(1.0, 0.0));
        let want = (-1f64).exp() - 2.0 * (-2f64).exp() + (-3f64).exp();
        assert!((g.re - want).abs() < 1e-14 && g.im.abs() < 1e-15);
        assert!((want - 0.146996).abs() < 1e-6);
        assert!(step_density().laplace(c(0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn laplace_of_density_matches_quadrature() {
        let m = CompactMeasure::density(0.5, 2.5, vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.1, -0.2)]).unwrap();
        for z in [c(1e-9, 0.0), c(0.3, -1.0), c(4.0, 2.0), c(-1.5, 6.0)] {
            let re = simpson(|t| (m.pieces()[0].eval(t) * (-z * t).exp()).re, 0.5, 2.5, 20_000);
            let im = simpson(|t| (m.pieces()[0].eval(t) * (-z * t).exp()).im, 0.5, 2.5, 20_000);
            assert!((m.laplace(z) - c(re, im)).norm() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn atom_convolution() {
        let m = two_point();
        let sq = m.convolve(&m);
        let want = CompactMeasure::from_atoms(&[(2.0, 1.0), (3.0, -2.0), (4.0, 1.0)]).unwrap();
        assert_eq!(sq, want);
    }

    #[test]
    fn box_convolution_is_a_tent() {
        let b = CompactMeasure::indicator(1.0, 2.0).unwrap();
        let tent = b.convolve(&b);
        assert_eq!(tent.pieces().len(), 2);
        assert!((tent.mass() - c(1.0, 0.0)).norm() < 1e-14);
        let p = &tent.pieces()[0];
        assert!((p.eval(2.5) - c(0.5, 0.0)).norm() < 1e-14);
        let z = c(1.0, 0.0);
        let lhs = tent.laplace(z);
        let rhs = b.laplace(z) * b.laplace(z);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn hermitian_square_is_real() {
        let m = CompactMeasure::new(
            vec![Atom { t: 1.0, weight: c(1.0, 1.0) }, Atom { t: 2.5, weight: c(-0.5, 2.0) }],
            vec![Piece { a: 1.0, b: 2.0, coeffs: vec![c(0.0, 1.0), c(1.0, -1.0)] }],
        )
        .unwrap();
        let nu = m.convolve(&m.conj_reflect());
        assert!(nu.is_real() || nu.atoms().iter().all(|a| a.weight.im.abs() < 1e-13));
        // transform is |F|^2 on the real axis
        for x in [0.0, 0.4, 1.7] {
            let z = c(x, 0.0);
            assert!((nu.laplace(z) - c(m.laplace(z).norm_sqr(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn conj_reflect_examples() {
        let m = CompactMeasure::new(vec![Atom { t: 1.0, weight: c(1.0, 1.0) }], vec![]).unwrap();
        assert_eq!(m.conj_reflect().atoms()[0].weight, c(1.0, -1.0));
        assert_eq!(two_point().conj_reflect(), two_point());
    }

    #[test]
    fn rejects_invalid_input() {
        assert_eq!(CompactMeasure::dirac(0.0), Err(MeasureError::InvalidLocation(0.0)));
        assert!(matches!(CompactMeasure::indicator(2.0, 1.0), Err(MeasureError::EmptyInterval { .. })));
        assert_eq!(CompactMeasure::from_atoms(&[(1.0, f64::NAN)]), Err(MeasureError::NonFinite));
    }

    #[test]
    fn overlapping_pieces_are_refined() {
        let a = CompactMeasure::indicator(1.0, 3.0).unwrap();
        let b = CompactMeasure::indicator(2.0, 4.0).unwrap();
        let s = &a + &b;
        assert_eq!(s.pieces().len(), 3);
        assert!((s.mass() - c(4.0, 0.0)).norm() < 1e-14);
        for w in s.pieces().windows(2) {
            assert!(w[0].b <= w[1].a);
        }
    }
}
