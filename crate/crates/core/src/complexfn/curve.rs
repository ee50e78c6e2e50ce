//! Constructive version of the Jordan-curve theorem for a ray maximizer:
//! a segment `[alpha, a1]` on which `|F|` grows like `|z - alpha|^m`, and a
//! grid path from `a1` to the imaginary axis inside the superlevel set
//! `{|F| > |F(a0)|}`.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::geometry::{first_self_intersection, segments_intersect, simplify_collinear};
use super::taylor::{default_radius, vanishing_order};
use super::{ComplexFnError, RayMaximum, Transform};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CurveOptions {
    /// Samples per segment used to certify conditions (i) and (ii).
    pub samples_per_segment: usize,
    /// Cap on grid cells along either side.
    pub max_cells: usize,
    /// Grid cells per `rho` on the first attempt.
    pub cells_per_rho: f64,
    /// The axis contact `a3` must satisfy `|a3| > min_axis_radius`.
    pub min_axis_radius: f64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self { samples_per_segment: 1000, max_cells: 4096, cells_per_rho: 4.0, min_axis_radius: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveMargins {
    /// `min (|F(z)| - F(alpha) - delta |z - alpha|^m)` over `(alpha, a1]`.
    pub condition_i: f64,
    /// `min (|F(z)| - |F(a0)|)` over `Gamma_1 + [a2, a3]`.
    pub condition_ii: f64,
    /// `|F(a0)| - F(alpha)`.
    pub below_level: f64,
    /// `|F(a1)| - |F(a0)|`.
    pub above_level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub h: f64,
    pub cols: usize,
    pub rows: usize,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanCurve {
    pub alpha: f64,
    pub f_alpha: f64,
    pub a0: C64,
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
    pub m: usize,
    pub delta: f64,
    pub rho: f64,
    /// `|F(a0)|`.
    pub level: f64,
    pub gamma1_vertices: Vec<C64>,
    /// Closed polygon `[alpha, a1] + Gamma_1 + [a2, a3] + [a3, conj a3] +`
    /// mirror image, counter-clockwise, without repeating the first vertex.
    pub full_vertices: Vec<C64>,
    pub margins: CurveMargins,
    pub grid: GridInfo,
    pub samples_per_segment: usize,
    pub simple: bool,
}

/// Certified parameters, the JSON side of a curve export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub alpha: f64,
    pub f_alpha: f64,
    pub m: usize,
    pub delta: f64,
    pub rho: f64,
    pub level: f64,
    pub a0: [f64; 2],
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub a3: [f64; 2],
    pub margins: CurveMargins,
    pub grid: GridInfo,
    pub samples_per_segment: usize,
    pub vertex_count: usize,
    pub simple: bool,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl JordanCurve {
    pub fn params(&self) -> CurveParams {
        CurveParams {
            alpha: self.alpha,
            f_alpha: self.f_alpha,
            m: self.m,
            delta: self.delta,
            rho: self.rho,
            level: self.level,
            a0: pair(self.a0),
            a1: pair(self.a1),
            a2: pair(self.a2),
            a3: pair(self.a3),
            margins: self.margins,
            grid: self.grid,
            samples_per_segment: self.samples_per_segment,
            vertex_count: self.full_vertices.len(),
            simple: self.simple,
        }
    }

    /// `re,im` lines for the closed polygon.
    pub fn vertices_csv(&self) -> String {
        vertices_csv(&self.full_vertices)
    }
}

pub fn vertices_csv(vertices: &[C64]) -> String {
    let mut s = String::from("re,im\n");
    for v in vertices {
        s.push_str(&format!("{},{}\n", v.re, v.im));
    }
    s
}

/// Points `a + (b - a) k / n` for `k = 0..=n`.
fn segment_samples(a: C64, b: C64, n: usize) -> impl Iterator<Item = C64> {
    (0..=n).map(move |k| a + (b - a) * (k as f64 / n as f64))
}

struct Segment0 {
    rho: f64,
    delta: f64,
    a1: C64,
}

/// Halve `rho` until the fitted `delta` of condition (i) is positive.
fn fit_first_segment(
    f: &dyn Transform,
    alpha: f64,
    f_alpha: f64,
    m: usize,
    rho0: f64,
    samples: usize,
) -> Option<Segment0> {
    let dir = C64::from_polar(1.0, PI / m as f64);
    let mut rho = rho0;
    for _ in 0..60 {
        let a = C64::new(alpha, 0.0);
        let fit = segment_samples(a, a + dir * rho, samples)
            .skip(1)
            .map(|z| (f.eval(z).norm() - f_alpha) / (z - a).norm().powi(m as i32))
            .fold(f64::INFINITY, f64::min);
        if fit > 0.0 && fit.is_finite() {
            return Some(Segment0 { rho, delta: 0.5 * fit, a1: a + dir * rho });
        }
        rho *= 0.5;
    }
    None
}

/// Grid anchored at `a1`: node `(i, j)` is `a1 + h (i + i j)`.
struct Grid {
    a1: C64,
    h: f64,
    i_min: i64,
    i_max: i64,
    j_min: i64,
    j_max: i64,
}

impl Grid {
    fn new(a1: C64, h: f64, extent: f64) -> Self {
        // keep every node strictly inside the open quadrant
        let i_min = -((a1.re / h).ceil() as i64 - 1);
        let j_min = -((a1.im / h).ceil() as i64 - 1);
        let i_max = (extent / h).ceil() as i64;
        let j_max = (extent / h).ceil() as i64;
        Self { a1, h, i_min, i_max, j_min, j_max }
    }

    fn cols(&self) -> usize {
        (self.i_max - self.i_min + 1) as usize
    }

    fn rows(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    fn index(&self, i: i64, j: i64) -> usize {
        (j - self.j_min) as usize * self.cols() + (i - self.i_min) as usize
    }

    fn point(&self, i: i64, j: i64) -> C64 {
        self.a1 + C64::new(i as f64, j as f64) * self.h
    }

    fn contains(&self, i: i64, j: i64) -> bool {
        (self.i_min..=self.i_max).contains(&i) && (self.j_min..=self.j_max).contains(&j)
    }
}

struct PathSearch {
    vertices: Vec<C64>,
    a2: C64,
    a3: C64,
}

/// Flood fill of the component of `a1` in `{|F| > level + floor}`, then the
/// best axis contact and the BFS path to it.
fn search_path(
    f: &dyn Transform,
    grid: &Grid,
    level: f64,
    floor: f64,
    alpha: f64,
    min_axis_radius: f64,
) -> Option<PathSearch> {
    let n = grid.cols() * grid.rows();
    let mut value = vec![f64::NAN; n];
    let mut parent = vec![u32::MAX; n];
    let threshold = level + floor;
    let a = C64::new(alpha, 0.0);
    let slit_end = grid.a1;
    let node_value = |i: i64, j: i64, value: &mut Vec<f64>| {
        let k = grid.index(i, j);
        if value[k].is_nan() {
            value[k] = f.eval(grid.point(i, j)).norm();
        }
        value[k]
    };
    let start = grid.index(0, 0);
    parent[start] = start as u32;
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    let mut contacts: Vec<(i64, i64)> = Vec::new();
    while let Some((i, j)) = queue.pop_front() {
        if i == grid.i_min {
            contacts.push((i, j));
        }
        let p = grid.point(i, j);
        for (di, dj) in [(-1, 0), (0, 1), (1, 0), (0, -1)] {
            let (ni, nj) = (i + di, j + dj);
            if !grid.contains(ni, nj) {
                continue;
            }
            let k = grid.index(ni, nj);
            if parent[k] != u32::MAX {
                continue;
            }
            if node_value(ni, nj, &mut value) <= threshold {
                continue;
            }
            let q = grid.point(ni, nj);
            // the edge may not touch the slit [alpha, a1] other than at a1
            if segments_intersect(p, q, a, slit_end) && !(p == slit_end && !segments_intersect(q, q, a, slit_end)) {
                continue;
            }
            let interior_ok = (1..=4).all(|s| f.eval(p + (q - p) * (s as f64 / 5.0)).norm() > threshold);
            if !interior_ok {
                continue;
            }
            parent[k] = grid.index(i, j) as u32;
            queue.push_back((ni, nj));
        }
    }

    let mut best: Option<((i64, i64), f64)> = None;
    for &(i, j) in &contacts {
        let a2 = grid.point(i, j);
        if a2.im <= min_axis_radius {
            continue;
        }
        let a3 = C64::new(0.0, a2.im);
        let score = segment_samples(a2, a3, 64).map(|z| f.eval(z).norm() - level).fold(f64::INFINITY, f64::min);
        if score > floor && best.is_none_or(|(_, s)| score > s) {
            best = Some(((i, j), score));
        }
    }
    let ((ci, cj), _) = best?;
    let mut k = grid.index(ci, cj);
    let mut path = Vec::new();
    loop {
        let (i, j) = ((k % grid.cols()) as i64 + grid.i_min, (k / grid.cols()) as i64 + grid.j_min);
        path.push(grid.point(i, j));
        if k == start {
            break;
        }
        k = parent[k] as usize;
    }
    path.reverse();
    let a2 = *path.last().expect("nonempty path");
    Some(PathSearch { vertices: simplify_collinear(&path), a2, a3: C64::new(0.0, a2.im) })
}

fn full_polygon(alpha: f64, gamma1: &[C64], a3: C64) -> Vec<C64> {
    let mut full = Vec::with_capacity(2 * gamma1.len() + 3);
    full.push(C64::new(alpha, 0.0));
    full.extend_from_slice(gamma1);
    full.push(a3);
    full.push(a3.conj());
    full.extend(gamma1.iter().rev().map(|z| z.conj()));
    full
}

/// Minimum of `|F| - level` over the polygonal path, sampled per segment.
fn path_margin(f: &dyn Transform, path: &[C64], level: f64, samples: usize) -> f64 {
    path.windows(2)
        .flat_map(|w| segment_samples(w[0], w[1], samples))
        .map(|z| f.eval(z).norm() - level)
        .fold(f64::INFINITY, f64::min)
}

pub fn jordan_curve(f: &dyn Transform, ray: &RayMaximum, opts: &CurveOptions) -> Result<JordanCurve, ComplexFnError> {
    if !f.is_real() {
        return Err(ComplexFnError::NotReal);
    }
    let alpha = ray.alpha;
    let f_alpha = ray.value;
    let floor = 10.0 * f64::EPSILON * f_alpha;
    let order = vanishing_order(f, alpha, default_radius(f, alpha), 1e-8 * f_alpha)?;
    let m = order.m;
    if m % 2 == 1 {
        return Err(ComplexFnError::OddOrder(m));
    }
    // Taylor remainder heuristic: stop before the next term dominates
    let cm = order.coeff.norm();
    let next = order.coefficients.get(m + 1).map_or(0.0, |c| c.norm());
    let rho0 = if next > 0.0 { (0.5 * cm / next).min(order.radius) } else { order.radius };
    let samples = opts.samples_per_segment.max(2);
    let seg = fit_first_segment(f, alpha, f_alpha, m, rho0, samples)
        .ok_or(ComplexFnError::ConditionFailed { condition: "i", margin: 0.0 })?;
    let (rho, delta, a1) = (seg.rho, seg.delta, seg.a1);

    // a0 on (alpha, a1) halfway between the two levels
    let dir = a1 - alpha;
    let f_a1 = f.eval(a1).norm();
    let target = 0.5 * (f_alpha + f_a1);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f.eval(alpha + dir * mid).norm() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a0 = alpha + dir * (0.5 * (lo + hi));
    let level = f.eval(a0).norm();
    if !(f_alpha < level && level < f_a1) {
        return Err(ComplexFnError::ConditionFailed { condition: "a0", margin: (level - f_alpha).min(f_a1 - level) });
    }

    let mut h = rho / opts.cells_per_rho;
    let mut extent = 4.0 * alpha.max(rho).max(opts.min_axis_radius);
    let mut attempts = 0;
    let mut last_err = ComplexFnError::ComponentClosed;
    loop {
        attempts += 1;
        let grid = Grid::new(a1, h, extent);
        if grid.cols() > opts.max_cells || grid.rows() > opts.max_cells {
            return Err(last_err);
        }
        if let Some(found) = search_path(f, &grid, level, floor, alpha, opts.min_axis_radius) {
            let gamma1 = found.vertices;
            let margin_i = segment_samples(C64::new(alpha, 0.0), a1, samples)
                .skip(1)
                .map(|z| f.eval(z).norm() - f_alpha - delta * (z - alpha).norm().powi(m as i32))
                .fold(f64::INFINITY, f64::min);
            let mut tail = gamma1.clone();
            tail.push(found.a3);
            let margin_ii = path_margin(f, &tail, level, samples);
            let full = full_polygon(alpha, &gamma1, found.a3);
            let simple = first_self_intersection(&full).is_none();
            if !simple {
                last_err = ComplexFnError::SimplicityRepairFailed;
            } else if margin_i <= floor {
                return Err(ComplexFnError::ConditionFailed { condition: "i", margin: margin_i });
            } else if margin_ii <= floor {
                last_err = ComplexFnError::ConditionFailed { condition: "ii", margin: margin_ii };
            } else {
                return Ok(JordanCurve {
                    alpha,
                    f_alpha,
                    a0,
                    a1,
                    a2: found.a2,
                    a3: found.a3,
                    m,
                    delta,
                    rho,
                    level,
                    gamma1_vertices: gamma1,
                    full_vertices: full,
                    margins: CurveMargins {
                        condition_i: margin_i,
                        condition_ii: margin_ii,
                        below_level: level - f_alpha,
                        above_level: f_a1 - level,
                    },
                    grid: GridInfo { h, cols: grid.cols(), rows: grid.rows(), attempts },
                    samples_per_segment: samples,
                    simple,
                });
            }
            // a path exists but fails certification: refine the grid
            h *= 0.5;
            continue;
        }
        // no contact: grow the window first, then refine
        if (2.0 * extent / h) as usize <= opts.max_cells {
            extent *= 2.0;
        } else {
            h *= 0.5;
        }
    }
}
