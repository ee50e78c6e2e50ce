//! Planar geometry on complex numbers: segment intersection, winding
//! numbers and polygon simplicity.

use num_complex::Complex64 as C64;

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn orient(a: C64, b: C64, c: C64) -> f64 {
    cross(b - a, c - a)
}

fn on_segment(a: C64, b: C64, p: C64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// True when the closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: C64, b: C64, c: C64, d: C64) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Intersection point of two properly crossing segments, if any.
pub fn crossing_point(a: C64, b: C64, c: C64, d: C64) -> Option<C64> {
    let r = b - a;
    let s = d - c;
    let den = cross(r, s);
    if den == 0.0 {
        return None;
    }
    let t = cross(c - a, s) / den;
    let u = cross(c - a, r) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| a + r * t)
}

/// Distance from `p` to the segment `[a, b]`.
pub fn distance_to_segment(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to a closed polygon.
pub fn distance_to_polygon(p: C64, poly: &[C64]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| distance_to_segment(p, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Winding number of a closed polygon around `p` (0 outside, +1 inside a
/// counter-clockwise simple polygon).
pub fn winding_number(p: C64, poly: &[C64]) -> i32 {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.im <= p.im {
            if b.im > p.im && orient(a, b, p) > 0.0 {
                w += 1;
            }
        } else if b.im <= p.im && orient(a, b, p) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Signed area; positive for counter-clockwise polygons.
pub fn signed_area(poly: &[C64]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>()
}

/// First pair of non-adjacent edges of a closed polygon that touch, or
/// `None` when the polygon is simple. O(n^2).
pub fn first_self_intersection(poly: &[C64]) -> Option<(usize, usize)> {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            if adjacent {
                // adjacent edges may only share their common vertex
                let shared = if j == i + 1 { b } else { a };
                let (other_a, other_c) = if j == i + 1 { (a, d) } else { (b, c) };
                if orient(other_a, shared, other_c) == 0.0 && ((other_c - shared) * (other_a - shared).conj()).re > 0.0
                {
                    return Some((i, j));
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Drops vertices that lie on the segment between their neighbours.
pub fn simplify_collinear(path: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(path.len());
    for &p in path {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            let straight = orient(a, b, p) == 0.0 && ((p - b) * (b - a).conj()).re > 0.0;
            if straight {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}
