#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shrinker_core::metrics::PointUV;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn p(u: f64, v: f64) -> PointUV {
    PointUV::new(u, v)
}

/// Lemniscate-style figure eight with a single crossing at the origin.
pub fn figure_eight(samples: usize) -> Vec<PointUV> {
    (0..samples)
        .map(|i| {
            let t = TAU * (i as f64 + 0.5) / samples as f64;
            p(t.sin(), t.sin() * t.cos())
        })
        .collect()
}

/// Three-petal rose `r = cos 3θ`, with the passes through the centre made exact.
pub fn rose() -> Vec<PointUV> {
    let n = 240;
    (0..n)
        .map(|j| {
            if j % (n / 3) == n / 6 {
                return p(0.0, 0.0);
            }
            let t = PI * j as f64 / n as f64;
            let r = (3.0 * t).cos();
            p(r * t.cos(), r * t.sin())
        })
        .collect()
}

/// Star pentagon {5/2}: five crossings, one pentagon and five triangles.
pub fn pentagram() -> Vec<PointUV> {
    (0..5)
        .map(|i| {
            let a = PI / 2.0 + TAU * (2 * i) as f64 / 5.0;
            p(a.cos(), a.sin())
        })
        .collect()
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn seg_point_distance(a: PointUV, b: PointUV, q: PointUV) -> f64 {
    let d = (b.u - a.u, b.v - a.v);
    let t = (((q.u - a.u) * d.0 + (q.v - a.v) * d.1) / (d.0 * d.0 + d.1 * d.1)).clamp(0.0, 1.0);
    q.dist(&p(a.u + t * d.0, a.v + t * d.1))
}

/// Proper crossing of segments `ab` and `cd`, with the angle between them.
fn crossing(a: PointUV, b: PointUV, c: PointUV, d: PointUV) -> Option<(PointUV, f64)> {
    let r = (b.u - a.u, b.v - a.v);
    let s = (d.u - c.u, d.v - c.v);
    let den = cross(r, s);
    if den == 0.0 {
        return None;
    }
    let w = (c.u - a.u, c.v - a.v);
    let t = cross(w, s) / den;
    let u = cross(w, r) / den;
    if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&u) {
        return None;
    }
    let sin = (den / (r.0.hypot(r.1) * s.0.hypot(s.1))).abs();
    Some((p(a.u + t * r.0, a.v + t * r.1), sin.asin()))
}

/// All crossings of non-adjacent segments, by brute force.
pub fn brute_force_crossings(pts: &[PointUV]) -> Vec<(PointUV, f64)> {
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if let Some(x) = crossing(a, b, c, d) {
                out.push(x);
            }
        }
    }
    out
}

/// Whether a random polygon is comfortably transverse: crossings well
/// separated from each other and from vertices, crossing angles at least
/// `min_angle`, no vertex close to a segment it is not on, and no spikes.
pub fn well_separated(pts: &[PointUV], delta: f64, min_angle: f64) -> bool {
    let n = pts.len();
    for i in 0..n {
        let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        if a.dist(&b) < 4.0 * delta {
            return false;
        }
        let d1 = (b.u - a.u, b.v - a.v);
        let d2 = (c.u - b.u, c.v - b.v);
        let turn = cross(d1, d2).atan2(d1.0 * d2.0 + d1.1 * d2.1).abs();
        if turn > PI - min_angle {
            return false;
        }
        for j in 0..n {
            if j == i || (j + 1) % n == i {
                continue;
            }
            if seg_point_distance(pts[j], pts[(j + 1) % n], b) < delta {
                return false;
            }
        }
    }
    let xs = brute_force_crossings(pts);
    for (k, &(x, angle)) in xs.iter().enumerate() {
        if angle < min_angle {
            return false;
        }
        if pts.iter().any(|v| v.dist(&x) < delta) {
            return false;
        }
        if xs[k + 1..].iter().any(|(y, _)| y.dist(&x) < delta) {
            return false;
        }
    }
    true
}

/// Seeded random closed polygons with 4 to 9 vertices in the unit square
/// that pass [`well_separated`].
pub fn random_transverse_loops(seed: u64, count: usize) -> Vec<Vec<PointUV>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(4..=9);
        let pts: Vec<PointUV> = (0..n).map(|_| p(rng.gen(), rng.gen())).collect();
        if well_separated(&pts, 0.015, 10f64.to_radians()) {
            out.push(pts);
        }
    }
    out
}

/// Components smaller than this are staircase pockets where two rasterized
/// walls meet at a shallow angle, not faces.
pub const MIN_FACE_CELLS: usize = 16;

/// Number of bounded components of the complement of the loop, by
/// rasterizing it on a `res × res` grid and flood-filling from the border.
pub fn flood_fill_faces(pts: &[PointUV], res: usize) -> usize {
    flood_fill_components(pts, res)
        .into_iter()
        .filter(|&c| c >= MIN_FACE_CELLS)
        .count()
}

/// Cell counts of the bounded components found by [`flood_fill_faces`].
pub fn flood_fill_components(pts: &[PointUV], res: usize) -> Vec<usize> {
    let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for q in pts {
        lo_u = lo_u.min(q.u);
        hi_u = hi_u.max(q.u);
        lo_v = lo_v.min(q.v);
        hi_v = hi_v.max(q.v);
    }
    let span = (hi_u - lo_u).max(hi_v - lo_v);
    let pad = 0.05 * span;
    let cell = (span + 2.0 * pad) / res as f64;
    let to_cell = |u: f64, v: f64| {
        let i = (((u - lo_u + pad) / cell) as usize).min(res - 1);
        let j = (((v - lo_v + pad) / cell) as usize).min(res - 1);
        (i, j)
    };
    let mut wall = vec![false; res * res];
    let n = pts.len();
    for s in 0..n {
        let (a, b) = (pts[s], pts[(s + 1) % n]);
        // quarter-cell steps keep the wall 8-connected, which blocks a 4-connected fill
        let steps = (4.0 * a.dist(&b) / cell).ceil() as usize + 1;
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let (i, j) = to_cell(a.u + t * (b.u - a.u), a.v + t * (b.v - a.v));
            wall[j * res + i] = true;
        }
    }
    let mut label = vec![0u32; res * res];
    let fill = |start: usize, id: u32, label: &mut Vec<u32>| {
        let mut queue = VecDeque::from([start]);
        label[start] = id;
        let mut size = 1;
        while let Some(c) = queue.pop_front() {
            let (i, j) = (c % res, c / res);
            let mut visit = |nb: usize| {
                if !wall[nb] && label[nb] == 0 {
                    label[nb] = id;
                    size += 1;
                    queue.push_back(nb);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < res {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - res);
            }
            if j + 1 < res {
                visit(c + res);
            }
        }
        size
    };
    for i in 0..res {
        for c in [i, (res - 1) * res + i, i * res, i * res + res - 1] {
            if !wall[c] && label[c] == 0 {
                fill(c, 1, &mut label);
            }
        }
    }
    let mut sizes = Vec::new();
    for c in 0..res * res {
        if !wall[c] && label[c] == 0 {
            sizes.push(fill(c, sizes.len() as u32 + 2, &mut label));
        }
    }
    sizes
}

/// `samples` points on the semicircle `x² + r² = 2n`, keeping `margin`
/// radians away from the axis at each end.
pub fn semicircle(n: u32, samples: usize, margin: f64) -> Vec<PointUV> {
    let radius = (2.0 * n as f64).sqrt();
    (0..samples)
        .map(|i| {
            let a = PI - margin - (PI - 2.0 * margin) * i as f64 / (samples - 1) as f64;
            p(radius * a.cos(), radius * a.sin())
        })
        .collect()
}

/// `samples` points on the cylinder line `r = √(2(n−1))`, `|x| ≤ half_width`.
pub fn cylinder_line(n: u32, samples: usize, half_width: f64) -> Vec<PointUV> {
    let r = (2.0 * (n as f64 - 1.0)).sqrt();
    (0..samples)
        .map(|i| p(-half_width + 2.0 * half_width * i as f64 / (samples - 1) as f64, r))
        .collect()
}

/// `samples` points on the line `φ = phi` with `r ∈ [r_lo, r_hi]`.
pub fn radial_line(phi: f64, samples: usize, r_lo: f64, r_hi: f64) -> Vec<PointUV> {
    (0..samples)
        .map(|i| p(r_lo + (r_hi - r_lo) * i as f64 / (samples - 1) as f64, phi))
        .collect()
}
