//! Planar arrangement of a closed immersed polyline: transverse
//! self-intersections with multiplicity, bounded faces, and the length
//! bounds for geodesic loops.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesics::geodesic_residual_closed;
use crate::metrics::{metric_length, PointUV, SurfaceMetric};

/// Smallest admissible angle between two passes through a crossing.
pub const MIN_CROSSING_ANGLE: f64 = 1e-6;

/// Default clustering tolerance relative to the loop diameter.
pub const DEFAULT_RELATIVE_EPS: f64 = 1e-9;

/// A closed polyline; the segment from the last point back to the first is
/// implicit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImmersedLoop {
    points: Vec<PointUV>,
    eps: f64,
}

impl ImmersedLoop {
    /// Validates `points` with clustering tolerance `eps`, defaulting to
    /// `1e-9` times the diameter.
    pub fn new(points: Vec<PointUV>, eps: Option<f64>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "a closed loop needs at least 3 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|p| !(p.u.is_finite() && p.v.is_finite())) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let eps = match eps {
            Some(e) if e > 0.0 => e,
            Some(e) => return Err(Error::Domain(format!("eps must be positive, got {e}"))),
            None => DEFAULT_RELATIVE_EPS * diameter(&points),
        };
        let n = points.len();
        for i in 0..n {
            let (p, q) = (points[i], points[(i + 1) % n]);
            if p.dist(&q) <= eps {
                return Err(Error::DegenerateInput(if i + 1 == n {
                    "first and last points coincide; closure is implicit".into()
                } else {
                    format!("points {i} and {} coincide", i + 1)
                }));
            }
        }
        Ok(Self { points, eps })
    }

    pub fn points(&self) -> &[PointUV] {
        &self.points
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            points,
            eps: self.eps,
        }
    }

    /// The points with the first repeated at the end.
    pub fn closed_polyline(&self) -> Vec<PointUV> {
        let mut pts = self.points.clone();
        pts.push(self.points[0]);
        pts
    }

    /// Shoelace area, positive for counter-clockwise loops.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    fn segment(&self, i: usize) -> (PointUV, PointUV) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }
}

fn diameter(points: &[PointUV]) -> f64 {
    let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        lo_u = lo_u.min(p.u);
        hi_u = hi_u.max(p.u);
        lo_v = lo_v.min(p.v);
        hi_v = hi_v.max(p.v);
    }
    (hi_u - lo_u).hypot(hi_v - lo_v)
}

fn signed_area(points: &[PointUV]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let (p, q) = (points[i], points[(i + 1) % n]);
        acc += p.u * q.v - q.u * p.v;
    }
    0.5 * acc
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(p: PointUV, q: PointUV) -> (f64, f64) {
    (p.u - q.u, p.v - q.v)
}

/// A point where the loop passes through itself `multiplicity` times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub point: PointUV,
    pub multiplicity: usize,
    /// Positions of the passes along the loop, as `segment index + fraction`,
    /// in increasing order.
    pub passes: Vec<f64>,
}

/// One raw segment–segment hit before clustering.
#[derive(Debug, Clone, Copy)]
struct Hit {
    point: PointUV,
    a: (usize, f64),
    b: (usize, f64),
}

fn segment_hit(lp: &ImmersedLoop, i: usize, j: usize) -> Result<Option<Hit>> {
    let eps = lp.eps;
    let (p0, p1) = lp.segment(i);
    let (q0, q1) = lp.segment(j);
    let r = sub(p1, p0);
    let s = sub(q1, q0);
    let (lr, ls) = (r.0.hypot(r.1), s.0.hypot(s.1));
    let d = cross(r, s);
    let qp = sub(q0, p0);
    let sin = d / (lr * ls);
    if sin.abs() <= MIN_CROSSING_ANGLE {
        // near-parallel: only an overlap matters
        let dist = cross(r, qp).abs() / lr;
        if dist > eps {
            return Ok(None);
        }
        let proj = |x: PointUV| {
            let w = sub(x, p0);
            (w.0 * r.0 + w.1 * r.1) / lr
        };
        let (a, b) = (proj(q0), proj(q1));
        let (lo, hi) = (a.min(b), a.max(b));
        if hi < -eps || lo > lr + eps {
            return Ok(None);
        }
        let mid = 0.5 * (lo.max(0.0) + hi.min(lr));
        return Err(Error::Transversality {
            x: p0.u + r.0 * mid / lr,
            y: p0.v + r.1 * mid / lr,
            angle: sin.abs().asin(),
        });
    }
    let t = cross(qp, s) / d;
    let u = cross(qp, r) / d;
    let (ti, ui) = (eps / lr, eps / ls);
    if t < -ti || t > 1.0 + ti || u < -ui || u > 1.0 + ui {
        return Ok(None);
    }
    let t = t.clamp(0.0, 1.0);
    let u = u.clamp(0.0, 1.0);
    Ok(Some(Hit {
        point: PointUV::new(p0.u + t * r.0, p0.v + t * r.1),
        a: (i, t),
        b: (j, u),
    }))
}

fn raw_hits(lp: &ImmersedLoop) -> Result<Vec<Hit>> {
    let n = lp.len();
    let eps = lp.eps;
    let mut order: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let (p, q) = lp.segment(i);
            (p.u.min(q.u) - eps, p.u.max(q.u) + eps, i)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
    let mut hits = Vec::new();
    for (k, &(_, hi, i)) in order.iter().enumerate() {
        let (p, q) = lp.segment(i);
        let (vlo, vhi) = (p.v.min(q.v) - eps, p.v.max(q.v) + eps);
        for &(lo2, _, j) in &order[k + 1..] {
            if lo2 > hi {
                break;
            }
            let (a, b) = (i.min(j), i.max(j));
            if b == a + 1 || (a == 0 && b == n - 1) {
                continue;
            }
            let (p2, q2) = lp.segment(j);
            if p2.v.max(q2.v) + eps < vlo || p2.v.min(q2.v) - eps > vhi {
                continue;
            }
            if let Some(hit) = segment_hit(lp, a, b)? {
                hits.push(hit);
            }
        }
    }
    Ok(hits)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// A pass position with vertex hits snapped onto the vertex.
fn canonical_pass(lp: &ImmersedLoop, (seg, t): (usize, f64)) -> (usize, f64) {
    let (p, q) = lp.segment(seg);
    let tol = lp.eps / p.dist(&q);
    if t <= tol {
        (seg, 0.0)
    } else if t >= 1.0 - tol {
        ((seg + 1) % lp.len(), 0.0)
    } else {
        (seg, t)
    }
}

/// Incoming-from and outgoing-to directions of the pass at `(seg, t)`.
fn pass_rays(lp: &ImmersedLoop, (seg, t): (usize, f64)) -> (f64, f64) {
    let n = lp.len();
    let (p, q) = lp.segment(seg);
    let out = sub(q, p);
    let back = if t == 0.0 {
        let prev = lp.points[(seg + n - 1) % n];
        sub(prev, p)
    } else {
        (-out.0, -out.1)
    };
    (back.1.atan2(back.0), out.1.atan2(out.0))
}

fn angle_ccw(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

fn line_angle(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Two passes cross transversally when their rays interleave around the
/// point and no ray of one is parallel to a ray of the other.
fn check_transverse(point: PointUV, a: (f64, f64), b: (f64, f64)) -> Result<()> {
    let mut min_angle = f64::INFINITY;
    for x in [a.0, a.1] {
        for y in [b.0, b.1] {
            min_angle = min_angle.min(line_angle(x, y));
        }
    }
    let span = angle_ccw(a.0, a.1);
    let inside = |x: f64| {
        let t = angle_ccw(a.0, x);
        t > 0.0 && t < span
    };
    if min_angle <= MIN_CROSSING_ANGLE || inside(b.0) == inside(b.1) {
        return Err(Error::Transversality {
            x: point.u,
            y: point.v,
            angle: min_angle,
        });
    }
    Ok(())
}

/// All self-intersections of the loop, clustered within `eps`, ordered by
/// their first pass along the loop.
pub fn self_intersections(lp: &ImmersedLoop) -> Result<Vec<Crossing>> {
    let hits = raw_hits(lp)?;
    let m = hits.len();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut by_u: Vec<usize> = (0..m).collect();
    by_u.sort_by(|&a, &b| hits[a].point.u.total_cmp(&hits[b].point.u).then(a.cmp(&b)));
    for (k, &a) in by_u.iter().enumerate() {
        for &b in &by_u[k + 1..] {
            if hits[b].point.u - hits[a].point.u > lp.eps {
                break;
            }
            if hits[a].point.dist(&hits[b].point) <= lp.eps {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut crossings = Vec::new();
    for group in groups.into_iter().filter(|g| !g.is_empty()) {
        let (mut su, mut sv) = (0.0, 0.0);
        for &h in &group {
            su += hits[h].point.u;
            sv += hits[h].point.v;
        }
        let point = PointUV::new(su / group.len() as f64, sv / group.len() as f64);
        let span = group
            .iter()
            .map(|&h| hits[h].point.dist(&point))
            .fold(0.0, f64::max);
        if span > 10.0 * lp.eps {
            return Err(Error::Ambiguity {
                x: point.u,
                y: point.v,
                span,
            });
        }
        let mut passes: Vec<(usize, f64)> = group
            .iter()
            .flat_map(|&h| [hits[h].a, hits[h].b])
            .map(|p| canonical_pass(lp, p))
            .collect();
        passes.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
        passes.dedup_by(|x, y| {
            if x.0 != y.0 {
                return false;
            }
            let (p, q) = lp.segment(x.0);
            (x.1 - y.1).abs() * p.dist(&q) <= 10.0 * lp.eps
        });
        if passes.len() < 2 {
            continue;
        }
        let rays: Vec<(f64, f64)> = passes.iter().map(|&p| pass_rays(lp, p)).collect();
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                check_transverse(point, rays[i], rays[j])?;
            }
        }
        let mut positions: Vec<f64> = passes.iter().map(|&(s, t)| s as f64 + t).collect();
        positions.sort_by(f64::total_cmp);
        crossings.push(Crossing {
            point,
            multiplicity: passes.len(),
            passes: positions,
        });
    }
    crossings.sort_by(|a, b| a.passes[0].total_cmp(&b.passes[0]));
    Ok(crossings)
}

/// `k = Σ (s − 1)` over the crossings.
pub fn intersection_count(crossings: &[Crossing]) -> usize {
    crossings.iter().map(|c| c.multiplicity - 1).sum()
}

/// Sub-arc of the loop between two consecutive passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    /// Crossing index at either end.
    pub start: usize,
    pub end: usize,
    pub polyline: Vec<PointUV>,
}

/// A bounded face: its boundary as a sequence of `(edge, forward)` steps,
/// traversed counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    pub boundary: Vec<(usize, bool)>,
    /// Boundary polygon without a repeated endpoint.
    pub polygon: Vec<PointUV>,
    pub signed_area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrangement {
    pub curve: ImmersedLoop,
    pub vertices: Vec<Crossing>,
    pub edges: Vec<Edge>,
    /// Bounded faces.
    pub faces: Vec<Face>,
    /// The unbounded face, traversed clockwise; `None` when there are no
    /// crossings.
    pub outer: Option<Face>,
    pub k: usize,
}

impl Arrangement {
    /// `ℓ − e + f` over the crossings, sub-arcs and bounded faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Number of sub-arc ends at vertex `v`, which is twice its multiplicity.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.start == v) as usize + (e.end == v) as usize)
            .sum()
    }
}

fn edge_polyline(lp: &ImmersedLoop, from: (f64, PointUV), to: (f64, PointUV)) -> Vec<PointUV> {
    let n = lp.len();
    let end = if to.0 > from.0 { to.0 } else { to.0 + n as f64 };
    let mut pts = vec![from.1];
    // polyline vertices strictly between the two passes
    for idx in (from.0.floor() as usize + 1)..(end.ceil() as usize) {
        if (idx as f64) < end {
            pts.push(lp.points[idx % n]);
        }
    }
    pts.push(to.1);
    pts
}

/// Direction leaving the start of `pts`, ignoring points within `tol`.
fn leaving_angle(pts: &[PointUV], tol: f64) -> f64 {
    let p = pts[0];
    let q = pts[1..]
        .iter()
        .find(|q| q.dist(&p) > tol)
        .copied()
        .unwrap_or(*pts.last().expect("non-empty"));
    (q.v - p.v).atan2(q.u - p.u)
}

/// Planar subdivision induced by the loop.
pub fn build_arrangement(lp: &ImmersedLoop) -> Result<Arrangement> {
    let crossings = self_intersections(lp)?;
    let k = intersection_count(&crossings);
    if crossings.is_empty() {
        let mut polygon = lp.points.clone();
        let area = signed_area(&polygon);
        if area < 0.0 {
            polygon.reverse();
        }
        return Ok(Arrangement {
            curve: lp.clone(),
            vertices: Vec::new(),
            edges: Vec::new(),
            faces: vec![Face {
                boundary: Vec::new(),
                polygon,
                signed_area: area.abs(),
            }],
            outer: None,
            k,
        });
    }

    // all passes in loop order
    let mut events: Vec<(f64, usize)> = crossings
        .iter()
        .enumerate()
        .flat_map(|(v, c)| c.passes.iter().map(move |&p| (p, v)))
        .collect();
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let e_count = events.len();
    let mut edges = Vec::with_capacity(e_count);
    for i in 0..e_count {
        let (pa, va) = events[i];
        let (pb, vb) = events[(i + 1) % e_count];
        edges.push(Edge {
            start: va,
            end: vb,
            polyline: edge_polyline(lp, (pa, crossings[va].point), (pb, crossings[vb].point)),
        });
    }

    // half-edge h = 2e (forward) or 2e + 1 (backward)
    let tol = 10.0 * lp.eps;
    let origin = |h: usize| {
        let e = &edges[h / 2];
        if h % 2 == 0 {
            e.start
        } else {
            e.end
        }
    };
    let angle = |h: usize| {
        let e = &edges[h / 2];
        if h % 2 == 0 {
            leaving_angle(&e.polyline, tol)
        } else {
            let rev: Vec<PointUV> = e.polyline.iter().rev().copied().collect();
            leaving_angle(&rev, tol)
        }
    };
    let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); crossings.len()];
    for h in 0..2 * e_count {
        around[origin(h)].push((angle(h), h));
    }
    let mut slot = vec![(0usize, 0usize); 2 * e_count];
    for (v, list) in around.iter_mut().enumerate() {
        list.sort_by(|a, b| match a.0.total_cmp(&b.0) {
            Ordering::Equal => (a.1 / 2).cmp(&(b.1 / 2)).then(a.1.cmp(&b.1)),
            o => o,
        });
        for (i, &(_, h)) in list.iter().enumerate() {
            slot[h] = (v, i);
        }
    }
    // next(h): at the head of h, the outgoing half-edge clockwise from twin(h)
    let next = |h: usize| {
        let (v, i) = slot[h ^ 1];
        let list = &around[v];
        list[(i + list.len() - 1) % list.len()].1
    };

    let mut seen = vec![false; 2 * e_count];
    let mut cycles = Vec::new();
    for start in 0..2 * e_count {
        if seen[start] {
            continue;
        }
        let mut boundary = Vec::new();
        let mut polygon: Vec<PointUV> = Vec::new();
        let mut h = start;
        loop {
            seen[h] = true;
            boundary.push((h / 2, h % 2 == 0));
            let e = &edges[h / 2];
            if h % 2 == 0 {
                polygon.extend_from_slice(&e.polyline[..e.polyline.len() - 1]);
            } else {
                polygon.extend(e.polyline.iter().rev().take(e.polyline.len() - 1));
            }
            h = next(h);
            if h == start {
                break;
            }
            if boundary.len() > 2 * e_count {
                return Err(Error::Inconsistency("face walk did not close".into()));
            }
        }
        let area = signed_area(&polygon);
        cycles.push(Face {
            boundary,
            polygon,
            signed_area: area,
        });
    }
    let (outer, faces): (Vec<Face>, Vec<Face>) =
        cycles.into_iter().partition(|f| f.signed_area < 0.0);
    if outer.len() != 1 {
        return Err(Error::Inconsistency(format!(
            "expected one unbounded face, found {}",
            outer.len()
        )));
    }
    let arr = Arrangement {
        curve: lp.clone(),
        vertices: crossings,
        edges,
        faces,
        outer: outer.into_iter().next(),
        k,
    };
    if arr.faces.len() != k + 1 || arr.euler_characteristic() != 1 {
        return Err(Error::Inconsistency(format!(
            "{} bounded faces and Euler characteristic {} for k = {k}",
            arr.faces.len(),
            arr.euler_characteristic()
        )));
    }
    Ok(arr)
}

fn edge_lengths(arr: &Arrangement, metric: &dyn SurfaceMetric) -> Result<Vec<f64>> {
    arr.edges
        .iter()
        .map(|e| metric_length(metric, &e.polyline))
        .collect()
}

/// Metric length of the boundary of each bounded face.
pub fn domain_boundary_lengths(arr: &Arrangement, metric: &dyn SurfaceMetric) -> Result<Vec<f64>> {
    if arr.edges.is_empty() {
        return Ok(vec![metric_length(metric, &arr.curve.closed_polyline())?]);
    }
    let lengths = edge_lengths(arr, metric)?;
    Ok(arr
        .faces
        .iter()
        .map(|f| f.boundary.iter().map(|&(e, _)| lengths[e]).sum())
        .collect())
}

/// A corner of a bounded face.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corner {
    pub face: usize,
    pub point: PointUV,
    /// Angle inside the face, in `(0, 2π)`.
    pub angle: f64,
    /// Whether the corner sits at a self-intersection.
    pub at_crossing: bool,
}

fn corners_of(
    face_index: usize,
    face: &Face,
    crossings: &[PointUV],
    scale: &dyn Fn(PointUV, (f64, f64)) -> (f64, f64),
) -> Vec<Corner> {
    let poly = &face.polygon;
    let n = poly.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (prev, here, next) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
        let din = scale(here, sub(here, prev));
        let dout = scale(here, sub(next, here));
        let turn = cross(din, dout).atan2(din.0 * dout.0 + din.1 * dout.1);
        out.push(Corner {
            face: face_index,
            point: here,
            angle: PI - turn,
            at_crossing: crossings.contains(&here),
        });
    }
    out
}

/// Euclidean interior angle at every corner of every bounded face.
pub fn interior_angles(arr: &Arrangement) -> Vec<Corner> {
    let pts: Vec<PointUV> = arr.vertices.iter().map(|c| c.point).collect();
    let id = |_: PointUV, d: (f64, f64)| d;
    arr.faces
        .iter()
        .enumerate()
        .flat_map(|(i, f)| corners_of(i, f, &pts, &id))
        .collect()
}

/// Interior angles measured in `metric`; directions are rescaled by
/// `(√E, √G)` at each corner.
pub fn interior_angles_metric(arr: &Arrangement, metric: &dyn SurfaceMetric) -> Vec<Corner> {
    let pts: Vec<PointUV> = arr.vertices.iter().map(|c| c.point).collect();
    let scale = |p: PointUV, d: (f64, f64)| {
        let (a, b) = metric.half_log_coefficients(p);
        (a.exp() * d.0, b.exp() * d.1)
    };
    arr.faces
        .iter()
        .enumerate()
        .flat_map(|(i, f)| corners_of(i, f, &pts, &scale))
        .collect()
}

/// Angles of the sectors of the unbounded face, measured outside the loop.
pub fn outer_angles(arr: &Arrangement) -> Vec<Corner> {
    let pts: Vec<PointUV> = arr.vertices.iter().map(|c| c.point).collect();
    let id = |_: PointUV, d: (f64, f64)| d;
    arr.outer
        .as_ref()
        .map(|f| corners_of(usize::MAX, f, &pts, &id))
        .unwrap_or_default()
}

/// Length-bound check for a certified geodesic loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthTheoremReport {
    pub length: f64,
    pub k: usize,
    pub residual: f64,
    pub domain_lengths: Vec<f64>,
    /// `2π/√κ`, the bound for each enclosed domain.
    pub domain_bound: f64,
    /// `(k + 1)·2π/√κ`.
    pub total_bound: f64,
    /// Smallest `domain_bound − |∂Ω|`.
    pub domain_margin: f64,
    pub total_margin: f64,
    pub passed: bool,
}

/// Certifies `lp` as a geodesic of `metric` (residual at most `threshold`)
/// and compares its length and domain boundaries with `2π/√κ`.
pub fn verify_length_theorem(
    lp: &ImmersedLoop,
    metric: &dyn SurfaceMetric,
    kappa: f64,
    threshold: f64,
) -> Result<LengthTheoremReport> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    let residual = geodesic_residual_closed(metric, lp.points())?;
    if !(residual <= threshold) {
        return Err(Error::NotAGeodesic {
            residual,
            threshold,
        });
    }
    let arr = build_arrangement(lp)?;
    let length = metric_length(metric, &lp.closed_polyline())?;
    let domain_lengths = domain_boundary_lengths(&arr, metric)?;
    let domain_bound = TAU / kappa.sqrt();
    let total_bound = (arr.k + 1) as f64 * domain_bound;
    let domain_margin = domain_lengths
        .iter()
        .map(|l| domain_bound - l)
        .fold(f64::INFINITY, f64::min);
    let total_margin = total_bound - length;
    Ok(LengthTheoremReport {
        length,
        k: arr.k,
        residual,
        domain_lengths,
        domain_bound,
        total_bound,
        domain_margin,
        total_margin,
        passed: domain_margin >= 0.0 && total_margin >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::FlatMetric;

    fn square() -> ImmersedLoop {
        let pts = vec![
            PointUV::new(0.0, 0.0),
            PointUV::new(1.0, 0.0),
            PointUV::new(1.0, 1.0),
            PointUV::new(0.0, 1.0),
        ];
        ImmersedLoop::new(pts, None).unwrap()
    }

    fn bowtie() -> ImmersedLoop {
        let pts = vec![
            PointUV::new(0.0, 0.0),
            PointUV::new(2.0, 1.0),
            PointUV::new(2.0, 0.0),
            PointUV::new(0.0, 1.0),
        ];
        ImmersedLoop::new(pts, None).unwrap()
    }

    #[test]
    fn rejects_degenerate_loops() {
        let p = PointUV::new(0.0, 0.0);
        let q = PointUV::new(1.0, 0.0);
        assert!(ImmersedLoop::new(vec![p, q], None).is_err());
        assert!(ImmersedLoop::new(vec![p, q, q, PointUV::new(0.0, 1.0)], None).is_err());
        assert!(ImmersedLoop::new(vec![p, q, PointUV::new(0.0, 1.0), p], None).is_err());
    }

    #[test]
    fn convex_loop_has_one_face() {
        let arr = build_arrangement(&square()).unwrap();
        assert_eq!(arr.k, 0);
        assert_eq!(arr.faces.len(), 1);
        assert_eq!(arr.euler_characteristic(), 1);
        assert!((arr.faces[0].signed_area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bowtie_splits_into_two_triangles() {
        let arr = build_arrangement(&bowtie()).unwrap();
        assert_eq!(arr.k, 1);
        assert_eq!(arr.vertices[0].multiplicity, 2);
        assert!(arr.vertices[0].point.dist(&PointUV::new(1.0, 0.5)) < 1e-15);
        assert_eq!(arr.edges.len(), 2);
        assert_eq!(arr.faces.len(), 2);
        for f in &arr.faces {
            assert!((f.signed_area - 0.5).abs() < 1e-14);
        }
        assert_eq!(arr.vertex_degree(0), 4);
    }

    #[test]
    fn bowtie_boundary_lengths_sum_to_perimeter() {
        let lp = bowtie();
        let arr = build_arrangement(&lp).unwrap();
        let lens = domain_boundary_lengths(&arr, &FlatMetric::plane()).unwrap();
        let total = metric_length(&FlatMetric::plane(), &lp.closed_polyline()).unwrap();
        assert!((lens.iter().sum::<f64>() - total).abs() < 1e-12);
        assert!((lens[0] - lens[1]).abs() < 1e-12);
    }

    #[test]
    fn overlapping_segments_are_not_transverse() {
        let pts = vec![
            PointUV::new(0.0, 0.0),
            PointUV::new(2.0, 0.0),
            PointUV::new(2.0, 1.0),
            PointUV::new(1.0, 1.0),
            PointUV::new(1.0, 0.0),
            PointUV::new(3.0, 0.0),
            PointUV::new(3.0, -1.0),
        ];
        let lp = ImmersedLoop::new(pts, None).unwrap();
        assert!(matches!(
            self_intersections(&lp),
            Err(Error::Transversality { .. })
        ));
    }

    #[test]
    fn touching_without_crossing_is_rejected() {
        // the vertex (1, 0) touches the bottom edge from above
        let pts = vec![
            PointUV::new(0.0, 0.0),
            PointUV::new(2.0, 0.0),
            PointUV::new(2.0, 2.0),
            PointUV::new(1.5, 2.0),
            PointUV::new(1.0, 0.0),
            PointUV::new(0.5, 2.0),
            PointUV::new(0.0, 2.0),
        ];
        let lp = ImmersedLoop::new(pts, None).unwrap();
        assert!(matches!(
            self_intersections(&lp),
            Err(Error::Transversality { .. })
        ));
    }

    #[test]
    fn square_angles_are_right() {
        let arr = build_arrangement(&square().reversed()).unwrap();
        let corners = interior_angles(&arr);
        assert_eq!(corners.len(), 4);
        for c in corners {
            assert!((c.angle - PI / 2.0).abs() < 1e-15);
            assert!(!c.at_crossing);
        }
    }

    #[test]
    fn crossing_sectors_fill_the_full_turn() {
        let arr = build_arrangement(&bowtie()).unwrap();
        let inner: Vec<f64> = interior_angles(&arr)
            .iter()
            .filter(|c| c.at_crossing)
            .map(|c| c.angle)
            .collect();
        let outer: Vec<f64> = outer_angles(&arr)
            .iter()
            .filter(|c| c.at_crossing)
            .map(|c| c.angle)
            .collect();
        assert_eq!(inner.len() + outer.len(), 4);
        assert!(inner.iter().all(|&a| a < PI));
        let total: f64 = inner.iter().chain(&outer).sum();
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn metric_angles_see_anisotropy() {
        let arr = build_arrangement(&square()).unwrap();
        let stretched = crate::metrics::CustomMetric::new(
            crate::metrics::ParameterDomain::PLANE,
            "stretch",
            |_| (2f64.ln(), 0.0),
        );
        // right angles stay right under a diagonal rescaling
        for c in interior_angles_metric(&arr, &stretched) {
            assert!((c.angle - PI / 2.0).abs() < 1e-15);
        }
        let tri = ImmersedLoop::new(
            vec![
                PointUV::new(0.0, 0.0),
                PointUV::new(1.0, 0.0),
                PointUV::new(0.0, 1.0),
            ],
            None,
        )
        .unwrap();
        let arr = build_arrangement(&tri).unwrap();
        let angles: Vec<f64> = interior_angles_metric(&arr, &stretched)
            .iter()
            .map(|c| c.angle)
            .collect();
        // the corner at (1, 0) sees legs (−2, 0) and (−2, 1)
        assert!((angles[1] - 0.5f64.atan()).abs() < 1e-14);
    }
}
