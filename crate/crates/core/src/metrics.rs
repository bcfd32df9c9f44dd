//! Diagonal Riemannian metrics `E du² + G dv²` on open parameter rectangles.
//!
//! All derivative information is carried in terms of the half-logarithms
//! `a = ½ ln E` and `b = ½ ln G`. In these variables the Brioschi formula for
//! a diagonal metric reads
//!
//! ```text
//! K = −[ e^{−2a} (b_uu + b_u² − a_u b_u) + e^{−2b} (a_vv + a_v² − a_v b_v) ]
//! ```
//!
//! and the conformal factors, which span many orders of magnitude near the
//! boundary of the reduction domains, only enter through smooth logarithms.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::foliation::{fiber_constant, FoliationType};
use crate::quadrature::gl10;

/// Evaluation closer than this to the edge of a parameter domain is rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-8;

/// Default finite-difference step for curvature and Christoffel symbols.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointUV {
    pub u: f64,
    pub v: f64,
}

impl PointUV {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn dist(&self, other: &PointUV) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentUV {
    pub du: f64,
    pub dv: f64,
}

/// Open rectangle `(u_min, u_max) × (v_min, v_max)`; bounds may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterDomain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl ParameterDomain {
    pub const PLANE: ParameterDomain = ParameterDomain {
        u_min: f64::NEG_INFINITY,
        u_max: f64::INFINITY,
        v_min: f64::NEG_INFINITY,
        v_max: f64::INFINITY,
    };

    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Self {
        Self {
            u_min,
            u_max,
            v_min,
            v_max,
        }
    }

    /// Euclidean distance from `p` to the complement of the rectangle
    /// (negative outside).
    pub fn distance_to_boundary(&self, p: PointUV) -> f64 {
        (p.u - self.u_min)
            .min(self.u_max - p.u)
            .min(p.v - self.v_min)
            .min(self.v_max - p.v)
    }

    pub fn contains(&self, p: PointUV) -> bool {
        p.u.is_finite() && p.v.is_finite() && self.distance_to_boundary(p) > 0.0
    }

    /// Accepts `p` only if it is at least `margin` away from the boundary.
    pub fn check(&self, p: PointUV, margin: f64) -> Result<()> {
        if p.u.is_finite() && p.v.is_finite() && self.distance_to_boundary(p) >= margin {
            Ok(())
        } else {
            domain(format!(
                "point ({}, {}) is not inside {} with margin {margin:e}",
                p.u, p.v, self
            ))
        }
    }
}

impl fmt::Display for ParameterDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) × ({}, {})",
            self.u_min, self.u_max, self.v_min, self.v_max
        )
    }
}

/// Half-log coefficients `a = ½ ln E`, `b = ½ ln G` and the partials needed
/// for curvature (`a_vv`, `b_uu`) and Christoffel symbols (first partials).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJet {
    pub a: f64,
    pub b: f64,
    pub a_u: f64,
    pub a_v: f64,
    pub b_u: f64,
    pub b_v: f64,
    pub a_vv: f64,
    pub b_uu: f64,
}

/// A smooth diagonal Riemannian metric on an open parameter rectangle.
pub trait SurfaceMetric: Send + Sync {
    fn domain(&self) -> ParameterDomain;

    /// `(½ ln E, ½ ln G)` at `p`; callers guarantee `p` lies in the domain.
    fn half_log_coefficients(&self, p: PointUV) -> (f64, f64);

    /// Analytic partials, if the metric knows them.
    fn analytic_jet(&self, _p: PointUV) -> Option<LogJet> {
        None
    }

    /// Short human-readable label used in reports.
    fn label(&self) -> String;

    /// `(E, G)` at `p`.
    fn coefficients(&self, p: PointUV) -> (f64, f64) {
        let (a, b) = self.half_log_coefficients(p);
        ((2.0 * a).exp(), (2.0 * b).exp())
    }
}

/// Derivative information for `p`, analytic when available.
pub fn log_jet(metric: &dyn SurfaceMetric, p: PointUV, step: f64) -> Result<LogJet> {
    metric.domain().check(p, BOUNDARY_MARGIN)?;
    match metric.analytic_jet(p) {
        Some(jet) => Ok(jet),
        None => finite_difference_jet(metric, p, step),
    }
}

/// Central differences on the half-log coefficients with one level of
/// Richardson extrapolation (steps `h` and `2h`).
pub fn finite_difference_jet(metric: &dyn SurfaceMetric, p: PointUV, step: f64) -> Result<LogJet> {
    if !(step > 0.0 && step.is_finite()) {
        return domain(format!("finite-difference step must be positive, got {step}"));
    }
    let dom = metric.domain();
    dom.check(p, BOUNDARY_MARGIN)?;
    if dom.distance_to_boundary(p) < 2.0 * step + BOUNDARY_MARGIN {
        return domain(format!(
            "finite-difference neighbourhood of ({}, {}) with step {step:e} leaves {dom}",
            p.u, p.v
        ));
    }
    let f = |du: f64, dv: f64| metric.half_log_coefficients(PointUV::new(p.u + du, p.v + dv));
    let (a0, b0) = f(0.0, 0.0);
    let h = step;
    let (a_up1, b_up1) = f(h, 0.0);
    let (a_um1, b_um1) = f(-h, 0.0);
    let (a_up2, b_up2) = f(2.0 * h, 0.0);
    let (a_um2, b_um2) = f(-2.0 * h, 0.0);
    let (a_vp1, b_vp1) = f(0.0, h);
    let (a_vm1, b_vm1) = f(0.0, -h);
    let (a_vp2, b_vp2) = f(0.0, 2.0 * h);
    let (a_vm2, b_vm2) = f(0.0, -2.0 * h);

    let first = |p1: f64, m1: f64, p2: f64, m2: f64| {
        let d1 = (p1 - m1) / (2.0 * h);
        let d2 = (p2 - m2) / (4.0 * h);
        (4.0 * d1 - d2) / 3.0
    };
    let second = |p1: f64, m1: f64, p2: f64, m2: f64, c: f64| {
        let s1 = (p1 - 2.0 * c + m1) / (h * h);
        let s2 = (p2 - 2.0 * c + m2) / (4.0 * h * h);
        (4.0 * s1 - s2) / 3.0
    };
    Ok(LogJet {
        a: a0,
        b: b0,
        a_u: first(a_up1, a_um1, a_up2, a_um2),
        a_v: first(a_vp1, a_vm1, a_vp2, a_vm2),
        b_u: first(b_up1, b_um1, b_up2, b_um2),
        b_v: first(b_vp1, b_vm1, b_vp2, b_vm2),
        a_vv: second(a_vp1, a_vm1, a_vp2, a_vm2, a0),
        b_uu: second(b_up1, b_um1, b_up2, b_um2, b0),
    })
}

/// Brioschi curvature from a jet.
pub fn curvature_from_jet(j: &LogJet) -> f64 {
    let u_part = (-2.0 * j.a).exp() * (j.b_uu + j.b_u * j.b_u - j.a_u * j.b_u);
    let v_part = (-2.0 * j.b).exp() * (j.a_vv + j.a_v * j.a_v - j.a_v * j.b_v);
    -(u_part + v_part)
}

/// Gaussian curvature by the Brioschi formula; analytic partials are used
/// when the metric supplies them, otherwise finite differences with `step`.
pub fn gauss_curvature_numeric(metric: &dyn SurfaceMetric, p: PointUV, step: f64) -> Result<f64> {
    Ok(curvature_from_jet(&log_jet(metric, p, step)?))
}

/// Gaussian curvature by the Brioschi formula with finite-difference partials
/// even when analytic ones exist.
pub fn gauss_curvature_fd(metric: &dyn SurfaceMetric, p: PointUV, step: f64) -> Result<f64> {
    Ok(curvature_from_jet(&finite_difference_jet(metric, p, step)?))
}

/// The Euclidean metric on a rectangle.
#[derive(Debug, Clone, Copy)]
pub struct FlatMetric {
    pub domain: ParameterDomain,
}

impl FlatMetric {
    pub fn plane() -> Self {
        Self {
            domain: ParameterDomain::PLANE,
        }
    }
}

impl SurfaceMetric for FlatMetric {
    fn domain(&self) -> ParameterDomain {
        self.domain
    }

    fn half_log_coefficients(&self, _p: PointUV) -> (f64, f64) {
        (0.0, 0.0)
    }

    fn analytic_jet(&self, _p: PointUV) -> Option<LogJet> {
        Some(LogJet {
            a: 0.0,
            b: 0.0,
            a_u: 0.0,
            a_v: 0.0,
            b_u: 0.0,
            b_v: 0.0,
            a_vv: 0.0,
            b_uu: 0.0,
        })
    }

    fn label(&self) -> String {
        "flat".into()
    }
}

/// Polar patch of the unit sphere: `du² + sin²u dv²` on `(0, π) × (−π, π)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpherePolarPatch;

impl SurfaceMetric for SpherePolarPatch {
    fn domain(&self) -> ParameterDomain {
        ParameterDomain::new(0.0, PI, -PI, PI)
    }

    fn half_log_coefficients(&self, p: PointUV) -> (f64, f64) {
        (0.0, p.u.sin().ln())
    }

    fn analytic_jet(&self, p: PointUV) -> Option<LogJet> {
        let cot = p.u.cos() / p.u.sin();
        Some(LogJet {
            a: 0.0,
            b: p.u.sin().ln(),
            a_u: 0.0,
            a_v: 0.0,
            b_u: cot,
            b_v: 0.0,
            a_vv: 0.0,
            b_uu: -1.0 / p.u.sin().powi(2),
        })
    }

    fn label(&self) -> String {
        "unit sphere (polar patch)".into()
    }
}

type HalfLogFn = dyn Fn(PointUV) -> (f64, f64) + Send + Sync;

/// A metric given by a closure returning `(½ ln E, ½ ln G)`; partials are
/// always taken by finite differences.
pub struct CustomMetric {
    domain: ParameterDomain,
    label: String,
    half_logs: Box<HalfLogFn>,
}

impl CustomMetric {
    pub fn new<F>(domain: ParameterDomain, label: impl Into<String>, half_logs: F) -> Self
    where
        F: Fn(PointUV) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            domain,
            label: label.into(),
            half_logs: Box::new(half_logs),
        }
    }

    /// Builds from the coefficient functions `E` and `G` themselves.
    pub fn from_coefficients<E, G>(domain: ParameterDomain, label: impl Into<String>, e: E, g: G) -> Self
    where
        E: Fn(PointUV) -> f64 + Send + Sync + 'static,
        G: Fn(PointUV) -> f64 + Send + Sync + 'static,
    {
        Self::new(domain, label, move |p| (0.5 * e(p).ln(), 0.5 * g(p).ln()))
    }
}

impl SurfaceMetric for CustomMetric {
    fn domain(&self) -> ParameterDomain {
        self.domain
    }

    fn half_log_coefficients(&self, p: PointUV) -> (f64, f64) {
        (self.half_logs)(p)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `g_A = r^{2(n−1)} e^{−(x²+r²)/2} (dx² + dr²)` on `R × (0, ∞)`, coordinates `(u, v) = (x, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngenentMetric {
    n: u32,
}

impl AngenentMetric {
    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// Radius `√(2(n−1))` of the shrinking cylinder.
    pub fn cylinder_radius(&self) -> f64 {
        (2.0 * (self.n as f64 - 1.0)).sqrt()
    }

    /// Radius `√(2n)` of the shrinking sphere.
    pub fn sphere_radius(&self) -> f64 {
        (2.0 * self.n as f64).sqrt()
    }
}

pub fn angenent_metric(n: i64) -> Result<AngenentMetric> {
    if n < 2 {
        return domain(format!("Angenent metric needs n ≥ 2, got {n}"));
    }
    Ok(AngenentMetric { n: n as u32 })
}

impl SurfaceMetric for AngenentMetric {
    fn domain(&self) -> ParameterDomain {
        ParameterDomain::new(f64::NEG_INFINITY, f64::INFINITY, 0.0, f64::INFINITY)
    }

    fn half_log_coefficients(&self, p: PointUV) -> (f64, f64) {
        let a = (self.n as f64 - 1.0) * p.v.ln() - (p.u * p.u + p.v * p.v) / 4.0;
        (a, a)
    }

    fn analytic_jet(&self, p: PointUV) -> Option<LogJet> {
        let k = self.n as f64 - 1.0;
        let (x, r) = (p.u, p.v);
        let a = k * r.ln() - (x * x + r * r) / 4.0;
        let a_u = -x / 2.0;
        let a_v = k / r - r / 2.0;
        Some(LogJet {
            a,
            b: a,
            a_u,
            a_v,
            b_u: a_u,
            b_v: a_v,
            a_vv: -k / (r * r) - 0.5,
            b_uu: -0.5,
        })
    }

    fn label(&self) -> String {
        format!("angenent(n={})", self.n)
    }
}

/// `h = c²_{g,m} r^{2mg} e^{−r²/2} sin^{2m}(gφ) (dr² + r² dφ²)` on
/// `(0, ∞) × (0, π/g)`, coordinates `(u, v) = (r, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoparametricMetric {
    foliation: FoliationType,
    log_c: f64,
}

impl IsoparametricMetric {
    pub fn foliation(&self) -> FoliationType {
        self.foliation
    }
}

pub fn isoparametric_metric(t: FoliationType) -> IsoparametricMetric {
    IsoparametricMetric {
        foliation: t,
        log_c: fiber_constant(t).ln(),
    }
}

impl SurfaceMetric for IsoparametricMetric {
    fn domain(&self) -> ParameterDomain {
        ParameterDomain::new(0.0, f64::INFINITY, 0.0, self.foliation.strip_width())
    }

    fn half_log_coefficients(&self, p: PointUV) -> (f64, f64) {
        let g = self.foliation.g() as f64;
        let m = self.foliation.m() as f64;
        let a = self.log_c + m * g * p.u.ln() - p.u * p.u / 4.0 + m * (g * p.v).sin().ln();
        (a, a + p.u.ln())
    }

    fn analytic_jet(&self, p: PointUV) -> Option<LogJet> {
        let g = self.foliation.g() as f64;
        let m = self.foliation.m() as f64;
        let (r, phi) = (p.u, p.v);
        let (sin, cos) = (g * phi).sin_cos();
        let a = self.log_c + m * g * r.ln() - r * r / 4.0 + m * sin.ln();
        let a_u = m * g / r - r / 2.0;
        let a_v = m * g * cos / sin;
        Some(LogJet {
            a,
            b: a + r.ln(),
            a_u,
            a_v,
            b_u: a_u + 1.0 / r,
            b_v: a_v,
            a_vv: -m * g * g / (sin * sin),
            b_uu: -m * g / (r * r) - 0.5 - 1.0 / (r * r),
        })
    }

    fn label(&self) -> String {
        format!(
            "isoparametric(g={}, m={})",
            self.foliation.g(),
            self.foliation.m()
        )
    }
}

/// Closed-form Gaussian curvature of the isoparametric metric,
/// `e^{r²/2} / (c² r^{2n} sin^{2m}(gφ)) · (r² + (n−1) g / sin²(gφ))`.
pub fn gauss_curvature_closed_form(t: FoliationType, p: PointUV) -> Result<f64> {
    let metric = isoparametric_metric(t);
    metric.domain().check(p, BOUNDARY_MARGIN)?;
    let (r, phi) = (p.u, p.v);
    let n = t.n() as i32;
    let g = t.g() as f64;
    let sin = (g * phi).sin();
    let c = fiber_constant(t);
    let prefactor = (r * r / 2.0).exp() / (c * c * r.powi(2 * n) * sin.powi(2 * t.m() as i32));
    Ok(prefactor * (r * r + (n as f64 - 1.0) * g / (sin * sin)))
}

/// Metric length of the piecewise-linear curve through `polyline`.
///
/// Each segment is integrated with a 10-point Gauss–Legendre rule and bisected
/// until successive refinements agree to `1e-10` relative.
pub fn metric_length(metric: &dyn SurfaceMetric, polyline: &[PointUV]) -> Result<f64> {
    if polyline.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "a polyline needs at least two points, got {}",
            polyline.len()
        )));
    }
    let dom = metric.domain();
    for p in polyline {
        dom.check(*p, BOUNDARY_MARGIN)?;
    }
    Ok(polyline
        .windows(2)
        .map(|w| segment_length(metric, w[0], w[1]))
        .sum())
}

/// Metric length of the straight segment `p → q`.
pub fn segment_length(metric: &dyn SurfaceMetric, p: PointUV, q: PointUV) -> f64 {
    let (du, dv) = (q.u - p.u, q.v - p.v);
    if du == 0.0 && dv == 0.0 {
        return 0.0;
    }
    let speed = |t: f64| {
        let (e, g) = metric.coefficients(PointUV::new(p.u + t * du, p.v + t * dv));
        (e * du * du + g * dv * dv).sqrt()
    };
    let rule = gl10();
    let whole = rule.integrate(0.0, 1.0, speed);
    refine_segment(&speed, 0.0, 1.0, whole, 24)
}

fn refine_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let rule = gl10();
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 1e-10 * refined.abs() {
        return refined;
    }
    refine_segment(f, a, mid, left, depth - 1) + refine_segment(f, mid, b, right, depth - 1)
}

/// Metric inner product of two tangent vectors at `p`.
pub fn inner_product(metric: &dyn SurfaceMetric, p: PointUV, x: TangentUV, y: TangentUV) -> f64 {
    let (e, g) = metric.coefficients(p);
    e * x.du * y.du + g * x.dv * y.dv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn angenent_coefficients() {
        let g = angenent_metric(2).unwrap();
        let (e, gg) = g.coefficients(PointUV::new(0.0, 1.0));
        assert!(rel(e, (-0.5f64).exp()) < 1e-15);
        assert_eq!(e, gg);
        let (l, _) = g.coefficients(PointUV::new(-0.7, 1.3));
        let (r, _) = g.coefficients(PointUV::new(0.7, 1.3));
        assert_eq!(l, r);
        assert!(angenent_metric(1).is_err());
    }

    #[test]
    fn angenent_is_scaled_rotational_isoparametric_metric() {
        // (x, r) = (ρ cos φ, ρ sin φ) carries c² g_A to h_{1,n−1}.
        for n in 2..=5 {
            let ga = angenent_metric(n).unwrap();
            let t = FoliationType::rotational(n as u32).unwrap();
            let h = isoparametric_metric(t);
            let c = fiber_constant(t);
            for &(rho, phi) in &[(0.5, 0.3), (1.7, 1.2), (3.0, 2.5)] {
                let (eh, gh) = h.coefficients(PointUV::new(rho, phi));
                let (ea, _) = ga.coefficients(PointUV::new(rho * f64::cos(phi), rho * f64::sin(phi)));
                assert!(rel(eh, c * c * ea) < 1e-12);
                assert!(rel(gh, c * c * ea * rho * rho) < 1e-12);
            }
        }
    }

    #[test]
    fn isoparametric_symmetry_and_peak() {
        let t = FoliationType::new(3, 2).unwrap();
        let h = isoparametric_metric(t);
        let w = t.strip_width();
        let (e1, g1) = h.coefficients(PointUV::new(1.3, 0.2));
        let (e2, g2) = h.coefficients(PointUV::new(1.3, w - 0.2));
        assert!(rel(e1, e2) < 1e-12 && rel(g1, g2) < 1e-12);
        let r: f64 = 1.1;
        let (e, _) = h.coefficients(PointUV::new(r, t.symmetry_angle()));
        let c = fiber_constant(t);
        let expected = c * c * r.powi(2 * 6) * (-r * r / 2.0).exp();
        assert!(rel(e, expected) < 1e-12);
    }

    #[test]
    fn isoparametric_conformal_weight_is_fiber_volume() {
        // √E / √(g_S-factor) = c r^{n−1} e^{−(n−1) r²/(4n)} sin^m(gφ), with g_S = e^{−r²/2n}(dr² + r² dφ²).
        let t = FoliationType::new(2, 2).unwrap();
        let h = isoparametric_metric(t);
        let n = t.n() as f64;
        let c = fiber_constant(t);
        for &(r, phi) in &[(0.4, 0.3), (2.2, 0.9), (4.0, 1.4)] {
            let (e, _) = h.coefficients(PointUV::new(r, phi));
            let weight = (e / (-r * r / (2.0 * n)).exp()).sqrt();
            let expected = c
                * r.powf(n - 1.0)
                * (-(n - 1.0) * r * r / (4.0 * n)).exp()
                * (2.0 * phi).sin().powi(2);
            assert!(rel(weight, expected) < 1e-12);
        }
    }

    #[test]
    fn flat_and_sphere_curvature() {
        let flat = FlatMetric::plane();
        let p = PointUV::new(0.3, -2.0);
        assert_eq!(gauss_curvature_numeric(&flat, p, 1e-4).unwrap(), 0.0);
        assert!(gauss_curvature_fd(&flat, p, 1e-4).unwrap().abs() < 1e-12);
        let sphere = SpherePolarPatch;
        for &u in &[0.3, 1.0, 2.5] {
            let q = PointUV::new(u, 0.4);
            assert!(rel(gauss_curvature_numeric(&sphere, q, 1e-4).unwrap(), 1.0) < 1e-14);
            assert!(rel(gauss_curvature_fd(&sphere, q, 1e-4).unwrap(), 1.0) < 1e-7);
        }
    }

    #[test]
    fn closed_form_curvature_matches_fd_and_analytic() {
        let t = FoliationType::new(1, 1).unwrap();
        let h = isoparametric_metric(t);
        let p = PointUV::new(1.5, PI / 3.0);
        let closed = gauss_curvature_closed_form(t, p).unwrap();
        assert!(rel(gauss_curvature_fd(&h, p, 1e-4).unwrap(), closed) < 1e-6);
        assert!(rel(gauss_curvature_numeric(&h, p, 1e-4).unwrap(), closed) < 1e-12);
    }

    #[test]
    fn closed_form_curvature_is_even_in_strip() {
        let t = FoliationType::new(4, 1).unwrap();
        let w = t.strip_width();
        for &(r, phi) in &[(0.3, 0.1), (2.0, 0.5), (3.3, 0.7)] {
            let a = gauss_curvature_closed_form(t, PointUV::new(r, phi)).unwrap();
            let b = gauss_curvature_closed_form(t, PointUV::new(r, w - phi)).unwrap();
            assert!(rel(a, b) < 1e-10);
            assert!(a > 0.0);
        }
        assert!(gauss_curvature_closed_form(t, PointUV::new(0.0, 0.3)).is_err());
        assert!(gauss_curvature_closed_form(t, PointUV::new(1.0, w)).is_err());
    }

    #[test]
    fn fd_rejects_neighbourhood_outside_domain() {
        let g = angenent_metric(2).unwrap();
        assert!(gauss_curvature_fd(&g, PointUV::new(0.0, 1e-4), 1e-4).is_err());
        assert!(gauss_curvature_fd(&g, PointUV::new(0.0, 1e-3), 1e-4).is_ok());
    }

    #[test]
    fn length_of_flat_segment_and_reversal() {
        let flat = FlatMetric::plane();
        let seg = [PointUV::new(0.0, 0.0), PointUV::new(0.6, 0.8)];
        assert!(rel(metric_length(&flat, &seg).unwrap(), 1.0) < 1e-15);
        let g = angenent_metric(3).unwrap();
        let poly: Vec<_> = (0..7).map(|i| PointUV::new(i as f64 * 0.4 - 1.0, 1.0 + 0.1 * i as f64)).collect();
        let mut rev = poly.clone();
        rev.reverse();
        assert!(rel(metric_length(&g, &poly).unwrap(), metric_length(&g, &rev).unwrap()) < 1e-13);
        assert!(matches!(
            metric_length(&g, &poly[..1]),
            Err(Error::DegenerateInput(_))
        ));
        assert!(metric_length(&g, &[PointUV::new(0.0, -1.0), PointUV::new(0.0, 1.0)]).is_err());
    }
}
