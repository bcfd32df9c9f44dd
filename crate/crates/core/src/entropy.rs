//! Gaussian area functional and entropy of shrinker profiles, computed both
//! from the reduced length and by direct quadrature.

use std::f64::consts::PI;

use serde::Serialize;

use crate::arrangement::{build_arrangement, ImmersedLoop};
use crate::error::{domain, Error, Result};
use crate::foliation::unit_sphere_volume;
use crate::geodesics::{
    geodesic_residual, geodesic_residual_closed, shrinker_entropy_from_length, ClosedGeodesic,
    ShrinkerContext,
};
use crate::metrics::{segment_length, PointUV, SurfaceMetric};
use crate::quadrature::integrate_adaptive;

/// Default certification threshold for profile curves.
pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 1e-5;

/// Default relative tolerance between the two entropy evaluations.
pub const DEFAULT_AGREEMENT_TOL: f64 = 1e-6;

/// Points closer than this to the edge of the parameter domain are left out
/// of the certification of open profiles.
pub const OPEN_PROFILE_MARGIN: f64 = 1e-6;

/// A profile polyline in the parameter domain of its reduction. Open
/// profiles may end on the domain boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub points: Vec<PointUV>,
    pub closed: bool,
    pub dimension: u32,
}

impl ProfileCurve {
    /// Checks that interior points have `r > 0` (second coordinate).
    pub fn new(points: Vec<PointUV>, closed: bool, dimension: u32) -> Result<Self> {
        if dimension < 1 {
            return domain("profile dimension must be at least 1");
        }
        if points.len() < 2 {
            return Err(Error::DegenerateInput(format!(
                "a profile needs at least two points, got {}",
                points.len()
            )));
        }
        let last = points.len() - 1;
        for (i, p) in points.iter().enumerate() {
            let endpoint = !closed && (i == 0 || i == last);
            if !(p.u.is_finite() && p.v.is_finite()) || p.v < 0.0 || (p.v == 0.0 && !endpoint) {
                return domain(format!("profile point {i} = ({}, {}) is not in r > 0", p.u, p.v));
            }
        }
        Ok(Self {
            points,
            closed,
            dimension,
        })
    }

    /// Segments of the curve, including the closing one for closed profiles.
    fn segments(&self) -> impl Iterator<Item = (PointUV, PointUV)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }
}

/// `F_{x0,t0}` of the rotation hypersurface of `profile` about the `x` axis,
/// for a center on that axis:
/// `(4π t0)^{−n/2} ω_{n−1} ∫ r^{n−1} exp(−((x − x0)² + r²)/(4 t0)) ds`.
pub fn f_functional_axis(profile: &ProfileCurve, x0: f64, t0: f64) -> Result<f64> {
    if !(t0 > 0.0 && t0.is_finite()) {
        return domain(format!("t0 must be positive, got {t0}"));
    }
    let n = profile.dimension;
    let power = (n - 1) as i32;
    let mut total = 0.0;
    for (p, q) in profile.segments() {
        let (du, dv) = (q.u - p.u, q.v - p.v);
        let len = du.hypot(dv);
        let f = |t: f64| {
            let (x, r) = (p.u + t * du, p.v + t * dv);
            r.powi(power) * (-((x - x0).powi(2) + r * r) / (4.0 * t0)).exp()
        };
        total += len * integrate_adaptive(0.0, 1.0, 1e-12, 30, f);
    }
    let omega = unit_sphere_volume(n - 1);
    Ok((4.0 * PI * t0).powf(-(n as f64) / 2.0) * omega * total)
}

/// `ω_n (n/2π)^{n/2} e^{−n/2}`, the entropy of the round shrinking sphere.
pub fn sphere_entropy_closed_form(n: i64) -> Result<f64> {
    if n < 1 {
        return domain(format!("sphere entropy needs n ≥ 1, got {n}"));
    }
    let nf = n as f64;
    Ok(unit_sphere_volume(n as u32) * (nf / (2.0 * PI)).powf(nf / 2.0) * (-nf / 2.0).exp())
}

/// Polyline of the round shrinker profile, the semicircle of radius `√(2n)`
/// in the `(x, r)` half-plane, from `(√(2n), 0)` to `(−√(2n), 0)`.
pub fn sphere_profile(n: u32, segments: usize) -> Result<ProfileCurve> {
    let radius = (2.0 * n as f64).sqrt();
    let points = (0..=segments)
        .map(|i| {
            let th = PI * i as f64 / segments as f64;
            let (s, c) = th.sin_cos();
            let r = if i == 0 || i == segments { 0.0 } else { radius * s };
            PointUV::new(radius * c, r)
        })
        .collect();
    ProfileCurve::new(points, false, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    LengthFormula,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyOptions {
    pub residual_threshold: f64,
    pub agreement_tol: f64,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        Self {
            residual_threshold: DEFAULT_RESIDUAL_THRESHOLD,
            agreement_tol: DEFAULT_AGREEMENT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub context: ShrinkerContext,
    /// Reduced length of the profile.
    pub length: f64,
    /// Entropy from the length formula.
    pub lambda: f64,
    /// Entropy by direct quadrature (rotational profiles only).
    pub lambda_quadrature: Option<f64>,
    pub relative_difference: Option<f64>,
    pub k: usize,
    /// `(k + 1)` times the entropy bound of the context.
    pub bound: f64,
    pub margin: f64,
    pub residual: f64,
    pub methods: Vec<EntropyMethod>,
}

/// Geodesic residual of a profile. Open profiles are checked only at points
/// at least [`OPEN_PROFILE_MARGIN`] inside the domain.
pub fn profile_residual(metric: &dyn SurfaceMetric, profile: &ProfileCurve) -> Result<f64> {
    if profile.closed {
        return geodesic_residual_closed(metric, &profile.points);
    }
    let dom = metric.domain();
    let inner: Vec<PointUV> = profile
        .points
        .iter()
        .copied()
        .filter(|p| dom.contains(*p) && dom.distance_to_boundary(*p) >= OPEN_PROFILE_MARGIN)
        .collect();
    geodesic_residual(metric, &inner)
}

/// Self-intersection count of a profile. Open profiles are doubled across
/// the edge they end on (the rotation axis), and half the count is reported.
pub fn profile_k(profile: &ProfileCurve) -> Result<usize> {
    if profile.closed {
        return Ok(build_arrangement(&ImmersedLoop::new(profile.points.clone(), None)?)?.k);
    }
    let pts = &profile.points;
    let mut doubled: Vec<PointUV> = pts.clone();
    let (first, last) = (pts[0].v == 0.0, pts[pts.len() - 1].v == 0.0);
    let inner_end = if last { pts.len() - 1 } else { pts.len() };
    let inner_start = if first { 1 } else { 0 };
    doubled.extend(
        pts[inner_start..inner_end]
            .iter()
            .rev()
            .map(|p| PointUV::new(p.u, -p.v)),
    );
    Ok(build_arrangement(&ImmersedLoop::new(doubled, None)?)?.k / 2)
}

fn profile_length(metric: &dyn SurfaceMetric, profile: &ProfileCurve) -> Result<f64> {
    let dom = metric.domain();
    for (i, p) in profile.points.iter().enumerate() {
        let edge = !profile.closed && (i == 0 || i == profile.points.len() - 1);
        if !edge {
            dom.check(*p, 0.0)?;
        }
    }
    Ok(profile.segments().map(|(p, q)| segment_length(metric, p, q)).sum())
}

/// Entropy of the shrinker with profile `profile`: certifies the profile as
/// a geodesic, applies the length formula and, for rotational profiles,
/// cross-checks against direct quadrature of `F_{0,1}`.
pub fn entropy_of_shrinker(
    profile: &ProfileCurve,
    context: ShrinkerContext,
    options: &EntropyOptions,
) -> Result<EntropyReport> {
    let metric = context.metric()?;
    let length = profile_length(metric.as_ref(), profile)?;
    report(profile, context, options, metric.as_ref(), length)
}

/// As [`entropy_of_shrinker`] for a shot loop, using the integrated
/// arclength for the length formula.
pub fn entropy_of_closed_geodesic(
    geodesic: &ClosedGeodesic,
    context: ShrinkerContext,
    options: &EntropyOptions,
) -> Result<EntropyReport> {
    let metric = context.metric()?;
    let profile = ProfileCurve::new(geodesic.polyline(), true, context.dimension())?;
    report(&profile, context, options, metric.as_ref(), geodesic.length())
}

fn report(
    profile: &ProfileCurve,
    context: ShrinkerContext,
    options: &EntropyOptions,
    metric: &dyn SurfaceMetric,
    length: f64,
) -> Result<EntropyReport> {
    if profile.dimension != context.dimension() {
        return domain(format!(
            "profile dimension {} does not match {context}",
            profile.dimension
        ));
    }
    if !profile.closed && matches!(context, ShrinkerContext::Isoparametric(_)) {
        return domain("isoparametric profiles must be closed");
    }
    let residual = profile_residual(metric, profile)?;
    if !(residual <= options.residual_threshold) {
        return Err(Error::NotAGeodesic {
            residual,
            threshold: options.residual_threshold,
        });
    }
    let lambda = shrinker_entropy_from_length(context, length)?;
    let mut methods = vec![EntropyMethod::LengthFormula];
    let (lambda_quadrature, relative_difference) = match context {
        ShrinkerContext::Rotational { .. } => {
            let q = f_functional_axis(profile, 0.0, 1.0)?;
            let rel = (lambda - q).abs() / lambda;
            if !(rel <= options.agreement_tol) {
                return Err(Error::Inconsistency(format!(
                    "length formula gives {lambda}, quadrature gives {q} (relative difference {rel:e})"
                )));
            }
            methods.push(EntropyMethod::Quadrature);
            (Some(q), Some(rel))
        }
        ShrinkerContext::Isoparametric(_) => (None, None),
    };
    let k = profile_k(profile)?;
    let bound = (k + 1) as f64 * context.entropy_bound()?;
    Ok(EntropyReport {
        context,
        length,
        lambda,
        lambda_quadrature,
        relative_difference,
        k,
        bound,
        margin: bound - lambda,
        residual,
        methods,
    })
}
