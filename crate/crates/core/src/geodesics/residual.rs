//! Certification of sampled curves as geodesics.
//!
//! At each sample the tangent `T` and acceleration `γ''` come from five-point
//! finite differences in the cumulative chord parameter. The covariant
//! acceleration `A = γ'' + Γ(T, T)` is split against `T` in the metric and
//! the normal part is reported as a coordinate curvature `|A⊥| / |T|²`
//! (Euclidean norms), which is independent of the parametrization.

use crate::error::{Error, Result};
use crate::metrics::{log_jet, PointUV, SurfaceMetric, BOUNDARY_MARGIN, DEFAULT_FD_STEP};

use super::christoffel_from_jet;

const STENCIL: usize = 5;

/// Fornberg weights for the first and second derivative at `x0`.
fn fornberg(x0: f64, x: &[f64; STENCIL]) -> ([f64; STENCIL], [f64; STENCIL]) {
    // c[k][j]: weight of node j for the k-th derivative
    let mut c = [[0.0; STENCIL]; 3];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    for i in 1..STENCIL {
        let mn = i.min(2);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    (c[1], c[2])
}

fn pointwise_defect(
    metric: &dyn SurfaceMetric,
    pts: &[PointUV; STENCIL],
    t: &[f64; STENCIL],
) -> Result<f64> {
    let (w1, w2) = fornberg(t[2], t);
    let (mut du, mut dv, mut ddu, mut ddv) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..STENCIL {
        du += w1[j] * pts[j].u;
        dv += w1[j] * pts[j].v;
        ddu += w2[j] * pts[j].u;
        ddv += w2[j] * pts[j].v;
    }
    let jet = log_jet(metric, pts[2], DEFAULT_FD_STEP)?;
    let c = christoffel_from_jet(&jet);
    let au = ddu + c.u_uu * du * du + 2.0 * c.u_uv * du * dv + c.u_vv * dv * dv;
    let av = ddv + c.v_uu * du * du + 2.0 * c.v_uv * du * dv + c.v_vv * dv * dv;
    let (e, g) = ((2.0 * jet.a).exp(), (2.0 * jet.b).exp());
    let tt = e * du * du + g * dv * dv;
    let at = e * au * du + g * av * dv;
    let (nu, nv) = (au - at / tt * du, av - at / tt * dv);
    Ok(nu.hypot(nv) / (du * du + dv * dv))
}

fn check_points(metric: &dyn SurfaceMetric, polyline: &[PointUV]) -> Result<()> {
    if polyline.len() < STENCIL {
        return Err(Error::DegenerateInput(format!(
            "geodesic residual needs at least {STENCIL} points, got {}",
            polyline.len()
        )));
    }
    let dom = metric.domain();
    for p in polyline {
        dom.check(*p, BOUNDARY_MARGIN)?;
    }
    for w in polyline.windows(2) {
        if w[0].dist(&w[1]) == 0.0 {
            return Err(Error::DegenerateInput("repeated consecutive points".into()));
        }
    }
    Ok(())
}

/// Largest geodesic-curvature defect over the interior samples of an open
/// polyline (the two samples at each end lack a centred stencil).
pub fn geodesic_residual(metric: &dyn SurfaceMetric, polyline: &[PointUV]) -> Result<f64> {
    check_points(metric, polyline)?;
    let mut t = Vec::with_capacity(polyline.len());
    t.push(0.0);
    for w in polyline.windows(2) {
        let last = *t.last().expect("non-empty");
        t.push(last + w[0].dist(&w[1]));
    }
    let mut worst: f64 = 0.0;
    for i in 2..polyline.len() - 2 {
        let pts = [
            polyline[i - 2],
            polyline[i - 1],
            polyline[i],
            polyline[i + 1],
            polyline[i + 2],
        ];
        let ts = [t[i - 2], t[i - 1], t[i], t[i + 1], t[i + 2]];
        worst = worst.max(pointwise_defect(metric, &pts, &ts)?);
    }
    Ok(worst)
}

/// As [`geodesic_residual`] for a closed loop given without a repeated
/// endpoint; stencils wrap around.
pub fn geodesic_residual_closed(metric: &dyn SurfaceMetric, polyline: &[PointUV]) -> Result<f64> {
    check_points(metric, polyline)?;
    let n = polyline.len();
    if polyline[0].dist(&polyline[n - 1]) == 0.0 {
        return Err(Error::DegenerateInput(
            "closed polyline must not repeat its first point".into(),
        ));
    }
    let chord: Vec<f64> = (0..n)
        .map(|i| polyline[i].dist(&polyline[(i + 1) % n]))
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let idx = |k: isize| ((i as isize + k).rem_euclid(n as isize)) as usize;
        let pts = [idx(-2), idx(-1), i, idx(1), idx(2)].map(|j| polyline[j]);
        let ts = [
            -(chord[idx(-2)] + chord[idx(-1)]),
            -chord[idx(-1)],
            0.0,
            chord[i],
            chord[i] + chord[idx(1)],
        ];
        worst = worst.max(pointwise_defect(metric, &pts, &ts)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::FlatMetric;

    #[test]
    fn fornberg_reproduces_quadratics_on_uneven_nodes() {
        let x = [-0.3, -0.1, 0.0, 0.2, 0.5];
        let (w1, w2) = fornberg(0.0, &x);
        let f = |t: f64| 1.0 + 2.0 * t + 3.0 * t * t - t.powi(4);
        let d1: f64 = (0..5).map(|j| w1[j] * f(x[j])).sum();
        let d2: f64 = (0..5).map(|j| w2[j] * f(x[j])).sum();
        assert!((d1 - 2.0).abs() < 1e-12);
        assert!((d2 - 6.0).abs() < 1e-2);
    }

    #[test]
    fn flat_line_has_zero_residual() {
        let pts: Vec<_> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.1 + (i as f64 * 0.37).sin() * 0.01;
                PointUV::new(1.0 + 0.6 * t, -2.0 + 0.8 * t)
            })
            .collect();
        assert!(geodesic_residual(&FlatMetric::plane(), &pts).unwrap() <= 1e-12);
    }

    #[test]
    fn flat_circle_residual_is_its_curvature() {
        let n = 2000;
        let pts: Vec<_> = (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                PointUV::new(2.0 * a.cos(), 2.0 * a.sin())
            })
            .collect();
        let r = geodesic_residual_closed(&FlatMetric::plane(), &pts).unwrap();
        assert!((r - 0.5).abs() < 1e-6, "{r}");
    }

    #[test]
    fn too_few_points_is_degenerate() {
        let pts = vec![PointUV::new(0.0, 0.0); 4];
        assert!(matches!(
            geodesic_residual(&FlatMetric::plane(), &pts),
            Err(Error::DegenerateInput(_))
        ));
    }
}
