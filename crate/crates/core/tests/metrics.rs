mod common;

use std::f64::consts::PI;

use common::{p, rel};
use proptest::prelude::*;
use shrinker_core::bounds::{critical_radius_squared, curvature_lower_bound};
use shrinker_core::entropy::sphere_entropy_closed_form;
use shrinker_core::foliation::{fiber_constant, sphere_volume, FoliationType, ADMISSIBLE_G};
use shrinker_core::metrics::*;

fn admissible_up_to(n_max: u32) -> Vec<FoliationType> {
    ADMISSIBLE_G
        .iter()
        .flat_map(|&g| (1..).take_while(move |m| m * g < n_max).map(move |m| FoliationType::new(g, m).unwrap()))
        .collect()
}

fn foliation() -> impl Strategy<Value = FoliationType> {
    (0usize..5, 1u32..5).prop_map(|(gi, m)| FoliationType::new(ADMISSIBLE_G[gi], m).unwrap())
}

#[test]
fn angenent_coefficient_at_unit_radius() {
    let (e, g) = angenent_metric(2).unwrap().coefficients(p(0.0, 1.0));
    assert!(rel(e, (-0.5f64).exp()) < 1e-15);
    assert_eq!(e, g);
}

#[test]
fn angenent_is_rescaled_polar_isoparametric() {
    for n in 2..=6u32 {
        let ga = angenent_metric(n as i64).unwrap();
        let t = FoliationType::new(1, n - 1).unwrap();
        let h = isoparametric_metric(t);
        let c2 = fiber_constant(t).powi(2);
        for &(rho, phi) in &[(0.4, 0.3), (1.7, 1.2), (3.1, 2.9), (5.0, PI / 2.0)] {
            let (x, r) = (rho * f64::cos(phi), rho * f64::sin(phi));
            let (ea, _) = ga.coefficients(p(x, r));
            let (eh, gh) = h.coefficients(p(rho, phi));
            assert!(rel(eh, c2 * ea) < 1e-12, "n = {n}");
            assert!(rel(gh, c2 * rho * rho * ea) < 1e-12, "n = {n}");
        }
    }
}

#[test]
fn isoparametric_coefficient_on_symmetry_line() {
    for t in admissible_up_to(13) {
        let h = isoparametric_metric(t);
        let r: f64 = 1.3;
        let (e, g) = h.coefficients(p(r, t.symmetry_angle()));
        let expected = fiber_constant(t).powi(2) * r.powi(2 * (t.n() as i32 - 1)) * (-r * r / 2.0).exp();
        assert!(rel(e, expected) < 1e-12, "{t}");
        assert!(rel(g, r * r * expected) < 1e-12, "{t}");
    }
}

#[test]
fn curvature_of_model_metrics() {
    assert_eq!(gauss_curvature_numeric(&FlatMetric::plane(), p(0.3, -2.0), DEFAULT_FD_STEP).unwrap(), 0.0);
    assert!(gauss_curvature_fd(&FlatMetric::plane(), p(0.3, -2.0), DEFAULT_FD_STEP).unwrap().abs() < 1e-12);
    for &u in &[0.3, 1.0, 2.5] {
        let k = gauss_curvature_fd(&SpherePolarPatch, p(u, 0.4), DEFAULT_FD_STEP).unwrap();
        assert!((k - 1.0).abs() < 1e-7, "u = {u}: {k}");
    }
    let t = FoliationType::new(1, 1).unwrap();
    let q = p(1.5, PI / 3.0);
    let fd = gauss_curvature_fd(&isoparametric_metric(t), q, DEFAULT_FD_STEP).unwrap();
    assert!(rel(fd, gauss_curvature_closed_form(t, q).unwrap()) < 1e-6);
}

#[test]
fn closed_form_curvature_at_minimizer_is_kappa() {
    for t in admissible_up_to(13) {
        let q = p(critical_radius_squared(t).sqrt(), t.symmetry_angle());
        let k = gauss_curvature_closed_form(t, q).unwrap();
        assert!(rel(k, curvature_lower_bound(t)) < 1e-12, "{t}");
    }
}

#[test]
fn isoparametric_curvature_is_positive_on_grid() {
    for t in admissible_up_to(13) {
        let (r_hi, w) = (8.0, t.strip_width());
        for i in 1..=100 {
            for j in 1..=100 {
                let q = p(r_hi * i as f64 / 101.0, w * j as f64 / 101.0);
                assert!(gauss_curvature_closed_form(t, q).unwrap() > 0.0, "{t} at {q:?}");
            }
        }
    }
}

#[test]
fn angenent_curvature_is_positive_on_grid() {
    for n in 2..=5 {
        let ga = angenent_metric(n).unwrap();
        for i in 0..=80 {
            for j in 0..=50 {
                let q = p(-4.0 + 0.1 * i as f64, 0.05 + 4.95 * j as f64 / 50.0);
                let k = gauss_curvature_numeric(&ga, q, DEFAULT_FD_STEP).unwrap();
                assert!(k > 0.0, "n = {n} at {q:?}: {k}");
            }
        }
    }
}

#[test]
fn evaluation_near_the_boundary_is_rejected() {
    let t = FoliationType::new(2, 1).unwrap();
    assert!(gauss_curvature_closed_form(t, p(1.0, 1e-9)).is_err());
    assert!(gauss_curvature_closed_form(t, p(1e-9, 0.5)).is_err());
    let h = isoparametric_metric(t);
    assert!(metric_length(&h, &[p(1.0, 0.5), p(1.0, 1e-9)]).is_err());
    assert!(gauss_curvature_fd(&h, p(1e-5, 0.5), DEFAULT_FD_STEP).is_err());
}

#[test]
fn flat_unit_segment() {
    let len = metric_length(&FlatMetric::plane(), &[p(0.0, 0.0), p(0.6, 0.8)]).unwrap();
    assert!((len - 1.0).abs() < 1e-15);
    assert!(metric_length(&FlatMetric::plane(), &[p(0.0, 0.0)]).is_err());
}

#[test]
fn semicircle_length_matches_sphere_entropy() {
    for n in 2..=5u32 {
        let ga = angenent_metric(n as i64).unwrap();
        let radius = (2.0 * n as f64).sqrt();
        let margin = 1e-4;
        let samples = 100_000;
        let pts: Vec<_> = (0..=samples)
            .map(|i| {
                let a = margin + (PI - 2.0 * margin) * i as f64 / samples as f64;
                p(radius * a.cos(), radius * a.sin())
            })
            .collect();
        let len = metric_length(&ga, &pts).unwrap();
        let lambda = sphere_entropy_closed_form(n as i64).unwrap();
        let expected = (4.0 * PI).powf(n as f64 / 2.0) * lambda / sphere_volume(n as i64 - 1).unwrap();
        assert!(rel(len, expected) < 1e-7, "n = {n}: {len} vs {expected}");
    }
}

proptest! {
    #[test]
    fn closed_form_curvature_matches_finite_differences(
        t in foliation(),
        s in 0.02f64..0.98,
        r in 0.2f64..7.0,
    ) {
        let q = p(r, s * t.strip_width());
        let closed = gauss_curvature_closed_form(t, q).unwrap();
        let fd = gauss_curvature_fd(&isoparametric_metric(t), q, DEFAULT_FD_STEP).unwrap();
        let analytic = gauss_curvature_numeric(&isoparametric_metric(t), q, DEFAULT_FD_STEP).unwrap();
        prop_assert!(rel(fd, closed) < 1e-6, "fd {} closed {}", fd, closed);
        prop_assert!(rel(analytic, closed) < 1e-10);
    }

    #[test]
    fn angenent_curvature_analytic_matches_finite_differences(
        n in 2i64..6, x in -4.0f64..4.0, r in 0.1f64..6.0,
    ) {
        let ga = angenent_metric(n).unwrap();
        let a = gauss_curvature_numeric(&ga, p(x, r), DEFAULT_FD_STEP).unwrap();
        let fd = gauss_curvature_fd(&ga, p(x, r), DEFAULT_FD_STEP).unwrap();
        prop_assert!(rel(fd, a) < 1e-6);
    }

    #[test]
    fn coefficients_are_positive_and_symmetric(t in foliation(), s in 0.001f64..0.999, r in 0.01f64..12.0) {
        let h = isoparametric_metric(t);
        let w = t.strip_width();
        let (e1, g1) = h.coefficients(p(r, s * w));
        let (e2, g2) = h.coefficients(p(r, w - s * w));
        prop_assert!(e1 > 0.0 && g1 > 0.0);
        prop_assert!(rel(e1, e2) < 1e-12 && rel(g1, g2) < 1e-12);
        let k1 = gauss_curvature_closed_form(t, p(r, s * w)).unwrap();
        let k2 = gauss_curvature_closed_form(t, p(r, w - s * w)).unwrap();
        prop_assert!(rel(k1, k2) < 1e-10);
    }

    #[test]
    fn angenent_is_even_in_x(n in 2i64..8, x in -6.0f64..6.0, r in 0.01f64..8.0) {
        let ga = angenent_metric(n).unwrap();
        prop_assert_eq!(ga.coefficients(p(x, r)), ga.coefficients(p(-x, r)));
    }

    #[test]
    fn length_is_additive_and_reversible(
        t in foliation(),
        raw in prop::collection::vec((0.3f64..5.0, 0.05f64..0.95), 3..8),
        split in 1usize..6,
    ) {
        let h = isoparametric_metric(t);
        let pts: Vec<_> = raw.iter().map(|&(r, s)| p(r, s * t.strip_width())).collect();
        let total = metric_length(&h, &pts).unwrap();
        let rev: Vec<_> = pts.iter().rev().copied().collect();
        prop_assert!(rel(metric_length(&h, &rev).unwrap(), total) < 1e-12);
        let k = split.min(pts.len() - 2);
        let parts = metric_length(&h, &pts[..=k]).unwrap() + metric_length(&h, &pts[k..]).unwrap();
        prop_assert!(rel(parts, total) < 1e-12);
        // inserting a point on a segment leaves the length unchanged
        let mid = p(0.37 * pts[0].u + 0.63 * pts[1].u, 0.37 * pts[0].v + 0.63 * pts[1].v);
        let mut refined = vec![pts[0], mid];
        refined.extend_from_slice(&pts[1..]);
        prop_assert!((metric_length(&h, &refined).unwrap() - total).abs() < 1e-10 * total.max(1.0));
    }
}
