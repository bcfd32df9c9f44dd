//! Closed-form curvature bounds and entropy bounds, with an independent
//! grid-plus-golden-section minimiser used to cross-check them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::foliation::{fiber_constant, sphere_volume, wallis_integral, FoliationType};
use crate::metrics::{
    angenent_metric, gauss_curvature_closed_form, gauss_curvature_numeric, PointUV,
    DEFAULT_FD_STEP,
};

/// `y_{g,m}`: the value of `r²` at which `K(r, π/(2g))` is minimal.
pub fn critical_radius_squared(t: FoliationType) -> f64 {
    let n = t.n() as f64;
    let g = t.g() as f64;
    let disc = (g - 2.0).powi(2) * (n - 1.0).powi(2) + 8.0 * n * g * (n - 1.0);
    ((n - 1.0) * (2.0 - g) + disc.sqrt()) / 2.0
}

/// `κ_{g,m} = e^{y/2} (y + (n−1) g) / (c² yⁿ)`, the minimum of the curvature of `h`.
pub fn curvature_lower_bound(t: FoliationType) -> f64 {
    let y = critical_radius_squared(t);
    let n = t.n() as f64;
    let c = fiber_constant(t);
    (y / 2.0).exp() * (y + (n - 1.0) * t.g() as f64) / (c * c * y.powi(t.n() as i32))
}

/// `E_{g,m} = 2π / ((4π)^{n/2} √κ_{g,m})`.
pub fn entropy_bound_isoparametric(t: FoliationType) -> f64 {
    entropy_bound_from_kappa(t.n(), curvature_lower_bound(t))
}

/// `2π / ((4π)^{n/2} √κ)`.
pub fn entropy_bound_from_kappa(n: u32, kappa: f64) -> f64 {
    2.0 * PI / ((4.0 * PI).powf(n as f64 / 2.0) * kappa.sqrt())
}

/// `κ_n`, the minimum curvature of the Angenent metric, obtained as
/// `c²_{1,n−1} κ_{1,n−1}` (the rotational metric `h_{1,n−1}` is `c²` times `g_A`).
pub fn rotational_curvature_bound(n: i64) -> Result<f64> {
    if n < 2 {
        return domain(format!("rotational bounds need n ≥ 2, got {n}"));
    }
    let t = FoliationType::rotational(n as u32)?;
    let c = fiber_constant(t);
    Ok(c * c * curvature_lower_bound(t))
}

/// `E_n = 2π ω_{n−1} / ((4π)^{n/2} √κ_n)`.
pub fn entropy_bound_rotational(n: i64) -> Result<f64> {
    let kappa = rotational_curvature_bound(n)?;
    let omega = sphere_volume(n - 1)?;
    Ok(omega * entropy_bound_from_kappa(n as u32, kappa))
}

/// `(k + 1) E_n` for a profile curve with `k` self-intersections.
pub fn entropy_bound_immersed(n: i64, k: i64) -> Result<f64> {
    if k < 0 {
        return domain(format!("self-intersection count must be ≥ 0, got {k}"));
    }
    Ok((k + 1) as f64 * entropy_bound_rotational(n)?)
}

/// Length bound `(k + 1) 2π / √κ` for a geodesic loop with `k` self-intersections.
pub fn loop_length_bound(kappa: f64, k: usize) -> f64 {
    (k as f64 + 1.0) * 2.0 * PI / kappa.sqrt()
}

/// All closed-form constants for one foliation type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub g: u32,
    pub m: u32,
    pub n: u32,
    pub wallis: f64,
    pub sphere_volume: f64,
    pub fiber_constant: f64,
    pub y: f64,
    pub kappa: f64,
    pub entropy_bound: f64,
    pub minimizer: PointUV,
}

impl BoundReport {
    pub fn new(t: FoliationType) -> Self {
        let y = critical_radius_squared(t);
        Self {
            g: t.g(),
            m: t.m(),
            n: t.n(),
            wallis: wallis_integral(t.m() as i64).expect("m ≥ 1"),
            sphere_volume: sphere_volume(t.n() as i64).expect("n ≥ 2"),
            fiber_constant: fiber_constant(t),
            y,
            kappa: curvature_lower_bound(t),
            entropy_bound: entropy_bound_isoparametric(t),
            minimizer: PointUV::new(y.sqrt(), t.symmetry_angle()),
        }
    }

    /// `2π / √κ`, the length bound for a simple closed geodesic of `h`.
    pub fn length_bound(&self) -> f64 {
        loop_length_bound(self.kappa, 0)
    }
}

/// Rotational constants for dimension `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationalBoundReport {
    pub n: u32,
    pub kappa: f64,
    pub entropy_bound: f64,
    /// `(k, (k+1) E_n)` for each requested `k`.
    pub immersed: Vec<(u32, f64)>,
}

impl RotationalBoundReport {
    pub fn new(n: u32, ks: &[u32]) -> Result<Self> {
        let entropy_bound = entropy_bound_rotational(n as i64)?;
        Ok(Self {
            n,
            kappa: rotational_curvature_bound(n as i64)?,
            entropy_bound,
            immersed: ks
                .iter()
                .map(|&k| (k, (k as f64 + 1.0) * entropy_bound))
                .collect(),
        })
    }
}

/// Axis-aligned search window `[u_lo, u_hi] × [v_lo, v_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub u_lo: f64,
    pub u_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericMinimum {
    pub point: PointUV,
    pub value: f64,
}

/// Minimum of `f` over the interior nodes of a `resolution × resolution` grid
/// on `window`; ties go to the lowest (row-major) index.
pub fn grid_minimum<F: Fn(PointUV) -> f64>(f: &F, window: Window, resolution: usize) -> NumericMinimum {
    let step_u = (window.u_hi - window.u_lo) / (resolution + 1) as f64;
    let step_v = (window.v_hi - window.v_lo) / (resolution + 1) as f64;
    let mut best = NumericMinimum {
        point: PointUV::new(f64::NAN, f64::NAN),
        value: f64::INFINITY,
    };
    for i in 1..=resolution {
        let u = window.u_lo + i as f64 * step_u;
        for j in 1..=resolution {
            let p = PointUV::new(u, window.v_lo + j as f64 * step_v);
            let value = f(p);
            if value < best.value {
                best = NumericMinimum { point: p, value };
            }
        }
    }
    best
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Grid search followed by alternating golden-section sweeps along each axis.
pub fn minimize<F: Fn(PointUV) -> f64>(f: &F, window: Window, resolution: usize, tol: f64) -> NumericMinimum {
    let start = grid_minimum(f, window, resolution);
    let half_u = 2.0 * (window.u_hi - window.u_lo) / (resolution + 1) as f64;
    let half_v = 2.0 * (window.v_hi - window.v_lo) / (resolution + 1) as f64;
    let mut p = start.point;
    for _ in 0..100 {
        let prev = p;
        let (lo, hi) = (
            (p.u - half_u).max(window.u_lo),
            (p.u + half_u).min(window.u_hi),
        );
        p.u = golden_section(|u| f(PointUV::new(u, p.v)), lo, hi, tol);
        let (lo, hi) = (
            (p.v - half_v).max(window.v_lo),
            (p.v + half_v).min(window.v_hi),
        );
        p.v = golden_section(|v| f(PointUV::new(p.u, v)), lo, hi, tol);
        if (p.u - prev.u).abs() <= tol && (p.v - prev.v).abs() <= tol {
            break;
        }
    }
    let value = f(p);
    if value <= start.value {
        NumericMinimum { point: p, value }
    } else {
        start
    }
}

/// Search window for the curvature of `h`: `r ∈ (0.05, max(6, 3√y))`, `φ ∈ (0, π/g)`.
pub fn isoparametric_window(t: FoliationType) -> Window {
    let y = critical_radius_squared(t);
    Window {
        u_lo: 0.05,
        u_hi: (3.0 * y.sqrt()).max(6.0),
        v_lo: 0.0,
        v_hi: t.strip_width(),
    }
}

/// Numerically minimised closed-form curvature of `h_{g,m}`.
pub fn isoparametric_curvature_minimum(t: FoliationType, resolution: usize) -> NumericMinimum {
    let f = |p: PointUV| gauss_curvature_closed_form(t, p).unwrap_or(f64::INFINITY);
    minimize(&f, isoparametric_window(t), resolution, 1e-10)
}

/// Numerically minimised Brioschi curvature of the Angenent metric on
/// `(−4, 4) × (0.05, 6)`.
pub fn angenent_curvature_minimum(n: i64, resolution: usize) -> Result<NumericMinimum> {
    let metric = angenent_metric(n)?;
    let f = |p: PointUV| gauss_curvature_numeric(&metric, p, DEFAULT_FD_STEP).unwrap_or(f64::INFINITY);
    let window = Window {
        u_lo: -4.0,
        u_hi: 4.0,
        v_lo: 0.05,
        v_hi: 6.0,
    };
    Ok(minimize(&f, window, resolution, 1e-10))
}
