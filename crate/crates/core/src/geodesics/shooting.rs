//! Closed geodesics through a reflection-symmetric metric, by shooting
//! perpendicular to the fixed line of the reflection.
//!
//! A geodesic leaving the axis perpendicularly and meeting it again
//! perpendicularly closes up after reflection. The along-axis component of
//! the unit velocity at the first return is the defect whose roots are sought.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{PointUV, SurfaceMetric};

use super::integrator::{Event, Integrator};
use super::{GeodesicState, GeodesicTrajectory, ShootingConfig, Termination, TrajectorySample};

/// Fixed line of a reflection isometry of the metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryAxis {
    /// The line `u = c`, fixed by `u ↦ 2c − u`.
    U(f64),
    /// The line `v = c`, fixed by `v ↦ 2c − v`.
    V(f64),
}

impl SymmetryAxis {
    /// Point on the axis at position `t` along it.
    pub fn point(&self, t: f64) -> PointUV {
        match *self {
            SymmetryAxis::U(c) => PointUV::new(c, t),
            SymmetryAxis::V(c) => PointUV::new(t, c),
        }
    }

    fn offset(&self, s: &GeodesicState) -> f64 {
        match *self {
            SymmetryAxis::U(c) => s.u - c,
            SymmetryAxis::V(c) => s.v - c,
        }
    }

    fn reflect(&self, s: &GeodesicState) -> GeodesicState {
        match *self {
            SymmetryAxis::U(c) => GeodesicState {
                u: 2.0 * c - s.u,
                du: -s.du,
                ..*s
            },
            SymmetryAxis::V(c) => GeodesicState {
                v: 2.0 * c - s.v,
                dv: -s.dv,
                ..*s
            },
        }
    }

    fn launch(&self, metric: &dyn SurfaceMetric, t: f64) -> GeodesicState {
        let p = self.point(t);
        let (a, b) = metric.half_log_coefficients(p);
        match *self {
            SymmetryAxis::U(_) => GeodesicState {
                u: p.u,
                v: p.v,
                du: (-a).exp(),
                dv: 0.0,
            },
            SymmetryAxis::V(_) => GeodesicState {
                u: p.u,
                v: p.v,
                du: 0.0,
                dv: (-b).exp(),
            },
        }
    }

    /// Signed along-axis component of the unit velocity.
    fn along(&self, metric: &dyn SurfaceMetric, s: &GeodesicState) -> f64 {
        let (a, b) = metric.half_log_coefficients(s.point());
        match *self {
            SymmetryAxis::U(_) => b.exp() * s.dv,
            SymmetryAxis::V(_) => a.exp() * s.du,
        }
    }

    fn along_coordinate(&self, p: PointUV) -> f64 {
        match *self {
            SymmetryAxis::U(_) => p.v,
            SymmetryAxis::V(_) => p.u,
        }
    }
}

/// One launch of the scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSample {
    pub launch: f64,
    /// Along-axis unit velocity at the first return, if the geodesic returned.
    pub defect: Option<f64>,
    pub terminated_reason: Termination,
    /// Along-axis coordinate of the return point.
    pub return_position: Option<f64>,
}

/// A closed geodesic assembled from a half period and its mirror image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedGeodesic {
    pub axis: SymmetryAxis,
    /// Along-axis coordinate of the launch point.
    pub launch: f64,
    /// Along-axis coordinate of the second axis crossing.
    pub return_position: f64,
    /// Along-axis unit velocity at the return of the accepted half period.
    pub return_defect: f64,
    /// Secant and bisection steps spent on this root.
    pub iterations: usize,
    /// Full loop; the last sample repeats the first.
    pub trajectory: GeodesicTrajectory,
}

impl ClosedGeodesic {
    pub fn length(&self) -> f64 {
        self.trajectory.length()
    }

    pub fn closure_defect(&self) -> f64 {
        self.trajectory.closure_defect.unwrap_or(f64::INFINITY)
    }

    /// The sample points around the loop, without the repeated endpoint.
    pub fn polyline(&self) -> Vec<PointUV> {
        let samples = &self.trajectory.samples;
        samples[..samples.len() - 1]
            .iter()
            .map(|s| s.state.point())
            .collect()
    }
}

struct HalfPeriod {
    defect: Option<f64>,
    terminated_reason: Termination,
    samples: Vec<TrajectorySample>,
}

fn half_period(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    launch: f64,
    config: &ShootingConfig,
) -> Result<HalfPeriod> {
    let integrator = Integrator::new(metric, config.settings());
    let start = axis.launch(metric, launch);
    let value = move |s: &GeodesicState| axis.offset(s);
    let accept = |_: &GeodesicState, _: f64| true;
    let event = Event {
        value: &value,
        accept: &accept,
    };
    let run = integrator.run(&start, Some(&event))?;
    let defect = match run.termination {
        Termination::Closed => {
            let last = run.samples.last().expect("non-empty").state;
            Some(axis.along(metric, &last))
        }
        _ => None,
    };
    Ok(HalfPeriod {
        defect,
        terminated_reason: run.termination,
        samples: run.samples,
    })
}

/// Along-axis unit velocity at the first return of the geodesic launched
/// perpendicularly from `axis.point(launch)`; `None` if it never returns.
pub fn return_defect(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    launch: f64,
    config: &ShootingConfig,
) -> Result<Option<f64>> {
    config.validate()?;
    Ok(half_period(metric, axis, launch, config)?.defect)
}

fn scan_points(config: &ShootingConfig) -> Vec<f64> {
    let (lo, hi) = config.bracket;
    let n = config.scan_samples;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Return defects at `config.scan_samples` equispaced launch positions across
/// the bracket, endpoints included.
pub fn scan_return_defect(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    config: &ShootingConfig,
) -> Result<Vec<ScanSample>> {
    config.validate()?;
    let dom = metric.domain();
    for end in [config.bracket.0, config.bracket.1] {
        dom.check(axis.point(end), crate::metrics::BOUNDARY_MARGIN)?;
    }
    let coarse = ShootingConfig {
        max_step: None,
        ..config.clone()
    };
    scan_points(config)
        .into_par_iter()
        .map(|launch| {
            let half = half_period(metric, axis, launch, &coarse)?;
            let return_position = match half.terminated_reason {
                Termination::Closed => Some(
                    axis.along_coordinate(half.samples.last().expect("non-empty").state.point()),
                ),
                _ => None,
            };
            Ok(ScanSample {
                launch,
                defect: half.defect,
                terminated_reason: half.terminated_reason,
                return_position,
            })
        })
        .collect()
}

/// Illinois-secant on a sign-changing bracket, bisecting when the secant
/// step leaves it. Returns the best launch and its half period.
fn refine(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
    config: &ShootingConfig,
) -> Result<Option<(f64, HalfPeriod, usize)>> {
    let target = 0.5 * config.secant_tol;
    let mut best: Option<(f64, HalfPeriod)> = None;
    let mut side = 0i8;
    for iteration in 1..=config.max_iterations {
        let secant = (a * fb - b * fa) / (fb - fa);
        let width = b - a;
        let c = if secant > a + 1e-3 * width && secant < b - 1e-3 * width {
            secant
        } else {
            0.5 * (a + b)
        };
        let half = half_period(metric, axis, c, config)?;
        let Some(fc) = half.defect else {
            // lost the return inside the bracket: no continuous root here
            return Ok(None);
        };
        let improved = best
            .as_ref()
            .is_none_or(|(_, h)| fc.abs() < h.defect.expect("returned").abs());
        if improved {
            best = Some((c, half));
        }
        if fc.abs() <= target {
            let (launch, half) = best.expect("set above");
            return Ok(Some((launch, half, iteration)));
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if b - a <= f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
    }
    Ok(best.map(|(launch, half)| (launch, half, config.max_iterations)))
}

fn assemble(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    launch: f64,
    half: HalfPeriod,
    iterations: usize,
) -> ClosedGeodesic {
    let defect = half.defect.expect("returned");
    let mut half_samples = half.samples;
    let m = half_samples.len();
    // an event located just past a regular step leaves a near-duplicate sample
    if m >= 3 {
        let gap = |i: usize| half_samples[i + 1].s - half_samples[i].s;
        if gap(m - 2) < 0.5 * gap(m - 3) {
            half_samples.remove(m - 2);
        }
    }
    let half_len = half_samples.last().expect("non-empty").s;
    let mut samples = half_samples.clone();
    for sample in half_samples.iter().rev().skip(1) {
        let mirrored = axis.reflect(&sample.state);
        samples.push(TrajectorySample {
            s: 2.0 * half_len - sample.s,
            state: GeodesicState {
                du: -mirrored.du,
                dv: -mirrored.dv,
                ..mirrored
            },
        });
    }
    // the loop closes exactly at the launch point; the tangent jumps by twice
    // the along-axis defect at the return point
    if let Some(last) = samples.last_mut() {
        last.state = axis.launch(metric, launch);
    }
    let return_position =
        axis.along_coordinate(half_samples.last().expect("non-empty").state.point());
    ClosedGeodesic {
        axis,
        launch,
        return_position,
        return_defect: defect,
        iterations,
        trajectory: GeodesicTrajectory {
            samples,
            terminated_reason: Termination::Closed,
            closure_defect: Some(2.0 * defect.abs()),
        },
    }
}

/// Scans the bracket for sign changes of the return defect and refines each
/// one. Returns every loop whose closure defect is below `config.secant_tol`,
/// ordered by launch position; `NotFound` if there are none.
pub fn shoot_closed(
    metric: &dyn SurfaceMetric,
    axis: SymmetryAxis,
    config: &ShootingConfig,
) -> Result<Vec<ClosedGeodesic>> {
    let scan = scan_return_defect(metric, axis, config)?;
    let brackets: Vec<((f64, f64), (f64, f64))> = scan
        .windows(2)
        .filter_map(|w| match (w[0].defect, w[1].defect) {
            (Some(fa), Some(fb)) if fa == 0.0 || fa.signum() != fb.signum() => {
                Some(((w[0].launch, fa), (w[1].launch, fb)))
            }
            _ => None,
        })
        .collect();
    let refined: Vec<Option<ClosedGeodesic>> = brackets
        .into_par_iter()
        .map(|(lo, hi)| {
            if lo.1 == 0.0 {
                let half = half_period(metric, axis, lo.0, config)?;
                return Ok(Some(assemble(metric, axis, lo.0, half, 0)));
            }
            Ok(refine(metric, axis, lo, hi, config)?
                .map(|(launch, half, it)| assemble(metric, axis, launch, half, it)))
        })
        .collect::<Result<_>>()?;
    let loops: Vec<ClosedGeodesic> = refined
        .into_iter()
        .flatten()
        .filter(|g| g.closure_defect() < config.secant_tol)
        .collect();
    if loops.is_empty() {
        return Err(Error::NotFound(format!(
            "no closed geodesic of {} launched from {:?} with launch in ({}, {})",
            metric.label(),
            axis,
            config.bracket.0,
            config.bracket.1
        )));
    }
    Ok(loops)
}
