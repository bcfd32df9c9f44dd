//! Geodesics of diagonal surface metrics: integration, certification of
//! sampled curves, and closed geodesics by symmetric shooting.

mod integrator;
mod residual;
mod shooting;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    curvature_lower_bound, entropy_bound_isoparametric, entropy_bound_rotational,
    rotational_curvature_bound,
};
use crate::error::{domain, Result};
use crate::foliation::{unit_sphere_volume, FoliationType};
use crate::metrics::{
    angenent_metric, isoparametric_metric, log_jet, LogJet, PointUV, SurfaceMetric,
    DEFAULT_FD_STEP,
};

use integrator::{Event, Integrator, Settings};

pub use residual::{geodesic_residual, geodesic_residual_closed};
pub use shooting::{
    return_defect, scan_return_defect, shoot_closed, ClosedGeodesic, ScanSample, SymmetryAxis,
};

/// Position and velocity in the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

impl GeodesicState {
    pub fn point(&self) -> PointUV {
        PointUV::new(self.u, self.v)
    }

    /// Metric speed squared `E du² + G dv²`.
    pub fn speed_squared(&self, metric: &dyn SurfaceMetric) -> f64 {
        let (a, b) = metric.half_log_coefficients(self.point());
        (a.exp() * self.du).powi(2) + (b.exp() * self.dv).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    /// Cumulative metric arclength.
    pub s: f64,
    pub state: GeodesicState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Closed,
    DomainExit,
    MaxLength,
}

/// A sampled unit-speed geodesic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicTrajectory {
    pub samples: Vec<TrajectorySample>,
    pub terminated_reason: Termination,
    /// Position plus direction mismatch when `terminated_reason == Closed`.
    pub closure_defect: Option<f64>,
}

impl GeodesicTrajectory {
    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    pub fn points(&self) -> Vec<PointUV> {
        self.samples.iter().map(|s| s.state.point()).collect()
    }

    /// Position at arclength `s`, by cubic Hermite interpolation between the
    /// bracketing samples (positions and unit-speed velocities).
    pub fn point_at(&self, s: f64) -> PointUV {
        let samples = &self.samples;
        let idx = match samples.binary_search_by(|x| x.s.total_cmp(&s)) {
            Ok(i) => return samples[i].state.point(),
            Err(i) => i.clamp(1, samples.len() - 1),
        };
        let (p, q) = (&samples[idx - 1], &samples[idx]);
        let h = q.s - p.s;
        let t = ((s - p.s) / h).clamp(0.0, 1.0);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        PointUV::new(
            h00 * p.state.u + h10 * h * p.state.du + h01 * q.state.u + h11 * h * q.state.du,
            h00 * p.state.v + h10 * h * p.state.dv + h01 * q.state.v + h11 * h * q.state.dv,
        )
    }

    /// `count + 1` points at equally spaced arclength, endpoints included.
    pub fn resample(&self, count: usize) -> Vec<PointUV> {
        let total = self.length();
        (0..=count)
            .map(|i| {
                if i == count {
                    self.samples.last().expect("non-empty").state.point()
                } else {
                    self.point_at(total * i as f64 / count as f64)
                }
            })
            .collect()
    }
}

/// Integration and shooting parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub ode_rel_tol: f64,
    pub ode_abs_tol: f64,
    pub max_arclength: f64,
    /// Interval of launch positions along the symmetry axis.
    pub bracket: (f64, f64),
    pub secant_tol: f64,
    pub max_iterations: usize,
    /// Number of equispaced launch positions scanned for sign changes.
    pub scan_samples: usize,
    /// Finite-difference step for metrics without analytic partials.
    pub fd_step: f64,
    /// Coordinates beyond this magnitude count as leaving the domain.
    pub escape_radius: f64,
    /// Distance to the start below which a returning trajectory counts as closed.
    pub closure_tolerance: f64,
    /// Upper bound on the metric arclength of one step, which sets the
    /// sample density of returned trajectories.
    pub max_step: Option<f64>,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            ode_rel_tol: 1e-10,
            ode_abs_tol: 1e-12,
            max_arclength: 50.0,
            bracket: (0.1, 2.0),
            secant_tol: 1e-10,
            max_iterations: 60,
            scan_samples: 64,
            fd_step: DEFAULT_FD_STEP,
            escape_radius: 100.0,
            closure_tolerance: 1e-6,
            max_step: None,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ode_rel_tol > 0.0 && self.ode_abs_tol > 0.0 && self.secant_tol > 0.0) {
            return domain("tolerances must be positive");
        }
        if !(self.max_arclength > 0.0) {
            return domain("max_arclength must be positive");
        }
        if !(self.bracket.0 < self.bracket.1) {
            return domain(format!(
                "bracket ({}, {}) must be increasing",
                self.bracket.0, self.bracket.1
            ));
        }
        if self.scan_samples < 2 {
            return domain("scan_samples must be at least 2");
        }
        if let Some(step) = self.max_step {
            if !(step > 0.0) {
                return domain("max_step must be positive");
            }
        }
        Ok(())
    }

    fn settings(&self) -> Settings {
        Settings {
            rel_tol: self.ode_rel_tol,
            abs_tol: self.ode_abs_tol,
            max_arclength: self.max_arclength,
            fd_step: self.fd_step,
            escape_radius: self.escape_radius,
            max_step: self.max_step.unwrap_or(f64::INFINITY),
        }
    }
}

/// Levi-Civita connection of a diagonal metric; `u_vv` is `Γᵘ_{vv}` and so on.
/// The remaining entries follow from symmetry in the lower indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Christoffel {
    pub u_uu: f64,
    pub u_uv: f64,
    pub u_vv: f64,
    pub v_uu: f64,
    pub v_uv: f64,
    pub v_vv: f64,
}

pub(crate) fn christoffel_from_jet(j: &LogJet) -> Christoffel {
    Christoffel {
        u_uu: j.a_u,
        u_uv: j.a_v,
        u_vv: -j.b_u * (2.0 * (j.b - j.a)).exp(),
        v_uu: -j.a_v * (2.0 * (j.a - j.b)).exp(),
        v_uv: j.b_u,
        v_vv: j.b_v,
    }
}

pub fn christoffel(metric: &dyn SurfaceMetric, p: PointUV) -> Result<Christoffel> {
    Ok(christoffel_from_jet(&log_jet(metric, p, DEFAULT_FD_STEP)?))
}

/// Integrates the unit-speed geodesic from `start` until it leaves the domain,
/// reaches `config.max_arclength`, or returns to within
/// `config.closure_tolerance` of its starting point moving the same way.
pub fn integrate_geodesic(
    metric: &dyn SurfaceMetric,
    start: GeodesicState,
    config: &ShootingConfig,
) -> Result<GeodesicTrajectory> {
    config.validate()?;
    let integrator = Integrator::new(metric, config.settings());
    let origin = start.point();
    let dir = {
        let norm = start.du.hypot(start.dv);
        (start.du / norm, start.dv / norm)
    };
    // Signed distance past the normal line through the start.
    let value = move |s: &GeodesicState| (s.u - origin.u) * dir.0 + (s.v - origin.v) * dir.1;
    let tolerance = config.closure_tolerance;
    let accept = move |s: &GeodesicState, _arclength: f64| {
        let heading = s.du * dir.0 + s.dv * dir.1;
        heading > 0.0 && s.point().dist(&origin) < tolerance
    };
    let event = Event {
        value: &value,
        accept: &accept,
    };
    let run = integrator.run(&start, Some(&event))?;
    let closure_defect = match run.termination {
        Termination::Closed => {
            let last = run.samples.last().expect("non-empty").state;
            let norm = last.du.hypot(last.dv);
            let cross = (last.du * dir.1 - last.dv * dir.0) / norm;
            Some(last.point().dist(&origin) + cross.abs())
        }
        _ => None,
    };
    Ok(GeodesicTrajectory {
        samples: run.samples,
        terminated_reason: run.termination,
        closure_defect,
    })
}

/// Which reduction a profile curve lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShrinkerContext {
    /// Rotationally symmetric hypersurfaces of dimension `n` in the
    /// `(x, r)` half-plane with the Angenent metric.
    Rotational { n: u32 },
    /// Invariant hypersurfaces of an isoparametric foliation in the
    /// `(r, φ)` strip.
    Isoparametric(FoliationType),
}

impl ShrinkerContext {
    pub fn rotational(n: u32) -> Result<Self> {
        if n < 2 {
            return domain(format!("rotational shrinkers need n ≥ 2, got {n}"));
        }
        Ok(ShrinkerContext::Rotational { n })
    }

    /// Hypersurface dimension.
    pub fn dimension(&self) -> u32 {
        match self {
            ShrinkerContext::Rotational { n } => *n,
            ShrinkerContext::Isoparametric(t) => t.n(),
        }
    }

    pub fn metric(&self) -> Result<Box<dyn SurfaceMetric>> {
        Ok(match self {
            ShrinkerContext::Rotational { n } => Box::new(angenent_metric(*n as i64)?),
            ShrinkerContext::Isoparametric(t) => Box::new(isoparametric_metric(*t)),
        })
    }

    /// Lower curvature bound `κ` of the reduction metric.
    pub fn kappa(&self) -> Result<f64> {
        match self {
            ShrinkerContext::Rotational { n } => rotational_curvature_bound(*n as i64),
            ShrinkerContext::Isoparametric(t) => Ok(curvature_lower_bound(*t)),
        }
    }

    /// Entropy bound for simple closed profiles.
    pub fn entropy_bound(&self) -> Result<f64> {
        match self {
            ShrinkerContext::Rotational { n } => entropy_bound_rotational(*n as i64),
            ShrinkerContext::Isoparametric(t) => Ok(entropy_bound_isoparametric(*t)),
        }
    }

    /// Reflection axis used for shooting.
    pub fn symmetry_axis(&self) -> SymmetryAxis {
        match self {
            ShrinkerContext::Rotational { .. } => SymmetryAxis::U(0.0),
            ShrinkerContext::Isoparametric(t) => SymmetryAxis::V(t.symmetry_angle()),
        }
    }
}

impl ShootingConfig {
    /// Shooting setup for the reduction metric of `context`: launches below
    /// the cylinder radius (rotational) or across the strip (isoparametric),
    /// integrates up to four times `2π/√κ`, and caps steps at `1/20000` of
    /// that length so that returned loops are densely sampled.
    pub fn for_context(context: &ShrinkerContext) -> Result<Self> {
        let kappa = context.kappa()?;
        let bound = std::f64::consts::TAU / kappa.sqrt();
        let n = context.dimension() as f64;
        let bracket = match context {
            ShrinkerContext::Rotational { .. } => (0.3, (2.0 * (n - 1.0)).sqrt() - 1e-3),
            ShrinkerContext::Isoparametric(_) => (0.05, (2.0 * n).sqrt() - 1e-3),
        };
        Ok(Self {
            bracket,
            max_arclength: 4.0 * bound,
            max_step: Some(bound / 2e4),
            ..Self::default()
        })
    }
}

impl std::fmt::Display for ShrinkerContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShrinkerContext::Rotational { n } => write!(f, "rotational n={n}"),
            ShrinkerContext::Isoparametric(t) => write!(f, "isoparametric {t}"),
        }
    }
}

/// Entropy of the shrinker whose profile has reduced length `length`:
/// `(4π)^{−n/2} L` for isoparametric profiles and `(4π)^{−n/2} ω_{n−1} L`
/// for rotational ones.
pub fn shrinker_entropy_from_length(context: ShrinkerContext, length: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return domain(format!("length must be positive, got {length}"));
    }
    let n = context.dimension();
    let scale = (4.0 * std::f64::consts::PI).powf(-(n as f64) / 2.0);
    Ok(match context {
        ShrinkerContext::Rotational { .. } => scale * unit_sphere_volume(n - 1) * length,
        ShrinkerContext::Isoparametric(_) => scale * length,
    })
}
