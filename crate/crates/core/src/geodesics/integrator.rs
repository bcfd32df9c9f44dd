//! Dormand–Prince 5(4) stepping of the geodesic equation in metric arclength.
//!
//! The system is autonomous, so the stage abscissae never enter.

use crate::error::{Error, Result};
use crate::metrics::{log_jet, PointUV, SurfaceMetric, BOUNDARY_MARGIN};

use super::{christoffel_from_jet, GeodesicState, Termination, TrajectorySample};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Unit metric speed beyond this coordinate speed means the metric has
/// degenerated: the trajectory is treated as having left the domain.
pub(crate) const MAX_COORDINATE_SPEED: f64 = 1e6;

type State = [f64; 4];

/// Zero-crossing watched during integration.
pub(crate) struct Event<'a> {
    pub value: &'a dyn Fn(&GeodesicState) -> f64,
    /// Decides whether a located crossing ends the integration.
    pub accept: &'a dyn Fn(&GeodesicState, f64) -> bool,
}

pub(crate) struct Settings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_arclength: f64,
    pub fd_step: f64,
    pub escape_radius: f64,
    pub max_step: f64,
}

pub(crate) struct Run {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
}

pub(crate) struct Integrator<'m> {
    metric: &'m dyn SurfaceMetric,
    settings: Settings,
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for i in 0..4 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

impl<'m> Integrator<'m> {
    pub fn new(metric: &'m dyn SurfaceMetric, settings: Settings) -> Self {
        Self { metric, settings }
    }

    fn rhs(&self, y: &State) -> Result<State> {
        let p = PointUV::new(y[0], y[1]);
        let jet = log_jet(self.metric, p, self.settings.fd_step)?;
        let c = christoffel_from_jet(&jet);
        let (du, dv) = (y[2], y[3]);
        Ok([
            du,
            dv,
            -(c.u_uu * du * du + 2.0 * c.u_uv * du * dv + c.u_vv * dv * dv),
            -(c.v_uu * du * du + 2.0 * c.v_uv * du * dv + c.v_vv * dv * dv),
        ])
    }

    /// One step of size `h`; returns the fifth-order state and the scaled error norm.
    fn step(&self, y: &State, h: f64) -> Result<(State, f64)> {
        let k1 = self.rhs(y)?;
        let k2 = self.rhs(&axpy(y, h, &[(A21, &k1)]))?;
        let k3 = self.rhs(&axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = self.rhs(&axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = self.rhs(&axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
        let k6 = self.rhs(&axpy(
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ))?;
        let y_new = axpy(
            y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = self.rhs(&y_new)?;
        let mut err: f64 = 0.0;
        for i in 0..4 {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale =
                self.settings.abs_tol + self.settings.rel_tol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        Ok((y_new, err))
    }

    fn normalize(&self, y: &State) -> State {
        let p = PointUV::new(y[0], y[1]);
        let (a, b) = self.metric.half_log_coefficients(p);
        let speed = (a.exp() * y[2]).hypot(b.exp() * y[3]);
        [y[0], y[1], y[2] / speed, y[3] / speed]
    }

    fn to_state(y: &State) -> GeodesicState {
        GeodesicState {
            u: y[0],
            v: y[1],
            du: y[2],
            dv: y[3],
        }
    }

    pub fn run(&self, start: &GeodesicState, event: Option<&Event<'_>>) -> Result<Run> {
        let dom = self.metric.domain();
        let p0 = PointUV::new(start.u, start.v);
        dom.check(p0, BOUNDARY_MARGIN)?;
        let mut y = self.normalize(&[start.u, start.v, start.du, start.dv]);
        if !y.iter().all(|x| x.is_finite()) {
            return Err(Error::DegenerateInput(
                "initial velocity must be non-zero and finite".into(),
            ));
        }
        let max_len = self.settings.max_arclength;
        let mut s = 0.0;
        let mut samples = vec![TrajectorySample {
            s,
            state: Self::to_state(&y),
        }];
        let mut h = 1e-3 / y[2].hypot(y[3]);
        let mut event_prev = event.map(|e| (e.value)(&Self::to_state(&y)));

        loop {
            if s >= max_len * (1.0 - 1e-15) {
                return Ok(Run {
                    samples,
                    termination: Termination::MaxLength,
                });
            }
            h = h.min(max_len - s).min(self.settings.max_step);
            let h_min = 1e-14 * s.max(1e-3 / y[2].hypot(y[3]));
            if h < h_min {
                return self.underflow(samples, s, &y);
            }
            let (y_new, err) = match self.step(&y, h) {
                Ok(r) => r,
                Err(Error::Domain(_)) => {
                    h *= 0.25;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !(err <= 1.0) || !y_new.iter().all(|x| x.is_finite()) {
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.25
                };
                h *= factor;
                continue;
            }
            let y_new = self.normalize(&y_new);
            let state_new = Self::to_state(&y_new);

            if let (Some(ev), Some(prev)) = (event, event_prev) {
                let cur = (ev.value)(&state_new);
                if prev != 0.0 && (cur == 0.0 || prev.signum() != cur.signum()) {
                    let (theta, y_ev) = self.locate(ev, &y, h, prev, cur)?;
                    let state_ev = Self::to_state(&y_ev);
                    let s_ev = s + theta * h;
                    if (ev.accept)(&state_ev, s_ev) {
                        samples.push(TrajectorySample {
                            s: s_ev,
                            state: state_ev,
                        });
                        return Ok(Run {
                            samples,
                            termination: Termination::Closed,
                        });
                    }
                }
                event_prev = Some(cur);
            }

            s += h;
            y = y_new;
            samples.push(TrajectorySample { s, state: state_new });

            let p = PointUV::new(y[0], y[1]);
            if dom.distance_to_boundary(p) < BOUNDARY_MARGIN
                || p.u.abs().max(p.v.abs()) > self.settings.escape_radius
                || y[2].hypot(y[3]) > MAX_COORDINATE_SPEED
            {
                return Ok(Run {
                    samples,
                    termination: Termination::DomainExit,
                });
            }
            let factor = if err > 0.0 {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= factor;
        }
    }

    /// Step-size collapse: near a degenerate edge of the metric it is a domain
    /// exit, anywhere else a numerical failure.
    fn underflow(&self, samples: Vec<TrajectorySample>, s: f64, y: &State) -> Result<Run> {
        let p = PointUV::new(y[0], y[1]);
        let coordinate_speed = y[2].hypot(y[3]);
        if self.metric.domain().distance_to_boundary(p) < 1e-4 || coordinate_speed > MAX_COORDINATE_SPEED {
            Ok(Run {
                samples,
                termination: Termination::DomainExit,
            })
        } else {
            Err(Error::Stiffness {
                arclength: s,
                detail: format!("at ({}, {}) in {}", p.u, p.v, self.metric.label()),
            })
        }
    }

    /// Finds the fraction `θ ∈ (0, 1]` of the step `h` from `y` where the event
    /// changes sign, by Illinois iteration on sub-steps of size `θ h`.
    fn locate(&self, ev: &Event<'_>, y: &State, h: f64, f0: f64, f1: f64) -> Result<(f64, State)> {
        let eval = |theta: f64| -> Result<(f64, State)> {
            let (y_t, _) = self.step(y, theta * h)?;
            let y_t = self.normalize(&y_t);
            Ok(((ev.value)(&Self::to_state(&y_t)), y_t))
        };
        let (mut a, mut fa) = (0.0, f0);
        let (mut b, mut fb) = (1.0, f1);
        let mut best = eval(1.0)?;
        let mut best_theta = 1.0;
        if fb == 0.0 {
            return Ok((1.0, best.1));
        }
        let mut side = 0i8;
        for _ in 0..100 {
            let c = (a * fb - b * fa) / (fb - fa);
            let c = if c > a && c < b { c } else { 0.5 * (a + b) };
            let (fc, y_c) = eval(c)?;
            best = (fc, y_c);
            best_theta = c;
            if fc == 0.0 || (b - a) < 1e-15 {
                break;
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
            if fc.abs() < 1e-16 {
                break;
            }
        }
        Ok((best_theta, best.1))
    }
}
