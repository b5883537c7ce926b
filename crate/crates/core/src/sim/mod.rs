//! Deterministic scenario runner: wires reference, controller, disturbances,
//! and the plant integrator into a fixed-step loop with telemetry.
//!
//! Each step samples the reference, assembles the measured state from plant
//! truth (commanded inputs are zero-order held, so the acceleration and jerk
//! a real accelerometer chain would see use the previous step's thrust),
//! runs the controller, logs one telemetry row, then advances wind and
//! plant. Runs are pure functions of their configuration, including the
//! noise seed.

mod config;
mod telemetry;

pub use config::{ConfigError, DisturbanceConfig, Scenario, ScenarioConfig};
pub use telemetry::{
    emit_plots, metrics, write_telemetry, EmptyTelemetry, Metrics, PlotError, TelemetryRow,
    TELEMETRY_HEADER,
};

use crate::controller::{
    control_step, rotation_error_bound, ControlCommand, ControlDiagnostics, ControllerError,
    MeasuredState,
};
use crate::disturbance::{coupled_force, dryden_step, WindCoupling, WindState};
use crate::ga3::{Even, Odd, Vector};
use crate::reference::{ReferenceError, ReferenceSample};
use crate::rigid_body::{
    self, euler_angles_aerospace, ForceTorque, ModelError, RigidBodyState, VehicleParams,
};

/// Attitude-norm drift treated as a corrupted run; the integrator
/// renormalizes every step, so tripping this means something is badly wrong.
pub const ROTOR_DRIFT_LIMIT: f64 = 1e-9;

/// A finished run: one telemetry row per plant step plus aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub rows: Vec<TelemetryRow>,
    pub metrics: Metrics,
}

/// A run abort, tagged with where it happened.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("reference at step {step} (t = {t} s): {source}")]
    Reference {
        step: usize,
        t: f64,
        #[source]
        source: ReferenceError,
    },
    #[error("controller at step {step} (t = {t} s): {source}")]
    Controller {
        step: usize,
        t: f64,
        #[source]
        source: ControllerError,
    },
    #[error("plant step {step} (t = {t} s): {source}")]
    Model {
        step: usize,
        t: f64,
        #[source]
        source: ModelError,
    },
    #[error("non-finite {what} at step {step} (t = {t} s)")]
    NumericFailure { step: usize, t: f64, what: &'static str },
    #[error("attitude norm drifted by {drift:.3e} at step {step} (t = {t} s)")]
    RotorDrift { step: usize, t: f64, drift: f64 },
}

/// Measured state assembled from plant truth. Acceleration reflects the
/// zero-order-held previous command and the disturbance force that actually
/// acted; jerk is its analytic derivative with the thrust magnitude and the
/// disturbance treated as frozen (their rates are not measurable).
fn measured(
    p: &VehicleParams,
    st: &RigidBodyState,
    smp: &ReferenceSample,
    f_prev: f64,
    w_prev: Vector,
) -> MeasuredState {
    let t_now = st.thrust_direction(p);
    let ddxi = Vector::E3 * p.g - t_now * (f_prev / p.m) + w_prev * (1.0 / p.m);
    // d/dt (r t_ref r~) = r (1/2 (t_ref om - om t_ref) + dt_ref/dt) r~.
    let om = Even::from_parts(0.0, st.omega_b);
    let axis = Odd::from_vector(p.thrust_axis_ref);
    let swirl = (axis.mul_even(om) - om.mul_odd(axis)) * 0.5;
    let t_dot = st.r.rotate_vector(swirl.vector_part() + smp.dt_ref);
    let dddxi = t_dot * (-(f_prev / p.m));
    MeasuredState { xi: st.xi, dxi: st.dxi, ddxi, dddxi, r: st.r, omega_b: st.omega_b }
}

/// Run one scenario to completion.
///
/// Produces `round(t_end/dt) + 1` rows at `t = k dt`, each holding the
/// pre-step state and the command computed from it. Bound violations are
/// counted in the metrics rather than aborting; numeric failures abort.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimOutput, SimError> {
    let n = (cfg.t_end / cfg.dt).round() as usize;
    let dist = &cfg.disturbance;
    let mut st = cfg.initial;
    let mut wind = WindState::new(&dist.dryden, dist.steady_wind);
    let mut f_prev = 0.0;
    let mut w_prev = ambient_force(cfg, &st, &wind);
    let mut prev_diag: Option<ControlDiagnostics> = None;
    let mut last_cmd: Option<ControlCommand> = None;
    let mut rows = Vec::with_capacity(n + 1);
    let mut violations = 0_usize;

    for step in 0..=n {
        let t = step as f64 * cfg.dt;
        let finite = st.xi.is_finite()
            && st.dxi.is_finite()
            && st.r.as_even().is_finite()
            && st.omega_b.is_finite();
        if !finite {
            return Err(SimError::NumericFailure { step, t, what: "vehicle state" });
        }
        let smp = cfg
            .trajectory
            .sample(t)
            .map_err(|source| SimError::Reference { step, t, source })?;
        let p = cfg.vehicle.with_thrust_axis(smp.t_ref);

        let cmd = if step % cfg.control_divisor as usize == 0 {
            let meas = measured(&p, &st, &smp, f_prev, w_prev);
            let cmd = control_step(&p, &cfg.gains, &meas, &smp, prev_diag.as_ref())
                .map_err(|source| SimError::Controller { step, t, source })?;
            prev_diag = Some(cmd.diagnostics);
            last_cmd = Some(cmd);
            cmd
        } else {
            last_cmd.expect("step 0 always runs the controller")
        };

        let drift = (st.r.as_even().norm() - 1.0).abs();
        if drift > ROTOR_DRIFT_LIMIT {
            return Err(SimError::RotorDrift { step, t, drift });
        }
        let d = &cmd.diagnostics;
        if !rotation_error_bound(d.t_d, st.thrust_direction(&p), d.j_e_theta_e, smp.t_ref) {
            violations += 1;
        }

        let (roll, pitch, yaw) = euler_angles_aerospace(st.r);
        let row = TelemetryRow {
            t,
            xi: st.xi,
            dxi: st.dxi,
            r: st.r,
            omega_b: st.omega_b,
            f: cmd.f,
            tau: cmd.tau,
            xi_d: smp.xi_d,
            r_d: d.r_d,
            pos_err: (st.xi - smp.xi_d).norm(),
            att_err: d.j_e_theta_e.norm(),
            wind_i: if dist.wind_enabled { wind.wind_inertial(st.r) } else { Vector::ZERO },
            euler: (roll, pitch, yaw),
            t_axis: smp.t_ref,
        };
        if !row.is_finite() {
            return Err(SimError::NumericFailure { step, t, what: "telemetry row" });
        }
        rows.push(row);

        if step < n {
            if dist.wind_enabled {
                wind = dryden_step(&dist.dryden, wind, cfg.dt);
            }
            let w_force = ambient_force(cfg, &st, &wind);
            let ft = ForceTorque { f: cmd.f, tau: cmd.tau, w: w_force };
            st = rigid_body::step(&p, &st, &ft, cfg.dt)
                .map_err(|source| SimError::Model { step, t, source })?;
            f_prev = cmd.f;
            w_prev = w_force;
        }
    }

    let mut metrics = telemetry::metrics(&rows).expect("loop always yields rows");
    metrics.bound_violations = violations;
    Ok(SimOutput { rows, metrics })
}

/// The disturbance force acting on the body in its current state, honoring
/// the wind/drag switches and the coupling mode.
fn ambient_force(cfg: &ScenarioConfig, st: &RigidBodyState, wind: &WindState) -> Vector {
    let dist = &cfg.disturbance;
    let (steady, gust_i) = if dist.wind_enabled {
        (dist.steady_wind, st.r.rotate_vector(wind.gust_b))
    } else {
        (Vector::ZERO, Vector::ZERO)
    };
    if dist.drag_enabled {
        coupled_force(&dist.drag, dist.coupling, st.dxi, steady, gust_i)
    } else if dist.coupling == WindCoupling::DirectForce {
        gust_i
    } else {
        Vector::ZERO
    }
}
