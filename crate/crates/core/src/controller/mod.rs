//! Cascaded tracking controller for the thrust-vectored rigid body.
//!
//! The translational loop turns position/velocity errors into a virtual
//! acceleration command `u1`, from which thrust magnitude and direction are
//! recovered (the vehicle can only push along its thrust axis). The
//! rotational loop then steers the attitude so the real axis reaches that
//! direction while staying as close as possible to an externally preferred
//! orientation, producing a virtual angular acceleration `u2` that the
//! torque command realizes exactly through the inertia map.
//!
//! Both loops are double integrators in their error coordinates, closed by
//! validated-Hurwitz gain matrices; all feedforward terms (jerk, snap,
//! desired angular rates) are carried analytically so the only approximation
//! in the loop is the plant integrator itself.

mod align;
mod gains;

pub use align::{
    error_rotor, omega_desired, omega_dot_desired, sandwich_chain, AttitudeTarget, RotorChain,
    VectorChain, ALIGN_DEGENERATE, TANGENCY_RESIDUAL,
};
pub use gains::{
    apply_gain, apply_gain_planes, block_diagonal, gain_is_hurwitz_with_margin, gain_norm_bound,
    GainError, GainMatrix, Gains,
};

use crate::ga3::{commutator_bivector, Bivector, GaError, Rotor, Vector};
use crate::reference::ReferenceSample;
use crate::rigid_body::VehicleParams;

/// Demanded thrust magnitudes at or below this are treated as singular: any
/// attitude satisfies the translational objective, so the previous thrust
/// direction is held instead of dividing by ~0.
pub const THRUST_FLOOR: f64 = 1e-6;

/// Size of the deterministic nudge applied to the demanded thrust direction
/// when it is exactly opposite the preferred one.
pub const THRUST_PERTURB: f64 = 1e-6;

/// Everything the controller can get wrong.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ControllerError {
    #[error(transparent)]
    Gain(#[from] GainError),
    #[error("demanded thrust {f_d} N is at or below the singularity floor")]
    ThrustSingular { f_d: f64 },
    #[error("preferred and demanded thrust directions are antipodal")]
    AntipodalThrust,
    #[error("rotor derivative is not tangent: grade-0 residual {residual}")]
    InconsistentDerivative { residual: f64 },
    #[error(transparent)]
    Algebra(#[from] GaError),
}

/// Full state measurement consumed by one control step. Translational
/// acceleration and jerk are assumed measurable (in simulation they come
/// from the plant model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredState {
    /// Position, m.
    pub xi: Vector,
    /// Velocity, m/s.
    pub dxi: Vector,
    /// Acceleration, m/s^2.
    pub ddxi: Vector,
    /// Jerk, m/s^3.
    pub dddxi: Vector,
    /// Attitude rotor.
    pub r: Rotor,
    /// Body angular velocity bivector, rad/s.
    pub omega_b: Bivector,
}

/// Intermediate quantities of a control step, reported for telemetry and
/// carried across steps only for the thrust-singularity fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlDiagnostics {
    /// Demanded thrust magnitude, N.
    pub f_d: f64,
    /// Demanded inertial thrust direction (unit).
    pub t_d: Vector,
    /// Desired attitude rotor.
    pub r_d: Rotor,
    /// Desired angular velocity (inertial frame), rad/s.
    pub omega_d: Bivector,
    /// Desired angular acceleration (inertial frame), rad/s^2.
    pub domega_d: Bivector,
    /// Attitude error bivector (plane times angle).
    pub j_e_theta_e: Bivector,
}

/// Actuation command for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlCommand {
    /// Thrust magnitude, N; never negative.
    pub f: f64,
    /// Body torque bivector, N m.
    pub tau: Bivector,
    pub diagnostics: ControlDiagnostics,
}

/// Thrust magnitude realizing the virtual acceleration `ddxi_v`:
/// `f = m |ddxi_v - g e3|`.
pub fn desired_thrust(p: &VehicleParams, ddxi_v: Vector) -> f64 {
    p.m * (ddxi_v - Vector::E3 * p.g).norm()
}

/// Unit thrust direction realizing `ddxi_v` at magnitude `f_d`:
/// `t_d = -(m / f_d)(ddxi_v - g e3)`.
pub fn desired_thrust_dir(
    p: &VehicleParams,
    ddxi_v: Vector,
    f_d: f64,
) -> Result<Vector, ControllerError> {
    if f_d <= THRUST_FLOOR {
        return Err(ControllerError::ThrustSingular { f_d });
    }
    Ok((ddxi_v - Vector::E3 * p.g) * (-p.m / f_d))
}

/// First and second derivatives of the demanded thrust direction and
/// magnitude, given the virtual acceleration chain `(u1, du1, ddu1)` and the
/// already-computed `(f_d, t_d)`.
///
/// Returns `(dt_d, ddt_d, df_d, ddf_d)`. Derived by differentiating
/// `f_d t_d = -m (u1 - g e3)` and `f_d = m |u1 - g e3|`:
/// the magnitude chain needs only dot products, and the direction chain
/// follows from the product rule solved for the direction derivatives.
pub fn thrust_dir_derivs(
    p: &VehicleParams,
    du1: Vector,
    ddu1: Vector,
    u1: Vector,
    f_d: f64,
    t_d: Vector,
) -> Result<(Vector, Vector, f64, f64), ControllerError> {
    if f_d <= THRUST_FLOOR {
        return Err(ControllerError::ThrustSingular { f_d });
    }
    let a = u1 - Vector::E3 * p.g;
    let an = a.norm();
    let df_d = p.m * a.dot(du1) / an;
    let ddf_d = p.m * ((du1.dot(du1) + a.dot(ddu1)) / an - (a.dot(du1) / an).powi(2) / an);
    let dt_d = (du1 * -p.m - t_d * df_d) * (1.0 / f_d);
    let ddt_d = (ddu1 * -p.m - dt_d * (2.0 * df_d) - t_d * ddf_d) * (1.0 / f_d);
    Ok((dt_d, ddt_d, df_d, ddf_d))
}

/// Nudge an antipodal thrust demand off the singular direction by
/// [`THRUST_PERTURB`] and restore the differential unit-norm constraints on
/// its derivatives.
fn nudge_antipodal(t_d: &VectorChain) -> Result<VectorChain, ControllerError> {
    let seed = if t_d.v.dot(Vector::E1).abs() < 0.9 { Vector::E1 } else { Vector::E2 };
    let perp = (seed - t_d.v * t_d.v.dot(seed)).normalized()?;
    let v = (t_d.v + perp * THRUST_PERTURB).normalized()?;
    let dv = t_d.dv - v * v.dot(t_d.dv);
    let ddv = t_d.ddv - v * (v.dot(t_d.ddv) + dv.dot(dv));
    Ok(VectorChain { v, dv, ddv })
}

/// One full cascade evaluation.
///
/// `prev` carries the previous step's diagnostics; it is consulted only when
/// the demanded thrust collapses below [`THRUST_FLOOR`], where the last
/// commanded direction is held (or the preferred pose's axis on the first
/// step).
pub fn control_step(
    p: &VehicleParams,
    gains: &Gains,
    meas: &MeasuredState,
    smp: &ReferenceSample,
    prev: Option<&ControlDiagnostics>,
) -> Result<ControlCommand, ControllerError> {
    // Translational loop: virtual acceleration command and its derivatives.
    let xi_e = meas.xi - smp.xi_d;
    let dxi_e = meas.dxi - smp.dxi_d;
    let ddxi_e = meas.ddxi - smp.ddxi_d;
    let dddxi_e = meas.dddxi - smp.dddxi_d;
    let u1 = smp.ddxi_d - apply_gain(gains.k1(), xi_e, dxi_e);
    let du1 = smp.dddxi_d - apply_gain(gains.k1(), dxi_e, ddxi_e);
    let ddu1 = smp.ddddxi_d - apply_gain(gains.k1(), ddxi_e, dddxi_e);

    // Thrust recovery, with the singular-demand fallback.
    let f_d = desired_thrust(p, u1);
    let t_d = match desired_thrust_dir(p, u1, f_d) {
        Ok(dir) => {
            let (dt_d, ddt_d, _, _) = thrust_dir_derivs(p, du1, ddu1, u1, f_d, dir)?;
            VectorChain { v: dir, dv: dt_d, ddv: ddt_d }
        }
        Err(ControllerError::ThrustSingular { .. }) => {
            let hold =
                prev.map(|d| d.t_d).unwrap_or_else(|| smp.r_p.rotate_vector(smp.t_ref));
            VectorChain::constant(hold)
        }
        Err(other) => return Err(other),
    };

    // Attitude chain, retrying once with a nudged demand if the preferred
    // pose points the axis exactly opposite to it.
    let r_p = RotorChain { r: smp.r_p, dr: smp.dr_p, ddr: smp.ddr_p };
    let t_ref = VectorChain { v: smp.t_ref, dv: smp.dt_ref, ddv: smp.ddt_ref };
    let (t_d, attitude) = match error_rotor(meas.r, &r_p, &t_d, &t_ref) {
        Ok(a) => (t_d, a),
        Err(ControllerError::AntipodalThrust) => {
            let nudged = nudge_antipodal(&t_d)?;
            let a = error_rotor(meas.r, &r_p, &nudged, &t_ref)?;
            (nudged, a)
        }
        Err(other) => return Err(other),
    };
    let omega_d = omega_desired(attitude.r_d, attitude.dr_d)?;
    let domega_d = omega_dot_desired(attitude.r_d, attitude.dr_d, attitude.ddr_d)?;

    // Rotational loop in the measured body frame. The desired rates are
    // inertial-frame quantities; transporting them through the measured
    // rotor adds the frame-motion commutator to the feedforward.
    let rr = meas.r.reverse();
    let omega_d_b = rr.rotate_bivector(omega_d);
    let domega_d_b = rr.rotate_bivector(domega_d);
    let omega_e = meas.omega_b - omega_d_b;
    let u2 = domega_d_b + commutator_bivector(meas.omega_b, omega_d_b)
        - apply_gain_planes(gains.k2(), -attitude.j_e_theta_e, omega_e);

    // Torque that makes the body's angular acceleration equal u2 exactly.
    let tau = p.inertia_map(u2)
        - commutator_bivector(meas.omega_b, p.inertia_map(meas.omega_b));

    Ok(ControlCommand {
        f: f_d.max(0.0),
        tau,
        diagnostics: ControlDiagnostics {
            f_d,
            t_d: t_d.v,
            r_d: attitude.r_d,
            omega_d,
            domega_d,
            j_e_theta_e: attitude.j_e_theta_e,
        },
    })
}

/// The attitude-error bound on the thrust-direction mismatch:
/// `|t_d - t| <= 3 max_i |a_i| |j_e theta_e|` with `a_i` the components of
/// the body thrust axis. Checked at every simulation step.
pub fn rotation_error_bound(
    t_d: Vector,
    t: Vector,
    j_e_theta_e: Bivector,
    t_ref: Vector,
) -> bool {
    let a_max = t_ref
        .coords()
        .iter()
        .fold(0.0_f64, |acc, c| acc.max(c.abs()));
    (t_d - t).norm() <= 3.0 * a_max * j_e_theta_e.norm() + 1e-9
}
