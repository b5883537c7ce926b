//! Time-parameterized reference signals for the tracking controller: desired
//! position with four derivatives, a preferred orientation rotor with two
//! derivatives, and the (possibly time-varying) body thrust axis with two
//! derivatives.
//!
//! Everything here is analytic or splined so the derivative fields are exact
//! (or C^4-interpolated) rather than finite-differenced; the controller's
//! feedforward chains are only as good as these derivatives.

mod spline;

pub use spline::{SplineTable, SplineError, MAX_KNOT_GAP};

use crate::ga3::{Bivector, Even, Rotor, Vector};

/// One evaluation of the full reference bundle at a time instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSample {
    /// Desired position, m.
    pub xi_d: Vector,
    /// Desired velocity, m/s.
    pub dxi_d: Vector,
    /// Desired acceleration, m/s^2.
    pub ddxi_d: Vector,
    /// Desired jerk, m/s^3.
    pub dddxi_d: Vector,
    /// Desired snap, m/s^4.
    pub ddddxi_d: Vector,
    /// Preferred orientation rotor (the attitude the vehicle should take
    /// when thrust alignment leaves a one-parameter family).
    pub r_p: Rotor,
    /// First derivative of the preferred rotor.
    pub dr_p: Even,
    /// Second derivative of the preferred rotor.
    pub ddr_p: Even,
    /// Body thrust axis at this instant (unit).
    pub t_ref: Vector,
    /// First derivative of the thrust axis.
    pub dt_ref: Vector,
    /// Second derivative of the thrust axis.
    pub ddt_ref: Vector,
}

/// Position part of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionReference {
    /// Stay at a fixed point; all derivatives zero.
    Hover(Vector),
    /// The four-petaled rose sweep: `x + iy = 50 cos(w t) exp(i w t)`-style
    /// petals at 0.376 rad/s base frequency with a constant 3.75 m/s descent
    /// from 35 m.
    Rhodonea,
    /// Interpolated from a user-supplied table.
    Custom(SplineTable),
}

/// Attitude part of a trajectory: the preferred rotor and body thrust axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttitudeReference {
    /// Preferred rotor pinned to identity, thrust axis fixed at body e3.
    LevelFixedAxis,
    /// Sinusoidal yaw weave `exp(-e1e2 0.45 sin(0.1 pi t))` plus a logistic
    /// tilt of the thrust axis from e3 toward (e1 + e3)/sqrt(2) around
    /// t = 10.5 s.
    WeaveAndTilt,
}

/// Errors from reference evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReferenceError {
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Spline(#[from] SplineError),
}

/// A complete trajectory: where to be and how to be oriented.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub position: PositionReference,
    pub attitude: AttitudeReference,
}

impl Trajectory {
    /// Hold a point with level preferred attitude.
    pub fn hover(point: Vector) -> Self {
        Self {
            position: PositionReference::Hover(point),
            attitude: AttitudeReference::LevelFixedAxis,
        }
    }

    /// The descending rose curve with yaw weave and thrust-axis tilt.
    pub fn rhodonea() -> Self {
        Self {
            position: PositionReference::Rhodonea,
            attitude: AttitudeReference::WeaveAndTilt,
        }
    }

    /// A splined custom path flown with level preferred attitude.
    pub fn custom(table: SplineTable) -> Self {
        Self {
            position: PositionReference::Custom(table),
            attitude: AttitudeReference::LevelFixedAxis,
        }
    }

    /// Evaluate the whole bundle at `t >= 0`.
    pub fn sample(&self, t: f64) -> Result<ReferenceSample, ReferenceError> {
        if t < 0.0 || t.is_nan() {
            return Err(ReferenceError::NegativeTime(t));
        }
        let [xi_d, dxi_d, ddxi_d, dddxi_d, ddddxi_d] = match &self.position {
            PositionReference::Hover(p) => [*p, Vector::ZERO, Vector::ZERO, Vector::ZERO, Vector::ZERO],
            PositionReference::Rhodonea => rhodonea_position(t),
            PositionReference::Custom(table) => table.eval(t)?,
        };
        let (r_p, dr_p, ddr_p) = preferred_rotor(self.attitude, t);
        let (t_ref, dt_ref, ddt_ref) = thrust_axis(self.attitude, t);
        Ok(ReferenceSample {
            xi_d,
            dxi_d,
            ddxi_d,
            dddxi_d,
            ddddxi_d,
            r_p,
            dr_p,
            ddr_p,
            t_ref,
            dt_ref,
            ddt_ref,
        })
    }
}

/// Rotor `exp(a j)` in a fixed plane `j` together with its first two time
/// derivatives, given the angle and its derivatives. Exact because the plane
/// commutes with itself: `d/dt exp(a j) = a' j exp(a j)`.
pub fn fixed_plane_rotor(j: Bivector, a: f64, da: f64, dda: f64) -> (Rotor, Even, Even) {
    let (sa, ca) = a.sin_cos();
    let r = Rotor::new_unchecked(Even::from_parts(ca, j * sa));
    let dr = Even::from_parts(-sa * da, j * (ca * da));
    let ddr = Even::from_parts(-sa * dda - ca * da * da, j * (ca * dda - sa * da * da));
    (r, dr, ddr)
}

/// Preferred rotor with two derivatives for the given attitude reference.
pub fn preferred_rotor(att: AttitudeReference, t: f64) -> (Rotor, Even, Even) {
    match att {
        AttitudeReference::LevelFixedAxis => (Rotor::IDENTITY, Even::ZERO, Even::ZERO),
        AttitudeReference::WeaveAndTilt => {
            // a(t) = -0.45 sin(0.1 pi t) on the e1e2 plane.
            let w = 0.1 * std::f64::consts::PI;
            let (s, c) = (w * t).sin_cos();
            let a = -0.45 * s;
            let da = -0.45 * w * c;
            let dda = 0.45 * w * w * s;
            fixed_plane_rotor(Bivector::E12, a, da, dda)
        }
    }
}

/// Midpoint time of the logistic thrust-axis tilt, s.
pub const TILT_MIDPOINT: f64 = 10.5;
/// Logistic steepness of the tilt, 1/s.
pub const TILT_RATE: f64 = 10.0;
/// Final tilt angle, rad: the axis ends up at (e1 + e3)/sqrt(2).
pub const TILT_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

/// Body thrust axis with two derivatives for the given attitude reference.
pub fn thrust_axis(att: AttitudeReference, t: f64) -> (Vector, Vector, Vector) {
    match att {
        AttitudeReference::LevelFixedAxis => (Vector::E3, Vector::ZERO, Vector::ZERO),
        AttitudeReference::WeaveAndTilt => {
            // phi(t) = TILT_ANGLE * sigma(TILT_RATE (t - TILT_MIDPOINT)),
            // axis tilting from e3 toward e1 in the e3e1 plane.
            let sigma = 1.0 / (1.0 + (-TILT_RATE * (t - TILT_MIDPOINT)).exp());
            let dsigma = TILT_RATE * sigma * (1.0 - sigma);
            let ddsigma = TILT_RATE * TILT_RATE * sigma * (1.0 - sigma) * (1.0 - 2.0 * sigma);
            let phi = TILT_ANGLE * sigma;
            let dphi = TILT_ANGLE * dsigma;
            let ddphi = TILT_ANGLE * ddsigma;
            let (s, c) = phi.sin_cos();
            let axis = Vector::new(s, 0.0, c);
            let tangent = Vector::new(c, 0.0, -s);
            let d_axis = tangent * dphi;
            let dd_axis = tangent * ddphi - axis * (dphi * dphi);
            (axis, d_axis, dd_axis)
        }
    }
}

/// Base angular frequency of the rose sweep, rad/s.
const ROSE_W1: f64 = 0.376;
/// Sum frequency after the product-to-sum split, rad/s.
const ROSE_W2: f64 = 3.0 * ROSE_W1;
/// Petal amplitude after the split, m.
const ROSE_AMP: f64 = 25.0;
/// Initial altitude term (NED: positive down), m.
const ROSE_Z0: f64 = 35.0;
/// Descent rate, m/s.
const ROSE_SINK: f64 = 3.75;

/// `d^n/dt^n cos(w t)` evaluated without accumulating phase error.
fn cos_deriv(w: f64, t: f64, n: usize) -> f64 {
    let (s, c) = (w * t).sin_cos();
    let wn = w.powi(n as i32);
    match n % 4 {
        0 => wn * c,
        1 => -wn * s,
        2 => -wn * c,
        _ => wn * s,
    }
}

/// `d^n/dt^n sin(w t)`.
fn sin_deriv(w: f64, t: f64, n: usize) -> f64 {
    let (s, c) = (w * t).sin_cos();
    let wn = w.powi(n as i32);
    match n % 4 {
        0 => wn * s,
        1 => wn * c,
        2 => -wn * s,
        _ => -wn * c,
    }
}

/// Rose-curve position and four derivatives. The curve
/// `50 cos(w t) cos(2w t) e1 + 50 sin(w t) cos(2w t) e2 + (35 - 3.75 t) e3`
/// is evaluated in product-to-sum form
/// `25[cos(w t) + cos(3w t)] e1 + 25[sin(3w t) - sin(w t)] e2 + ...`,
/// which differentiates cleanly to any order.
fn rhodonea_position(t: f64) -> [Vector; 5] {
    let mut out = [Vector::ZERO; 5];
    for (n, v) in out.iter_mut().enumerate() {
        v.x1 = ROSE_AMP * (cos_deriv(ROSE_W1, t, n) + cos_deriv(ROSE_W2, t, n));
        v.x2 = ROSE_AMP * (sin_deriv(ROSE_W2, t, n) - sin_deriv(ROSE_W1, t, n));
        v.x3 = match n {
            0 => ROSE_Z0 - ROSE_SINK * t,
            1 => -ROSE_SINK,
            _ => 0.0,
        };
    }
    out
}
