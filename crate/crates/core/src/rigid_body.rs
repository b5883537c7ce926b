//! Rigid-body plant for an underactuated thrust-vectored vehicle.
//!
//! Conventions: inertial frame is North-East-Down, so gravity acts along
//! `+e3` and a hovering vehicle thrusts along its body `e3` axis (the rotor
//! maps body to inertial). State is `(xi, dxi, r, omega_b)` with the body
//! angular velocity expressed as a bivector in the body principal planes.
//!
//! Equations of motion:
//!
//! - translation: `m xi'' = m g e3 - f (r t_ref r~) + w`
//! - attitude:    `r' = -1/2 r Omega_b`
//! - body rates:  `I(Omega_b') = tau + [Omega_b, I(Omega_b)]`
//!
//! where `I` scales each principal plane by its moment of inertia and `[.,.]`
//! is the bivector commutator. Integration is classical fixed-step RK4 over
//! the flat coefficient state with the rotor renormalized once per step.

use crate::ga3::{commutator_bivector, tol, Bivector, Even, GaError, Odd, Rotor, Vector};

/// Upper bound on the integration step. Above this the RK4 attitude update
/// visibly degrades for the body rates this crate is used at.
pub const MAX_TIMESTEP: f64 = 0.01;

/// `sin(theta)` threshold below which Euler-angle extraction is degenerate
/// (the outer and inner rotation planes coincide).
pub const EULER_DEGENERATE: f64 = 1e-9;

/// Errors from parameter validation and integration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("timestep {0} outside (0, {MAX_TIMESTEP}]")]
    TimestepOutOfRange(f64),
    #[error("vehicle parameter {name} must be positive, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },
    #[error("thrust axis must be unit length, got norm {0}")]
    NonUnitThrustAxis(f64),
    #[error("attitude norm drifted to {0}, state is corrupted")]
    AttitudeDiverged(f64),
    #[error("state became non-finite during integration")]
    NonFiniteState,
}

/// Mass, inertia, gravity, and the body-frame thrust axis.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VehicleParams {
    /// Mass in kg.
    pub m: f64,
    /// Moment of inertia in the e1e2 plane (yaw plane), kg m^2.
    pub i12: f64,
    /// Moment of inertia in the e2e3 plane, kg m^2.
    pub i23: f64,
    /// Moment of inertia in the e3e1 plane, kg m^2.
    pub i31: f64,
    /// Gravitational acceleration, m/s^2 (positive, acts along +e3).
    pub g: f64,
    /// Unit thrust axis in the body frame; thrust pushes along its negative
    /// once rotated into the inertial frame.
    pub thrust_axis_ref: Vector,
}

impl VehicleParams {
    /// Validating constructor: all scalars positive, unit thrust axis.
    pub fn new(
        m: f64,
        i12: f64,
        i23: f64,
        i31: f64,
        g: f64,
        thrust_axis_ref: Vector,
    ) -> Result<Self, ModelError> {
        for (name, value) in [("m", m), ("i12", i12), ("i23", i23), ("i31", i31), ("g", g)] {
            if value <= 0.0 || !value.is_finite() {
                return Err(ModelError::NonPositiveParam { name, value });
            }
        }
        let n = thrust_axis_ref.norm();
        if (n - 1.0).abs() > tol::UNIT_INPUT {
            return Err(ModelError::NonUnitThrustAxis(n));
        }
        Ok(Self { m, i12, i23, i31, g, thrust_axis_ref })
    }

    /// The 25 g flight vehicle used throughout the test scenarios.
    pub fn flight_default() -> Self {
        Self {
            m: 0.025,
            i12: 4.856e-3,
            i23: 4.856e-3,
            i31: 8.801e-3,
            g: 9.81,
            thrust_axis_ref: Vector::E3,
        }
    }

    /// Same vehicle with a different instantaneous body thrust axis.
    pub fn with_thrust_axis(self, thrust_axis_ref: Vector) -> Self {
        Self { thrust_axis_ref, ..self }
    }

    /// Inertia tensor on bivectors: scales each principal plane by its
    /// moment.
    pub fn inertia_map(&self, b: Bivector) -> Bivector {
        Bivector::new(self.i12 * b.b12, self.i23 * b.b23, self.i31 * b.b31)
    }

    /// Inverse of [`inertia_map`](Self::inertia_map).
    pub fn inertia_inverse(&self, b: Bivector) -> Bivector {
        Bivector::new(b.b12 / self.i12, b.b23 / self.i23, b.b31 / self.i31)
    }

    /// Thrust magnitude that balances gravity with the axis vertical.
    pub fn hover_thrust(&self) -> f64 {
        self.m * self.g
    }
}

/// Full kinematic state of the body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyState {
    /// Inertial position, m.
    pub xi: Vector,
    /// Inertial velocity, m/s.
    pub dxi: Vector,
    /// Attitude rotor (body to inertial sandwich `r x r~`).
    pub r: Rotor,
    /// Body angular velocity, rad/s, in body principal planes.
    pub omega_b: Bivector,
}

impl RigidBodyState {
    /// At rest at the origin, level attitude.
    pub fn at_rest() -> Self {
        Self {
            xi: Vector::ZERO,
            dxi: Vector::ZERO,
            r: Rotor::IDENTITY,
            omega_b: Bivector::ZERO,
        }
    }

    /// Inertial thrust direction for the given body axis.
    pub fn thrust_direction(&self, p: &VehicleParams) -> Vector {
        self.r.rotate_vector(p.thrust_axis_ref)
    }
}

/// The actuation and disturbance inputs held constant across one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceTorque {
    /// Thrust magnitude, N. Must be >= 0; direction comes from the attitude.
    pub f: f64,
    /// Body torque, N m, in body principal planes.
    pub tau: Bivector,
    /// Disturbance force, N, in the inertial frame.
    pub w: Vector,
}

/// `xi'' = g e3 - (f/m) (r t_ref r~) + w/m`.
pub fn translational_accel(p: &VehicleParams, st: &RigidBodyState, ft: &ForceTorque) -> Vector {
    debug_assert!(ft.f >= 0.0, "thrust must be nonnegative");
    accel_from_attitude(p, st.r.as_even(), ft)
}

/// `Omega_b' = I^-1(tau + [Omega_b, I(Omega_b)])`.
pub fn rotational_accel(p: &VehicleParams, st: &RigidBodyState, tau_body: Bivector) -> Bivector {
    let gyro = commutator_bivector(st.omega_b, p.inertia_map(st.omega_b));
    p.inertia_inverse(tau_body + gyro)
}

/// Rotational kinetic energy `1/2 sum iota_ab Omega_ab^2`, J. Conserved for
/// torque-free motion; the integrator tests lean on that.
pub fn rotational_energy(p: &VehicleParams, st: &RigidBodyState) -> f64 {
    0.5 * st.omega_b.dot(p.inertia_map(st.omega_b))
}

/// Angular momentum bivector rotated into the inertial frame,
/// `r I(Omega_b) r~`. Conserved for torque-free motion.
pub fn angular_momentum_world(p: &VehicleParams, st: &RigidBodyState) -> Bivector {
    st.r.rotate_bivector(p.inertia_map(st.omega_b))
}

/// Flat coefficient state used inside the integrator; the attitude is a raw
/// even element there because intermediate stages are not unit-norm.
#[derive(Clone, Copy)]
struct Flat {
    xi: Vector,
    dxi: Vector,
    r: Even,
    om: Bivector,
}

impl Flat {
    fn shifted(self, k: Flat, h: f64) -> Flat {
        Flat {
            xi: self.xi + k.xi * h,
            dxi: self.dxi + k.dxi * h,
            r: self.r + k.r * h,
            om: self.om + k.om * h,
        }
    }
}

fn accel_from_attitude(p: &VehicleParams, r: Even, ft: &ForceTorque) -> Vector {
    let rx = r.mul_odd(Odd::from_vector(p.thrust_axis_ref));
    let t = rx.mul_even(r.reverse()).vector_part();
    Vector::E3 * p.g - t * (ft.f / p.m) + ft.w * (1.0 / p.m)
}

fn deriv(p: &VehicleParams, ft: &ForceTorque, s: Flat) -> Flat {
    Flat {
        xi: s.dxi,
        dxi: accel_from_attitude(p, s.r, ft),
        r: s.r.mul_even(Even::from_parts(0.0, s.om)) * -0.5,
        om: p.inertia_inverse(ft.tau + commutator_bivector(s.om, p.inertia_map(s.om))),
    }
}

/// One classical RK4 step with the inputs held constant, followed by rotor
/// renormalization. `dt` must lie in `(0, MAX_TIMESTEP]`.
pub fn step(
    p: &VehicleParams,
    st: &RigidBodyState,
    ft: &ForceTorque,
    dt: f64,
) -> Result<RigidBodyState, ModelError> {
    if !(dt > 0.0 && dt <= MAX_TIMESTEP) {
        return Err(ModelError::TimestepOutOfRange(dt));
    }

    let s0 = Flat { xi: st.xi, dxi: st.dxi, r: st.r.as_even(), om: st.omega_b };
    let k1 = deriv(p, ft, s0);
    let k2 = deriv(p, ft, s0.shifted(k1, dt / 2.0));
    let k3 = deriv(p, ft, s0.shifted(k2, dt / 2.0));
    let k4 = deriv(p, ft, s0.shifted(k3, dt));

    let sixth = dt / 6.0;
    let s1 = Flat {
        xi: s0.xi + (k1.xi + k2.xi * 2.0 + k3.xi * 2.0 + k4.xi) * sixth,
        dxi: s0.dxi + (k1.dxi + k2.dxi * 2.0 + k3.dxi * 2.0 + k4.dxi) * sixth,
        r: s0.r + (k1.r + k2.r * 2.0 + k3.r * 2.0 + k4.r) * sixth,
        om: s0.om + (k1.om + k2.om * 2.0 + k3.om * 2.0 + k4.om) * sixth,
    };

    if !(s1.xi.is_finite() && s1.dxi.is_finite() && s1.r.is_finite() && s1.om.is_finite()) {
        return Err(ModelError::NonFiniteState);
    }
    let r = Rotor::new(s1.r).map_err(|e| match e {
        GaError::NonUnitRotor { norm } => ModelError::AttitudeDiverged(norm),
        _ => ModelError::NonFiniteState,
    })?;
    Ok(RigidBodyState { xi: s1.xi, dxi: s1.dxi, r, omega_b: s1.om })
}

/// Euler angles for the plane composition
/// `exp(-e1e2 psi/2) exp(-e2e3 theta/2) exp(-e1e2 phi/2)`, which shares the
/// outer plane between the first and last factor. `degenerate` is set when
/// `sin(theta)` vanishes and only `psi + phi` (or `psi - phi` at theta = pi)
/// is observable; the convention there is `phi = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub degenerate: bool,
}

/// Extract the composition angles from a rotor. Always recomposes to the
/// input up to overall sign.
pub fn euler_angles(r: Rotor) -> EulerAngles {
    let s = r.scalar_part();
    let b = r.bivector_part();
    // r = cb cos(S) - cb sin(S) e12 - sb cos(D) e23 - sb sin(D) e31 with
    // S = (psi + phi)/2, D = (psi - phi)/2, cb = cos(theta/2), sb = sin(theta/2).
    let cb = (s * s + b.b12 * b.b12).sqrt();
    let sb = (b.b23 * b.b23 + b.b31 * b.b31).sqrt();
    let theta = 2.0 * sb.atan2(cb);
    let sin_theta = 2.0 * sb * cb;
    let degenerate = sin_theta < EULER_DEGENERATE;

    let (sum, diff) = if degenerate {
        if cb >= sb {
            // Near theta = 0 only psi + phi is defined.
            let sum = (-b.b12).atan2(s);
            (sum, sum)
        } else {
            // Near theta = pi only psi - phi is defined.
            let diff = (-b.b31).atan2(-b.b23);
            (diff, diff)
        }
    } else {
        ((-b.b12).atan2(s), (-b.b31).atan2(-b.b23))
    };

    EulerAngles {
        phi: sum - diff,
        theta,
        psi: sum + diff,
        degenerate,
    }
}

/// Recompose the shared-plane Euler composition into a rotor.
pub fn euler_rotor(phi: f64, theta: f64, psi: f64) -> Rotor {
    let outer = crate::ga3::exp_bivector(Bivector::E12 * (-psi / 2.0));
    let middle = crate::ga3::exp_bivector(Bivector::E23 * (-theta / 2.0));
    let inner = crate::ga3::exp_bivector(Bivector::E12 * (-phi / 2.0));
    outer.compose(middle).compose(inner)
}

/// Aerospace yaw-pitch-roll (rotations about e3, then e2, then e1) offered as
/// an alternative reporting convention. Returns `(roll, pitch, yaw)`.
pub fn euler_angles_aerospace(r: Rotor) -> (f64, f64, f64) {
    let bx = r.rotate_vector(Vector::E1);
    let by = r.rotate_vector(Vector::E2);
    let bz = r.rotate_vector(Vector::E3);
    let yaw = bx.x2.atan2(bx.x1);
    let pitch = -bx.x3.clamp(-1.0, 1.0).asin();
    let roll = by.x3.atan2(bz.x3);
    (roll, pitch, yaw)
}
