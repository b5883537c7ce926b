//! Environmental forces: Dryden-style turbulence, steady ambient wind, and
//! quadratic drag.
//!
//! Wind has two parts: a steady component fixed in the inertial frame and a
//! stochastic gust component generated in the body frame by shaping filters
//! driven with seeded white noise. The gust filters follow the standard
//! low-altitude Dryden rational spectra — first order along the longitudinal
//! axis, second order (with the spectrum's characteristic zero) on the
//! lateral and vertical axes — discretized so that the stationary standard
//! deviation of each axis equals its configured intensity exactly.
//!
//! Wind couples to the body through quadratic drag on the relative velocity
//! by default; a direct-force mode that injects the gust as a force is
//! available for experiments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ga3::{Rotor, Vector};

/// Turbulence configuration: spatial wavelengths, intensities, the reference
/// airspeed that converts wavelengths into filter time constants, and the
/// noise seed.
///
/// Defaults model low-altitude light turbulence; see
/// [`DrydenParams::light_turbulence`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrydenParams {
    /// Longitudinal wavelength, m.
    pub l_u: f64,
    /// Lateral wavelength, m.
    pub l_v: f64,
    /// Vertical wavelength, m.
    pub l_w: f64,
    /// Longitudinal intensity (stationary std), m/s.
    pub sigma_u: f64,
    /// Lateral intensity, m/s.
    pub sigma_v: f64,
    /// Vertical intensity, m/s.
    pub sigma_w: f64,
    /// Reference airspeed for the filter time constants, m/s. Fixed rather
    /// than tied to the instantaneous velocity so the filters stay linear
    /// time-invariant and runs reproducible.
    pub airspeed: f64,
    /// White-noise seed; the gust sequence is a pure function of
    /// (seed, dt, step index).
    pub seed: u64,
}

/// Configuration errors for the environmental models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DisturbanceError {
    #[error("{name} must be positive and finite")]
    NonPositive { name: &'static str },
    #[error("{name} must be non-negative and finite")]
    Negative { name: &'static str },
}

impl DrydenParams {
    /// Validating constructor: wavelengths and airspeed must be positive,
    /// intensities non-negative (zero silences an axis).
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        l_u: f64,
        l_v: f64,
        l_w: f64,
        sigma_u: f64,
        sigma_v: f64,
        sigma_w: f64,
        airspeed: f64,
        seed: u64,
    ) -> Result<Self, DisturbanceError> {
        for (value, name) in [(l_u, "l_u"), (l_v, "l_v"), (l_w, "l_w"), (airspeed, "airspeed")] {
            if !(value.is_finite() && value > 0.0) {
                return Err(DisturbanceError::NonPositive { name });
            }
        }
        for (value, name) in [(sigma_u, "sigma_u"), (sigma_v, "sigma_v"), (sigma_w, "sigma_w")] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(DisturbanceError::Negative { name });
            }
        }
        Ok(Self { l_u, l_v, l_w, sigma_u, sigma_v, sigma_w, airspeed, seed })
    }

    /// Low-altitude light-turbulence parameters at a 15 m/s reference
    /// airspeed: wavelengths 200/200/50 m, intensities 1.06/1.06/0.7 m/s.
    pub fn light_turbulence(seed: u64) -> Self {
        Self {
            l_u: 200.0,
            l_v: 200.0,
            l_w: 50.0,
            sigma_u: 1.06,
            sigma_v: 1.06,
            sigma_w: 0.7,
            airspeed: 15.0,
            seed,
        }
    }

    /// Same wavelengths with all intensities zeroed: a deterministic calm.
    pub fn calm() -> Self {
        Self { sigma_u: 0.0, sigma_v: 0.0, sigma_w: 0.0, ..Self::light_turbulence(0) }
    }
}

/// Wind state owned by one simulation: current body-frame gust, steady
/// inertial wind, and the shaping-filter memory (including the noise
/// stream).
#[derive(Debug, Clone)]
pub struct WindState {
    /// Current gust velocity, m/s, body frame.
    pub gust_b: Vector,
    /// Steady ambient wind, m/s, inertial frame.
    pub steady_i: Vector,
    /// Longitudinal first-order filter state (already intensity-scaled).
    u: f64,
    /// Lateral second-order filter states (unit-intensity).
    v: [f64; 2],
    /// Vertical second-order filter states (unit-intensity).
    w: [f64; 2],
    rng: ChaCha8Rng,
}

impl WindState {
    /// Fresh state with zeroed filters and the noise stream seeded from the
    /// parameters.
    pub fn new(p: &DrydenParams, steady_i: Vector) -> Self {
        Self {
            gust_b: Vector::ZERO,
            steady_i,
            u: 0.0,
            v: [0.0; 2],
            w: [0.0; 2],
            rng: ChaCha8Rng::seed_from_u64(p.seed),
        }
    }

    /// Total wind velocity in the inertial frame: steady component plus the
    /// body-frame gust carried through the current attitude.
    pub fn wind_inertial(&self, r: Rotor) -> Vector {
        self.steady_i + r.rotate_vector(self.gust_b)
    }
}

/// Advance the three gust filters by one step of `dt` seconds.
///
/// Each axis draws one standard normal (order u, v, w). The longitudinal
/// axis is the exact-variance Euler step of the first-order
/// Ornstein-Uhlenbeck shaping filter; the lateral and vertical axes
/// integrate the second-order Dryden filter (transfer function proportional
/// to `(s + 1/(sqrt(3) T)) / (s + 1/T)^2`) by Euler-Maruyama, with output
/// gains `sigma/T^(3/2)` and `sigma sqrt(3/T)` chosen so the stationary
/// output variance is exactly `sigma^2`.
///
/// # Panics
/// If `dt` is not positive and finite.
pub fn dryden_step(p: &DrydenParams, mut st: WindState, dt: f64) -> WindState {
    assert!(dt.is_finite() && dt > 0.0, "dryden_step needs dt > 0, got {dt}");
    let n_u: f64 = st.rng.sample(StandardNormal);
    let n_v: f64 = st.rng.sample(StandardNormal);
    let n_w: f64 = st.rng.sample(StandardNormal);

    let t_u = p.l_u / p.airspeed;
    st.u = (1.0 - dt / t_u) * st.u + p.sigma_u * (2.0 * dt / t_u).sqrt() * n_u;

    let second_order = |x: [f64; 2], t: f64, noise: f64| {
        [
            x[0] + dt * x[1],
            x[1] + dt * (-x[0] / (t * t) - 2.0 * x[1] / t) + dt.sqrt() * noise,
        ]
    };
    let output = |x: [f64; 2], t: f64, sigma: f64| {
        sigma * (x[0] / (t * t.sqrt()) + 3.0_f64.sqrt() * x[1] / t.sqrt())
    };
    let t_v = p.l_v / p.airspeed;
    let t_w = p.l_w / p.airspeed;
    st.v = second_order(st.v, t_v, n_v);
    st.w = second_order(st.w, t_w, n_w);

    st.gust_b = Vector::new(st.u, output(st.v, t_v, p.sigma_v), output(st.w, t_w, p.sigma_w));
    st
}

/// Quadratic drag configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragParams {
    /// Drag coefficient, dimensionless.
    pub cd: f64,
    /// Reference planform area, m^2.
    pub area: f64,
    /// Air density, kg/m^3.
    pub rho: f64,
}

impl DragParams {
    /// Vehicle defaults: Cd = 0.8, A = 0.01425 m^2, rho = 1.255 kg/m^3,
    /// i.e. a lumped coefficient of 0.0071535 kg/m (~0.00715).
    pub fn flight_default() -> Self {
        Self { cd: 0.8, area: 0.01425, rho: 1.255 }
    }

    /// The lumped coefficient `rho cd area / 2` multiplying
    /// `|v_rel| v_rel`.
    pub fn coefficient(&self) -> f64 {
        0.5 * self.rho * self.cd * self.area
    }
}

/// Drag force on the body moving at `dxi` through air moving at `wind_i`
/// (both inertial): `w = -(rho cd area / 2) |v_rel| v_rel` with
/// `v_rel = dxi - wind_i`. Always opposes the relative velocity.
pub fn disturbance_force(drag: &DragParams, dxi: Vector, wind_i: Vector) -> Vector {
    let v_rel = dxi - wind_i;
    v_rel * (-drag.coefficient() * v_rel.norm())
}

/// How gusts turn into force on the translational dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindCoupling {
    /// Gust velocity joins the steady wind in the relative-velocity drag
    /// law (physical default).
    #[default]
    Drag,
    /// Gust velocity is injected directly as force, 1 N per m/s, while the
    /// steady component still acts through drag. An experiment mode for
    /// separating aerodynamic and additive disturbance responses.
    DirectForce,
}

impl FromStr for WindCoupling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drag" => Ok(Self::Drag),
            "direct-force" => Ok(Self::DirectForce),
            other => Err(format!("unknown wind coupling '{other}' (expected drag | direct-force)")),
        }
    }
}

impl fmt::Display for WindCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Drag => "drag",
            Self::DirectForce => "direct-force",
        })
    }
}

/// Total disturbance force for one step given the already-rotated inertial
/// gust velocity.
pub fn coupled_force(
    drag: &DragParams,
    coupling: WindCoupling,
    dxi: Vector,
    steady_i: Vector,
    gust_i: Vector,
) -> Vector {
    match coupling {
        WindCoupling::Drag => disturbance_force(drag, dxi, steady_i + gust_i),
        WindCoupling::DirectForce => disturbance_force(drag, dxi, steady_i) + gust_i,
    }
}
