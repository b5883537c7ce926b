//! Scenario configuration: validated in-memory form, the two shipped
//! presets, and the TOML file format.
//!
//! A config file names a base scenario (defaulting to its own `scenario`
//! key) and overrides any subset of fields; everything is validated on the
//! way in, so a `ScenarioConfig` in hand is always runnable.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::controller::{block_diagonal, GainError, Gains};
use crate::disturbance::{DisturbanceError, DragParams, DrydenParams, WindCoupling};
use crate::ga3::{Bivector, Even, GaError, Rotor, Vector};
use crate::reference::{ReferenceError, SplineError, SplineTable, Trajectory};
use crate::rigid_body::{ModelError, RigidBodyState, VehicleParams, MAX_TIMESTEP};

/// Which canned setup a run is based on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Hover recovery from an upside-down release.
    Flip,
    /// Rose-curve descent with yaw weave and thrust-axis tilt.
    Rhodonea,
    /// Fully user-specified.
    Custom,
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flip" => Ok(Self::Flip),
            "rhodonea" => Ok(Self::Rhodonea),
            "custom" => Ok(Self::Custom),
            other => Err(format!("unknown scenario '{other}' (expected flip | rhodonea | custom)")),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Flip => "flip",
            Self::Rhodonea => "rhodonea",
            Self::Custom => "custom",
        })
    }
}

/// Environmental switches and parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceConfig {
    /// Master switch for wind (steady + gusts). Off means zero wind
    /// velocity everywhere.
    pub wind_enabled: bool,
    /// Master switch for aerodynamic drag.
    pub drag_enabled: bool,
    /// How gusts couple into force.
    pub coupling: WindCoupling,
    /// Turbulence parameters (including the noise seed).
    pub dryden: DrydenParams,
    /// Steady ambient wind, m/s, inertial.
    pub steady_wind: Vector,
    /// Drag model parameters.
    pub drag: DragParams,
}

impl DisturbanceConfig {
    /// Wind and drag on, light turbulence, a 2 m/s easterly steady wind.
    pub fn breezy(seed: u64) -> Self {
        Self {
            wind_enabled: true,
            drag_enabled: true,
            coupling: WindCoupling::Drag,
            dryden: DrydenParams::light_turbulence(seed),
            steady_wind: Vector::new(0.0, 2.0, 0.0),
            drag: DragParams::flight_default(),
        }
    }

    /// Everything off: the ideal-plant configuration.
    pub fn none() -> Self {
        Self {
            wind_enabled: false,
            drag_enabled: false,
            coupling: WindCoupling::Drag,
            dryden: DrydenParams::calm(),
            steady_wind: Vector::ZERO,
            drag: DragParams::flight_default(),
        }
    }
}

/// A fully validated, runnable scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub vehicle: VehicleParams,
    pub gains: Gains,
    pub trajectory: Trajectory,
    pub initial: RigidBodyState,
    /// Integrator step, s; must lie in (0, [`MAX_TIMESTEP`]].
    pub dt: f64,
    /// Run duration, s.
    pub t_end: f64,
    /// Run the controller every n-th plant step (zero-order hold between).
    pub control_divisor: u32,
    pub disturbance: DisturbanceConfig,
    /// Where telemetry and plot files go; `None` keeps the run in memory.
    pub out_dir: Option<PathBuf>,
}

/// Anything wrong with a configuration.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Vehicle(#[from] ModelError),
    #[error(transparent)]
    Gains(#[from] GainError),
    #[error(transparent)]
    Turbulence(#[from] DisturbanceError),
    #[error("initial attitude: {0}")]
    Attitude(#[from] GaError),
    #[error("custom trajectory: {0}")]
    Spline(#[from] SplineError),
    #[error("trajectory: {0}")]
    Reference(#[from] ReferenceError),
}

impl ScenarioConfig {
    /// Upside-down hover recovery: released at the hover point at rest,
    /// rolled half a turn (`R0 = e2 e3`), 20 s at 1 ms steps.
    pub fn flip() -> Self {
        let point = Vector::new(0.0, 0.0, -1.2);
        Self {
            scenario: Scenario::Flip,
            vehicle: VehicleParams::flight_default(),
            gains: Gains::default_cascade(),
            trajectory: Trajectory::hover(point),
            initial: RigidBodyState {
                xi: point,
                dxi: Vector::ZERO,
                r: Rotor::new(Even::new(0.0, 0.0, 1.0, 0.0)).expect("unit rotor"),
                omega_b: Bivector::ZERO,
            },
            dt: 1e-3,
            t_end: 20.0,
            control_divisor: 1,
            disturbance: DisturbanceConfig::breezy(1),
            out_dir: None,
        }
    }

    /// Rose-curve descent from `50 e1 + 35 e3` with the yaw weave and the
    /// logistic thrust-axis tilt, 25 s at 1 ms steps.
    pub fn rhodonea() -> Self {
        Self {
            scenario: Scenario::Rhodonea,
            vehicle: VehicleParams::flight_default(),
            gains: Gains::default_cascade(),
            trajectory: Trajectory::rhodonea(),
            initial: RigidBodyState {
                xi: Vector::new(50.0, 0.0, 35.0),
                dxi: Vector::ZERO,
                r: Rotor::IDENTITY,
                omega_b: Bivector::ZERO,
            },
            dt: 1e-3,
            t_end: 25.0,
            control_divisor: 1,
            disturbance: DisturbanceConfig::breezy(1),
            out_dir: None,
        }
    }

    /// The preset for a named scenario; `Custom` starts from the flip
    /// timing/vehicle defaults and expects the caller (or config file) to
    /// supply a trajectory and initial state.
    pub fn preset(scenario: Scenario) -> Self {
        match scenario {
            Scenario::Flip => Self::flip(),
            Scenario::Rhodonea => Self::rhodonea(),
            Scenario::Custom => Self { scenario: Scenario::Custom, ..Self::flip() },
        }
    }

    /// Parse a TOML config. Fields not present fall back to the preset
    /// named by the file's `scenario` key (default `custom`).
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Self::from_toml_str_with_base(text, None)
    }

    /// Parse a TOML config, falling back to `base` when the file does not
    /// name a scenario itself (for callers that select the preset up front).
    pub fn from_toml_str_with_base(
        text: &str,
        base: Option<Scenario>,
    ) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        raw.resolve(base)
    }

    /// Read and parse a config file.
    pub fn from_toml_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_toml_file_with_base(path, None)
    }

    /// Read and parse a config file with a fallback base scenario.
    pub fn from_toml_file_with_base(
        path: &std::path::Path,
        base: Option<Scenario>,
    ) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        Self::from_toml_str_with_base(&text, base)
    }

    /// Check the numeric run settings; construction paths call this, and
    /// callers that mutate a config afterwards should call it again.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.dt > 0.0 && self.dt <= MAX_TIMESTEP) {
            return Err(ConfigError::Invalid(format!(
                "dt must lie in (0, {MAX_TIMESTEP}], got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(ConfigError::Invalid(format!(
                "t_end must be at least one step ({} s), got {}",
                self.dt, self.t_end
            )));
        }
        if self.control_divisor < 1 {
            return Err(ConfigError::Invalid("control_divisor must be >= 1".into()));
        }
        Ok(())
    }
}

fn vec3(v: [f64; 3]) -> Vector {
    Vector::new(v[0], v[1], v[2])
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    dt: Option<f64>,
    t_end: Option<f64>,
    control_divisor: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    vehicle: Option<RawVehicle>,
    gains: Option<RawGains>,
    disturbance: Option<RawDisturbance>,
    initial: Option<RawInitial>,
    trajectory: Option<RawTrajectory>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVehicle {
    m: Option<f64>,
    i12: Option<f64>,
    i23: Option<f64>,
    i31: Option<f64>,
    g: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGains {
    k1_stiffness: Option<f64>,
    k1_damping: Option<f64>,
    k2_stiffness: Option<f64>,
    k2_damping: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisturbance {
    wind: Option<bool>,
    drag: Option<bool>,
    coupling: Option<String>,
    steady_wind: Option<[f64; 3]>,
    l_u: Option<f64>,
    l_v: Option<f64>,
    l_w: Option<f64>,
    sigma_u: Option<f64>,
    sigma_v: Option<f64>,
    sigma_w: Option<f64>,
    airspeed: Option<f64>,
    /// Accepted for completeness of the turbulence description; the fixed
    /// low-altitude filter constants do not depend on it.
    #[allow(dead_code)]
    altitude: Option<f64>,
    cd: Option<f64>,
    area: Option<f64>,
    rho: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    xi: Option<[f64; 3]>,
    dxi: Option<[f64; 3]>,
    /// Rotor coefficients (scalar, b12, b23, b31).
    r: Option<[f64; 4]>,
    omega: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectory {
    /// `hover`, `rhodonea`, or `spline`.
    kind: String,
    hover_point: Option<[f64; 3]>,
    /// `level` or `weave-tilt` (defaults per kind).
    attitude: Option<String>,
    /// Spline knots as `[t, x, y, z]` rows.
    knots: Option<Vec<[f64; 4]>>,
    /// Alternatively, a CSV file of `t,x,y,z` knot rows.
    spline_file: Option<PathBuf>,
}

impl RawConfig {
    fn resolve(self, base: Option<Scenario>) -> Result<ScenarioConfig, ConfigError> {
        let scenario = match &self.scenario {
            Some(s) => s.parse::<Scenario>().map_err(ConfigError::Invalid)?,
            None => base.unwrap_or(Scenario::Custom),
        };
        let mut cfg = ScenarioConfig::preset(scenario);

        if let Some(v) = &self.vehicle {
            let base = cfg.vehicle;
            cfg.vehicle = VehicleParams::new(
                v.m.unwrap_or(base.m),
                v.i12.unwrap_or(base.i12),
                v.i23.unwrap_or(base.i23),
                v.i31.unwrap_or(base.i31),
                v.g.unwrap_or(base.g),
                base.thrust_axis_ref,
            )?;
        }
        if let Some(g) = &self.gains {
            let (b1, b2) = (cfg.gains.k1(), cfg.gains.k2());
            cfg.gains = Gains::new(
                block_diagonal(
                    g.k1_stiffness.unwrap_or(b1[0][0]),
                    g.k1_damping.unwrap_or(b1[0][3]),
                ),
                block_diagonal(
                    g.k2_stiffness.unwrap_or(b2[0][0]),
                    g.k2_damping.unwrap_or(b2[0][3]),
                ),
            )?;
        }
        if let Some(d) = &self.disturbance {
            let dc = &mut cfg.disturbance;
            if let Some(on) = d.wind {
                dc.wind_enabled = on;
            }
            if let Some(on) = d.drag {
                dc.drag_enabled = on;
            }
            if let Some(c) = &d.coupling {
                dc.coupling = c.parse::<WindCoupling>().map_err(ConfigError::Invalid)?;
            }
            if let Some(sw) = d.steady_wind {
                dc.steady_wind = vec3(sw);
            }
            let base = dc.dryden;
            dc.dryden = DrydenParams::new(
                d.l_u.unwrap_or(base.l_u),
                d.l_v.unwrap_or(base.l_v),
                d.l_w.unwrap_or(base.l_w),
                d.sigma_u.unwrap_or(base.sigma_u),
                d.sigma_v.unwrap_or(base.sigma_v),
                d.sigma_w.unwrap_or(base.sigma_w),
                d.airspeed.unwrap_or(base.airspeed),
                base.seed,
            )?;
            dc.drag = DragParams {
                cd: d.cd.unwrap_or(dc.drag.cd),
                area: d.area.unwrap_or(dc.drag.area),
                rho: d.rho.unwrap_or(dc.drag.rho),
            };
        }
        if let Some(seed) = self.seed {
            cfg.disturbance.dryden.seed = seed;
        }
        if let Some(t) = &self.trajectory {
            cfg.trajectory = t.resolve()?;
        } else if scenario == Scenario::Custom {
            return Err(ConfigError::Invalid(
                "custom scenario needs a [trajectory] section".into(),
            ));
        }

        // Default start: the preset's initial state, or (for custom runs)
        // resting on the reference at t = 0.
        let start = cfg.trajectory.sample(0.0)?;
        let base_initial = if scenario == Scenario::Custom {
            RigidBodyState {
                xi: start.xi_d,
                dxi: Vector::ZERO,
                r: Rotor::IDENTITY,
                omega_b: Bivector::ZERO,
            }
        } else {
            cfg.initial
        };
        cfg.initial = match &self.initial {
            Some(i) => RigidBodyState {
                xi: i.xi.map(vec3).unwrap_or(base_initial.xi),
                dxi: i.dxi.map(vec3).unwrap_or(base_initial.dxi),
                r: match i.r {
                    Some([s, b12, b23, b31]) => {
                        Rotor::new(Even::new(s, b12, b23, b31)).map_err(ConfigError::Attitude)?
                    }
                    None => base_initial.r,
                },
                omega_b: i
                    .omega
                    .map(|o| Bivector::new(o[0], o[1], o[2]))
                    .unwrap_or(base_initial.omega_b),
            },
            None => base_initial,
        };

        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(t_end) = self.t_end {
            cfg.t_end = t_end;
        }
        if let Some(div) = self.control_divisor {
            cfg.control_divisor = div;
        }
        cfg.out_dir = self.out.or(cfg.out_dir);
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RawTrajectory {
    fn resolve(&self) -> Result<Trajectory, ConfigError> {
        use crate::reference::{AttitudeReference, PositionReference};
        let attitude = match self.attitude.as_deref() {
            Some("level") => Some(AttitudeReference::LevelFixedAxis),
            Some("weave-tilt") => Some(AttitudeReference::WeaveAndTilt),
            Some(other) => {
                return Err(ConfigError::Invalid(format!(
                    "unknown attitude reference '{other}' (expected level | weave-tilt)"
                )))
            }
            None => None,
        };
        let (position, default_attitude) = match self.kind.as_str() {
            "hover" => {
                let point = self
                    .hover_point
                    .map(vec3)
                    .ok_or_else(|| ConfigError::Invalid("hover needs hover_point".into()))?;
                (PositionReference::Hover(point), AttitudeReference::LevelFixedAxis)
            }
            "rhodonea" => (PositionReference::Rhodonea, AttitudeReference::WeaveAndTilt),
            "spline" => {
                let table = match (&self.knots, &self.spline_file) {
                    (Some(knots), None) => {
                        let ts = knots.iter().map(|k| k[0]).collect();
                        let points =
                            knots.iter().map(|k| Vector::new(k[1], k[2], k[3])).collect();
                        SplineTable::new(ts, points)?
                    }
                    (None, Some(path)) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
                        SplineTable::from_csv_str(&text)?
                    }
                    _ => {
                        return Err(ConfigError::Invalid(
                            "spline needs exactly one of knots | spline_file".into(),
                        ))
                    }
                };
                (PositionReference::Custom(table), AttitudeReference::LevelFixedAxis)
            }
            other => {
                return Err(ConfigError::Invalid(format!(
                    "unknown trajectory kind '{other}' (expected hover | rhodonea | spline)"
                )))
            }
        };
        Ok(Trajectory { position, attitude: attitude.unwrap_or(default_attitude) })
    }
}
