//! Geometric-algebra flight stack: a G(3) algebra layer, a rigid-body plant
//! with an RK4 integrator, trajectory references, a cascaded
//! position/attitude tracking controller, stochastic wind disturbances, and a
//! deterministic batch simulator.
//!
//! The crate is organized bottom-up:
//!
//! - [`ga3`]: the algebra every other module is written in terms of.
//! - [`rigid_body`]: underactuated thrust-vectored dynamics in a NED frame.
//! - [`reference`]: analytic and spline trajectory references with the high
//!   order derivatives the controller consumes.
//! - [`controller`]: cascaded position -> attitude tracking with exact
//!   feedforward derivative chains.
//! - [`disturbance`]: Dryden-style wind filters and aerodynamic drag.
//! - [`sim`]: scenario configuration, the step loop, telemetry, and metrics.
//! - [`batch`]: embarrassingly parallel sweeps over seeds and scenarios
//!   (rayon under the `parallel` feature, sequential otherwise).

pub mod batch;
pub mod controller;
pub mod disturbance;
pub mod ga3;
pub mod reference;
pub mod rigid_body;
pub mod sim;
