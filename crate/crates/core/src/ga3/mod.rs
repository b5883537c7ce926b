//! Geometric algebra of 3D Euclidean space, G(3).
//!
//! Basis blades are ordered as {1, e1, e2, e3, e1e2, e2e3, e3e1, e1e2e3} with
//! an orthonormal right-handed frame, all basis vectors squaring to +1. Unit
//! bivectors square to -1 and generate rotations: the rotor
//! `R = exp_bivector(-j * theta / 2)` applied as `R x R~` rotates `x` by
//! `theta` in the plane `j`, carrying the first basis vector of the plane
//! toward the second (so `exp_bivector(-e1e2 * PI/4)` sends e1 to e2).
//!
//! Two product paths exist on purpose. [`Multivector`] multiplies through the
//! full 8x8 structure-constant expansion and is the reference path; [`Even`]
//! and [`Odd`] carry the grade-parity split used on the hot paths (rotor
//! composition and vector rotation). The split kernels accumulate their terms
//! in the same operand order as the full expansion, so on shared inputs the
//! two paths agree bit for bit, which is exactly what the equivalence tests
//! assert.

mod even_odd;
mod multivector;
mod ops;

pub use even_odd::{Even, Odd, Rotor};
pub use multivector::{geometric_product, Bivector, Multivector, Vector};
pub use ops::{
    commutator, commutator_bivector, even_log, even_power, exp_bivector, log_rotor, project,
    rotate, rotor_between,
};

/// Numeric tolerances used by the algebra layer. Tests read these rather than
/// restating magic numbers.
pub mod tol {
    /// A freshly constructed or renormalized rotor must satisfy
    /// `|norm - 1| <= ROTOR_UNIT`.
    pub const ROTOR_UNIT: f64 = 1e-9;
    /// `Rotor::new` silently renormalizes inputs whose norm deviates by less
    /// than this and rejects anything further out as corrupted.
    pub const ROTOR_RENORMALIZE: f64 = 1e-6;
    /// Below this bivector norm `log_rotor` treats the rotor as the identity
    /// and returns the zero bivector.
    pub const LOG_IDENTITY: f64 = 1e-12;
    /// `rotor_between` and `even_power` reject inputs within this distance of
    /// the antipodal configuration (`1 + a.dot(b) < ANTIPODAL`), where the
    /// rotation plane is undefined.
    pub const ANTIPODAL: f64 = 1e-8;
    /// Blades with squared norm at or below this are not invertible for
    /// `project`.
    pub const BLADE_SINGULAR: f64 = 1e-12;
    /// Unit-norm precondition slack for `rotor_between` arguments and
    /// `even_power` bases.
    pub const UNIT_INPUT: f64 = 1e-9;
}

/// Errors reported by the algebra operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaError {
    #[error("grade {0} out of range for G(3), expected 0..=3")]
    GradeOutOfRange(usize),
    #[error("rotor norm {norm} deviates from 1 by more than {}", tol::ROTOR_RENORMALIZE)]
    NonUnitRotor { norm: f64 },
    #[error("expected a unit-norm input, got norm {norm}")]
    NonUnitInput { norm: f64 },
    #[error("blade is singular or non-homogeneous, cannot invert")]
    SingularBlade,
    #[error("vectors are antipodal within {}, rotation plane undefined", tol::ANTIPODAL)]
    Antipodal,
    #[error("even multivector is a negative scalar within {}, log branch undefined", tol::ANTIPODAL)]
    NegativeScalarBranch,
}
