use std::ops::{Add, Mul, Neg, Sub};

use super::multivector::{Bivector, Multivector, Vector};
use super::{tol, GaError};

/// Even-grade element (scalar plus bivector). Products of even elements stay
/// even, which is why rotor composition never leaves this type.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Even {
    pub s: f64,
    pub b12: f64,
    pub b23: f64,
    pub b31: f64,
}

/// Odd-grade element (vector plus trivector). A rotor sandwich of a vector
/// passes through this type: the intermediate `R x` picks up a trivector
/// component even though the final result is again a vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Odd {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub t: f64,
}

/// Unit-norm even element. Construction enforces the norm invariant, so a
/// value of this type can always be used as a rotation operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotor(Even);

macro_rules! componentwise4 {
    ($ty:ident, $($f:ident),+) => {
        impl Add for $ty {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                Self { $($f: self.$f + rhs.$f),+ }
            }
        }
        impl Sub for $ty {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                Self { $($f: self.$f - rhs.$f),+ }
            }
        }
        impl Neg for $ty {
            type Output = Self;
            fn neg(self) -> Self {
                Self { $($f: -self.$f),+ }
            }
        }
        impl Mul<f64> for $ty {
            type Output = Self;
            fn mul(self, rhs: f64) -> Self {
                Self { $($f: self.$f * rhs),+ }
            }
        }
        impl Mul<$ty> for f64 {
            type Output = $ty;
            fn mul(self, rhs: $ty) -> $ty {
                rhs * self
            }
        }
    };
}

componentwise4!(Even, s, b12, b23, b31);
componentwise4!(Odd, x1, x2, x3, t);

impl Even {
    pub const fn new(s: f64, b12: f64, b23: f64, b31: f64) -> Self {
        Self { s, b12, b23, b31 }
    }

    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);

    pub fn from_parts(s: f64, b: Bivector) -> Self {
        Self::new(s, b.b12, b.b23, b.b31)
    }

    pub fn scalar_part(self) -> f64 {
        self.s
    }

    pub fn bivector_part(self) -> Bivector {
        Bivector::new(self.b12, self.b23, self.b31)
    }

    pub fn reverse(self) -> Self {
        Self::new(self.s, -self.b12, -self.b23, -self.b31)
    }

    pub fn norm(self) -> f64 {
        (self.s * self.s + self.b12 * self.b12 + self.b23 * self.b23 + self.b31 * self.b31)
            .sqrt()
    }

    /// Even times even. Term order matches the full product in
    /// [`Multivector::geometric_product`], rows {1, e12, e23, e31}.
    pub fn mul_even(self, q: Self) -> Self {
        let r = self;
        Self {
            s: r.s * q.s - r.b12 * q.b12 - r.b23 * q.b23 - r.b31 * q.b31,
            b12: r.s * q.b12 + r.b12 * q.s - r.b23 * q.b31 + r.b31 * q.b23,
            b23: r.s * q.b23 + r.b12 * q.b31 + r.b23 * q.s - r.b31 * q.b12,
            b31: r.s * q.b31 - r.b12 * q.b23 + r.b23 * q.b12 + r.b31 * q.s,
        }
    }

    /// Even times odd.
    pub fn mul_odd(self, u: Odd) -> Odd {
        let r = self;
        Odd {
            x1: r.s * u.x1 + r.b12 * u.x2 - r.b23 * u.t - r.b31 * u.x3,
            x2: r.s * u.x2 - r.b12 * u.x1 + r.b23 * u.x3 - r.b31 * u.t,
            x3: r.s * u.x3 - r.b12 * u.t - r.b23 * u.x2 + r.b31 * u.x1,
            t: r.s * u.t + r.b12 * u.x3 + r.b23 * u.x1 + r.b31 * u.x2,
        }
    }

    pub fn is_finite(self) -> bool {
        self.s.is_finite()
            && self.b12.is_finite()
            && self.b23.is_finite()
            && self.b31.is_finite()
    }
}

impl Odd {
    pub const fn new(x1: f64, x2: f64, x3: f64, t: f64) -> Self {
        Self { x1, x2, x3, t }
    }

    pub fn from_vector(v: Vector) -> Self {
        Self::new(v.x1, v.x2, v.x3, 0.0)
    }

    pub fn vector_part(self) -> Vector {
        Vector::new(self.x1, self.x2, self.x3)
    }

    pub fn reverse(self) -> Self {
        Self::new(self.x1, self.x2, self.x3, -self.t)
    }

    pub fn norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.t * self.t).sqrt()
    }

    /// Odd times even.
    pub fn mul_even(self, r: Even) -> Odd {
        let u = self;
        Odd {
            x1: u.x1 * r.s - u.x2 * r.b12 + u.x3 * r.b31 - u.t * r.b23,
            x2: u.x1 * r.b12 + u.x2 * r.s - u.x3 * r.b23 - u.t * r.b31,
            x3: -u.x1 * r.b31 + u.x2 * r.b23 + u.x3 * r.s - u.t * r.b12,
            t: u.x1 * r.b23 + u.x2 * r.b31 + u.x3 * r.b12 + u.t * r.s,
        }
    }

    /// Odd times odd (even result).
    pub fn mul_odd(self, v: Odd) -> Even {
        let u = self;
        Even {
            s: u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3 - u.t * v.t,
            b12: u.x1 * v.x2 - u.x2 * v.x1 + u.x3 * v.t + u.t * v.x3,
            b23: u.x1 * v.t + u.x2 * v.x3 - u.x3 * v.x2 + u.t * v.x1,
            b31: -u.x1 * v.x3 + u.x2 * v.t + u.x3 * v.x1 + u.t * v.x2,
        }
    }
}

impl Rotor {
    pub const IDENTITY: Rotor = Rotor(Even::ONE);

    /// Validates the unit-norm invariant. Deviations below
    /// [`tol::ROTOR_RENORMALIZE`] are corrected silently (integration drift),
    /// anything larger is rejected as corrupted input.
    pub fn new(e: Even) -> Result<Self, GaError> {
        let n = e.norm();
        if (n - 1.0).abs() >= tol::ROTOR_RENORMALIZE {
            return Err(GaError::NonUnitRotor { norm: n });
        }
        Ok(Self(e * (1.0 / n)))
    }

    /// For values that are unit by construction (products of unit rotors,
    /// closed-form exponentials). Debug builds still check.
    pub(crate) fn new_unchecked(e: Even) -> Self {
        debug_assert!(
            (e.norm() - 1.0).abs() < tol::ROTOR_RENORMALIZE,
            "rotor invariant broken: norm {}",
            e.norm()
        );
        Self(e)
    }

    pub fn as_even(self) -> Even {
        self.0
    }

    pub fn scalar_part(self) -> f64 {
        self.0.s
    }

    pub fn bivector_part(self) -> Bivector {
        self.0.bivector_part()
    }

    pub fn reverse(self) -> Self {
        Self(self.0.reverse())
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    /// Rotor composition `self * rhs` (apply `rhs` first under the sandwich
    /// convention).
    pub fn compose(self, rhs: Self) -> Self {
        Self::new_unchecked(self.0.mul_even(rhs.0))
    }

    /// `R x R~` through the even/odd kernels.
    pub fn rotate_vector(self, x: Vector) -> Vector {
        let rx = self.0.mul_odd(Odd::from_vector(x));
        rx.mul_even(self.0.reverse()).vector_part()
    }

    /// `R B R~` for a bivector (the trailing scalar part is identically zero
    /// and dropped).
    pub fn rotate_bivector(self, b: Bivector) -> Bivector {
        let rb = self.0.mul_even(Even::from_parts(0.0, b));
        rb.mul_even(self.0.reverse()).bivector_part()
    }

    pub fn renormalized(self) -> Self {
        Self(self.0 * (1.0 / self.0.norm()))
    }
}

impl From<Rotor> for Even {
    fn from(r: Rotor) -> Even {
        r.0
    }
}

impl From<Even> for Multivector {
    fn from(e: Even) -> Self {
        Multivector {
            s: e.s,
            b12: e.b12,
            b23: e.b23,
            b31: e.b31,
            ..Multivector::ZERO
        }
    }
}

impl From<Odd> for Multivector {
    fn from(o: Odd) -> Self {
        Multivector {
            v1: o.x1,
            v2: o.x2,
            v3: o.x3,
            t: o.t,
            ..Multivector::ZERO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotor_construction_gates_on_norm() {
        let slightly_off = Even::new(1.0 + 5e-7, 0.0, 0.0, 0.0);
        let r = Rotor::new(slightly_off).unwrap();
        assert!((r.norm() - 1.0).abs() <= tol::ROTOR_UNIT);

        let way_off = Even::new(1.1, 0.0, 0.0, 0.0);
        assert!(matches!(Rotor::new(way_off), Err(GaError::NonUnitRotor { .. })));
    }

    #[test]
    fn half_turn_in_e2e3_flips_e2_and_e3() {
        // The rotor e2e3 rotates by pi in the e2e3 plane.
        let r = Rotor::new(Even::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        let flip = |v: Vector| r.rotate_vector(v);
        assert!((flip(Vector::E1) - Vector::E1).norm() < 1e-15);
        assert!((flip(Vector::E2) + Vector::E2).norm() < 1e-15);
        assert!((flip(Vector::E3) + Vector::E3).norm() < 1e-15);
    }

    #[test]
    fn split_kernels_match_full_product_exactly() {
        // Deterministic but irregular coefficients; the point is bitwise
        // agreement with the structure-constant expansion, not coverage
        // (the proptest suite handles breadth).
        let e = Even::new(0.3, -1.7, 0.9, 2.4);
        let q = Even::new(-0.8, 0.5, -3.1, 0.05);
        let u = Odd::new(1.1, -0.2, 0.7, -1.3);
        let v = Odd::new(-2.0, 0.4, 0.9, 0.6);

        let m = |x: Multivector, y: Multivector| x.geometric_product(y);

        let ee = Multivector::from(e.mul_even(q));
        assert_eq!(ee, m(e.into(), q.into()));

        let eo = Multivector::from(e.mul_odd(u));
        assert_eq!(eo, m(e.into(), u.into()));

        let oe = Multivector::from(u.mul_even(q));
        assert_eq!(oe, m(u.into(), q.into()));

        let oo = Multivector::from(u.mul_odd(v));
        assert_eq!(oo, m(u.into(), v.into()));
    }

    #[test]
    fn sandwich_matches_general_path() {
        let r = Rotor::new(Even::new(0.5, 0.5, 0.5, 0.5)).unwrap();
        let x = Vector::new(0.3, -1.25, 2.0);
        let fast = r.rotate_vector(x);
        let rm: Multivector = r.as_even().into();
        let general = rm
            .geometric_product(Multivector::from(x))
            .geometric_product(rm.reverse());
        assert_eq!(fast.x1, general.v1);
        assert_eq!(fast.x2, general.v2);
        assert_eq!(fast.x3, general.v3);
        // Norm is preserved.
        assert!((fast.norm() - x.norm()).abs() < 1e-12);
    }
}
