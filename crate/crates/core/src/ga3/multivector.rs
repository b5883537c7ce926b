use std::ops::{Add, Mul, Neg, Sub};

use super::GaError;

/// Grade-1 element, coefficients on {e1, e2, e3}.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Vector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Grade-2 element, coefficients on {e1e2, e2e3, e3e1}.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Bivector {
    pub b12: f64,
    pub b23: f64,
    pub b31: f64,
}

/// General element of G(3) with all eight coefficients, ordered
/// {1, e1, e2, e3, e1e2, e2e3, e3e1, e1e2e3}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    pub s: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
    pub b12: f64,
    pub b23: f64,
    pub b31: f64,
    pub t: f64,
}

impl Vector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);

    pub fn dot(self, rhs: Self) -> f64 {
        self.x1 * rhs.x1 + self.x2 * rhs.x2 + self.x3 * rhs.x3
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Result<Self, GaError> {
        let n = self.norm();
        if n <= f64::EPSILON {
            return Err(GaError::SingularBlade);
        }
        Ok(self * (1.0 / n))
    }

    /// Wedge with another vector, `a ^ b = (ab - ba) / 2`.
    pub fn wedge(self, rhs: Self) -> Bivector {
        Bivector {
            b12: self.x1 * rhs.x2 - self.x2 * rhs.x1,
            b23: self.x2 * rhs.x3 - self.x3 * rhs.x2,
            b31: self.x3 * rhs.x1 - self.x1 * rhs.x3,
        }
    }

    /// Coefficients as an array, in basis order.
    pub fn coords(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// The plane orthogonal to this vector, `v e123`, which is the plane a
    /// rotation "about v" acts in.
    pub fn dual_plane(self) -> Bivector {
        // e1 e123 = e2e3, e2 e123 = e3e1, e3 e123 = e1e2.
        Bivector {
            b12: self.x3,
            b23: self.x1,
            b31: self.x2,
        }
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }
}

impl Bivector {
    pub const fn new(b12: f64, b23: f64, b31: f64) -> Self {
        Self { b12, b23, b31 }
    }

    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E12: Self = Self::new(1.0, 0.0, 0.0);
    pub const E23: Self = Self::new(0.0, 1.0, 0.0);
    pub const E31: Self = Self::new(0.0, 0.0, 1.0);

    /// Euclidean component dot. Note the grade-0 part of the geometric
    /// product of two bivectors is the negative of this.
    pub fn dot(self, rhs: Self) -> f64 {
        self.b12 * rhs.b12 + self.b23 * rhs.b23 + self.b31 * rhs.b31
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.b12.is_finite() && self.b23.is_finite() && self.b31.is_finite()
    }
}

impl Multivector {
    #[allow(clippy::too_many_arguments)]
    pub const fn new(
        s: f64,
        v1: f64,
        v2: f64,
        v3: f64,
        b12: f64,
        b23: f64,
        b31: f64,
        t: f64,
    ) -> Self {
        Self { s, v1, v2, v3, b12, b23, b31, t }
    }

    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);

    pub fn scalar(s: f64) -> Self {
        Self { s, ..Self::ZERO }
    }

    pub fn coeffs(self) -> [f64; 8] {
        [self.s, self.v1, self.v2, self.v3, self.b12, self.b23, self.b31, self.t]
    }

    pub fn from_coeffs(c: [f64; 8]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7])
    }

    /// Geometric product, written out per output coefficient with the
    /// contributions ordered by left-operand blade index. The [`Even`] and
    /// [`Odd`] kernels replay the nonzero subset of these sums in the same
    /// order, which keeps the two paths bitwise comparable.
    ///
    /// [`Even`]: super::Even
    /// [`Odd`]: super::Odd
    pub fn geometric_product(self, b: Self) -> Self {
        let a = self;
        Self {
            s: a.s * b.s + a.v1 * b.v1 + a.v2 * b.v2 + a.v3 * b.v3
                - a.b12 * b.b12 - a.b23 * b.b23 - a.b31 * b.b31 - a.t * b.t,
            v1: a.s * b.v1 + a.v1 * b.s - a.v2 * b.b12 + a.v3 * b.b31
                + a.b12 * b.v2 - a.b23 * b.t - a.b31 * b.v3 - a.t * b.b23,
            v2: a.s * b.v2 + a.v1 * b.b12 + a.v2 * b.s - a.v3 * b.b23
                - a.b12 * b.v1 + a.b23 * b.v3 - a.b31 * b.t - a.t * b.b31,
            v3: a.s * b.v3 - a.v1 * b.b31 + a.v2 * b.b23 + a.v3 * b.s
                - a.b12 * b.t - a.b23 * b.v2 + a.b31 * b.v1 - a.t * b.b12,
            b12: a.s * b.b12 + a.v1 * b.v2 - a.v2 * b.v1 + a.v3 * b.t
                + a.b12 * b.s - a.b23 * b.b31 + a.b31 * b.b23 + a.t * b.v3,
            b23: a.s * b.b23 + a.v1 * b.t + a.v2 * b.v3 - a.v3 * b.v2
                + a.b12 * b.b31 + a.b23 * b.s - a.b31 * b.b12 + a.t * b.v1,
            b31: a.s * b.b31 - a.v1 * b.v3 + a.v2 * b.t + a.v3 * b.v1
                - a.b12 * b.b23 + a.b23 * b.b12 + a.b31 * b.s + a.t * b.v2,
            t: a.s * b.t + a.v1 * b.b23 + a.v2 * b.b31 + a.v3 * b.b12
                + a.b12 * b.v3 + a.b23 * b.v1 + a.b31 * b.v2 + a.t * b.s,
        }
    }

    /// Reversion: flips the sign of grades 2 and 3.
    pub fn reverse(self) -> Self {
        Self {
            b12: -self.b12,
            b23: -self.b23,
            b31: -self.b31,
            t: -self.t,
            ..self
        }
    }

    /// `sqrt(<M M~>_0)`, which for a Euclidean signature is the L2 norm of
    /// the coefficient vector.
    pub fn norm(self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Keeps grade `k` and zeroes the rest.
    pub fn grade(self, k: usize) -> Result<Self, GaError> {
        match k {
            0 => Ok(Self { s: self.s, ..Self::ZERO }),
            1 => Ok(Self { v1: self.v1, v2: self.v2, v3: self.v3, ..Self::ZERO }),
            2 => Ok(Self { b12: self.b12, b23: self.b23, b31: self.b31, ..Self::ZERO }),
            3 => Ok(Self { t: self.t, ..Self::ZERO }),
            _ => Err(GaError::GradeOutOfRange(k)),
        }
    }

    pub fn vector_part(self) -> Vector {
        Vector::new(self.v1, self.v2, self.v3)
    }

    pub fn bivector_part(self) -> Bivector {
        Bivector::new(self.b12, self.b23, self.b31)
    }

    pub fn is_finite(self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }
}

/// Free-function spelling of [`Multivector::geometric_product`].
pub fn geometric_product(a: Multivector, b: Multivector) -> Multivector {
    a.geometric_product(b)
}

impl From<Vector> for Multivector {
    fn from(v: Vector) -> Self {
        Self { v1: v.x1, v2: v.x2, v3: v.x3, ..Self::ZERO }
    }
}

impl From<Bivector> for Multivector {
    fn from(b: Bivector) -> Self {
        Self { b12: b.b12, b23: b.b23, b31: b.b31, ..Self::ZERO }
    }
}

macro_rules! componentwise {
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

componentwise!(Vector, x1, x2, x3);
componentwise!(Bivector, b12, b23, b31);
componentwise!(Multivector, s, v1, v2, v3, b12, b23, b31, t);

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(c: [f64; 8]) -> Multivector {
        Multivector::from_coeffs(c)
    }

    #[test]
    fn basis_vector_products() {
        let e1 = Multivector::from(Vector::E1);
        let e2 = Multivector::from(Vector::E2);
        let e3 = Multivector::from(Vector::E3);
        assert_eq!(e1.geometric_product(e1), Multivector::ONE);
        assert_eq!(e1.geometric_product(e2), Multivector::from(Bivector::E12));
        assert_eq!(e2.geometric_product(e1), Multivector::from(-Bivector::E12));
        assert_eq!(e2.geometric_product(e3), Multivector::from(Bivector::E23));
        assert_eq!(e3.geometric_product(e1), Multivector::from(Bivector::E31));
        let e123 = e1.geometric_product(e2).geometric_product(e3);
        assert_eq!(e123, mv([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
        // Pseudoscalar squares to -1 and commutes with everything.
        assert_eq!(e123.geometric_product(e123), Multivector::scalar(-1.0));
        assert_eq!(
            e123.geometric_product(e2),
            e2.geometric_product(e123)
        );
    }

    #[test]
    fn bivector_products_are_quaternionic() {
        let b12 = Multivector::from(Bivector::E12);
        let b23 = Multivector::from(Bivector::E23);
        let b31 = Multivector::from(Bivector::E31);
        assert_eq!(b12.geometric_product(b12), Multivector::scalar(-1.0));
        assert_eq!(b12.geometric_product(b23), Multivector::from(-Bivector::E31));
        assert_eq!(b23.geometric_product(b31), Multivector::from(-Bivector::E12));
        assert_eq!(b31.geometric_product(b12), Multivector::from(-Bivector::E23));
    }

    #[test]
    fn reverse_flips_high_grades() {
        let m = mv([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let r = m.reverse();
        assert_eq!(r.coeffs(), [1.0, 2.0, 3.0, 4.0, -5.0, -6.0, -7.0, -8.0]);
        assert_eq!(r.reverse(), m);
    }

    #[test]
    fn norm_matches_quadratic_form() {
        let m = mv([0.0, 3.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0]);
        assert_eq!(m.norm(), 5.0);
        // Definition check: norm^2 equals the scalar part of M M~.
        let q = m.geometric_product(m.reverse()).s;
        assert!((m.norm() * m.norm() - q).abs() < 1e-12);
    }

    #[test]
    fn grade_projection_partitions() {
        let m = mv([1.5, -2.0, 0.25, 4.0, -1.0, 3.0, 0.5, -0.75]);
        let sum = (0..4).fold(Multivector::ZERO, |acc, k| acc + m.grade(k).unwrap());
        assert_eq!(sum, m);
        assert_eq!(m.grade(4), Err(GaError::GradeOutOfRange(4)));
    }

    #[test]
    fn wedge_antisymmetry() {
        let a = Vector::new(1.0, 2.0, 3.0);
        let b = Vector::new(-0.5, 4.0, 0.25);
        let w = a.wedge(b);
        assert_eq!(a.wedge(a), Bivector::ZERO);
        assert_eq!(w, -b.wedge(a));
        // Wedge is the grade-2 part of the geometric product.
        let g = Multivector::from(a).geometric_product(Multivector::from(b));
        assert_eq!(g.bivector_part(), w);
        assert_eq!(g.s, a.dot(b));
    }

    #[test]
    fn dual_plane_of_axes() {
        assert_eq!(Vector::E3.dual_plane(), Bivector::E12);
        assert_eq!(Vector::E1.dual_plane(), Bivector::E23);
        assert_eq!(Vector::E2.dual_plane(), Bivector::E31);
    }
}
