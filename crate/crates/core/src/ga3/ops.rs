use super::even_odd::{Even, Odd, Rotor};
use super::multivector::{Bivector, Multivector, Vector};
use super::{tol, GaError};

/// Closed-form exponential of a bivector: `cos(|b|) + sin(|b|) b / |b|`,
/// always a unit rotor. A second-order sinc expansion covers `|b| -> 0`.
pub fn exp_bivector(b: Bivector) -> Rotor {
    let theta = b.norm();
    let (c, sinc) = if theta < 1e-8 {
        (1.0 - theta * theta / 2.0, 1.0 - theta * theta / 6.0)
    } else {
        (theta.cos(), theta.sin() / theta)
    };
    Rotor::new_unchecked(Even::from_parts(c, b * sinc))
}

/// Angle bivector of a rotor: the `j theta` with `r = exp_bivector(-j theta / 2)`,
/// computed as `-2 acos(<r>_0) <r>_2 / |<r>_2|`. Rotors within
/// [`tol::LOG_IDENTITY`] of a pure scalar map to the zero bivector (the plane
/// is undefined there). The arc cosine is evaluated as
/// `atan2(|<r>_2|, <r>_0)`, which is the same branch with uniform accuracy
/// near both ends of the range.
pub fn log_rotor(r: Rotor) -> Bivector {
    let b = r.bivector_part();
    let bnorm = b.norm();
    if bnorm < tol::LOG_IDENTITY {
        return Bivector::ZERO;
    }
    let angle = bnorm.atan2(r.scalar_part());
    b * (-2.0 * angle / bnorm)
}

/// Logarithm of a unit even element: the bivector `B` with `m = exp(B)`,
/// `|B| in [0, pi)`. Fails on non-unit input and on the negative-scalar
/// branch point where the plane is undefined.
pub fn even_log(m: Even) -> Result<Bivector, GaError> {
    let n = m.norm();
    if (n - 1.0).abs() > tol::UNIT_INPUT {
        return Err(GaError::NonUnitInput { norm: n });
    }
    let s = m.bivector_part();
    let snorm = s.norm();
    if snorm < tol::LOG_IDENTITY {
        if m.scalar_part() > 0.0 {
            return Ok(Bivector::ZERO);
        }
        return Err(GaError::NegativeScalarBranch);
    }
    if 1.0 + m.scalar_part() < tol::ANTIPODAL {
        return Err(GaError::NegativeScalarBranch);
    }
    let phi = snorm.atan2(m.scalar_part());
    Ok(s * (phi / snorm))
}

/// Real power of a unit even element through its logarithm:
/// `m^p = exp(p log m)`.
pub fn even_power(m: Even, p: f64) -> Result<Even, GaError> {
    let b = even_log(m)?;
    Ok(exp_bivector(b * p).as_even())
}

/// The rotor aligning unit vector `a` to unit vector `b` with no twist about
/// the target: `(a b)^(-1/2)`. Antipodal pairs have no unique rotation plane
/// and are rejected.
pub fn rotor_between(a: Vector, b: Vector) -> Result<Rotor, GaError> {
    for v in [a, b] {
        let n = v.norm();
        if (n - 1.0).abs() > tol::UNIT_INPUT {
            return Err(GaError::NonUnitInput { norm: n });
        }
    }
    if 1.0 + a.dot(b) < tol::ANTIPODAL {
        return Err(GaError::Antipodal);
    }
    let ab = Even::from_parts(a.dot(b), a.wedge(b));
    // |a b| = |a| |b| is unit only up to the input slack; renormalize so the
    // slack of the two inputs cannot stack past even_power's own gate.
    let ab = ab * (1.0 / ab.norm());
    let r = even_power(ab, -0.5).map_err(|e| match e {
        GaError::NegativeScalarBranch => GaError::Antipodal,
        other => other,
    })?;
    Ok(Rotor::new_unchecked(r))
}

/// Commutator product `[a, b] = (a b - b a) / 2`.
pub fn commutator(a: Multivector, b: Multivector) -> Multivector {
    (a.geometric_product(b) - b.geometric_product(a)) * 0.5
}

/// Bivector specialization of [`commutator`]; the result stays grade 2.
pub fn commutator_bivector(a: Bivector, b: Bivector) -> Bivector {
    Bivector {
        b12: a.b31 * b.b23 - a.b23 * b.b31,
        b23: a.b12 * b.b31 - a.b31 * b.b12,
        b31: a.b23 * b.b12 - a.b12 * b.b23,
    }
}

/// Projection of `m` onto an invertible homogeneous blade:
/// `(m ⌋ blade) blade^(-1)` with `⌋` the left contraction.
pub fn project(m: Multivector, blade: Multivector) -> Result<Multivector, GaError> {
    let grades: Vec<usize> = (0..4)
        .filter(|&k| blade.grade(k).unwrap().norm() > tol::BLADE_SINGULAR)
        .collect();
    let [grade] = grades.as_slice() else {
        return Err(GaError::SingularBlade);
    };
    let s = *grade;

    // Left contraction M ⌋ B = sum_r < <M>_r B >_{s-r}.
    let mut contraction = Multivector::ZERO;
    for r in 0..=s {
        let part = m.grade(r).unwrap().geometric_product(blade);
        contraction = contraction + part.grade(s - r).unwrap();
    }

    let norm_sq = blade.geometric_product(blade.reverse()).s;
    debug_assert!(norm_sq > 0.0);
    let inverse = blade.reverse() * (1.0 / norm_sq);
    Ok(contraction.geometric_product(inverse))
}

/// General sandwich `r m r~`, evaluated per parity through the split kernels.
pub fn rotate(r: Rotor, m: Multivector) -> Multivector {
    let e = Even::new(m.s, m.b12, m.b23, m.b31);
    let o = Odd::new(m.v1, m.v2, m.v3, m.t);
    let re = r.as_even();
    let e_rot = re.mul_even(e).mul_even(re.reverse());
    let o_rot = re.mul_odd(o).mul_even(re.reverse());
    Multivector::from(e_rot) + Multivector::from(o_rot)
}
