//! Thrust-alignment attitude chain: the desired rotor, its first two time
//! derivatives, and the attitude error feedback signal.
//!
//! Given the preferred orientation rotor chain `r_p`, the (possibly moving)
//! body thrust axis chain `t_ref`, and the demanded inertial thrust
//! direction chain `t_d`, the desired rotor is
//!
//! ```text
//! t_p = r_p t_ref r_p~           (thrust direction the preferred pose gives)
//! r_a = (t_p t_d)^(-1/2)         (minimal rotation taking t_p onto t_d)
//! r_d = r_a r_p
//! ```
//!
//! so `r_d` rotates the body axis onto `t_d` while staying as close to `r_p`
//! as a rotor can (see the argmin test). Derivatives of `r_a` are computed
//! through the exact polar decomposition `X = t_p t_d = cos(phi) + sin(phi) u`
//! with `phi = atan2(|<X>_2|, <X>_0)` and unit plane `u`, differentiating
//! `r_a = cos(phi/2) - sin(phi/2) u` term by term. A scalar-calculus power
//! rule (`d/dt X^(-1/2) = -X' X^(-3/2) / 2`) is exact only when `X` and `X'`
//! commute — a fixed rotation plane; it is kept here as a crate-private
//! comparator and as the limit form for nearly aligned axes, where the plane
//! is numerically undefined but the commutation error vanishes.

use crate::ga3::{log_rotor, tol, Bivector, Even, GaError, Odd, Rotor, Vector};

use super::ControllerError;

/// Below this plane magnitude `|t_p wedge t_d|` the alignment plane is taken
/// as numerically degenerate: nearly aligned pairs switch to the power-rule
/// limit form, nearly opposed pairs are rejected as antipodal.
pub const ALIGN_DEGENERATE: f64 = 1e-7;

/// Absolute bound on the grade-0 residual of `-2 r' r~`; a larger residual
/// means the supplied derivative is not tangent to the rotor manifold.
pub const TANGENCY_RESIDUAL: f64 = 1e-8;

/// A time-varying vector and its first two derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorChain {
    pub v: Vector,
    pub dv: Vector,
    pub ddv: Vector,
}

impl VectorChain {
    /// A constant vector: derivatives zero.
    pub fn constant(v: Vector) -> Self {
        Self { v, dv: Vector::ZERO, ddv: Vector::ZERO }
    }
}

/// A time-varying rotor and its first two derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorChain {
    pub r: Rotor,
    pub dr: Even,
    pub ddr: Even,
}

impl RotorChain {
    /// A constant rotor: derivatives zero.
    pub fn constant(r: Rotor) -> Self {
        Self { r, dr: Even::ZERO, ddr: Even::ZERO }
    }
}

/// Output of [`error_rotor`]: the desired attitude chain plus the feedback
/// error quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeTarget {
    /// Desired rotor, `r_a r_p`.
    pub r_d: Rotor,
    /// First derivative of the desired rotor.
    pub dr_d: Even,
    /// Second derivative of the desired rotor.
    pub ddr_d: Even,
    /// Body-frame error rotor `reverse(r) r_d`.
    pub r_e: Rotor,
    /// Logarithm of the error rotor: the plane-and-angle feedback bivector.
    pub j_e_theta_e: Bivector,
}

/// Geometric product of two vectors as an even element:
/// `a b = a . b + a ^ b`.
fn vec_mul(a: Vector, b: Vector) -> Even {
    Even::from_parts(a.dot(b), a.wedge(b))
}

/// `a v b` for general (not necessarily unit) even factors, keeping the full
/// odd result.
fn sandwich_term(a: Even, v: Vector, b: Even) -> Odd {
    a.mul_odd(Odd::from_vector(v)).mul_even(b)
}

/// Vector part of an odd element whose trivector part cancels analytically.
fn vector_of(odd: Odd) -> Vector {
    let v = odd.vector_part();
    debug_assert!(
        odd.norm() < 1e-12 || (odd.norm() - v.norm()).abs() <= 1e-9 * odd.norm().max(1.0),
        "trivector residual should cancel in sandwich derivative sums"
    );
    v
}

/// Rotate a vector chain through a rotor chain: the chain of
/// `t_p(t) = r(t) v(t) r(t)~` by the product rule. Individual terms carry
/// trivector parts; the sums do not.
pub fn sandwich_chain(rc: &RotorChain, vc: &VectorChain) -> VectorChain {
    let r = rc.r.as_even();
    let rr = r.reverse();
    let (dr, ddr) = (rc.dr, rc.ddr);

    let v = rc.r.rotate_vector(vc.v);
    let dv = vector_of(
        sandwich_term(dr, vc.v, rr)
            + sandwich_term(r, vc.v, dr.reverse())
            + sandwich_term(r, vc.dv, rr),
    );
    let ddv = vector_of(
        sandwich_term(ddr, vc.v, rr)
            + sandwich_term(r, vc.v, ddr.reverse())
            + sandwich_term(dr, vc.v, dr.reverse()) * 2.0
            + sandwich_term(dr, vc.dv, rr) * 2.0
            + sandwich_term(r, vc.dv, dr.reverse()) * 2.0
            + sandwich_term(r, vc.ddv, rr),
    );
    VectorChain { v, dv, ddv }
}

/// Scalar-rule derivatives of `r_a = X^(-1/2)`:
/// `r_a' = -X' X^(-3/2) / 2` and
/// `r_a'' = -X'' X^(-3/2) / 2 + 3 X'^2 X^(-5/2) / 4`.
/// Exact iff `X` and its derivatives share one rotation plane.
pub(crate) fn alignment_derivs_power_rule(
    x: Even,
    dx: Even,
    ddx: Even,
) -> Result<(Even, Even), GaError> {
    // The product of two unit-tolerance vectors can drift past the unit gate
    // of the logarithm; renormalize first.
    let xn = x * (1.0 / x.norm());
    let xm32 = crate::ga3::even_power(xn, -1.5)?;
    let xm52 = crate::ga3::even_power(xn, -2.5)?;
    let dr = dx.mul_even(xm32) * -0.5;
    let ddr = ddx.mul_even(xm32) * -0.5 + dx.mul_even(dx).mul_even(xm52) * 0.75;
    Ok((dr, ddr))
}

/// The aligning rotor `r_a = (t_p t_d)^(-1/2)` with exact first and second
/// derivatives.
fn alignment_chain(
    t_p: &VectorChain,
    t_d: &VectorChain,
) -> Result<(Even, Even, Even), ControllerError> {
    let x = vec_mul(t_p.v, t_d.v);
    let dx = vec_mul(t_p.dv, t_d.v) + vec_mul(t_p.v, t_d.dv);
    let ddx = vec_mul(t_p.ddv, t_d.v) + vec_mul(t_p.dv, t_d.dv) * 2.0 + vec_mul(t_p.v, t_d.ddv);

    let c = x.scalar_part();
    let s_biv = x.bivector_part();
    let s = s_biv.norm();

    if s < ALIGN_DEGENERATE {
        if c < 0.0 {
            return Err(ControllerError::AntipodalThrust);
        }
        // Nearly aligned: the rotation plane is numerically undefined but
        // X ~ 1, where the scalar rule is the exact limit.
        let xn = x * (1.0 / x.norm());
        let r_a = crate::ga3::even_power(xn, -0.5)?;
        let (dr_a, ddr_a) = alignment_derivs_power_rule(x, dx, ddx)?;
        return Ok((r_a, dr_a, ddr_a));
    }

    let dc = dx.scalar_part();
    let ds_biv = dx.bivector_part();
    let ddc = ddx.scalar_part();
    let dds_biv = ddx.bivector_part();

    // Norm chain of the grade-2 part.
    let ds = s_biv.dot(ds_biv) / s;
    let dds = (ds_biv.dot(ds_biv) + s_biv.dot(dds_biv) - ds * ds) / s;

    // Angle chain; q = c^2 + s^2 is 1 for unit inputs but kept explicit so
    // the derivatives stay consistent with phi = atan2(s, c) regardless of
    // input slack.
    let q = c * c + s * s;
    let dq = 2.0 * (c * dc + s * ds);
    let phi = s.atan2(c);
    let dphi = (ds * c - dc * s) / q;
    let ddphi = ((dds * c - ddc * s) * q - (ds * c - dc * s) * dq) / (q * q);

    // Unit plane chain.
    let u = s_biv * (1.0 / s);
    let du = (ds_biv - u * ds) * (1.0 / s);
    let ddu = (dds_biv - du * (2.0 * ds) - u * dds) * (1.0 / s);

    // r_a = cos(h) - sin(h) u at half angle h = phi / 2.
    let (h, dh, ddh) = (0.5 * phi, 0.5 * dphi, 0.5 * ddphi);
    let (sh, ch) = h.sin_cos();
    let r_a = Even::from_parts(ch, u * -sh);
    let dr_a = Even::from_parts(-dh * sh, u * (-dh * ch) - du * sh);
    let ddr_a = Even::from_parts(
        -ddh * sh - dh * dh * ch,
        u * (dh * dh * sh - ddh * ch) - du * (2.0 * dh * ch) - ddu * sh,
    );
    Ok((r_a, dr_a, ddr_a))
}

/// Desired rotor chain and error feedback for one control instant.
///
/// `r` is the measured attitude; `r_p`, `t_d`, `t_ref` are the preferred
/// orientation, demanded thrust direction, and body thrust axis with their
/// derivatives. Fails if `t_d` or `t_ref` is not unit, or if the preferred
/// pose would point the thrust exactly opposite to the demand (antipodal),
/// in which case the caller nudges `t_d` and retries.
pub fn error_rotor(
    r: Rotor,
    r_p: &RotorChain,
    t_d: &VectorChain,
    t_ref: &VectorChain,
) -> Result<AttitudeTarget, ControllerError> {
    for v in [t_d.v, t_ref.v] {
        let n = v.norm();
        if (n - 1.0).abs() > tol::UNIT_INPUT {
            return Err(ControllerError::Algebra(GaError::NonUnitInput { norm: n }));
        }
    }

    let t_p = sandwich_chain(r_p, t_ref);
    let (r_a, dr_a, ddr_a) = alignment_chain(&t_p, t_d)?;

    let rp = r_p.r.as_even();
    let r_d_even = r_a.mul_even(rp);
    let dr_d = dr_a.mul_even(rp) + r_a.mul_even(r_p.dr);
    let ddr_d =
        ddr_a.mul_even(rp) + dr_a.mul_even(r_p.dr) * 2.0 + r_a.mul_even(r_p.ddr);

    let r_d = Rotor::new(r_d_even).map_err(ControllerError::Algebra)?;
    debug_assert!(
        (r_d.rotate_vector(t_ref.v) - t_d.v).norm() < 1e-9,
        "desired rotor must map the body thrust axis onto the demanded direction"
    );

    let r_e = Rotor::new(r.reverse().as_even().mul_even(r_d.as_even()))
        .map_err(ControllerError::Algebra)?;
    let j_e_theta_e = log_rotor(r_e);

    Ok(AttitudeTarget { r_d, dr_d, ddr_d, r_e, j_e_theta_e })
}

/// Angular velocity bivector of a rotor chain: grade-2 part of `-2 r' r~`.
/// The grade-0 part must vanish for a norm-preserving derivative; a residual
/// above [`TANGENCY_RESIDUAL`] is reported instead of silently dropped.
pub fn omega_desired(r_d: Rotor, dr_d: Even) -> Result<Bivector, ControllerError> {
    let m = dr_d.mul_even(r_d.as_even().reverse()) * -2.0;
    let residual = m.scalar_part().abs();
    if residual >= TANGENCY_RESIDUAL {
        return Err(ControllerError::InconsistentDerivative { residual });
    }
    Ok(m.bivector_part())
}

/// Angular acceleration bivector of a rotor chain:
/// grade-2 part of `-2 r'' r~ - 2 r' r'~`, with the same residual check.
pub fn omega_dot_desired(
    r_d: Rotor,
    dr_d: Even,
    ddr_d: Even,
) -> Result<Bivector, ControllerError> {
    let m = (ddr_d.mul_even(r_d.as_even().reverse()) + dr_d.mul_even(dr_d.reverse())) * -2.0;
    let residual = m.scalar_part().abs();
    if residual >= TANGENCY_RESIDUAL {
        return Err(ControllerError::InconsistentDerivative { residual });
    }
    Ok(m.bivector_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga3::{even_power, exp_bivector};
    use crate::reference::fixed_plane_rotor;

    const E3: Vector = Vector::E3;

    fn unit(x1: f64, x2: f64, x3: f64) -> Vector {
        Vector::new(x1, x2, x3).normalized().unwrap()
    }

    /// Analytic tilting axis chain: v = (sin a, 0, cos a) with a(t) given by
    /// (a, a', a'').
    fn tilt_chain(a: f64, da: f64, dda: f64) -> VectorChain {
        let (sa, ca) = a.sin_cos();
        VectorChain {
            v: Vector::new(sa, 0.0, ca),
            dv: Vector::new(ca, 0.0, -sa) * da,
            ddv: Vector::new(ca, 0.0, -sa) * dda + Vector::new(-sa, 0.0, -ca) * (da * da),
        }
    }

    #[test]
    fn trivial_case_gives_identity_error() {
        let out = error_rotor(
            Rotor::IDENTITY,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(E3),
            &VectorChain::constant(E3),
        )
        .unwrap();
        assert_eq!(out.r_e, Rotor::IDENTITY);
        assert_eq!(out.j_e_theta_e, Bivector::ZERO);
        assert_eq!(out.dr_d, Even::ZERO);
    }

    #[test]
    fn desired_rotor_maps_axis_to_demand() {
        // A deliberately awkward configuration: tilted preferred pose,
        // off-axis demand.
        let r_p = exp_bivector(Bivector::new(0.3, -0.4, 0.25));
        let cases = [
            unit(0.0, 0.0, -1.0) * -1.0,
            unit(1.0, 0.0, 0.0),
            unit(0.2, -0.7, 0.5),
            unit(-0.6, 0.3, -0.4),
        ];
        for t_d in cases {
            let out = error_rotor(
                exp_bivector(Bivector::new(-0.1, 0.8, 0.2)),
                &RotorChain::constant(r_p),
                &VectorChain::constant(t_d),
                &VectorChain::constant(E3),
            )
            .unwrap();
            assert!((out.r_d.rotate_vector(E3) - t_d).norm() < 1e-9);
        }
    }

    #[test]
    fn matches_rotor_between_for_identity_preference() {
        let t_d = unit(-1.0, 0.1, -0.3);
        let out = error_rotor(
            Rotor::IDENTITY,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(t_d),
            &VectorChain::constant(E3),
        )
        .unwrap();
        let direct = crate::ga3::rotor_between(E3, t_d).unwrap();
        assert!((out.r_d.as_even() - direct.as_even()).norm() < 1e-12);
    }

    #[test]
    fn half_turn_error_from_inverted_attitude() {
        // Body flipped 180 degrees in the e2e3 plane while the preferred
        // pose and demand agree: the error is a half turn.
        let r = Rotor::new(Even::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        let down = Vector::new(0.0, 0.0, -1.0);
        let out = error_rotor(
            r,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(down),
            &VectorChain::constant(down),
        )
        .unwrap();
        assert!((out.j_e_theta_e.norm() - std::f64::consts::PI).abs() < 1e-12);
        // And the same with the conventional axis.
        let out = error_rotor(
            r,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(E3),
            &VectorChain::constant(E3),
        )
        .unwrap();
        assert!((out.j_e_theta_e.norm() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn antipodal_demand_is_rejected() {
        let err = error_rotor(
            Rotor::IDENTITY,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(Vector::new(0.0, 0.0, -1.0)),
            &VectorChain::constant(E3),
        )
        .unwrap_err();
        assert_eq!(err, ControllerError::AntipodalThrust);
    }

    #[test]
    fn rejects_non_unit_directions() {
        let err = error_rotor(
            Rotor::IDENTITY,
            &RotorChain::constant(Rotor::IDENTITY),
            &VectorChain::constant(Vector::new(0.0, 0.0, 1.1)),
            &VectorChain::constant(E3),
        )
        .unwrap_err();
        assert!(matches!(err, ControllerError::Algebra(GaError::NonUnitInput { .. })));
    }

    #[test]
    fn sandwich_chain_matches_finite_differences() {
        // r(t) rotating in e12, axis tilting in e31: a genuinely
        // out-of-plane composite.
        let h = 1e-5;
        let rotor_at = |t: f64| fixed_plane_rotor(Bivector::E12, -0.45 * (0.7 * t).sin(), 0.0, 0.0).0;
        let axis_at = |t: f64| {
            let a = 0.3 * (0.9_f64 * t).sin();
            Vector::new(a.sin(), 0.0, a.cos())
        };
        let t0: f64 = 1.3;
        let (r, dr, ddr) = fixed_plane_rotor(
            Bivector::E12,
            -0.45 * (0.7 * t0).sin(),
            -0.45 * 0.7 * (0.7 * t0).cos(),
            0.45 * 0.7 * 0.7 * (0.7 * t0).sin(),
        );
        let a = 0.3 * (0.9_f64 * t0).sin();
        let da = 0.3 * 0.9 * (0.9_f64 * t0).cos();
        let dda = -0.3 * 0.9 * 0.9 * (0.9_f64 * t0).sin();
        let out = sandwich_chain(&RotorChain { r, dr, ddr }, &tilt_chain(a, da, dda));

        let f = |t: f64| rotor_at(t).rotate_vector(axis_at(t));
        let fd1 = (f(t0 + h) - f(t0 - h)) * (1.0 / (2.0 * h));
        let fd2 = (f(t0 + h) - out.v * 2.0 + f(t0 - h)) * (1.0 / (h * h));
        assert!((out.v - f(t0)).norm() < 1e-12);
        assert!((out.dv - fd1).norm() < 1e-9);
        assert!((out.ddv - fd2).norm() < 1e-5);
    }

    /// Full desired-rotor chain on a synthetic out-of-plane configuration,
    /// checked against central finite differences of the rotor itself.
    #[test]
    fn desired_rotor_derivatives_match_finite_differences() {
        let chain_at = |t: f64| {
            let (r, dr, ddr) = fixed_plane_rotor(
                Bivector::E12,
                -0.45 * (0.7 * t).sin(),
                -0.45 * 0.7 * (0.7 * t).cos(),
                0.45 * 0.7 * 0.7 * (0.7 * t).sin(),
            );
            let a = 0.8 * (0.5_f64 * t).sin();
            let da = 0.8 * 0.5 * (0.5_f64 * t).cos();
            let dda = -0.8 * 0.5 * 0.5 * (0.5_f64 * t).sin();
            // Demand tilts in the e2e3 plane while the axis tilts in e31
            // under a yawing preferred pose: nothing commutes here.
            let b = 0.9 * (0.4_f64 * t).sin();
            let db = 0.9 * 0.4 * (0.4_f64 * t).cos();
            let ddb = -0.9 * 0.4 * 0.4 * (0.4_f64 * t).sin();
            let t_d = VectorChain {
                v: Vector::new(0.0, b.sin(), b.cos()),
                dv: Vector::new(0.0, b.cos(), -b.sin()) * db,
                ddv: Vector::new(0.0, b.cos(), -b.sin()) * ddb
                    + Vector::new(0.0, -b.sin(), -b.cos()) * (db * db),
            };
            let t_ref = tilt_chain(a, da, dda);
            error_rotor(Rotor::IDENTITY, &RotorChain { r, dr, ddr }, &t_d, &t_ref).unwrap()
        };

        let h = 1e-5;
        for t0 in [0.4, 1.7, 3.1] {
            let out = chain_at(t0);
            let plus = chain_at(t0 + h).r_d.as_even();
            let minus = chain_at(t0 - h).r_d.as_even();
            let fd1 = (plus - minus) * (1.0 / (2.0 * h));
            let fd2 = (plus - out.r_d.as_even() * 2.0 + minus) * (1.0 / (h * h));
            assert!(
                (out.dr_d - fd1).norm() <= 1e-8 * fd1.norm().max(1.0),
                "t={t0}: dr_d {:?} vs fd {:?}",
                out.dr_d,
                fd1
            );
            assert!(
                (out.ddr_d - fd2).norm() <= 1e-4 * fd2.norm().max(1.0),
                "t={t0}: ddr_d {:?} vs fd {:?}",
                out.ddr_d,
                fd2
            );
        }
    }

    #[test]
    fn power_rule_agrees_in_a_fixed_plane() {
        // Both directions rotate in the e31 plane, so X and its derivatives
        // commute and the scalar rule is exact.
        let t_p = tilt_chain(0.4, 0.3, -0.2);
        let t_d = tilt_chain(-0.7, 0.5, 0.1);
        let x = vec_mul(t_p.v, t_d.v);
        let dx = vec_mul(t_p.dv, t_d.v) + vec_mul(t_p.v, t_d.dv);
        let ddx =
            vec_mul(t_p.ddv, t_d.v) + vec_mul(t_p.dv, t_d.dv) * 2.0 + vec_mul(t_p.v, t_d.ddv);
        let (exact, dr_exact, ddr_exact) = alignment_chain(&t_p, &t_d).unwrap();
        let (dr_rule, ddr_rule) = alignment_derivs_power_rule(x, dx, ddx).unwrap();
        let direct = even_power(x * (1.0 / x.norm()), -0.5).unwrap();
        assert!((exact - direct).norm() < 1e-12);
        assert!((dr_exact - dr_rule).norm() < 1e-12);
        assert!((ddr_exact - ddr_rule).norm() < 1e-11);
    }

    #[test]
    fn omega_of_single_plane_rotor_is_plane_times_rate() {
        let w = 1.7;
        // r(t) = exp(-e12 w t / 2) at t = 0.35.
        let (r, dr, ddr) = fixed_plane_rotor(Bivector::E12, -w * 0.35 / 2.0, -w / 2.0, 0.0);
        let omega = omega_desired(r, dr).unwrap();
        assert!((omega - Bivector::E12 * w).norm() < 1e-12);
        let domega = omega_dot_desired(r, dr, ddr).unwrap();
        assert!(domega.norm() < 1e-12, "constant rate has zero acceleration");
    }

    #[test]
    fn omega_rejects_non_tangent_derivatives() {
        let r = Rotor::IDENTITY;
        // A radial derivative grows the norm; its grade-0 residual is 1.
        let dr = r.as_even() * 0.5;
        let err = omega_desired(r, dr).unwrap_err();
        assert!(matches!(err, ControllerError::InconsistentDerivative { residual } if residual > 0.9));
        assert!(omega_dot_desired(r, dr, Even::ZERO).is_err());
    }

    #[test]
    fn zero_derivative_gives_zero_rates() {
        let r = exp_bivector(Bivector::new(0.2, -0.5, 0.3));
        assert_eq!(omega_desired(r, Even::ZERO).unwrap(), Bivector::ZERO);
        assert_eq!(omega_dot_desired(r, Even::ZERO, Even::ZERO).unwrap(), Bivector::ZERO);
    }

    /// Among all rotors mapping the axis onto the demand, the returned r_d
    /// is the one closest to the preferred pose: every twist of r_d about
    /// t_d scores no better.
    #[test]
    fn desired_rotor_minimizes_distance_to_preference() {
        let r_p = exp_bivector(Bivector::new(0.4, -0.2, 0.6));
        let t_d = unit(0.3, -0.5, 0.45);
        let out = error_rotor(
            Rotor::IDENTITY,
            &RotorChain::constant(r_p),
            &VectorChain::constant(t_d),
            &VectorChain::constant(E3),
        )
        .unwrap();
        let best = log_rotor(
            Rotor::new(out.r_d.as_even().mul_even(r_p.reverse().as_even())).unwrap(),
        )
        .norm();
        let twist_plane = t_d.dual_plane();
        let mut beta = -std::f64::consts::PI;
        while beta <= std::f64::consts::PI {
            let q = exp_bivector(twist_plane * (beta / 2.0)).as_even().mul_even(out.r_d.as_even());
            let q = Rotor::new(q).unwrap();
            // Every family member still satisfies the alignment constraint.
            debug_assert!((q.rotate_vector(E3) - t_d).norm() < 1e-9);
            let score =
                log_rotor(Rotor::new(q.as_even().mul_even(r_p.reverse().as_even())).unwrap())
                    .norm();
            assert!(score >= best - 1e-9, "beta = {beta}: {score} < {best}");
            beta += 1e-3;
        }
    }
}
