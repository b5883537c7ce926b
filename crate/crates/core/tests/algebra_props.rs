//! Randomized algebra laws, each checked over ten thousand cases: the
//! product is associative, reversion anti-commutes, rotations are isometries
//! that compose through the product, grades partition every element, exp and
//! log invert each other on the principal branch, and the split even/odd
//! kernels agree with the full eight-coefficient product bitwise.

use proptest::prelude::*;
use rotorsim_core::ga3::{
    exp_bivector, geometric_product, log_rotor, rotate, Bivector, Even, Multivector, Odd, Rotor,
    Vector,
};

const CASES: u32 = 10_000;

fn arb_coeff() -> impl Strategy<Value = f64> {
    -100.0..100.0_f64
}

fn arb_multivector() -> impl Strategy<Value = Multivector> {
    proptest::array::uniform8(arb_coeff()).prop_map(Multivector::from_coeffs)
}

fn arb_vector() -> impl Strategy<Value = Vector> {
    proptest::array::uniform3(arb_coeff()).prop_map(|[a, b, c]| Vector::new(a, b, c))
}

fn arb_even() -> impl Strategy<Value = Even> {
    proptest::array::uniform4(arb_coeff()).prop_map(|[s, b12, b23, b31]| {
        Even::from_parts(s, Bivector::new(b12, b23, b31))
    })
}

fn arb_odd() -> impl Strategy<Value = Odd> {
    proptest::array::uniform4(arb_coeff()).prop_map(|[x1, x2, x3, t]| Odd::new(x1, x2, x3, t))
}

fn arb_rotor() -> impl Strategy<Value = Rotor> {
    proptest::array::uniform3(-3.0..3.0_f64)
        .prop_map(|[b12, b23, b31]| exp_bivector(Bivector::new(b12, b23, b31)))
}

/// `‖got − want‖ ≤ tol`, scaled by the sizes of the operands involved.
fn close(got: Multivector, want: Multivector, tol: f64, scale: f64) -> Result<(), TestCaseError> {
    let err = (got - want).norm();
    prop_assert!(
        err <= tol * (1.0 + scale),
        "difference {err:.3e} exceeds {tol:.0e} at scale {scale:.3e}"
    );
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn product_is_associative(
        a in arb_multivector(),
        b in arb_multivector(),
        c in arb_multivector(),
    ) {
        let left = a.geometric_product(b).geometric_product(c);
        let right = a.geometric_product(b.geometric_product(c));
        close(left, right, 1e-12, a.norm() * b.norm() * c.norm())?;
    }

    #[test]
    fn reversion_involutes_exactly_and_antidistributes(
        a in arb_multivector(),
        b in arb_multivector(),
    ) {
        prop_assert_eq!(a.reverse().reverse(), a);
        let product_reversed = a.geometric_product(b).reverse();
        let reversed_product = b.reverse().geometric_product(a.reverse());
        close(product_reversed, reversed_product, 1e-12, a.norm() * b.norm())?;
    }

    #[test]
    fn rotation_preserves_norms(r in arb_rotor(), m in arb_multivector()) {
        let rotated = rotate(r, m);
        let err = (rotated.norm() - m.norm()).abs();
        prop_assert!(err <= 1e-12 * (1.0 + m.norm()), "norm drifted by {err:.3e}");
    }

    #[test]
    fn grades_partition_every_element(m in arb_multivector()) {
        let mut sum = Multivector::ZERO;
        for k in 0..4 {
            sum = sum + m.grade(k).expect("grades 0..=3 exist");
        }
        prop_assert_eq!(sum, m);
        // For grade-1 factors the symmetric part of the product is the dot
        // (pure scalar) and the antisymmetric part the wedge (pure plane).
    }

    #[test]
    fn vector_products_split_into_dot_and_wedge(u in arb_vector(), v in arb_vector()) {
        let (mu, mv) = (Multivector::from(u), Multivector::from(v));
        let sym = (mu.geometric_product(mv) + mv.geometric_product(mu)) * 0.5;
        let anti = (mu.geometric_product(mv) - mv.geometric_product(mu)) * 0.5;
        prop_assert_eq!(sym.grade(0).unwrap(), sym, "uv + vu must be pure scalar");
        prop_assert_eq!(anti.grade(2).unwrap(), anti, "uv - vu must be pure bivector");
        prop_assert!((sym.coeffs()[0] - u.dot(v)).abs() <= 1e-12 * (1.0 + u.norm() * v.norm()));
        prop_assert_eq!(anti.bivector_part(), u.wedge(v));
    }

    #[test]
    fn exp_and_log_invert_on_the_principal_branch(
        dir in proptest::array::uniform3(-1.0..1.0_f64),
        norm in 1e-6..(2.0 * std::f64::consts::PI - 1e-2),
    ) {
        let raw = Bivector::new(dir[0], dir[1], dir[2]);
        prop_assume!(raw.norm() > 1e-3);
        let j_theta = raw * (norm / raw.norm());
        let r = exp_bivector(j_theta * -0.5);
        let err = (log_rotor(r) - j_theta).norm();
        prop_assert!(err <= 1e-9, "roundtrip error {err:.3e} at angle {norm:.3}");
    }

    #[test]
    fn rotations_compose_through_the_product(
        r1 in arb_rotor(),
        r2 in arb_rotor(),
        m in arb_multivector(),
    ) {
        let stepped = rotate(r1, rotate(r2, m));
        let composed = rotate(r1.compose(r2), m);
        close(stepped, composed, 1e-12, m.norm())?;
    }

    #[test]
    fn split_kernels_match_the_full_product_bitwise(
        p in arb_even(),
        q in arb_even(),
        u in arb_odd(),
        v in arb_odd(),
    ) {
        let full = |m: Multivector, n: Multivector| m.geometric_product(n).coeffs();
        prop_assert_eq!(Multivector::from(p.mul_even(q)).coeffs(), full(p.into(), q.into()));
        prop_assert_eq!(Multivector::from(p.mul_odd(u)).coeffs(), full(p.into(), u.into()));
        prop_assert_eq!(Multivector::from(u.mul_even(q)).coeffs(), full(u.into(), q.into()));
        prop_assert_eq!(Multivector::from(u.mul_odd(v)).coeffs(), full(u.into(), v.into()));
        // And the free-function spelling is the same product.
        prop_assert_eq!(
            geometric_product(p.into(), v.into()).coeffs(),
            full(p.into(), v.into())
        );
    }
}
