mod common;

use common::*;
use fricke::arith::is_prime;
use fricke::atkin::isogenous_from_u;
use fricke::newton::{coefficients_to_newton, newton_to_coefficients};
use fricke::ring::{PrimeField, Ring};
use fricke::volcano::Curve;
use fricke::Family;
use proptest::prelude::*;

#[test]
fn ramanujan_and_theta() {
    ramanujan_and_f7(50).unwrap();
}

#[test]
fn homogeneity() {
    euler_identities(13).unwrap();
}

#[test]
fn volcano_root_products_and_elkies() {
    let u5 = exact(5, Family::U).unwrap().reduce_mod(P1811);
    volcano_identities(&sites_1811(1).unwrap(), &u5, P1811).unwrap();
}

#[test]
fn theta_against_t_series() {
    theta_vs_t(192, &["1.2", "2"]).unwrap();
}

#[test]
fn eleven_needs_the_dual_system() {
    primal_deficiency_11().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn newton_round_trip_mod_p(c in proptest::collection::vec(0u64..1811, 1..16)) {
        let f = PrimeField::new(1811);
        let p = coefficients_to_newton(&f, &c, |x, k| f.mul_i64(x, k as i64));
        prop_assert_eq!(newton_to_coefficients(&f, &p).unwrap(), c);
    }

    #[test]
    fn reduction_commutes_with_evaluation(x in 0u64..1811, e4 in 0u64..1811, e6 in 0u64..1811, d in 0u64..1811) {
        let f = PrimeField::new(1811);
        let u = exact(5, Family::U).unwrap();
        let z = fricke::ring::Integers;
        let big = |v: u64| num_bigint::BigInt::from(v);
        let full = u.eval(&z, &big(x), &big(e4), &big(e6), &big(d));
        let red = u.reduce_mod(1811).eval(&f, &x, &e4, &e6, &d);
        prop_assert_eq!(f.reduce(&full), red);
    }

    #[test]
    fn isogenous_curves_satisfy_elkies(a in 1u64..1009, b in 1u64..1009) {
        let p = 1009;
        prop_assume!(Curve::new(a, b, p).is_ok());
        let u = exact(5, Family::U).unwrap();
        for (_, row) in isogenous_from_u(5, a, b, &u, p).unwrap() {
            if let Ok(c) = row {
                prop_assert!(Curve::new(c.a_star, c.b_star, p).is_ok());
            }
        }
    }

    #[test]
    fn heights_are_positive(ell in 2u64..12) {
        prop_assume!(is_prime(ell));
        let h = height(&exact(ell, Family::U).unwrap()).unwrap();
        prop_assert!((0.0..1.0).contains(&h));
    }
}
