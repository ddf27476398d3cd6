//! Spectral classification and orbit formulas against independent oracles.

mod common;

use num::bigint::BigInt;
use num::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reinhardt_core::intmat::{classify, orbit, surd_vec, MatClass, Mat2Z, QuadraticSurd};
use reinhardt_core::rat::{q, qf, Q};

#[test]
fn exhaustive_sweep_matches_brute_force() {
    let (checked, bad) = common::spectral_sweep(10);
    assert!(checked > 1000);
    assert!(bad.is_empty(), "{} disagreements, first {:?}", bad.len(), bad.first());
}

#[test]
fn non_unimodular_matrices_are_rejected() {
    assert!(classify(&Mat2Z::new(2, 0, 0, 1)).is_err());
    assert!(classify(&Mat2Z::new(0, 0, 0, 0)).is_err());
}

#[test]
fn hyperbolic_closed_form_matches_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..25 {
        assert_eq!(common::hyperbolic_case(&mut rng, 60), 0);
    }
}

#[test]
fn parabolic_closed_form_matches_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..25 {
        assert_eq!(common::parabolic_case(&mut rng, 60), 0);
    }
}

fn unimodular() -> impl Strategy<Value = Mat2Z> {
    prop::collection::vec((0u8..3, -3i64..=3), 1..6).prop_map(|gens| {
        gens.into_iter().fold(Mat2Z::identity(), |m, (g, k)| {
            let e = match g {
                0 => Mat2Z::new(1, k, 0, 1),
                1 => Mat2Z::new(1, 0, k, 1),
                _ => Mat2Z::new(0, 1, 1, 0),
            };
            m.mul(&e)
        })
    })
}

proptest! {
    #[test]
    fn trace_and_determinant_identities(a in unimodular(), b in unimodular()) {
        prop_assert_eq!(a.mul(&b).det(), a.det() * b.det());
        let tr = a.trace();
        prop_assert_eq!(a.mul(&a).trace(), &tr * &tr - a.det() * BigInt::from(2));
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).is_identity());
        prop_assert_eq!(inv.trace() * a.det(), tr.clone());
        // Cayley–Hamilton: A² − tr·A + det·I = 0.
        let ch = Mat2Z::from_big([
            [a.mul(&a).entry(0, 0) - &tr * a.entry(0, 0) + a.det(), a.mul(&a).entry(0, 1) - &tr * a.entry(0, 1)],
            [a.mul(&a).entry(1, 0) - &tr * a.entry(1, 0), a.mul(&a).entry(1, 1) - &tr * a.entry(1, 1) + a.det()],
        ]);
        prop_assert!(ch.rows().iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn small_traces_have_finite_order(a in unimodular()) {
        prop_assume!(a.det().is_one());
        let t = a.trace();
        let minus = Mat2Z::minus_identity();
        if t == BigInt::from(0) {
            prop_assert_eq!(a.pow(2), minus);
            prop_assert!(a.pow(4).is_identity());
        } else if t == BigInt::from(1) {
            prop_assert_eq!(a.pow(3), minus);
            prop_assert!(a.pow(6).is_identity());
        } else if t == BigInt::from(-1) {
            prop_assert!(a.pow(3).is_identity());
        }
    }

    #[test]
    fn orbit_iteration_is_consistent(
        a in unimodular(),
        b in (-9i64..=9, -9i64..=9),
        x in (-9i64..=9, -9i64..=9),
        j in -6i64..=6,
        k in -6i64..=6,
    ) {
        let bt = [qf(b.0, 2), qf(b.1, 3)];
        let x = surd_vec(&[q(x.0), q(x.1)]);
        let step = orbit(&a, &bt, &x, j);
        prop_assert_eq!(orbit(&a, &bt, &step, k), orbit(&a, &bt, &x, j + k));
        prop_assert_eq!(orbit(&a, &bt, &step, -j), x);
    }

    #[test]
    fn hyperbolic_eigenvalues_satisfy_the_characteristic_equation(a in unimodular()) {
        if let MatClass::Hyperbolic { lambda } = classify(&a).unwrap() {
            let tr = QuadraticSurd::rational(Q::from_integer(a.trace()));
            let char_poly = &(&lambda * &lambda) - &(&tr * &lambda);
            prop_assert_eq!(char_poly, QuadraticSurd::from_int(-1));
            prop_assert!(lambda > QuadraticSurd::one());
        }
    }
}
