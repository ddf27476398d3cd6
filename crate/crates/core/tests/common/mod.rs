//! Oracles shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use reinhardt_core::intmat::{
    classify, eigensystem, fixed_point, hyperbolic_orbit_closed, orbit, parabolic_orbit_closed, surd_cross, surd_vec,
    surd_vec_add, MatClass, Mat2Z, QuadraticSurd, SurdVec,
};
use reinhardt_core::rat::{q, qf, Q};

/// Class computed from matrix powers and the quadratic formula only.
#[derive(Debug, PartialEq)]
pub enum Oracle {
    Identity,
    MinusIdentity,
    Elliptic(u8),
    Unipotent,
    MinusUnipotent,
    Reflection,
    Hyperbolic(f64),
    HyperbolicNegative(f64),
}

pub fn brute_force(a: [[i64; 2]; 2]) -> Oracle {
    let m = Mat2Z::new(a[0][0], a[0][1], a[1][0], a[1][1]);
    let id = Mat2Z::identity();
    let minus = Mat2Z::minus_identity();
    if m == id {
        return Oracle::Identity;
    }
    if m == minus {
        return Oracle::MinusIdentity;
    }
    let mut p = id.clone();
    for order in 1..=12u8 {
        p = p.mul(&m);
        if p == id {
            return match order {
                2 => Oracle::Reflection,
                3 | 4 | 6 => Oracle::Elliptic(order),
                _ => panic!("unexpected order {order} for {a:?}"),
            };
        }
    }
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let tr = (a[0][0] + a[1][1]) as f64;
    let shifted = |e: i64| Mat2Z::new(a[0][0] - e, a[0][1], a[1][0], a[1][1] - e);
    if shifted(1).mul(&shifted(1)) == Mat2Z::new(0, 0, 0, 0) {
        return Oracle::Unipotent;
    }
    if shifted(-1).mul(&shifted(-1)) == Mat2Z::new(0, 0, 0, 0) {
        return Oracle::MinusUnipotent;
    }
    let disc = tr * tr - 4.0 * det as f64;
    assert!(disc > 0.0, "{a:?} has no real spectrum but infinite order");
    let r1 = (tr + disc.sqrt()) / 2.0;
    let r2 = (tr - disc.sqrt()) / 2.0;
    let rho = r1.abs().max(r2.abs());
    if det == 1 && r1 > 0.0 && r2 > 0.0 {
        Oracle::Hyperbolic(rho)
    } else {
        Oracle::HyperbolicNegative(rho)
    }
}

pub fn agrees(class: &MatClass, oracle: &Oracle) -> bool {
    let close = |l: &QuadraticSurd, x: f64| (l.to_f64() - x).abs() <= 1e-12 * x.max(1.0);
    match (class, oracle) {
        (MatClass::Identity, Oracle::Identity)
        | (MatClass::MinusIdentity, Oracle::MinusIdentity)
        | (MatClass::ParabolicUnipotent, Oracle::Unipotent)
        | (MatClass::ParabolicMinus, Oracle::MinusUnipotent)
        | (MatClass::Reflection, Oracle::Reflection) => true,
        (MatClass::EllipticFiniteOrder { order }, Oracle::Elliptic(o)) => order == o,
        (MatClass::Hyperbolic { lambda }, Oracle::Hyperbolic(x)) => close(lambda, *x),
        (MatClass::HyperbolicNegative { lambda }, Oracle::HyperbolicNegative(x)) => close(lambda, *x),
        _ => false,
    }
}

/// Matrices with `|det| = 1` and entries bounded by `bound` on which the
/// classifier and the brute-force oracle disagree, with the number checked.
pub fn spectral_sweep(bound: i64) -> (usize, Vec<[[i64; 2]; 2]>) {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    if (a * d - b * c).abs() != 1 {
                        continue;
                    }
                    let class = classify(&Mat2Z::new(a, b, c, d)).unwrap();
                    if !agrees(&class, &brute_force([[a, b], [c, d]])) {
                        bad.push([[a, b], [c, d]]);
                    }
                    checked += 1;
                }
            }
        }
    }
    (checked, bad)
}

pub fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Mat2Z {
    loop {
        let mut m = Mat2Z::identity();
        for _ in 0..rng.gen_range(2..6) {
            let k = rng.gen_range(1i64..=3);
            let g = if rng.gen_bool(0.5) { Mat2Z::new(1, k, 0, 1) } else { Mat2Z::new(1, 0, k, 1) };
            m = m.mul(&g);
        }
        if matches!(classify(&m).unwrap(), MatClass::Hyperbolic { .. }) {
            return m;
        }
    }
}

pub fn random_q(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-30i64..=30), rng.gen_range(1i64..=7))
}

fn sub(x: &SurdVec, y: &SurdVec) -> SurdVec {
    [&x[0] - &y[0], &x[1] - &y[1]]
}

/// Compares the hyperbolic closed form with iteration for `k ≤ kmax`;
/// returns the number of mismatching steps.
pub fn hyperbolic_case(rng: &mut ChaCha8Rng, kmax: i64) -> usize {
    let a = random_hyperbolic(rng);
    let bt = [random_q(rng), random_q(rng)];
    let x = surd_vec(&[random_q(rng), random_q(rng)]);
    let es = eigensystem(&a).unwrap();
    let (v, w) = (es.v().unwrap(), es.w().unwrap());
    let x0 = surd_vec(&fixed_point(&a, &bt).unwrap());
    let rel = sub(&x, &x0);
    let det = surd_cross(&v, &w);
    let t = &surd_cross(&rel, &w) / &det;
    let s = &surd_cross(&v, &rel) / &det;
    let mut iter = x.clone();
    let mut bad = 0;
    for k in 0..=kmax {
        let closed = surd_vec_add(&x0, &hyperbolic_orbit_closed(&es.eigenvalues[0], &v, &w, &t, &s, k));
        bad += usize::from(closed != iter || orbit(&a, &bt, &x, k) != iter);
        iter = surd_vec_add(&a.apply_surd(&iter), &surd_vec(&bt));
    }
    bad
}

/// Compares the parabolic closed form with iteration for a random conjugate
/// of `[[1,0],[k,1]]`; returns the number of mismatching steps.
pub fn parabolic_case(rng: &mut ChaCha8Rng, kmax: i64) -> usize {
    let k = rng.gen_range(1i64..=4);
    let p = random_hyperbolic(rng);
    let a = p.mul(&Mat2Z::new(1, 0, k, 1)).mul(&p.inverse().unwrap());
    let w = p.apply_q(&[q(0), q(1)]);
    let v = p.apply_q(&[qf(1, k), q(0)]);
    assert_eq!(a.apply_q(&w), w);
    assert_eq!(a.apply_q(&v), [&v[0] + &w[0], &v[1] + &w[1]]);
    let (alpha1, alpha2, beta2) = (random_q(rng), random_q(rng), random_q(rng));
    let bt = [&beta2 * &v[0], &beta2 * &v[1]];
    let x = [&alpha1 * &w[0] + &alpha2 * &v[0], &alpha1 * &w[1] + &alpha2 * &v[1]];
    let mut iter = x.clone();
    let mut bad = 0;
    for step in 0..=kmax {
        bad += usize::from(parabolic_orbit_closed(&w, &v, &alpha1, &alpha2, &beta2, step) != iter);
        bad += usize::from(orbit(&a, &bt, &surd_vec(&x), step) != surd_vec(&iter));
        let ax = a.apply_q(&iter);
        iter = [&ax[0] + &bt[0], &ax[1] + &bt[1]];
    }
    bad
}
