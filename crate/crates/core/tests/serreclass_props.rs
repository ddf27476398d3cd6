//! Verdict invariance and the hyperbolic-matrix search against enumeration.

use num::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reinhardt_core::convexlog::Cone2;
use reinhardt_core::intmat::{classify, eigensystem, EigenDirections, MatClass, Mat2Z};
use reinhardt_core::models;
use reinhardt_core::serreclass::{classify_serre, find_hyperbolic_matrix, random_equivalence, CaseLabel, HyperbolicSearch};

fn eigen_wedge(m: &Mat2Z) -> Cone2 {
    let es = eigensystem(m).unwrap();
    let EigenDirections::Distinct { v, w } = es.directions else { panic!("not hyperbolic") };
    Cone2::wedge(v, w).unwrap()
}

fn random_hyperbolic(rng: &mut ChaCha8Rng) -> Mat2Z {
    loop {
        let mut m = Mat2Z::identity();
        for _ in 0..rng.gen_range(2..5) {
            let k = rng.gen_range(1i64..=2);
            let g = if rng.gen_bool(0.5) { Mat2Z::new(1, k, 0, 1) } else { Mat2Z::new(1, 0, k, 1) };
            m = m.mul(&g);
        }
        if matches!(classify(&m).unwrap(), MatClass::Hyperbolic { .. }) && m.as_i64().unwrap().iter().flatten().all(|x| x.abs() <= 12) {
            return m;
        }
    }
}

/// Smallest-trace matrices fixing `cone`, found by enumerating every entry
/// list up to `bound`; ties go to the lexicographically larger entry list.
fn enumerate(cone: &Cone2, bound: i64) -> Option<[[i64; 2]; 2]> {
    let mut best: Option<(i64, [i64; 4])> = None;
    for a in -bound..=bound {
        for d in -bound..=bound {
            if a + d < 3 {
                continue;
            }
            for b in -bound..=bound {
                for c in -bound..=bound {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    if cone.transform(&Mat2Z::new(a, b, c, d)) != *cone {
                        continue;
                    }
                    let cand = (a + d, [a, b, c, d]);
                    best = match best {
                        None => Some(cand),
                        Some(cur) if cand.0 < cur.0 || (cand.0 == cur.0 && cand.1 > cur.1) => Some(cand),
                        keep => keep,
                    };
                }
            }
        }
    }
    best.map(|(_, e)| [[e[0], e[1]], [e[2], e[3]]])
}

#[test]
fn search_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..6 {
        let m = random_hyperbolic(&mut rng);
        let cone = eigen_wedge(&m);
        let found = find_hyperbolic_matrix(&cone, 12);
        let want = enumerate(&cone, 12).expect("m itself qualifies");
        assert_eq!(found.matrix().and_then(|a| a.as_i64()), Some(want), "wedge of {m:?}");
    }
}

#[test]
fn found_matrices_are_hyperbolic_and_preserve_the_wedge() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let m = random_hyperbolic(&mut rng);
        let cone = eigen_wedge(&m);
        let HyperbolicSearch::Found { matrix: a } = find_hyperbolic_matrix(&cone, 50) else {
            panic!("nothing found for the wedge of {m:?}")
        };
        assert!(a.det().is_one());
        assert!(matches!(classify(&a).unwrap(), MatClass::Hyperbolic { .. }));
        assert_eq!(cone.transform(&a), cone);
        assert!(a.trace() <= m.trace());
        // m is a power of the minimal matrix or of its inverse.
        let inv = a.inverse().unwrap();
        let hit = (1..=12).any(|k| a.pow(k) == m || inv.pow(k) == m);
        assert!(hit, "{m:?} is not a power of {a:?}");
    }
}

#[test]
fn rational_and_degenerate_cones_have_no_hyperbolic_matrix() {
    use reinhardt_core::intmat::Direction2;
    let rational = Cone2::wedge(Direction2::from_ints(1, 0).unwrap(), Direction2::from_ints(1, 3).unwrap()).unwrap();
    assert!(find_hyperbolic_matrix(&rational, 50).matrix().is_none());
    assert!(find_hyperbolic_matrix(&Cone2::Zero, 50).matrix().is_none());
    assert!(find_hyperbolic_matrix(&Cone2::Plane, 50).matrix().is_none());
}

#[test]
fn verdicts_are_invariant_under_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (name, m) in models::all() {
        let base = classify_serre(&m).unwrap();
        for _ in 0..5 {
            let (a, b) = random_equivalence(&m, &mut rng);
            let v = classify_serre(&m.apply_monomial(&a, &b).unwrap()).unwrap();
            assert_eq!((v.member, v.case_label), (base.member, base.case_label), "{name} under {a:?}");
        }
    }
}

#[test]
fn only_the_hyperbolic_case_is_a_non_member() {
    let mut non_members = 0;
    for (name, m) in models::all() {
        let v = classify_serre(&m).unwrap();
        assert_eq!(v.member, v.case_label != CaseLabel::T0Hyperbolic, "{name}");
        assert!(!v.provenance.is_empty(), "{name}");
        non_members += usize::from(!v.member);
    }
    assert_eq!(non_members, 2);
}

#[test]
fn verdict_json_is_deterministic() {
    for (name, src) in models::SOURCES {
        let a = serde_json::to_string(&classify_serre(&models::get(name).unwrap()).unwrap()).unwrap();
        let reparsed = serde_json::from_str(src).unwrap();
        let b = serde_json::to_string(&classify_serre(&reparsed).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
