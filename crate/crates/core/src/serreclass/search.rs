//! Search for a hyperbolic unimodular matrix with prescribed eigen-rays.
//!
//! If the rays have slopes `m₁, m₂`, any integer matrix `[[a,b],[c,d]]` with
//! these eigendirections has `b m² + (a−d) m − c = 0` at both slopes. So
//! `(b, a−d, −c) = t·(B₀, B₁, B₂)` for the primitive integer polynomial
//! `B₀m² + B₁m + B₂` of the pair, and `det = 1` becomes the Pell-type
//! equation `T² − Δt² = 4` in the trace `T`, with `Δ = B₁² − 4B₀B₂`.

use crate::convexlog::Cone2;
use crate::intmat::{classify, surd_cross, Direction2, MatClass, Mat2Z, QuadraticSurd};
use crate::rat::Q;
use num::{BigInt, Integer, One, Signed, ToPrimitive};
use serde::Serialize;

/// Default bound on matrix entries.
pub const DEFAULT_ENTRY_BOUND: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HyperbolicSearch {
    Found { matrix: Mat2Z },
    /// No matrix with entries bounded by `bound`; larger ones may exist.
    NoneUpToBound { bound: u64 },
    /// No such matrix exists at all.
    Impossible { reason: String },
}

impl HyperbolicSearch {
    pub fn matrix(&self) -> Option<&Mat2Z> {
        match self {
            HyperbolicSearch::Found { matrix } => Some(matrix),
            _ => None,
        }
    }
}

fn impossible(reason: &str) -> HyperbolicSearch {
    HyperbolicSearch::Impossible { reason: reason.to_string() }
}

/// Primitive integer coefficients `(B₀, B₁, B₂)`, `B₀ > 0`, of
/// `m² − σm + π` scaled to integers.
fn primitive_quadratic(sigma: &Q, pi: &Q) -> [BigInt; 3] {
    let den = sigma.denom().lcm(pi.denom());
    let dq = Q::from_integer(den.clone());
    let b1 = (-sigma * &dq).to_integer();
    let b2 = (pi * &dq).to_integer();
    let g = den.gcd(&b1).gcd(&b2);
    [&den / &g, &b1 / &g, &b2 / &g]
}

/// Smallest-trace `A` with `det A = 1`, `tr A ≥ 3` and `|entries| ≤ bound`
/// whose eigendirections are the two rays of `cone`. Between `A` and
/// `A⁻¹`, which share the trace, the lexicographically larger entry list
/// `(a, b, c, d)` is returned.
pub fn find_hyperbolic_matrix(cone: &Cone2, bound: u64) -> HyperbolicSearch {
    let Cone2::Wedge { dir1, dir2 } = cone else {
        return impossible("two eigen-rays are required");
    };
    if dir1.is_rational() || dir2.is_rational() {
        return impossible("hyperbolic unimodular matrices have irrational eigendirections");
    }
    let (Some(m1), Some(m2)) = (dir1.slope(), dir2.slope()) else {
        return impossible("a vertical ray is rational");
    };
    let (Ok(sum), Ok(prod)) = (m1.checked_add(&m2), m1.checked_mul(&m2)) else {
        return impossible("the slopes lie in different quadratic fields");
    };
    let (Some(sigma), Some(pi)) = (sum.as_rational(), prod.as_rational()) else {
        return impossible("the slopes are not conjugate quadratic irrationals");
    };
    let [b0, b1, b2] = primitive_quadratic(sigma, pi);
    let disc = &b1 * &b1 - BigInt::from(4) * &b0 * &b2;
    let bound_big = BigInt::from(bound);
    let mut t = BigInt::one();
    while &t * &b0 <= bound_big {
        let t2 = BigInt::from(4) + &disc * &t * &t;
        if let Some(trace) = QuadraticSurd::integer_sqrt_exact(&t2) {
            let mut best: Option<Mat2Z> = None;
            for s in [t.clone(), -t.clone()] {
                let a = (&trace + &s * &b1) / 2;
                let d = (&trace - &s * &b1) / 2;
                let m = Mat2Z::from_big([[a, &s * &b0], [-&s * &b2, d]]);
                if m.max_abs_entry() > bound_big || !has_rays(&m, dir1, dir2) {
                    continue;
                }
                let key = |x: &Mat2Z| x.rows().clone();
                if best.as_ref().map_or(true, |b| key(&m) > key(b)) {
                    best = Some(m);
                }
            }
            if let Some(m) = best {
                return HyperbolicSearch::Found { matrix: m };
            }
            // Traces grow with t, so larger t cannot fit once the trace
            // alone exceeds twice the bound.
            if trace.abs() > BigInt::from(2) * &bound_big + 1 {
                break;
            }
        }
        t += 1;
    }
    HyperbolicSearch::NoneUpToBound { bound }
}

fn has_rays(m: &Mat2Z, r1: &Direction2, r2: &Direction2) -> bool {
    if !matches!(classify(m), Ok(MatClass::Hyperbolic { .. })) {
        return false;
    }
    [r1, r2].iter().all(|r| {
        let v = r.vector();
        let img = m.apply_surd(&v);
        surd_cross(&img, &v).is_zero() && crate::intmat::surd_dot(&img, &v).is_positive()
    })
}

/// Entry bound as an `i64`, for enumeration oracles.
pub fn bound_i64(bound: u64) -> i64 {
    BigInt::from(bound).to_i64().unwrap_or(i64::MAX)
}
