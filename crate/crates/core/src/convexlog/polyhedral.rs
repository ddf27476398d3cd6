//! Open polyhedra `{x : n_i·x < c_i}` in the plane, with exact rational
//! Fourier–Motzkin elimination for emptiness, interior points and
//! redundancy.

use crate::intmat::Mat2Z;
use crate::rat::{q, Q};
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The open half-plane `normal·x < offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlane {
    #[serde(with = "crate::rat::serde_q2")]
    pub normal: [Q; 2],
    #[serde(with = "crate::rat::serde_q")]
    pub offset: Q,
}

impl HalfPlane {
    pub fn new(normal: [Q; 2], offset: Q) -> Self {
        HalfPlane { normal, offset }
    }

    pub fn from_ints(n0: i64, n1: i64, c: Q) -> Self {
        HalfPlane::new([q(n0), q(n1)], c)
    }

    pub fn contains(&self, x: &[Q; 2]) -> bool {
        self.value(x) < self.offset
    }

    pub fn value(&self, x: &[Q; 2]) -> Q {
        &self.normal[0] * &x[0] + &self.normal[1] * &x[1]
    }

    pub fn contains_f64(&self, x: [f64; 2]) -> bool {
        let n = [crate::rat::to_f64(&self.normal[0]), crate::rat::to_f64(&self.normal[1])];
        n[0] * x[0] + n[1] * x[1] < crate::rat::to_f64(&self.offset)
    }

    pub fn is_degenerate(&self) -> bool {
        self.normal[0].is_zero() && self.normal[1].is_zero()
    }

    /// Scaled so that the normal is a primitive integer vector.
    pub fn normalized(&self) -> HalfPlane {
        let l = self.normal[0].denom().lcm(self.normal[1].denom());
        let lq = Q::from_integer(l);
        let n0 = (&self.normal[0] * &lq).to_integer();
        let n1 = (&self.normal[1] * &lq).to_integer();
        let g = n0.gcd(&n1);
        if g.is_zero() {
            return self.clone();
        }
        let scale = &lq / Q::from_integer(g);
        HalfPlane {
            normal: [&self.normal[0] * &scale, &self.normal[1] * &scale],
            offset: &self.offset * &scale,
        }
    }

    /// Image under `x ↦ Bx + b`.
    pub fn transformed(&self, b: &Mat2Z, shift: &[Q; 2]) -> HalfPlane {
        // n·B⁻¹(y − b) < c  ⟺  (B⁻ᵀn)·y < c + (B⁻ᵀn)·b
        let inv = b.inverse().expect("unimodular frame");
        let qi = |i: usize, j: usize| Q::from_integer(inv.entry(i, j).clone());
        let n = [
            &self.normal[0] * qi(0, 0) + &self.normal[1] * qi(1, 0),
            &self.normal[0] * qi(0, 1) + &self.normal[1] * qi(1, 1),
        ];
        let offset = &self.offset + &n[0] * &shift[0] + &n[1] * &shift[1];
        HalfPlane { normal: n, offset }
    }
}

/// A strict linear inequality `a·x < b` in one variable.
struct Strict1 {
    a: Q,
    b: Q,
}

/// Interval `(lo, hi)` cut out by strict 1-D inequalities, or `None` if empty.
fn solve_1d(ineqs: &[Strict1]) -> Option<(Option<Q>, Option<Q>)> {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for s in ineqs {
        if s.a.is_zero() {
            if !s.b.is_positive() {
                return None;
            }
            continue;
        }
        let bound = &s.b / &s.a;
        if s.a.is_positive() {
            hi = Some(match hi {
                Some(h) if h < bound => h,
                _ => bound,
            });
        } else {
            lo = Some(match lo {
                Some(l) if l > bound => l,
                _ => bound,
            });
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l >= h {
            return None;
        }
    }
    Some((lo, hi))
}

fn pick(lo: &Option<Q>, hi: &Option<Q>) -> Q {
    match (lo, hi) {
        (Some(l), Some(h)) => (l + h) / q(2),
        (Some(l), None) => l + Q::one(),
        (None, Some(h)) => h - Q::one(),
        (None, None) => Q::zero(),
    }
}

/// A point strictly inside every half-plane, if one exists.
pub fn interior_point(hs: &[HalfPlane]) -> Option<[Q; 2]> {
    if hs.iter().any(|h| h.is_degenerate() && !h.offset.is_positive()) {
        return None;
    }
    let hs: Vec<&HalfPlane> = hs.iter().filter(|h| !h.is_degenerate()).collect();
    let mut x0_ineqs = Vec::new();
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    for h in &hs {
        let a1 = &h.normal[1];
        if a1.is_zero() {
            x0_ineqs.push(Strict1 { a: h.normal[0].clone(), b: h.offset.clone() });
        } else if a1.is_positive() {
            // x1 < (c − a0·x0)/a1
            uppers.push((-&h.normal[0] / a1, &h.offset / a1));
        } else {
            lowers.push((-&h.normal[0] / a1, &h.offset / a1));
        }
    }
    for (ls, lc) in &lowers {
        for (us, uc) in &uppers {
            // ls·x0 + lc < us·x0 + uc
            x0_ineqs.push(Strict1 { a: ls - us, b: uc - lc });
        }
    }
    let (lo, hi) = solve_1d(&x0_ineqs)?;
    let x0 = pick(&lo, &hi);
    let lo1 = lowers.iter().map(|(s, c)| s * &x0 + c).max();
    let hi1 = uppers.iter().map(|(s, c)| s * &x0 + c).min();
    let x1 = pick(&lo1, &hi1);
    let p = [x0, x1];
    debug_assert!(hs.iter().all(|h| h.contains(&p)));
    Some(p)
}

pub fn is_nonempty(hs: &[HalfPlane]) -> bool {
    interior_point(hs).is_some()
}

/// Whether `h` is implied by the others: the open polyhedron of `others`
/// misses the open complement `{n·x > c}`.
pub fn is_redundant(others: &[HalfPlane], h: &HalfPlane) -> bool {
    let mut sys = others.to_vec();
    sys.push(HalfPlane {
        normal: [-h.normal[0].clone(), -h.normal[1].clone()],
        offset: -h.offset.clone(),
    });
    !is_nonempty(&sys)
}

/// Irredundant, normalized, sorted description of a nonempty polyhedron.
pub fn canonical_halfplanes(hs: &[HalfPlane]) -> Vec<HalfPlane> {
    let mut cur: Vec<HalfPlane> = hs.iter().filter(|h| !h.is_degenerate()).map(|h| h.normalized()).collect();
    cur.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    cur.dedup();
    let mut i = 0;
    while i < cur.len() {
        let h = cur[i].clone();
        let others: Vec<HalfPlane> = cur.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
        if is_redundant(&others, &h) {
            cur.remove(i);
        } else {
            i += 1;
        }
    }
    cur
}
