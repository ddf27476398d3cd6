//! Closed convex cones in the plane with exact directions.

use crate::intmat::{surd_cross, surd_dot, Direction2, Mat2Z, SurdVec};
use serde::{Deserialize, Serialize};

/// A closed convex cone in `R²`.
///
/// Wedges are stored counterclockwise: `dir1 × dir2 > 0`, which makes the
/// representation unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cone2 {
    Zero,
    Ray { dir: Direction2 },
    Wedge { dir1: Direction2, dir2: Direction2 },
    /// `{y : normal·y ≥ 0}` with `normal` pointing into the cone.
    HalfPlane { normal: Direction2 },
    Line { dir: Direction2 },
    Plane,
}

impl Cone2 {
    /// Wedge spanned by two non-parallel rays, in canonical order.
    pub fn wedge(a: Direction2, b: Direction2) -> Option<Cone2> {
        let c = surd_cross(&a.vector(), &b.vector());
        if c.is_zero() {
            return None;
        }
        Some(if c.is_positive() {
            Cone2::Wedge { dir1: a, dir2: b }
        } else {
            Cone2::Wedge { dir1: b, dir2: a }
        })
    }

    /// True when the cone contains a full line (cone ∩ −cone ≠ {0}).
    pub fn contains_line(&self) -> bool {
        matches!(self, Cone2::HalfPlane { .. } | Cone2::Line { .. } | Cone2::Plane)
    }

    /// Exact membership of a nonzero vector.
    pub fn contains(&self, y: &SurdVec) -> bool {
        if y[0].is_zero() && y[1].is_zero() {
            return true;
        }
        match self {
            Cone2::Zero => false,
            Cone2::Plane => true,
            Cone2::Ray { dir } => {
                surd_cross(&dir.vector(), y).is_zero() && surd_dot(&dir.vector(), y).is_positive()
            }
            Cone2::Line { dir } => surd_cross(&dir.vector(), y).is_zero(),
            Cone2::HalfPlane { normal } => !surd_dot(&normal.vector(), y).is_negative(),
            Cone2::Wedge { dir1, dir2 } => {
                !surd_cross(&dir1.vector(), y).is_negative() && !surd_cross(y, &dir2.vector()).is_negative()
            }
        }
    }

    pub fn contains_dir(&self, d: &Direction2) -> bool {
        self.contains(&d.vector())
    }

    /// Image under a unimodular integer matrix.
    pub fn transform(&self, b: &Mat2Z) -> Cone2 {
        let map = |d: &Direction2| Direction2::from_vec(&b.apply_surd(&d.vector())).expect("invertible map");
        match self {
            Cone2::Zero => Cone2::Zero,
            Cone2::Plane => Cone2::Plane,
            Cone2::Ray { dir } => Cone2::Ray { dir: map(dir) },
            Cone2::Line { dir } => Cone2::Line { dir: map(dir).line_key() },
            Cone2::Wedge { dir1, dir2 } => Cone2::wedge(map(dir1), map(dir2)).expect("invertible map"),
            Cone2::HalfPlane { normal } => {
                // Inward normal transforms by the inverse transpose.
                let inv = b.inverse().expect("unimodular");
                let [[a, bb], [c, d]] = inv.rows().clone();
                let t = Mat2Z::from_big([[a, c], [bb, d]]);
                Cone2::HalfPlane { normal: map_with(&t, normal) }
            }
        }
    }

    /// Extreme rays (empty for cones without them).
    pub fn rays(&self) -> Vec<Direction2> {
        match self {
            Cone2::Ray { dir } => vec![dir.clone()],
            Cone2::Wedge { dir1, dir2 } => vec![dir1.clone(), dir2.clone()],
            _ => Vec::new(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Cone2::Zero => "zero",
            Cone2::Ray { .. } => "ray",
            Cone2::Wedge { .. } => "wedge",
            Cone2::HalfPlane { .. } => "half_plane",
            Cone2::Line { .. } => "line",
            Cone2::Plane => "plane",
        }
    }
}

fn map_with(m: &Mat2Z, d: &Direction2) -> Direction2 {
    Direction2::from_vec(&m.apply_surd(&d.vector())).expect("invertible map")
}

/// The cone `{y : n_i·y ≤ 0 ∀i}` for nonzero normals `n_i`.
pub fn cone_of_normals(normals: &[SurdVec]) -> Cone2 {
    if normals.is_empty() {
        return Cone2::Plane;
    }
    let inside = |y: &SurdVec| normals.iter().all(|n| !surd_dot(n, y).is_positive());
    let mut cands: Vec<Direction2> = Vec::new();
    for n in normals {
        let perp = [-&n[1], n[0].clone()];
        for y in [perp.clone(), [-&perp[0], -&perp[1]]] {
            if inside(&y) {
                let d = Direction2::from_vec(&y).expect("nonzero normal");
                if !cands.contains(&d) {
                    cands.push(d);
                }
            }
        }
    }
    match cands.len() {
        0 => Cone2::Zero,
        1 => Cone2::Ray { dir: cands.remove(0) },
        _ => {
            let (a, b) = (cands[0].clone(), cands[1].clone());
            if a.is_parallel(&b) {
                let perp = [-a.y().clone(), a.x().clone()];
                let neg = [-&perp[0], -&perp[1]];
                if inside(&perp) {
                    Cone2::HalfPlane { normal: Direction2::from_vec(&perp).unwrap() }
                } else if inside(&neg) {
                    Cone2::HalfPlane { normal: Direction2::from_vec(&neg).unwrap() }
                } else {
                    Cone2::Line { dir: a.line_key() }
                }
            } else {
                Cone2::wedge(a, b).expect("non-parallel")
            }
        }
    }
}
