//! Exact 2×2 integer matrices with determinant ±1: spectral classification,
//! eigen-data in quadratic-surd arithmetic, affine orbits and fixed points.

mod direction;
mod surd;

pub use direction::{
    surd_cross, surd_dot, surd_vec, surd_vec_add, surd_vec_f64, surd_vec_scale, Direction2,
    DirectionError, SurdVec,
};
pub use surd::{square_free_decompose, QuadraticSurd, SurdError, MAX_RADICAND};

use crate::rat::{q, Q};
use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntMatError {
    #[error("matrix has determinant {0}, expected ±1")]
    NonUnimodular(BigInt),
    #[error("matrix has a non-real spectrum")]
    ComplexSpectrum,
    #[error(transparent)]
    Surd(#[from] SurdError),
}

/// A 2×2 integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    m: [[BigInt; 2]; 2],
}

impl Mat2Z {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_big([[a.into(), b.into()], [c.into(), d.into()]])
    }

    pub fn from_big(m: [[BigInt; 2]; 2]) -> Self {
        Mat2Z { m }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn minus_identity() -> Self {
        Self::new(-1, 0, 0, -1)
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[[BigInt; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> BigInt {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn trace(&self) -> BigInt {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn require_unimodular(&self) -> Result<(), IntMatError> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(IntMatError::NonUnimodular(self.det()))
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        let e = |i: usize, j: usize| &self.m[i][0] * &o.m[0][j] + &self.m[i][1] * &o.m[1][j];
        Mat2Z::from_big([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn neg(&self) -> Mat2Z {
        let [[a, b], [c, d]] = &self.m;
        Mat2Z::from_big([[-a, -b], [-c, -d]])
    }

    pub fn sub_identity(&self) -> Mat2Z {
        let [[a, b], [c, d]] = &self.m;
        Mat2Z::from_big([[a - 1, b.clone()], [c.clone(), d - 1]])
    }

    /// Integer inverse, available exactly when the matrix is unimodular.
    pub fn inverse(&self) -> Option<Mat2Z> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        let [[a, b], [c, d]] = &self.m;
        let s = |x: &BigInt| x * &det;
        Some(Mat2Z::from_big([[s(d), s(&-b)], [s(&-c), s(a)]]))
    }

    /// `A^k`; negative exponents require a unimodular matrix.
    pub fn pow(&self, k: i64) -> Mat2Z {
        let base = if k < 0 {
            self.inverse().expect("negative power of a non-unimodular matrix")
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2Z::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn apply_q(&self, x: &[Q; 2]) -> [Q; 2] {
        let r = |i: usize| {
            Q::from_integer(self.m[i][0].clone()) * &x[0] + Q::from_integer(self.m[i][1].clone()) * &x[1]
        };
        [r(0), r(1)]
    }

    pub fn apply_surd(&self, x: &SurdVec) -> SurdVec {
        let r = |i: usize| {
            &x[0].scale(&Q::from_integer(self.m[i][0].clone()))
                + &x[1].scale(&Q::from_integer(self.m[i][1].clone()))
        };
        [r(0), r(1)]
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        [[f(&self.m[0][0]), f(&self.m[0][1])], [f(&self.m[1][0]), f(&self.m[1][1])]]
    }

    pub fn apply_f64(&self, x: [f64; 2]) -> [f64; 2] {
        let a = self.to_f64();
        [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]]
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> BigInt {
        self.m.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn as_i64(&self) -> Option<[[i64; 2]; 2]> {
        Some([
            [self.m[0][0].to_i64()?, self.m[0][1].to_i64()?],
            [self.m[1][0].to_i64()?, self.m[1][1].to_i64()?],
        ])
    }
}

impl fmt::Debug for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

impl Serialize for Mat2Z {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell<'a>(#[serde(with = "crate::rat::serde_bigint")] &'a BigInt);
        let mut seq = s.serialize_seq(Some(2))?;
        for row in &self.m {
            seq.serialize_element(&[Cell(&row[0]), Cell(&row[1])])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Mat2Z {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Cell(#[serde(with = "crate::rat::serde_bigint")] BigInt);
        let rows = Vec::<Vec<Cell>>::deserialize(d)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(de::Error::custom("matrix must be 2x2"));
        }
        let mut it = rows.into_iter().flatten().map(|c| c.0);
        let mut next = || it.next().expect("four entries");
        Ok(Mat2Z::from_big([[next(), next()], [next(), next()]]))
    }
}

/// Spectral class of a unimodular 2×2 integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MatClass {
    Identity,
    MinusIdentity,
    /// Finite order `m ∈ {3, 4, 6}` with non-real eigenvalues.
    EllipticFiniteOrder { order: u8 },
    /// Trace 2, not the identity.
    ParabolicUnipotent,
    /// Trace −2, not −I.
    ParabolicMinus,
    /// Determinant −1 and trace 0: eigenvalues 1 and −1.
    Reflection,
    /// Determinant 1, trace > 2: eigenvalues λ > 1 and 1/λ.
    Hyperbolic { lambda: QuadraticSurd },
    /// Real spectrum with a negative eigenvalue, not covered above: either
    /// determinant 1 with trace < −2, or determinant −1 with nonzero trace.
    /// `lambda` is the spectral radius.
    HyperbolicNegative { lambda: QuadraticSurd },
}

impl MatClass {
    pub fn tag(&self) -> &'static str {
        match self {
            MatClass::Identity => "identity",
            MatClass::MinusIdentity => "minus_identity",
            MatClass::EllipticFiniteOrder { .. } => "elliptic_finite_order",
            MatClass::ParabolicUnipotent => "parabolic_unipotent",
            MatClass::ParabolicMinus => "parabolic_minus",
            MatClass::Reflection => "reflection",
            MatClass::Hyperbolic { .. } => "hyperbolic",
            MatClass::HyperbolicNegative { .. } => "hyperbolic_negative",
        }
    }

    pub fn is_finite_order(&self) -> bool {
        matches!(
            self,
            MatClass::Identity
                | MatClass::MinusIdentity
                | MatClass::EllipticFiniteOrder { .. }
                | MatClass::Reflection
        )
    }
}

/// Roots of `x² − tr·x + det`, larger absolute value first (ties: positive first).
fn real_roots(tr: &BigInt, det: &BigInt) -> Result<[QuadraticSurd; 2], IntMatError> {
    let disc: BigInt = tr * tr - det * 4;
    if disc.is_negative() {
        return Err(IntMatError::ComplexSpectrum);
    }
    let root = QuadraticSurd::sqrt_of(&disc)?;
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let t = QuadraticSurd::rational(Q::from_integer(tr.clone()));
    let r1 = (&t + &root).scale(&half);
    let r2 = (&t - &root).scale(&half);
    let (a1, a2) = (r1.abs(), r2.abs());
    Ok(if a2 > a1 || (a1 == a2 && r2 > r1) {
        [r2, r1]
    } else {
        [r1, r2]
    })
}

/// Spectral classification by determinant and trace.
pub fn classify(a: &Mat2Z) -> Result<MatClass, IntMatError> {
    a.require_unimodular()?;
    let det = a.det();
    let tr = a.trace();
    let t = tr.to_i64();
    if det.is_one() {
        return Ok(match t {
            Some(2) if a.is_identity() => MatClass::Identity,
            Some(2) => MatClass::ParabolicUnipotent,
            Some(-2) if *a == Mat2Z::minus_identity() => MatClass::MinusIdentity,
            Some(-2) => MatClass::ParabolicMinus,
            Some(0) => MatClass::EllipticFiniteOrder { order: 4 },
            Some(1) => MatClass::EllipticFiniteOrder { order: 6 },
            Some(-1) => MatClass::EllipticFiniteOrder { order: 3 },
            _ => {
                let [big, _] = real_roots(&tr, &det)?;
                if tr.is_positive() {
                    MatClass::Hyperbolic { lambda: big }
                } else {
                    MatClass::HyperbolicNegative { lambda: big.abs() }
                }
            }
        });
    }
    if tr.is_zero() {
        return Ok(MatClass::Reflection);
    }
    let [big, _] = real_roots(&tr, &det)?;
    Ok(MatClass::HyperbolicNegative { lambda: big.abs() })
}

/// For finite-order classes: every `j ≤ order` with `A^j = ±I`, as `(j, sign)`.
pub fn finite_order_facts(a: &Mat2Z) -> Vec<(u32, i8)> {
    let mut out = Vec::new();
    let mut p = Mat2Z::identity();
    for j in 1..=12u32 {
        p = p.mul(a);
        if p.is_identity() {
            out.push((j, 1));
            break;
        }
        if p == Mat2Z::minus_identity() {
            out.push((j, -1));
        }
    }
    out
}

/// Exact eigen-data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub class: MatClass,
    /// Larger absolute value first. For hyperbolic matrices `[λ, 1/λ]`.
    pub eigenvalues: [QuadraticSurd; 2],
    pub directions: EigenDirections,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EigenDirections {
    /// Eigendirections matching `eigenvalues` in order: `[v, w]`.
    Distinct { v: Direction2, w: Direction2 },
    /// Single eigenline: `(A − εI)v = w`, `(A − εI)w = 0`, ε = ±1.
    Jordan {
        #[serde(with = "crate::rat::serde_q2")]
        w: [Q; 2],
        #[serde(with = "crate::rat::serde_q2")]
        v: [Q; 2],
    },
    /// `±I`: every direction is an eigendirection.
    Scalar,
}

impl EigenSystem {
    pub fn v(&self) -> Option<SurdVec> {
        match &self.directions {
            EigenDirections::Distinct { v, .. } => Some(v.vector()),
            EigenDirections::Jordan { v, .. } => Some(surd_vec(v)),
            EigenDirections::Scalar => None,
        }
    }

    pub fn w(&self) -> Option<SurdVec> {
        match &self.directions {
            EigenDirections::Distinct { w, .. } => Some(w.vector()),
            EigenDirections::Jordan { w, .. } => Some(surd_vec(w)),
            EigenDirections::Scalar => None,
        }
    }
}

fn eigendirection(a: &Mat2Z, mu: &QuadraticSurd) -> Result<Direction2, DirectionError> {
    let [[a11, a12], [a21, a22]] = a.rows();
    let qi = |x: &BigInt| QuadraticSurd::rational(Q::from_integer(x.clone()));
    if !a12.is_zero() {
        return Direction2::new(qi(a12), mu - &qi(a11));
    }
    if !a21.is_zero() {
        return Direction2::new(mu - &qi(a22), qi(a21));
    }
    if *mu == qi(a11) {
        Direction2::from_ints(1, 0)
    } else {
        Direction2::from_ints(0, 1)
    }
}

/// Jordan data for `N = A − εI` nilpotent of rank one.
fn jordan_pair(a: &Mat2Z, eps: i64) -> ([Q; 2], [Q; 2]) {
    let n = if eps == 1 { a.sub_identity() } else { a.neg().sub_identity().neg() };
    for j in 0..2 {
        let col = [n.entry(0, j).clone(), n.entry(1, j).clone()];
        if col.iter().all(|x| x.is_zero()) {
            continue;
        }
        let g = col[0].gcd(&col[1]);
        let w = [Q::new(col[0].clone(), g.clone()), Q::new(col[1].clone(), g.clone())];
        let mut v = [Q::zero(), Q::zero()];
        v[j] = Q::new(BigInt::one(), g);
        return (w, v);
    }
    unreachable!("nilpotent part is nonzero for a non-scalar matrix")
}

/// Exact eigenvalues and eigendirections.
pub fn eigensystem(a: &Mat2Z) -> Result<EigenSystem, IntMatError> {
    let class = classify(a)?;
    let det = a.det();
    let tr = a.trace();
    let directions = match &class {
        MatClass::EllipticFiniteOrder { .. } => return Err(IntMatError::ComplexSpectrum),
        MatClass::Identity | MatClass::MinusIdentity => EigenDirections::Scalar,
        MatClass::ParabolicUnipotent | MatClass::ParabolicMinus => {
            let eps = if tr.is_positive() { 1 } else { -1 };
            let (w, v) = jordan_pair(a, eps);
            EigenDirections::Jordan { w, v }
        }
        _ => {
            let [m1, m2] = real_roots(&tr, &det)?;
            let v = eigendirection(a, &m1).map_err(|_| IntMatError::ComplexSpectrum)?;
            let w = eigendirection(a, &m2).map_err(|_| IntMatError::ComplexSpectrum)?;
            EigenDirections::Distinct { v, w }
        }
    };
    let eigenvalues = match &directions {
        EigenDirections::Distinct { .. } => real_roots(&tr, &det)?,
        _ => {
            let e = if tr.is_positive() { 1 } else { -1 };
            [QuadraticSurd::from_int(e), QuadraticSurd::from_int(e)]
        }
    };
    Ok(EigenSystem {
        class,
        eigenvalues,
        directions,
    })
}

/// `k`-fold composition of `x ↦ Ax + b̃` (inverse map for negative `k`).
pub fn orbit(a: &Mat2Z, btilde: &[Q; 2], x: &SurdVec, k: i64) -> SurdVec {
    let b = surd_vec(btilde);
    let mut cur = x.clone();
    if k >= 0 {
        for _ in 0..k {
            cur = surd_vec_add(&a.apply_surd(&cur), &b);
        }
    } else {
        let inv = a.inverse().expect("inverse orbit of a non-unimodular matrix");
        let minus_b = [-&b[0], -&b[1]];
        for _ in 0..(-k) {
            cur = inv.apply_surd(&surd_vec_add(&cur, &minus_b));
        }
    }
    cur
}

/// Closed form of `A^k(t·v + s·w) = t·λ^k·v + s·λ^{−k}·w` for eigenvectors
/// `v` (eigenvalue λ) and `w` (eigenvalue 1/λ).
pub fn hyperbolic_orbit_closed(
    lambda: &QuadraticSurd,
    v: &SurdVec,
    w: &SurdVec,
    t: &QuadraticSurd,
    s: &QuadraticSurd,
    k: i64,
) -> SurdVec {
    let tv = surd_vec_scale(&(t * &lambda.pow(k)), v);
    let sw = surd_vec_scale(&(s * &lambda.pow(-k)), w);
    surd_vec_add(&tv, &sw)
}

/// Closed form of the `k`-th iterate of `x ↦ Ax + β₂v` with `Aw = w`,
/// `Av = v + w` and `x = α₁w + α₂v`:
/// `x + k(α₂w + β₂v) + k(k−1)/2·β₂w`.
pub fn parabolic_orbit_closed(
    w: &[Q; 2],
    v: &[Q; 2],
    alpha1: &Q,
    alpha2: &Q,
    beta2: &Q,
    k: i64,
) -> [Q; 2] {
    let kq = q(k);
    let tri = Q::new(BigInt::from(k) * BigInt::from(k - 1), BigInt::from(2));
    let cw = alpha1 + &kq * alpha2 + tri * beta2;
    let cv = alpha2 + &kq * beta2;
    [&cw * &w[0] + &cv * &v[0], &cw * &w[1] + &cv * &v[1]]
}

/// Solution of `Ax₀ + b̃ = x₀` when `det(A − I) ≠ 0`; the origin when
/// `b̃ = 0`; otherwise `None`.
pub fn fixed_point(a: &Mat2Z, btilde: &[Q; 2]) -> Option<[Q; 2]> {
    let n = a.sub_identity();
    let det = n.det();
    if det.is_zero() {
        return (btilde[0].is_zero() && btilde[1].is_zero()).then(|| [Q::zero(), Q::zero()]);
    }
    // (A − I)x = −b̃ by Cramer's rule.
    let qi = |x: &BigInt| Q::from_integer(x.clone());
    let [[p, r], [s, u]] = n.rows();
    let dq = qi(&det);
    let rhs = [-btilde[0].clone(), -btilde[1].clone()];
    let x0 = (&rhs[0] * qi(u) - &rhs[1] * qi(r)) / &dq;
    let x1 = (qi(p) * &rhs[1] - qi(s) * &rhs[0]) / &dq;
    Some([x0, x1])
}

/// Product of the factors `[[0,1],[k_j,1]]` in the given order. The result is
/// unimodular only when every `k_j = 1`; check [`Mat2Z::is_unimodular`].
pub fn dloussky(ks: &[u64]) -> Mat2Z {
    ks.iter().fold(Mat2Z::identity(), |acc, &k| {
        acc.mul(&Mat2Z::from_big([[0.into(), 1.into()], [BigInt::from(k), 1.into()]]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;
    use proptest::prelude::*;

    fn golden() -> QuadraticSurd {
        QuadraticSurd::new(qf(3, 2), qf(1, 2), &BigInt::from(5)).unwrap()
    }

    #[test]
    fn determinants() {
        assert_eq!(Mat2Z::new(2, 1, 1, 1).det(), BigInt::from(1));
        assert_eq!(Mat2Z::identity().det(), BigInt::from(1));
        assert_eq!(Mat2Z::new(0, 1, 1, 0).det(), BigInt::from(-1));
    }

    #[test]
    fn class_examples() {
        assert_eq!(classify(&Mat2Z::identity()).unwrap(), MatClass::Identity);
        assert_eq!(
            classify(&Mat2Z::new(2, 1, 1, 1)).unwrap(),
            MatClass::Hyperbolic { lambda: golden() }
        );
        assert_eq!(classify(&Mat2Z::new(1, 0, 3, 1)).unwrap(), MatClass::ParabolicUnipotent);
        let rot = Mat2Z::new(0, -1, 1, 0);
        assert_eq!(classify(&rot).unwrap(), MatClass::EllipticFiniteOrder { order: 4 });
        assert_eq!(rot.pow(2), Mat2Z::minus_identity());
        assert!(matches!(
            classify(&Mat2Z::new(2, 0, 0, 1)),
            Err(IntMatError::NonUnimodular(_))
        ));
        assert_eq!(classify(&Mat2Z::new(0, 1, 1, 0)).unwrap(), MatClass::Reflection);
    }

    #[test]
    fn trace_minus_one_has_order_three_without_minus_identity() {
        let a = Mat2Z::new(0, -1, 1, -1);
        assert_eq!(classify(&a).unwrap(), MatClass::EllipticFiniteOrder { order: 3 });
        assert_eq!(finite_order_facts(&a), vec![(3, 1)]);
        let b = Mat2Z::new(1, -1, 1, 0);
        assert_eq!(finite_order_facts(&b), vec![(3, -1), (6, 1)]);
    }

    #[test]
    fn golden_eigensystem() {
        let a = Mat2Z::new(2, 1, 1, 1);
        let es = eigensystem(&a).unwrap();
        assert_eq!(es.eigenvalues[0], golden());
        assert_eq!(es.eigenvalues[1], golden().conj());
        let EigenDirections::Distinct { v, w } = &es.directions else {
            panic!("expected distinct eigendirections")
        };
        let slope = QuadraticSurd::new(qf(-1, 2), qf(1, 2), &BigInt::from(5)).unwrap();
        assert_eq!(v.slope().unwrap(), slope);
        assert_eq!(w.slope().unwrap(), slope.conj());
        let v = v.vector();
        assert_eq!(a.apply_surd(&v), surd_vec_scale(&golden(), &v));
    }

    #[test]
    fn jordan_examples() {
        let es = eigensystem(&Mat2Z::new(1, 1, 0, 1)).unwrap();
        assert_eq!(
            es.directions,
            EigenDirections::Jordan { w: [q(1), q(0)], v: [q(0), q(1)] }
        );
        let es = eigensystem(&Mat2Z::new(1, 0, 3, 1)).unwrap();
        assert_eq!(
            es.directions,
            EigenDirections::Jordan { w: [q(0), q(1)], v: [qf(1, 3), q(0)] }
        );
        assert!(matches!(eigensystem(&Mat2Z::new(0, -1, 1, 0)), Err(IntMatError::ComplexSpectrum)));
    }

    #[test]
    fn remark_family_matches() {
        let k = 2;
        assert_eq!(Mat2Z::new(k, 1, k - 1, 1), Mat2Z::new(2, 1, 1, 1));
    }

    #[test]
    fn hyperbolic_orbit_example() {
        let a = Mat2Z::new(2, 1, 1, 1);
        let es = eigensystem(&a).unwrap();
        let (v, w) = (es.v().unwrap(), es.w().unwrap());
        let x = surd_vec_add(&v, &w);
        let one = QuadraticSurd::one();
        let it = orbit(&a, &[q(0), q(0)], &x, 3);
        assert_eq!(it, hyperbolic_orbit_closed(&golden(), &v, &w, &one, &one, 3));
        assert_eq!(orbit(&a, &[q(0), q(0)], &x, 0), x);
    }

    #[test]
    fn parabolic_orbit_example() {
        let a = Mat2Z::new(1, 0, 2, 1);
        let es = eigensystem(&a).unwrap();
        let EigenDirections::Jordan { w, v } = es.directions else { panic!() };
        let (a1, a2, b2) = (qf(1, 3), qf(-2, 5), qf(7, 2));
        let x = [&a1 * &w[0] + &a2 * &v[0], &a1 * &w[1] + &a2 * &v[1]];
        let bt = [&b2 * &v[0], &b2 * &v[1]];
        let it = orbit(&a, &bt, &surd_vec(&x), 2);
        let expect = [
            &x[0] + q(2) * (&a2 * &w[0] + &b2 * &v[0]) + &b2 * &w[0],
            &x[1] + q(2) * (&a2 * &w[1] + &b2 * &v[1]) + &b2 * &w[1],
        ];
        assert_eq!(it, surd_vec(&expect));
        assert_eq!(parabolic_orbit_closed(&w, &v, &a1, &a2, &b2, 2), expect);
    }

    #[test]
    fn fixed_points() {
        let x0 = fixed_point(&Mat2Z::new(2, 1, 1, 1), &[q(1), q(0)]).unwrap();
        assert_eq!(x0, [q(0), q(-1)]);
        assert_eq!(fixed_point(&Mat2Z::identity(), &[q(1), q(0)]), None);
        assert_eq!(fixed_point(&Mat2Z::identity(), &[q(0), q(0)]), Some([q(0), q(0)]));
    }

    #[test]
    fn dloussky_products() {
        assert_eq!(dloussky(&[]), Mat2Z::identity());
        let a = dloussky(&[1, 1]);
        assert_eq!(a, Mat2Z::new(1, 1, 1, 2));
        assert!(matches!(classify(&a).unwrap(), MatClass::Hyperbolic { .. }));
        let b = dloussky(&[2, 1]);
        assert_eq!(b, Mat2Z::new(1, 1, 1, 3));
        assert!(!b.is_unimodular());
    }

    #[test]
    fn json_round_trip() {
        let a = Mat2Z::new(2, -1, 1, 0);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[2,-1],[1,0]]");
        assert_eq!(serde_json::from_str::<Mat2Z>(&s).unwrap(), a);
        assert!(serde_json::from_str::<Mat2Z>("[[1,2,3],[1,1]]").is_err());
    }

    fn unimodular() -> impl Strategy<Value = Mat2Z> {
        (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
            .prop_map(|(a, b, c, d)| Mat2Z::new(a, b, c, d))
            .prop_filter("unimodular", |m| m.is_unimodular())
    }

    proptest! {
        #[test]
        fn orbit_step_consistency(m in unimodular(), b0 in -5i64..5, b1 in -5i64..5,
                                  x0 in -5i64..5, x1 in -5i64..5, k in 0i64..15) {
            let bt = [q(b0), q(b1)];
            let x = surd_vec(&[q(x0), q(x1)]);
            let next = orbit(&m, &bt, &x, k + 1);
            let step = surd_vec_add(&m.apply_surd(&orbit(&m, &bt, &x, k)), &surd_vec(&bt));
            prop_assert_eq!(next, step);
            prop_assert_eq!(orbit(&m, &bt, &orbit(&m, &bt, &x, k), -k), x);
        }

        #[test]
        fn spectrum_matches_trace_and_det(m in unimodular()) {
            if let Ok(es) = eigensystem(&m) {
                let [l1, l2] = &es.eigenvalues;
                if let EigenDirections::Distinct { v, w } = &es.directions {
                    prop_assert_eq!(l1 + l2, QuadraticSurd::rational(Q::from_integer(m.trace())));
                    prop_assert_eq!(l1 * l2, QuadraticSurd::rational(Q::from_integer(m.det())));
                    let (v, w) = (v.vector(), w.vector());
                    prop_assert_eq!(m.apply_surd(&v), surd_vec_scale(l1, &v));
                    prop_assert_eq!(m.apply_surd(&w), surd_vec_scale(l2, &w));
                }
            }
        }

        #[test]
        fn fixed_point_solves(m in unimodular(), b0 in -9i64..9, b1 in -9i64..9) {
            let bt = [q(b0), q(b1)];
            if let Some(x) = fixed_point(&m, &bt) {
                let ax = m.apply_q(&x);
                prop_assert_eq!([&ax[0] + &bt[0], &ax[1] + &bt[1]], x);
            }
        }
    }
}
