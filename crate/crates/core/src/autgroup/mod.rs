//! Algebraic automorphisms of log-image models.
//!
//! A monomial map `z ↦ (b₁z^{A¹}, b₂z^{A²})` acts on log images by the affine
//! map `x ↦ Ax + b̃` with `b̃ = (log|b₁|, log|b₂|)`. This module checks which
//! affine maps preserve a model, sorts `t = 0` models into compact,
//! parabolic and hyperbolic automorphism structure, and produces diverging
//! orbits as witnesses of noncompactness.

use crate::convexlog::{
    canonical_halfplanes, AffineFrame, ConvexError, HalfPlane, HyperbolicData, LogDomainModel,
    ParabolicData, PhiSpec, PsiSpec, Shape, Sign,
};
use crate::intmat::{
    surd_cross, surd_vec, surd_vec_add, IntMatError, Mat2Z, QuadraticSurd, SurdError, SurdVec,
};
use crate::rat::{from_f64, q, to_f64, Q};
use crate::serreclass::{find_hyperbolic_matrix, HyperbolicSearch};
use crate::DEFAULT_SEED;
use num::complex::Complex64;
use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutError {
    #[error("the domain is not hyperbolic")]
    NotHyperbolicDomain,
    #[error("the domain meets {0} coordinate axes; only t = 0 models have monomial structure here")]
    AxisMet(u8),
    #[error("form violation: {0}")]
    FormViolation(String),
    #[error("the model is not of parabolic type")]
    NotParabolic,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    IntMat(#[from] IntMatError),
    #[error(transparent)]
    Surd(#[from] SurdError),
}

/// Serde adapter for a pair of complex numbers written as `{"re":..,"im":..}`.
pub mod serde_c2 {
    use num::complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct C {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
        [C { re: z[0].re, im: z[0].im }, C { re: z[1].re, im: z[1].im }].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 2], D::Error> {
        let [a, b] = <[C; 2]>::deserialize(d)?;
        Ok([Complex64::new(a.re, a.im), Complex64::new(b.re, b.im)])
    }
}

/// Monomial automorphism `z ↦ (b₁z^{A¹}, b₂z^{A²})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgAut {
    pub matrix: Mat2Z,
    #[serde(with = "serde_c2")]
    pub b: [Complex64; 2],
}

impl AlgAut {
    pub fn new(matrix: Mat2Z, b: [Complex64; 2]) -> Result<Self, AutError> {
        let aut = AlgAut { matrix, b };
        aut.validate()?;
        Ok(aut)
    }

    pub fn validate(&self) -> Result<(), AutError> {
        self.matrix.require_unimodular()?;
        if self.b.iter().any(|c| c.norm() == 0.0 || !c.norm().is_finite()) {
            return Err(AutError::InvalidAutomorphism("coefficients must be finite and nonzero".into()));
        }
        Ok(())
    }

    /// `b̃ = (log|b₁|, log|b₂|)`.
    pub fn btilde(&self) -> [f64; 2] {
        [self.b[0].norm().ln(), self.b[1].norm().ln()]
    }

    /// Evaluates the map at a point with nonzero coordinates where needed.
    pub fn apply(&self, z: [Complex64; 2]) -> [Complex64; 2] {
        let e = self.matrix.as_i64().expect("small exponents");
        let mono = |row: [i64; 2]| z[0].powi(row[0] as i32) * z[1].powi(row[1] as i32);
        [self.b[0] * mono(e[0]), self.b[1] * mono(e[1])]
    }
}

/// Affine map `x ↦ Ax + shift` on log space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap2 {
    pub matrix: Mat2Z,
    #[serde(with = "crate::rat::serde_q2")]
    pub shift: [Q; 2],
}

impl AffineMap2 {
    pub fn new(matrix: Mat2Z, shift: [Q; 2]) -> Self {
        AffineMap2 { matrix, shift }
    }

    pub fn identity() -> Self {
        AffineMap2::new(Mat2Z::identity(), [Q::zero(), Q::zero()])
    }

    pub fn linear(matrix: Mat2Z) -> Self {
        AffineMap2::new(matrix, [Q::zero(), Q::zero()])
    }

    pub fn apply_q(&self, x: &[Q; 2]) -> [Q; 2] {
        let y = self.matrix.apply_q(x);
        [&y[0] + &self.shift[0], &y[1] + &self.shift[1]]
    }

    pub fn apply_surd(&self, x: &SurdVec) -> SurdVec {
        surd_vec_add(&self.matrix.apply_surd(x), &surd_vec(&self.shift))
    }

    pub fn apply_f64(&self, x: [f64; 2]) -> [f64; 2] {
        let y = self.matrix.apply_f64(x);
        [y[0] + to_f64(&self.shift[0]), y[1] + to_f64(&self.shift[1])]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap2) -> AffineMap2 {
        AffineMap2::new(self.matrix.mul(&inner.matrix), self.apply_q(&inner.shift))
    }

    pub fn inverse(&self) -> Result<AffineMap2, AutError> {
        let inv = self.matrix.inverse().ok_or_else(|| AutError::InvalidAutomorphism("singular matrix".into()))?;
        let s = inv.apply_q(&self.shift);
        Ok(AffineMap2::new(inv, [-s[0].clone(), -s[1].clone()]))
    }

    pub fn as_frame(&self) -> AffineFrame {
        AffineFrame::new(self.matrix.clone(), self.shift.clone())
    }
}

/// The affine map induced on log space. The shift is the double-precision
/// log-modulus of `b`, stored as the exact rational value of that double.
pub fn induced_affine(aut: &AlgAut) -> Result<AffineMap2, AutError> {
    aut.validate()?;
    let bt = aut.btilde();
    let conv = |x: f64| from_f64(x).ok_or_else(|| AutError::InvalidAutomorphism("non-finite log-modulus".into()));
    Ok(AffineMap2::new(aut.matrix.clone(), [conv(bt[0])?, conv(bt[1])?]))
}

/// Strength of a preservation verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preservation {
    pub preserved: bool,
    pub verified: Verification,
    /// Number of sampled points on each side (zero for exact verdicts).
    pub samples: usize,
}

impl Preservation {
    fn exact(preserved: bool) -> Self {
        Preservation { preserved, verified: Verification::Exact, samples: 0 }
    }
}

/// Number of points used for sampled two-sided membership.
pub const PRESERVE_SAMPLES: usize = 10_000;

/// Half-planes of a polyhedral model in final coordinates.
pub fn final_halfplanes(model: &LogDomainModel) -> Option<Vec<HalfPlane>> {
    match &model.shape {
        Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => Some(
            halfplanes
                .iter()
                .map(|h| h.transformed(&model.frame.matrix, &model.frame.offset))
                .collect(),
        ),
        _ => None,
    }
}

fn sorted_canonical(hs: &[HalfPlane]) -> Vec<HalfPlane> {
    let mut c = canonical_halfplanes(hs);
    c.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    c
}

/// Does `map` send the log image onto itself?
pub fn preserves(model: &LogDomainModel, map: &AffineMap2) -> Result<Preservation, AutError> {
    map.matrix.require_unimodular()?;
    model.validate()?;
    let cone = model.recession_cone()?;
    if cone.transform(&map.matrix) != cone {
        return Ok(Preservation::exact(false));
    }
    if let Some(hs) = final_halfplanes(model) {
        let img: Vec<HalfPlane> = hs.iter().map(|h| h.transformed(&map.matrix, &map.shift)).collect();
        return Ok(Preservation::exact(sorted_canonical(&img) == sorted_canonical(&hs)));
    }
    if let Some(h) = model.hyperbolic_data() {
        if let Some(ans) = preserves_hyperbolic(&h, map)? {
            return Ok(Preservation::exact(ans));
        }
    }
    if let Some(p) = model.parabolic_data() {
        return Ok(Preservation::exact(preserves_parabolic(&p, map)?));
    }
    Ok(preserves_sampled(model, map, PRESERVE_SAMPLES, DEFAULT_SEED))
}

/// Two-sided sampled membership: `f(x) ∈ log D` and `f⁻¹(x) ∈ log D` for
/// sampled interior points.
pub fn preserves_sampled(model: &LogDomainModel, map: &AffineMap2, n: usize, seed: u64) -> Preservation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = model.sample_log_points(&mut rng, n);
    let inv = map.inverse().expect("unimodular");
    let ok = pts
        .iter()
        .all(|x| model.contains_log(map.apply_f64(*x)) && model.contains_log(inv.apply_f64(*x)));
    Preservation { preserved: ok, verified: Verification::Sampled, samples: pts.len() }
}

/// Ratio `y = κ x` for parallel vectors.
fn ratio(y: &SurdVec, x: &SurdVec) -> QuadraticSurd {
    if x[0].is_zero() {
        &y[1] / &x[1]
    } else {
        &y[0] / &x[0]
    }
}

fn displacement(map: &AffineMap2, c: &[Q; 2]) -> [Q; 2] {
    let img = map.apply_q(c);
    [&img[0] - &c[0], &img[1] - &c[1]]
}

/// `Some(answer)` when the exact test applies, `None` when the map swaps the
/// two boundary rays and only sampling can decide.
fn preserves_hyperbolic(h: &HyperbolicData, map: &AffineMap2) -> Result<Option<bool>, AutError> {
    let av = map.matrix.apply_surd(&h.v);
    let aw = map.matrix.apply_surd(&h.w);
    let fixes_lines = surd_cross(&av, &h.v).is_zero() && surd_cross(&aw, &h.w).is_zero();
    if !fixes_lines {
        let swaps = surd_cross(&av, &h.w).is_zero() && surd_cross(&aw, &h.v).is_zero();
        return Ok(if swaps { None } else { Some(false) });
    }
    let mu = ratio(&av, &h.v);
    let nu = ratio(&aw, &h.w);
    if !mu.is_positive() || !nu.is_positive() {
        return Ok(Some(false));
    }
    if displacement(map, &h.offset).iter().any(|d| !d.is_zero()) {
        return Ok(Some(false));
    }
    Ok(Some(phi_homogeneous_under(&h.phi, &h.lambda, &mu)?))
}

/// Whether `φ(μt) = φ(t)/μ` for all `t > 0`.
pub fn phi_homogeneous_under(phi: &PhiSpec, lambda: &QuadraticSurd, mu: &QuadraticSurd) -> Result<bool, AutError> {
    if phi.is_closed_form() {
        return Ok(true);
    }
    let k = crate::convexlog::log_floor(lambda, mu)?;
    if lambda.pow(k) == *mu {
        return Ok(true);
    }
    // Both sides are λ-homogeneous and piecewise linear; compare them on the
    // union of their breakpoints in one period.
    let mut pts: Vec<QuadraticSurd> = Vec::new();
    for b in phi.period_breakpoints() {
        let b = QuadraticSurd::rational(b);
        pts.push(b.clone());
        let pre = b.checked_div(mu)?;
        let j = crate::convexlog::log_floor(lambda, &pre)?;
        pts.push(pre.checked_mul(&lambda.pow(-j))?);
    }
    pts.push(lambda.clone());
    for t in pts {
        let lhs = phi.eval_exact(lambda, &t.checked_mul(mu)?)?.checked_mul(mu)?;
        if lhs != phi.eval_exact(lambda, &t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coordinates of a rational vector in the basis `(v, w)`.
fn coords_q(v: &[Q; 2], w: &[Q; 2], x: &[Q; 2]) -> (Q, Q) {
    let det = &v[0] * &w[1] - &v[1] * &w[0];
    let t = (&x[0] * &w[1] - &x[1] * &w[0]) / &det;
    let s = (&v[0] * &x[1] - &v[1] * &x[0]) / &det;
    (t, s)
}

/// Linear part `(p, q)` with `Av = p·v + q·w` and displacement `(d_v, d_w)`
/// of a map fixing `w`, or `None` when `Aw ≠ w`.
fn parabolic_action(p: &ParabolicData, map: &AffineMap2) -> Option<(Q, Q, Q, Q)> {
    if map.matrix.apply_q(&p.w) != p.w {
        return None;
    }
    let (pp, qq) = coords_q(&p.v, &p.w, &map.matrix.apply_q(&p.v));
    let (dv, dw) = coords_q(&p.v, &p.w, &displacement(map, &p.offset));
    Some((pp, qq, dv, dw))
}

fn preserves_parabolic(p: &ParabolicData, map: &AffineMap2) -> Result<bool, AutError> {
    let Some((pp, qq, dv, dw)) = parabolic_action(p, map) else {
        return Ok(false);
    };
    Ok(psi_relation_holds(&p.psi, &p.beta2, &pp, &qq, &dv, &dw)?)
}

/// Whether `ψ(p·t + d_v) = ψ(t) + q·t + d_w` for every real `t`.
pub fn psi_relation_holds(psi: &PsiSpec, beta: &Q, p: &Q, qq: &Q, dv: &Q, dw: &Q) -> Result<bool, ConvexError> {
    let two = q(2);
    match psi {
        PsiSpec::Canonical => {
            // ψ(t) = t²/(2β) − t/2; compare coefficients of t², t and 1.
            if p * p != Q::one() {
                return Ok(false);
            }
            let lin = (&two * p * dv - beta * p) / (&two * beta);
            let cst = (dv * dv - beta * dv) / (&two * beta);
            Ok(lin == qq - Q::new(1.into(), 2.into()) && cst == *dw)
        }
        PsiSpec::Table { .. } => {
            let periodic = if p.is_one() {
                *dv == qq * beta
            } else if *p == -Q::one() {
                *dv == beta * (Q::one() - qq)
            } else {
                false
            };
            if !periodic {
                return Ok(false);
            }
            let sq = |x: &Q| QuadraticSurd::rational(x.clone());
            let g = |t: &Q| -> Result<QuadraticSurd, ConvexError> {
                let lhs = psi.eval_exact(beta, &sq(&(p * t + dv)))?;
                let rhs = psi.eval_exact(beta, &sq(t))?;
                Ok(&(&lhs - &rhs) - &sq(&(qq * t)))
            };
            let reduce = |t: Q| {
                let n = (&t / beta).floor();
                t - n * beta
            };
            let mut pts: Vec<Q> = vec![Q::zero(), beta.clone()];
            for b in psi.period_breakpoints() {
                pts.push(reduce(b.clone()));
                pts.push(reduce((&b - dv) / p));
            }
            for t in pts {
                if g(&t)? != sq(dw) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Automorphism structure of a `t = 0` model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AutClass {
    CompactOnly,
    ParabolicType {
        #[serde(with = "crate::rat::serde_q")]
        beta2: Q,
        #[serde(with = "crate::rat::serde_q2")]
        w: [Q; 2],
        #[serde(with = "crate::rat::serde_q2")]
        v: [Q; 2],
        matrix: Mat2Z,
    },
    HyperbolicType {
        matrix: Mat2Z,
        lambda: QuadraticSurd,
        v: SurdVec,
        w: SurdVec,
        t_sign: Sign,
    },
}

impl AutClass {
    pub fn tag(&self) -> &'static str {
        match self {
            AutClass::CompactOnly => "compact_only",
            AutClass::ParabolicType { .. } => "parabolic_type",
            AutClass::HyperbolicType { .. } => "hyperbolic_type",
        }
    }
}

/// Sorts a hyperbolic `t = 0` model into the compact, parabolic or
/// hyperbolic case.
pub fn classify_aut_structure(model: &LogDomainModel) -> Result<AutClass, AutError> {
    if !model.is_hyperbolic_domain() {
        return Err(AutError::NotHyperbolicDomain);
    }
    let t = model.axis_count()?;
    if t > 0 {
        return Err(AutError::AxisMet(t));
    }
    if let Some(h) = model.hyperbolic_data() {
        return Ok(AutClass::HyperbolicType { matrix: h.matrix, lambda: h.lambda, v: h.v, w: h.w, t_sign: h.t_sign });
    }
    if let Some(p) = model.parabolic_data() {
        return Ok(AutClass::ParabolicType { beta2: p.beta2, w: p.w, v: p.v, matrix: p.matrix });
    }
    if let Some(hs) = final_halfplanes(model) {
        let cone = model.recession_cone()?;
        if sorted_canonical(&hs).len() == 2 {
            if let HyperbolicSearch::Found { matrix: a } = find_hyperbolic_matrix(&cone, crate::serreclass::DEFAULT_ENTRY_BOUND) {
                let es = crate::intmat::eigensystem(&a)?;
                let apex = crate::convexlog::interior_point(&hs).map(|_| ());
                debug_assert!(apex.is_some());
                return Ok(AutClass::HyperbolicType {
                    lambda: es.eigenvalues[0].clone(),
                    v: es.v().expect("hyperbolic"),
                    w: es.w().expect("hyperbolic"),
                    matrix: a,
                    t_sign: Sign::Plus,
                });
            }
        }
    }
    Ok(AutClass::CompactOnly)
}

/// A diverging orbit `k ↦ Φ̃^k(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitWitness {
    pub map: AffineMap2,
    pub base_point: SurdVec,
    /// `‖Φ̃^k(x)‖²` for `k = 0..=steps`, rounded for display.
    pub norms_squared: Vec<f64>,
    /// First index from which the exact squared norms increase strictly.
    pub k0: usize,
    pub steps: usize,
}

/// Orbit length checked by [`noncompactness_witness`].
pub const WITNESS_STEPS: usize = 60;

/// The self-map of a noncompact model in final coordinates.
pub fn model_generator(model: &LogDomainModel) -> Option<AffineMap2> {
    if let Some(h) = model.hyperbolic_data() {
        let mc = h.matrix.apply_q(&h.offset);
        return Some(AffineMap2::new(h.matrix, [&h.offset[0] - &mc[0], &h.offset[1] - &mc[1]]));
    }
    model.parabolic_data().map(|p| {
        let mc = p.matrix.apply_q(&p.offset);
        let shift = [
            &p.offset[0] - &mc[0] + &p.beta2 * &p.v[0],
            &p.offset[1] - &mc[1] + &p.beta2 * &p.v[1],
        ];
        AffineMap2::new(p.matrix, shift)
    })
}

/// The involution `t ↦ β₂ − t, s ↦ s` of a canonical parabolic model, when it
/// is induced by an integer matrix.
pub fn parabolic_reflection(model: &LogDomainModel) -> Option<AffineMap2> {
    let p = model.parabolic_data()?;
    // R = P·diag(−1, 1)·P⁻¹ with P = [v w].
    let (v, w) = (&p.v, &p.w);
    let det = &v[0] * &w[1] - &v[1] * &w[0];
    let pinv = [[&w[1] / &det, -&w[0] / &det], [-&v[1] / &det, &v[0] / &det]];
    let cols = [[-v[0].clone(), -v[1].clone()], [w[0].clone(), w[1].clone()]];
    let mut r = [[Q::zero(), Q::zero()], [Q::zero(), Q::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = &cols[0][i] * &pinv[0][j] + &cols[1][i] * &pinv[1][j];
        }
    }
    if r.iter().flatten().any(|x| !x.is_integer()) {
        return None;
    }
    let m = Mat2Z::from_big([
        [r[0][0].to_integer(), r[0][1].to_integer()],
        [r[1][0].to_integer(), r[1][1].to_integer()],
    ]);
    let rc = m.apply_q(&p.offset);
    let shift = [
        &p.offset[0] - &rc[0] + &p.beta2 * &v[0],
        &p.offset[1] - &rc[1] + &p.beta2 * &v[1],
    ];
    let map = AffineMap2::new(m, shift);
    matches!(preserves(model, &map), Ok(Preservation { preserved: true, .. })).then_some(map)
}

fn norm_sq(x: &SurdVec) -> QuadraticSurd {
    &(&x[0] * &x[0]) + &(&x[1] * &x[1])
}

/// Base point and self-map whose orbit leaves every compact set, or `None`
/// for compact automorphism structure.
pub fn noncompactness_witness(model: &LogDomainModel) -> Result<Option<OrbitWitness>, AutError> {
    let class = classify_aut_structure(model)?;
    let (map, x) = match class {
        AutClass::CompactOnly => return Ok(None),
        AutClass::HyperbolicType { .. } => {
            let Some(h) = model.hyperbolic_data() else {
                return Ok(None);
            };
            let phi1 = h.phi.eval_exact(&h.lambda, &QuadraticSurd::one())?;
            let s = phi1.add_rational(&q(1));
            let tv = [h.v[0].scale(&q(h.t_sign.as_i64())), h.v[1].scale(&q(h.t_sign.as_i64()))];
            let sw = [&s * &h.w[0], &s * &h.w[1]];
            let x = surd_vec_add(&surd_vec(&h.offset), &surd_vec_add(&tv, &sw));
            (model_generator(model).expect("hyperbolic"), x)
        }
        AutClass::ParabolicType { .. } => {
            let p = model.parabolic_data().expect("parabolic");
            let psi0 = p.psi.eval_exact(&p.beta2, &QuadraticSurd::zero())?;
            let s = psi0.add_rational(&q(if p.beta2.is_positive() { 1 } else { -1 }));
            let sw = [s.scale(&p.w[0]), s.scale(&p.w[1])];
            let x = surd_vec_add(&surd_vec(&p.offset), &sw);
            (model_generator(model).expect("parabolic"), x)
        }
    };
    let mut norms = Vec::with_capacity(WITNESS_STEPS + 1);
    let mut cur = x.clone();
    for _ in 0..=WITNESS_STEPS {
        norms.push(norm_sq(&cur));
        cur = map.apply_surd(&cur);
    }
    let mut k0 = WITNESS_STEPS;
    while k0 > 0 && norms[k0 - 1].checked_cmp(&norms[k0])? == Ordering::Less {
        k0 -= 1;
    }
    Ok(Some(OrbitWitness {
        map,
        base_point: x,
        norms_squared: norms.iter().map(|n| n.to_f64()).collect(),
        k0,
        steps: WITNESS_STEPS,
    }))
}

/// The three admissible forms of an automorphism of a parabolic-type model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ParabolicCase {
    IdentityCase,
    UnipotentCase {
        #[serde(with = "crate::rat::serde_q2")]
        vtilde: [Q; 2],
    },
    ReflectionCase {
        #[serde(with = "crate::rat::serde_q2")]
        vtilde: [Q; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicAutForm {
    #[serde(flatten)]
    pub case: ParabolicCase,
    /// Largest `|s̃ − ψ(t̃) − (s − ψ(t))|` over the sampled points.
    pub residual: f64,
    pub samples: usize,
}

/// Number of rational points used by [`parabolic_form_check`].
pub const FORM_SAMPLES: usize = 1000;

/// Sorts a preserving map of a parabolic model into its case and checks the
/// invariance `s̃ − ψ(t̃) = s − ψ(t)` exactly at sampled rational points.
pub fn parabolic_form_check(model: &LogDomainModel, map: &AffineMap2) -> Result<ParabolicAutForm, AutError> {
    let p = model.parabolic_data().ok_or(AutError::NotParabolic)?;
    if !preserves(model, map)?.preserved {
        return Err(AutError::FormViolation("the map does not preserve the model".into()));
    }
    let a = &map.matrix;
    if a.apply_q(&p.w) != p.w {
        return Err(AutError::FormViolation("Aw != w".into()));
    }
    let case = if a.is_identity() {
        if map.shift.iter().any(|x| !x.is_zero()) {
            return Err(AutError::FormViolation("identity matrix with a nonzero shift".into()));
        }
        ParabolicCase::IdentityCase
    } else if a.det().is_one() && a.trace() == 2.into() {
        let n = a.sub_identity();
        let j = (0..2).find(|&j| !n.entry(0, j).is_zero() || !n.entry(1, j).is_zero()).expect("A != I");
        let col = [Q::from_integer(n.entry(0, j).clone()), Q::from_integer(n.entry(1, j).clone())];
        let kappa = if p.w[0].is_zero() { &col[1] / &p.w[1] } else { &col[0] / &p.w[0] };
        let mut vt = [Q::zero(), Q::zero()];
        vt[j] = Q::one() / kappa;
        ParabolicCase::UnipotentCase { vtilde: vt }
    } else if a.det() == (-1).into() && a.trace().is_zero() {
        // Eigenvector of −1: kernel of A + I.
        let r = [[a.entry(0, 0) + 1, a.entry(0, 1).clone()], [a.entry(1, 0).clone(), a.entry(1, 1) + 1]];
        let row = if r[0][0].is_zero() && r[0][1].is_zero() { &r[1] } else { &r[0] };
        let vt = [Q::from_integer(-row[1].clone()), Q::from_integer(row[0].clone())];
        ParabolicCase::ReflectionCase { vtilde: vt }
    } else {
        return Err(AutError::FormViolation(format!("matrix {a} fits none of the three cases")));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut residual = 0.0f64;
    let data_q = |t: &Q, s: &Q| [&p.offset[0] + t * &p.v[0] + s * &p.w[0], &p.offset[1] + t * &p.v[1] + s * &p.w[1]];
    let sq = |x: &Q| QuadraticSurd::rational(x.clone());
    for _ in 0..FORM_SAMPLES {
        let t = Q::new(rng.gen_range(-400i64..400).into(), rng.gen_range(1i64..30).into());
        let s = Q::new(rng.gen_range(-400i64..400).into(), rng.gen_range(1i64..30).into());
        let x = data_q(&t, &s);
        let y = map.apply_q(&x);
        let rel = [&y[0] - &p.offset[0], &y[1] - &p.offset[1]];
        let (tt, ss) = coords_q(&p.v, &p.w, &rel);
        let before = &sq(&s) - &p.psi.eval_exact(&p.beta2, &sq(&t))?;
        let after = &sq(&ss) - &p.psi.eval_exact(&p.beta2, &sq(&tt))?;
        residual = residual.max((&after - &before).to_f64().abs());
    }
    Ok(ParabolicAutForm { case, residual, samples: FORM_SAMPLES })
}
