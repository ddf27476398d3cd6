//! Logarithmic images of pseudoconvex Reinhardt domains in C².
//!
//! A [`LogDomainModel`] is a base shape together with an affine frame
//! `x ↦ Bx + c` (`B` unimodular). The log image of the domain is the image
//! of the base shape under the frame. Polyhedral shapes absorb their frames;
//! the curved families keep them, so every monomial change of coordinates is
//! representable.

mod cone;
mod polyhedral;
mod profile;

pub use cone::{cone_of_normals, Cone2};
pub use polyhedral::{canonical_halfplanes, interior_point, is_nonempty, is_redundant, HalfPlane};
pub use profile::{log_floor, PhiSpec, PsiSpec};

use crate::intmat::{
    classify, eigensystem, surd_cross, surd_vec, surd_vec_add, Direction2, DirectionError,
    EigenDirections, IntMatError, Mat2Z, MatClass, QuadraticSurd, SurdError, SurdVec,
};
use crate::rat::{q, to_f64, Q};
use num::complex::Complex64;
use num::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConvexError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("axis {0} is flagged as met but -e_{0} is not in the recession cone")]
    InconsistentAxisFlags(usize),
    #[error("coordinate {0} vanishes but the domain does not meet that axis")]
    AxisViolation(usize),
    #[error("argument has the wrong sign for this profile")]
    DomainSignViolation,
    #[error("exact membership is not available for this shape")]
    NotExact,
    #[error("unsupported image: {0}")]
    UnsupportedImage(String),
    #[error(transparent)]
    IntMat(#[from] IntMatError),
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error(transparent)]
    Direction(#[from] DirectionError),
}

/// A sign, serialized as `"+"` or `"-"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.as_i64() as f64
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i64(s: i64) -> Sign {
        if s < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn times(self, o: Sign) -> Sign {
        Sign::from_i64(self.as_i64() * o.as_i64())
    }
}

/// Affine map `x ↦ Bx + c` with `B` unimodular and `c` rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFrame {
    pub matrix: Mat2Z,
    #[serde(with = "crate::rat::serde_q2")]
    pub offset: [Q; 2],
}

impl Default for AffineFrame {
    fn default() -> Self {
        Self::identity()
    }
}

impl AffineFrame {
    pub fn identity() -> Self {
        AffineFrame { matrix: Mat2Z::identity(), offset: [Q::zero(), Q::zero()] }
    }

    pub fn new(matrix: Mat2Z, offset: [Q; 2]) -> Self {
        AffineFrame { matrix, offset }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity() && self.offset.iter().all(|x| x.is_zero())
    }

    pub fn apply_q(&self, x: &[Q; 2]) -> [Q; 2] {
        let y = self.matrix.apply_q(x);
        [&y[0] + &self.offset[0], &y[1] + &self.offset[1]]
    }

    pub fn apply_surd(&self, x: &SurdVec) -> SurdVec {
        surd_vec_add(&self.matrix.apply_surd(x), &surd_vec(&self.offset))
    }

    pub fn apply_f64(&self, x: [f64; 2]) -> [f64; 2] {
        let y = self.matrix.apply_f64(x);
        [y[0] + to_f64(&self.offset[0]), y[1] + to_f64(&self.offset[1])]
    }

    pub fn inverse(&self) -> AffineFrame {
        let inv = self.matrix.inverse().expect("unimodular frame");
        let c = inv.apply_q(&self.offset);
        AffineFrame { matrix: inv, offset: [-c[0].clone(), -c[1].clone()] }
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &AffineFrame) -> AffineFrame {
        AffineFrame { matrix: outer.matrix.mul(&self.matrix), offset: outer.apply_q(&self.offset) }
    }
}

/// Shape of the log image before the frame is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Open intersection of half-planes; `axis_flags[j]` records whether the
    /// domain meets `{z_j = 0}`.
    Polyhedral { halfplanes: Vec<HalfPlane>, axis_flags: [bool; 2] },
    /// `{t·v + s·w' : sign t = t_sign, s > φ(|t|)}` with `v`, `w` the
    /// eigendirections of `matrix` for `λ`, `1/λ` and `w' = w_sign·w`.
    HyperbolicModel {
        matrix: Mat2Z,
        phi: PhiSpec,
        t_sign: Sign,
        #[serde(default, skip_serializing_if = "is_plus")]
        w_sign: Sign,
    },
    /// `{t·v + s·w : s > ψ(t)}` for `β₂ > 0`, `s < ψ(t)` for `β₂ < 0`, where
    /// `Aw = w`, `Av = v + w`.
    ParabolicModel {
        matrix: Mat2Z,
        #[serde(with = "crate::rat::serde_q")]
        beta2: Q,
        psi: PsiSpec,
    },
    /// Δ × {r < |z₂| < 1}.
    #[serde(rename = "model4")]
    Model4 {
        #[serde(with = "crate::rat::serde_real")]
        r: f64,
    },
    /// `|z₁| < 1, 0 < |z₂| < (1 − |z₁|²)^{p/2}`.
    #[serde(rename = "model5")]
    Model5 {
        #[serde(with = "crate::rat::serde_real")]
        p: f64,
    },
    /// `0 < |z₂| < exp(−|z₁|²)`.
    #[serde(rename = "model6")]
    Model6 {},
    /// Bounded domain containing the origin; nonnegative normals.
    BoundedOrigin { halfplanes: Vec<HalfPlane> },
}

fn is_plus(s: &Sign) -> bool {
    *s == Sign::Plus
}

/// A log-image model: a shape in a unimodular affine frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDomainModel {
    #[serde(flatten)]
    pub shape: Shape,
    #[serde(default, skip_serializing_if = "AffineFrame::is_identity")]
    pub frame: AffineFrame,
}

/// Eigen-data of a hyperbolic-type model in final coordinates: the log image
/// is `{c + t·v + s·w : sign t = t_sign, s > φ(|t|)}` and
/// `x ↦ matrix·(x − c) + c` preserves it.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicData {
    pub matrix: Mat2Z,
    pub lambda: QuadraticSurd,
    pub v: SurdVec,
    pub w: SurdVec,
    pub t_sign: Sign,
    pub offset: [Q; 2],
    pub phi: PhiSpec,
}

/// Jordan data of a parabolic-type model in final coordinates: the log image
/// is `{c + t·v + s·w : s ≷ ψ(t)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicData {
    pub matrix: Mat2Z,
    pub beta2: Q,
    pub v: [Q; 2],
    pub w: [Q; 2],
    pub offset: [Q; 2],
    pub psi: PsiSpec,
}

impl HyperbolicData {
    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64()
    }

    /// Coordinates `(t, s)` of `x − c` in the basis `(v, w)`.
    pub fn coords_exact(&self, x: &SurdVec) -> Result<(QuadraticSurd, QuadraticSurd), ConvexError> {
        let y = [x[0].checked_sub(&QuadraticSurd::rational(self.offset[0].clone()))?,
                 x[1].checked_sub(&QuadraticSurd::rational(self.offset[1].clone()))?];
        let det = surd_cross(&self.v, &self.w);
        let t = cross_checked(&y, &self.w)?.checked_div(&det)?;
        let s = cross_checked(&self.v, &y)?.checked_div(&det)?;
        Ok((t, s))
    }

    pub fn coords_f64(&self, x: [f64; 2]) -> (f64, f64) {
        let v = [self.v[0].to_f64(), self.v[1].to_f64()];
        let w = [self.w[0].to_f64(), self.w[1].to_f64()];
        let y = [x[0] - to_f64(&self.offset[0]), x[1] - to_f64(&self.offset[1])];
        let det = v[0] * w[1] - v[1] * w[0];
        ((y[0] * w[1] - y[1] * w[0]) / det, (v[0] * y[1] - v[1] * y[0]) / det)
    }

    pub fn point_f64(&self, t: f64, s: f64) -> [f64; 2] {
        let v = [self.v[0].to_f64(), self.v[1].to_f64()];
        let w = [self.w[0].to_f64(), self.w[1].to_f64()];
        [
            to_f64(&self.offset[0]) + t * v[0] + s * w[0],
            to_f64(&self.offset[1]) + t * v[1] + s * w[1],
        ]
    }
}

fn cross_checked(x: &SurdVec, y: &SurdVec) -> Result<QuadraticSurd, SurdError> {
    x[0].checked_mul(&y[1])?.checked_sub(&x[1].checked_mul(&y[0])?)
}

impl ParabolicData {
    pub fn coords_exact(&self, x: &SurdVec) -> Result<(QuadraticSurd, QuadraticSurd), ConvexError> {
        let y = [x[0].checked_sub(&QuadraticSurd::rational(self.offset[0].clone()))?,
                 x[1].checked_sub(&QuadraticSurd::rational(self.offset[1].clone()))?];
        let v = surd_vec(&self.v);
        let w = surd_vec(&self.w);
        let det = surd_cross(&v, &w);
        let t = cross_checked(&y, &w)?.checked_div(&det)?;
        let s = cross_checked(&v, &y)?.checked_div(&det)?;
        Ok((t, s))
    }

    pub fn coords_f64(&self, x: [f64; 2]) -> (f64, f64) {
        let v = [to_f64(&self.v[0]), to_f64(&self.v[1])];
        let w = [to_f64(&self.w[0]), to_f64(&self.w[1])];
        let y = [x[0] - to_f64(&self.offset[0]), x[1] - to_f64(&self.offset[1])];
        let det = v[0] * w[1] - v[1] * w[0];
        ((y[0] * w[1] - y[1] * w[0]) / det, (v[0] * y[1] - v[1] * y[0]) / det)
    }

    pub fn point_f64(&self, t: f64, s: f64) -> [f64; 2] {
        let v = [to_f64(&self.v[0]), to_f64(&self.v[1])];
        let w = [to_f64(&self.w[0]), to_f64(&self.w[1])];
        [
            to_f64(&self.offset[0]) + t * v[0] + s * w[0],
            to_f64(&self.offset[1]) + t * v[1] + s * w[1],
        ]
    }

    /// Whether `(t, s)` lies on the domain side of the graph of `ψ`.
    pub fn side_ok(&self, s: f64, psi: f64) -> bool {
        if self.beta2.is_positive() {
            s > psi
        } else {
            s < psi
        }
    }
}

fn qvec(x: [f64; 2]) -> [f64; 2] {
    x
}

impl LogDomainModel {
    pub fn new(shape: Shape) -> Self {
        LogDomainModel { shape, frame: AffineFrame::identity() }
    }

    pub fn hyperbolic(matrix: Mat2Z, phi: PhiSpec, t_sign: Sign) -> Self {
        Self::new(Shape::HyperbolicModel { matrix, phi, t_sign, w_sign: Sign::Plus })
    }

    pub fn parabolic(matrix: Mat2Z, beta2: Q, psi: PsiSpec) -> Self {
        Self::new(Shape::ParabolicModel { matrix, beta2, psi })
    }

    pub fn polyhedral(halfplanes: Vec<HalfPlane>, axis_flags: [bool; 2]) -> Self {
        Self::new(Shape::Polyhedral { halfplanes, axis_flags })
    }

    pub fn kind(&self) -> &'static str {
        match &self.shape {
            Shape::Polyhedral { .. } => "polyhedral",
            Shape::HyperbolicModel { .. } => "hyperbolic_model",
            Shape::ParabolicModel { .. } => "parabolic_model",
            Shape::Model4 { .. } => "model4",
            Shape::Model5 { .. } => "model5",
            Shape::Model6 {} => "model6",
            Shape::BoundedOrigin { .. } => "bounded_origin",
        }
    }

    /// Axes met by the base shape.
    fn base_axes(&self) -> [bool; 2] {
        match &self.shape {
            Shape::Polyhedral { axis_flags, .. } => *axis_flags,
            Shape::HyperbolicModel { .. } | Shape::ParabolicModel { .. } => [false, false],
            Shape::Model4 { .. } | Shape::Model5 { .. } | Shape::Model6 {} => [true, false],
            Shape::BoundedOrigin { .. } => [true, true],
        }
    }

    /// Axis index hit by `B·e_j`, if `B·e_j` is a standard basis vector.
    fn axis_image(b: &Mat2Z, j: usize) -> Option<usize> {
        let col = [b.entry(0, j).clone(), b.entry(1, j).clone()];
        let one = num::BigInt::from(1);
        match (col[0] == one, col[1] == one, col[0].is_zero(), col[1].is_zero()) {
            (true, _, _, true) => Some(0),
            (_, true, true, _) => Some(1),
            _ => None,
        }
    }

    /// Axes met by the domain, in final coordinates.
    pub fn axes(&self) -> [bool; 2] {
        let mut out = [false, false];
        for (j, met) in self.base_axes().iter().enumerate() {
            if *met {
                if let Some(k) = Self::axis_image(&self.frame.matrix, j) {
                    out[k] = true;
                }
            }
        }
        out
    }

    fn base_cone(&self) -> Result<Cone2, ConvexError> {
        Ok(match &self.shape {
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                let normals: Vec<SurdVec> =
                    halfplanes.iter().filter(|h| !h.is_degenerate()).map(|h| surd_vec(&h.normal)).collect();
                cone_of_normals(&normals)
            }
            Shape::HyperbolicModel { matrix, t_sign, w_sign, .. } => {
                let es = eigensystem(matrix)?;
                let EigenDirections::Distinct { v, w } = es.directions else {
                    return Err(ConvexError::Invalid("hyperbolic model needs a hyperbolic matrix".into()));
                };
                let v = if *t_sign == Sign::Plus { v } else { v.opposite() };
                let w = if *w_sign == Sign::Plus { w } else { w.opposite() };
                Cone2::wedge(v, w).expect("eigendirections are independent")
            }
            Shape::ParabolicModel { matrix, beta2, .. } => {
                let es = eigensystem(matrix)?;
                let EigenDirections::Jordan { w, .. } = es.directions else {
                    return Err(ConvexError::Invalid("parabolic model needs a unipotent matrix".into()));
                };
                let d = Direction2::from_rational(&w)?;
                Cone2::Ray { dir: if beta2.is_positive() { d } else { d.opposite() } }
            }
            Shape::Model4 { r } if *r > 0.0 => Cone2::Ray { dir: Direction2::from_ints(-1, 0)? },
            Shape::Model4 { .. } | Shape::Model5 { .. } | Shape::Model6 {} => {
                Cone2::wedge(Direction2::from_ints(-1, 0)?, Direction2::from_ints(0, -1)?).unwrap()
            }
        })
    }

    /// Exact recession cone of the log image.
    pub fn recession_cone(&self) -> Result<Cone2, ConvexError> {
        Ok(self.base_cone()?.transform(&self.frame.matrix))
    }

    /// Structural validation of every field.
    pub fn validate(&self) -> Result<(), ConvexError> {
        self.frame.matrix.require_unimodular()?;
        for (j, met) in self.base_axes().iter().enumerate() {
            if *met && Self::axis_image(&self.frame.matrix, j).is_none() {
                return Err(ConvexError::UnsupportedImage(format!(
                    "frame does not map axis {j} to a coordinate axis"
                )));
            }
        }
        match &self.shape {
            Shape::Polyhedral { halfplanes, axis_flags } => {
                if halfplanes.iter().any(|h| h.is_degenerate()) {
                    return Err(ConvexError::Invalid("zero normal".into()));
                }
                if !is_nonempty(halfplanes) {
                    return Err(ConvexError::Invalid("empty polyhedron".into()));
                }
                let cone = self.base_cone()?;
                for (j, met) in axis_flags.iter().enumerate() {
                    let mut e = [q(0), q(0)];
                    e[j] = q(-1);
                    if *met && !cone.contains(&surd_vec(&e)) {
                        return Err(ConvexError::InconsistentAxisFlags(j));
                    }
                }
                Ok(())
            }
            Shape::BoundedOrigin { halfplanes } => {
                if halfplanes.iter().any(|h| h.normal.iter().any(|c| c.is_negative()) || h.is_degenerate()) {
                    return Err(ConvexError::Invalid("bounded_origin normals must be nonnegative and nonzero".into()));
                }
                if !halfplanes.iter().all(|h| h.offset.is_positive()) {
                    return Err(ConvexError::Invalid("bounded_origin must contain the origin".into()));
                }
                for j in 0..2 {
                    let k = 1 - j;
                    if !halfplanes.iter().any(|h| h.normal[j].is_positive() && h.normal[k].is_zero()) {
                        return Err(ConvexError::Invalid(format!(
                            "bounded_origin needs a bound on x{} alone", j + 1
                        )));
                    }
                }
                Ok(())
            }
            Shape::HyperbolicModel { matrix, phi, .. } => match classify(matrix)? {
                MatClass::Hyperbolic { lambda } => phi.validate(&lambda),
                other => Err(ConvexError::Invalid(format!("matrix class {} is not hyperbolic", other.tag()))),
            },
            Shape::ParabolicModel { matrix, beta2, psi } => match classify(matrix)? {
                MatClass::ParabolicUnipotent => psi.validate(beta2),
                other => Err(ConvexError::Invalid(format!("matrix class {} is not unipotent", other.tag()))),
            },
            Shape::Model4 { r } => {
                if (0.0..1.0).contains(r) {
                    Ok(())
                } else {
                    Err(ConvexError::Invalid("model4 needs 0 <= r < 1".into()))
                }
            }
            Shape::Model5 { p } => {
                if p.is_finite() && *p > 0.0 {
                    Ok(())
                } else {
                    Err(ConvexError::Invalid("model5 needs p > 0".into()))
                }
            }
            Shape::Model6 {} => Ok(()),
        }
    }

    /// Number of coordinate axes met by the domain, after checking the flags
    /// against the recession cone.
    pub fn axis_count(&self) -> Result<u8, ConvexError> {
        if let Shape::Polyhedral { .. } = &self.shape {
            let cone = self.recession_cone()?;
            for (j, met) in self.axes().iter().enumerate() {
                let mut e = [q(0), q(0)];
                e[j] = q(-1);
                if *met && !cone.contains(&surd_vec(&e)) {
                    return Err(ConvexError::InconsistentAxisFlags(j));
                }
            }
        }
        Ok(self.axes().iter().filter(|m| **m).count() as u8)
    }

    /// Hyperbolicity: the recession cone contains no line and each met axis
    /// slice is a hyperbolic planar domain.
    pub fn is_hyperbolic_domain(&self) -> bool {
        if self.validate().is_err() {
            return false;
        }
        let Ok(cone) = self.recession_cone() else {
            return false;
        };
        if cone.contains_line() {
            return false;
        }
        match &self.shape {
            Shape::Polyhedral { halfplanes, axis_flags } => axis_flags.iter().enumerate().all(|(j, met)| {
                // The slice keeps the constraints not involving x_j; its 1-D
                // log image must be a proper subset of R.
                !*met || halfplanes.iter().any(|h| h.normal[j].is_zero())
            }),
            _ => true,
        }
    }

    pub fn hyperbolic_data(&self) -> Option<HyperbolicData> {
        let Shape::HyperbolicModel { matrix, phi, t_sign, w_sign } = &self.shape else {
            return None;
        };
        let es = eigensystem(matrix).ok()?;
        let EigenDirections::Distinct { v, w } = &es.directions else {
            return None;
        };
        let b = &self.frame.matrix;
        let binv = b.inverse()?;
        let w = if *w_sign == Sign::Plus { w.vector() } else { w.opposite().vector() };
        Some(HyperbolicData {
            matrix: b.mul(matrix).mul(&binv),
            lambda: es.eigenvalues[0].clone(),
            v: b.apply_surd(&v.vector()),
            w: b.apply_surd(&w),
            t_sign: *t_sign,
            offset: self.frame.offset.clone(),
            phi: phi.clone(),
        })
    }

    pub fn parabolic_data(&self) -> Option<ParabolicData> {
        let Shape::ParabolicModel { matrix, beta2, psi } = &self.shape else {
            return None;
        };
        let es = eigensystem(matrix).ok()?;
        let EigenDirections::Jordan { w, v } = &es.directions else {
            return None;
        };
        let b = &self.frame.matrix;
        let binv = b.inverse()?;
        Some(ParabolicData {
            matrix: b.mul(matrix).mul(&binv),
            beta2: beta2.clone(),
            v: b.apply_q(v),
            w: b.apply_q(w),
            offset: self.frame.offset.clone(),
            psi: psi.clone(),
        })
    }

    /// Open-set membership of a log point (double precision).
    pub fn contains_log(&self, x: [f64; 2]) -> bool {
        if !(x[0].is_finite() && x[1].is_finite()) {
            return false;
        }
        if let Some(h) = self.hyperbolic_data() {
            let (t, s) = h.coords_f64(x);
            return t * h.t_sign.as_f64() > 0.0 && s > h.phi.eval_f64(h.lambda_f64(), t.abs());
        }
        if let Some(p) = self.parabolic_data() {
            let (t, s) = p.coords_f64(x);
            return p.side_ok(s, p.psi.eval_f64(&p.beta2, t));
        }
        let y = qvec(self.frame.inverse().apply_f64(x));
        match &self.shape {
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                halfplanes.iter().all(|h| h.contains_f64(y))
            }
            Shape::Model4 { r } => y[0] < 0.0 && y[1] < 0.0 && (*r == 0.0 || y[1] > r.ln()),
            Shape::Model5 { p } => y[0] < 0.0 && y[1] < 0.5 * p * (-(2.0 * y[0]).exp()).ln_1p(),
            Shape::Model6 {} => y[1] < -(2.0 * y[0]).exp(),
            _ => unreachable!(),
        }
    }

    /// Exact membership for shapes with algebraic boundaries.
    pub fn contains_log_exact(&self, x: &SurdVec) -> Result<bool, ConvexError> {
        if let Some(h) = self.hyperbolic_data() {
            let (t, s) = h.coords_exact(x)?;
            if t.signum() as i64 != h.t_sign.as_i64() {
                return Ok(false);
            }
            let phi = h.phi.eval_exact(&h.lambda, &t.abs())?;
            return Ok(s.checked_cmp(&phi)?.is_gt());
        }
        if let Some(p) = self.parabolic_data() {
            let (t, s) = p.coords_exact(x)?;
            let psi = p.psi.eval_exact(&p.beta2, &t)?;
            let ord = s.checked_cmp(&psi)?;
            return Ok(if p.beta2.is_positive() { ord.is_gt() } else { ord.is_lt() });
        }
        match &self.shape {
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                let y = self.frame.inverse().apply_surd(x);
                for h in halfplanes {
                    let val = y[0].scale(&h.normal[0]).checked_add(&y[1].scale(&h.normal[1]))?;
                    if !val.checked_cmp(&QuadraticSurd::rational(h.offset.clone()))?.is_lt() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(ConvexError::NotExact),
        }
    }

    /// Membership of a point of C². Zero coordinates are allowed only on met
    /// axes.
    pub fn contains(&self, z: [Complex64; 2]) -> Result<bool, ConvexError> {
        let m = [z[0].norm(), z[1].norm()];
        let axes = self.axes();
        for j in 0..2 {
            if m[j] == 0.0 && !axes[j] {
                return Err(ConvexError::AxisViolation(j));
            }
        }
        if m[0] > 0.0 && m[1] > 0.0 {
            return Ok(self.contains_log([m[0].ln(), m[1].ln()]));
        }
        // Pull back to base moduli: |z_base_i| = e^{c'_i} ∏_j m_j^{(B⁻¹)_ij}.
        let inv = self.frame.inverse();
        let e = inv.matrix.to_f64();
        let mut base = [0.0f64; 2];
        for i in 0..2 {
            let mut val = to_f64(&inv.offset[i]).exp();
            for j in 0..2 {
                val *= match (m[j] == 0.0, e[i][j]) {
                    (true, p) if p == 0.0 => 1.0,
                    (true, p) if p > 0.0 => 0.0,
                    (true, _) => f64::INFINITY,
                    (false, p) => m[j].powf(p),
                };
            }
            base[i] = val;
        }
        Ok(match &self.shape {
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                halfplanes.iter().all(|h| {
                    let n = [to_f64(&h.normal[0]), to_f64(&h.normal[1])];
                    let mut val = 0.0;
                    for j in 0..2 {
                        if n[j] != 0.0 {
                            if base[j] == 0.0 {
                                return true;
                            }
                            val += n[j] * base[j].ln();
                        }
                    }
                    val < to_f64(&h.offset)
                })
            }
            Shape::Model4 { r } => base[0] < 1.0 && base[1] > *r && base[1] < 1.0,
            Shape::Model5 { p } => base[0] < 1.0 && base[1] > 0.0 && base[1] < (1.0 - base[0] * base[0]).powf(p / 2.0),
            Shape::Model6 {} => base[1] > 0.0 && base[1] < (-base[0] * base[0]).exp(),
            _ => unreachable!("models without met axes were handled above"),
        })
    }

    /// Image under the monomial change with exponent matrix `a` and
    /// log-moduli shift `btilde`.
    pub fn apply_monomial(&self, a: &Mat2Z, btilde: &[Q; 2]) -> Result<LogDomainModel, ConvexError> {
        a.require_unimodular()?;
        let outer = AffineFrame::new(a.clone(), btilde.clone());
        let axes = self.axes();
        for (j, met) in axes.iter().enumerate() {
            if *met && Self::axis_image(a, j).is_none() {
                return Err(ConvexError::UnsupportedImage(format!(
                    "exponent matrix does not map the met axis {j} onto an axis"
                )));
            }
        }
        let frame = self.frame.then(&outer);
        let out = match &self.shape {
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                let hs: Vec<HalfPlane> =
                    halfplanes.iter().map(|h| h.transformed(&frame.matrix, &frame.offset)).collect();
                let mut flags = [false, false];
                for (j, met) in self.base_axes().iter().enumerate() {
                    if *met {
                        flags[Self::axis_image(&frame.matrix, j).expect("checked")] = true;
                    }
                }
                let is_box = matches!(self.shape, Shape::BoundedOrigin { .. })
                    && hs.iter().all(|h| h.normal.iter().all(|c| !c.is_negative()));
                if is_box {
                    LogDomainModel::new(Shape::BoundedOrigin { halfplanes: hs })
                } else {
                    LogDomainModel::polyhedral(hs, flags)
                }
            }
            Shape::HyperbolicModel { matrix, phi, t_sign, w_sign } => {
                let mut m = LogDomainModel { shape: self.shape.clone(), frame };
                if m.frame.offset.iter().all(|c| c.is_zero()) {
                    if let Some((mu, nu)) = absorbable_hyperbolic(matrix, &m.frame.matrix) {
                        m = LogDomainModel::new(Shape::HyperbolicModel {
                            matrix: matrix.clone(),
                            phi: phi.clone(),
                            t_sign: t_sign.times(mu),
                            w_sign: w_sign.times(nu),
                        });
                    }
                }
                m
            }
            _ => LogDomainModel { shape: self.shape.clone(), frame },
        };
        Ok(out)
    }

    /// Random interior log points, spread over several scales.
    pub fn sample_log_points<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(n);
        let gap = |rng: &mut R| (rng.gen_range(-5.0..3.0f64)).exp();
        if let Some(h) = self.hyperbolic_data() {
            let lf = h.lambda_f64();
            while out.len() < n {
                let t = h.t_sign.as_f64() * (rng.gen_range(-4.0..4.0) * lf.ln()).exp();
                let s = h.phi.eval_f64(lf, t.abs()) + gap(rng);
                out.push(h.point_f64(t, s));
            }
            return out;
        }
        if let Some(p) = self.parabolic_data() {
            let span = 5.0 * to_f64(&p.beta2).abs() + 3.0;
            while out.len() < n {
                let t = rng.gen_range(-span..span);
                let psi = p.psi.eval_f64(&p.beta2, t);
                let s = if p.beta2.is_positive() { psi + gap(rng) } else { psi - gap(rng) };
                out.push(p.point_f64(t, s));
            }
            return out;
        }
        let push = |out: &mut Vec<[f64; 2]>, y: [f64; 2]| out.push(self.frame.apply_f64(y));
        match &self.shape {
            Shape::Model4 { r } => {
                while out.len() < n {
                    let y0 = -gap(rng);
                    let y1 = if *r == 0.0 { -gap(rng) } else { r.ln() * rng.gen_range(0.001..0.999) };
                    push(&mut out, [y0, y1]);
                }
            }
            Shape::Model5 { p } => {
                while out.len() < n {
                    let y0 = -gap(rng);
                    let bound = 0.5 * p * (-(2.0 * y0).exp()).ln_1p();
                    push(&mut out, [y0, bound - gap(rng)]);
                }
            }
            Shape::Model6 {} => {
                while out.len() < n {
                    let y0 = rng.gen_range(-6.0..2.0);
                    push(&mut out, [y0, -(2.0 * y0).exp() - gap(rng)]);
                }
            }
            Shape::Polyhedral { halfplanes, .. } | Shape::BoundedOrigin { halfplanes } => {
                let p = interior_point(halfplanes).expect("validated nonempty");
                let p = [to_f64(&p[0]), to_f64(&p[1])];
                let mut tries = 0usize;
                while out.len() < n && tries < 200 * n + 1000 {
                    tries += 1;
                    let ang = rng.gen_range(0.0..std::f64::consts::TAU);
                    let rad = rng.gen_range(-4.0..4.0f64).exp();
                    let y = [p[0] + rad * ang.cos(), p[1] + rad * ang.sin()];
                    if halfplanes.iter().all(|h| h.contains_f64(y)) {
                        push(&mut out, y);
                    }
                }
            }
            _ => unreachable!(),
        }
        out
    }
}

/// For a frame matrix `B` fixing the eigenlines of `A` with multipliers that
/// are integral powers of `λ` (up to sign), returns the signs `(μ, ν)` of the
/// multipliers on `v` and `w`.
fn absorbable_hyperbolic(a: &Mat2Z, b: &Mat2Z) -> Option<(Sign, Sign)> {
    let es = eigensystem(a).ok()?;
    let EigenDirections::Distinct { v, w } = &es.directions else {
        return None;
    };
    let lambda = &es.eigenvalues[0];
    let bv = b.apply_surd(&v.vector());
    let bw = b.apply_surd(&w.vector());
    if !surd_cross(&bv, &v.vector()).is_zero() || !surd_cross(&bw, &w.vector()).is_zero() {
        return None;
    }
    let ratio = |img: &SurdVec, base: &SurdVec| {
        if base[0].is_zero() {
            &img[1] / &base[1]
        } else {
            &img[0] / &base[0]
        }
    };
    let mu = ratio(&bv, &v.vector());
    let nu = ratio(&bw, &w.vector());
    if (&mu * &nu).abs() != QuadraticSurd::one() {
        return None;
    }
    let k = log_floor(lambda, &mu.abs()).ok()?;
    if lambda.pow(k) != mu.abs() {
        return None;
    }
    Some((Sign::from_i64(mu.signum() as i64), Sign::from_i64(nu.signum() as i64)))
}
