//! Membership of a hyperbolic pseudoconvex Reinhardt domain in the Serre
//! class, decided from its logarithmic image, with a checkable certificate.
//!
//! A domain fails to be in the class exactly when it is algebraically
//! equivalent to a hyperbolic-type model: `t = 0` and a monomial
//! automorphism whose exponent matrix has eigenvalues `λ`, `1/λ` with
//! `λ > 1`. Every other case carries either an exhaustion function for
//! Stehlé's criterion or a citation of an external result.

mod search;

pub use search::{bound_i64, find_hyperbolic_matrix, HyperbolicSearch, DEFAULT_ENTRY_BOUND};

use crate::autgroup::{classify_aut_structure, final_halfplanes, AutClass, AutError};
use crate::convexlog::{canonical_halfplanes, ConvexError, HalfPlane, LogDomainModel, PhiSpec, Shape, Sign};
use crate::intmat::{classify, Direction2, MatClass, Mat2Z, QuadraticSurd};
use crate::rat::{q, Q};
use crate::stehle::{run_suite, u_tilde_invariance, ExhaustionFn, StehleError, StehleReport, SuiteConfig};
use num::{BigInt, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SerreError {
    #[error("the domain is not hyperbolic")]
    NotHyperbolicDomain,
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("certificate mismatch: {0}")]
    CertificateMismatch(String),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Stehle(#[from] StehleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    T2,
    T1Compact,
    T1Model4,
    T1Model5,
    T1Model6,
    T0Compact,
    T0Parabolic,
    T0Hyperbolic,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 8] = [
        CaseLabel::T2,
        CaseLabel::T1Compact,
        CaseLabel::T1Model4,
        CaseLabel::T1Model5,
        CaseLabel::T1Model6,
        CaseLabel::T0Compact,
        CaseLabel::T0Parabolic,
        CaseLabel::T0Hyperbolic,
    ];
}

/// Exactness of the functional-equation recheck `λ·φ(λt) = φ(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiResiduals {
    pub reductions: usize,
    /// Largest `|λ·φ(λt) − φ(t)|` in double precision.
    pub max_abs: f64,
    /// Whether every residual vanished in exact arithmetic.
    pub exact_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicCertificate {
    pub matrix: Mat2Z,
    pub lambda: QuadraticSurd,
    pub lambda_f64: f64,
    pub v: Direction2,
    pub w: Direction2,
    pub t_sign: Sign,
    pub phi: PhiSpec,
    pub residuals: PhiResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// Membership delegated to an external result.
    Axiom { reason: String },
    /// An exhaustion function on an equivalent normal-form model.
    Exhaustion { function: ExhaustionFn, normal_form: LogDomainModel },
    Hyperbolic(HyperbolicCertificate),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub member: bool,
    pub case_label: CaseLabel,
    pub certificate: Certificate,
    pub provenance: Vec<String>,
}

/// Number of random reductions in functional-equation rechecks.
pub const PHI_REDUCTIONS: usize = 1000;

const PROV_CARATHEODORY: &str = "domains meeting both coordinate axes are Caratheodory complete (external result)";
const PROV_COMPACT: &str = "Reinhardt domains with compact automorphism group belong to the class (external result)";
const PROV_STEHLE: &str = "Stehle criterion: plurisubharmonic exhaustion u with u∘F − u bounded above for all automorphisms F";
const PROV_T1: &str = "classification of t = 1 domains with noncompact automorphism group";
const PROV_T0: &str = "classification of t = 0 domains with noncompact automorphism group";
const PROV_ENLARGED: &str = "the exhaustion lives on the domain enlarged by one coordinate axis";
const PROV_CL: &str = "hyperbolic-type domains carry the Coeure-Loeb type construction of a non-Stein bundle";

fn axiom(reason: &str) -> Certificate {
    Certificate::Axiom { reason: reason.to_string() }
}

/// Decides membership in the Serre class.
pub fn classify_serre(model: &LogDomainModel) -> Result<Verdict, SerreError> {
    match model.validate() {
        Ok(()) => {}
        Err(ConvexError::InconsistentAxisFlags(j)) => {
            return Err(SerreError::UnsupportedModel(format!("inconsistent flag for axis {j}")))
        }
        Err(e) => return Err(e.into()),
    }
    if !model.is_hyperbolic_domain() {
        return Err(SerreError::NotHyperbolicDomain);
    }
    let verdict = |label, certificate, prov: &[&str]| Verdict {
        member: label != CaseLabel::T0Hyperbolic,
        case_label: label,
        certificate,
        provenance: prov.iter().map(|s| s.to_string()).collect(),
    };
    match model.axis_count()? {
        2 => Ok(verdict(CaseLabel::T2, axiom("the domain meets both coordinate axes"), &[PROV_CARATHEODORY])),
        1 => {
            let exh = |f: ExhaustionFn| {
                let normal_form = f.model().expect("model functions");
                Certificate::Exhaustion { function: f, normal_form }
            };
            Ok(match &model.shape {
                Shape::Model4 { r } => verdict(CaseLabel::T1Model4, exh(ExhaustionFn::U4 { r: *r }), &[PROV_T1, PROV_STEHLE]),
                Shape::Model5 { p } => verdict(CaseLabel::T1Model5, exh(ExhaustionFn::U5Rho { p: *p }), &[PROV_T1, PROV_STEHLE]),
                Shape::Model6 {} => verdict(CaseLabel::T1Model6, exh(ExhaustionFn::U6), &[PROV_T1, PROV_STEHLE, PROV_ENLARGED]),
                _ => match half_strip_radius(model)? {
                    Some(r) => verdict(CaseLabel::T1Model4, exh(ExhaustionFn::U4 { r }), &[PROV_T1, PROV_STEHLE]),
                    None => verdict(
                        CaseLabel::T1Compact,
                        axiom("t = 1 and the log image is not a half-strip"),
                        &[PROV_T1, PROV_COMPACT],
                    ),
                },
            })
        }
        _ => match classify_aut_structure(model)? {
            AutClass::CompactOnly => {
                Ok(verdict(CaseLabel::T0Compact, axiom("the automorphism group is compact"), &[PROV_T0, PROV_COMPACT]))
            }
            AutClass::ParabolicType { .. } => {
                // The certificate lives on the unframed shape, reduced to β₂ < 0 by z ↦ 1/z.
                let Shape::ParabolicModel { matrix, beta2, psi } = &model.shape else {
                    return Err(SerreError::UnsupportedModel("parabolic structure without a parabolic model".into()));
                };
                let (beta, psi) =
                    if beta2.is_negative() { (beta2.clone(), psi.clone()) } else { (-beta2.clone(), psi.reflected()) };
                let f = ExhaustionFn::UParabolic { matrix: matrix.clone(), beta2: beta, psi };
                let normal_form = f.model().expect("parabolic");
                Ok(verdict(
                    CaseLabel::T0Parabolic,
                    Certificate::Exhaustion { function: f, normal_form },
                    &[PROV_T0, PROV_STEHLE, PROV_ENLARGED],
                ))
            }
            AutClass::HyperbolicType { matrix, lambda, v, w, t_sign } => {
                let phi = model.hyperbolic_data().map(|h| h.phi).unwrap_or(PhiSpec::Zero);
                let residuals = phi_residuals(&phi, &lambda, PHI_REDUCTIONS, crate::DEFAULT_SEED)?;
                let cert = HyperbolicCertificate {
                    lambda_f64: lambda.to_f64(),
                    v: Direction2::from_vec(&v).map_err(ConvexError::from)?,
                    w: Direction2::from_vec(&w).map_err(ConvexError::from)?,
                    matrix,
                    lambda,
                    t_sign,
                    phi,
                    residuals,
                };
                Ok(verdict(CaseLabel::T0Hyperbolic, Certificate::Hyperbolic(cert), &[PROV_T0, PROV_CL]))
            }
        },
    }
}

/// `r` when the log image is, up to a shear along the met axis and a
/// translation, `{x_j < 0, log r < x_k < 0}` (`r = 0` for one side only).
pub fn half_strip_radius(model: &LogDomainModel) -> Result<Option<f64>, SerreError> {
    let Some(hs) = final_halfplanes(model) else {
        return Ok(None);
    };
    let axes = model.axes();
    let Some(j) = (0..2).find(|&j| axes[j]) else {
        return Ok(None);
    };
    let k = 1 - j;
    let canon = canonical_halfplanes(&hs);
    let mut upper: Option<Q> = None;
    let mut lower: Option<Q> = None;
    let mut cap: Vec<&HalfPlane> = Vec::new();
    for h in &canon {
        let n = &h.normal;
        if n[j].is_zero() {
            // Scale so the normal is ±e_k.
            let c = &h.offset / n[k].abs();
            if n[k].is_positive() {
                upper = Some(c);
            } else {
                lower = Some(-c);
            }
        } else if n[j].is_positive() && (&n[k] / &n[j]).is_integer() {
            cap.push(h);
        } else {
            return Ok(None);
        }
    }
    if cap.len() != 1 || upper.is_none() {
        return Ok(None);
    }
    Ok(Some(match (upper, lower) {
        (Some(u), Some(l)) => (-crate::rat::to_f64(&(u - l))).exp(),
        _ => 0.0,
    }))
}

/// Exact residuals `λ·φ(λt) − φ(t)` at seeded rational `t`.
pub fn phi_residuals(phi: &PhiSpec, lambda: &QuadraticSurd, n: usize, seed: u64) -> Result<PhiResiduals, SerreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs = 0.0f64;
    let mut exact_zero = true;
    for _ in 0..n {
        let t = QuadraticSurd::rational(Q::new(rng.gen_range(1i64..100_000).into(), rng.gen_range(1i64..1000).into()));
        let lhs = phi.eval_exact(lambda, &t.checked_mul(lambda).map_err(ConvexError::from)?)?;
        let lhs = lhs.checked_mul(lambda).map_err(ConvexError::from)?;
        let diff = &lhs - &phi.eval_exact(lambda, &t)?;
        if !diff.is_zero() {
            exact_zero = false;
        }
        max_abs = max_abs.max(diff.to_f64().abs());
    }
    Ok(PhiResiduals { reductions: n, max_abs, exact_zero })
}

/// Result of rechecking a verdict's certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub case_label: CaseLabel,
    pub pass: bool,
    /// Largest residual of the exact or sampled identities checked.
    pub residual: f64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stehle: Option<StehleReport>,
}

fn mismatch<T>(msg: impl Into<String>) -> Result<T, SerreError> {
    Err(SerreError::CertificateMismatch(msg.into()))
}

/// Rechecks a verdict against the model it was produced for.
pub fn verify_certificate(verdict: &Verdict, model: &LogDomainModel, cfg: &SuiteConfig) -> Result<CertificateReport, SerreError> {
    let fresh = classify_serre(model)?;
    if fresh.case_label != verdict.case_label || fresh.member != verdict.member {
        return mismatch(format!("recomputed case {:?} differs from {:?}", fresh.case_label, verdict.case_label));
    }
    if verdict.member == (verdict.case_label == CaseLabel::T0Hyperbolic) {
        return mismatch("membership contradicts the case label");
    }
    let report = |pass, residual, detail: String, stehle| CertificateReport {
        case_label: verdict.case_label,
        pass,
        residual,
        detail,
        stehle,
    };
    match &verdict.certificate {
        Certificate::Axiom { reason } => {
            if !matches!(verdict.case_label, CaseLabel::T2 | CaseLabel::T1Compact | CaseLabel::T0Compact) {
                return mismatch("axiom certificate on a case that needs an explicit one");
            }
            Ok(report(true, 0.0, reason.clone(), None))
        }
        Certificate::Exhaustion { function, normal_form } => {
            if fresh.certificate != verdict.certificate {
                return mismatch("exhaustion certificate differs from the recomputed one");
            }
            let suite = run_suite(function, normal_form, None, cfg)?;
            let (residual, detail) = if verdict.case_label == CaseLabel::T1Model6 {
                let r = u_tilde_invariance(cfg.bounded_samples.min(10_000), 10, cfg.seed)?;
                (r, format!("u-tilde invariance residual {r:e}"))
            } else {
                (0.0, format!("stehle suite for {}", function.name()))
            };
            let pass = suite.pass && residual <= 1e-10;
            Ok(report(pass, residual, detail, Some(suite)))
        }
        Certificate::Hyperbolic(c) => {
            let residual = check_hyperbolic(c, model)?;
            Ok(report(true, residual, "exact recheck of the invariance matrix and profile".into(), None))
        }
    }
}

fn check_hyperbolic(c: &HyperbolicCertificate, model: &LogDomainModel) -> Result<f64, SerreError> {
    if c.matrix.det() != BigInt::one() {
        return mismatch("det A != 1");
    }
    if c.matrix.trace() < BigInt::from(3) {
        return mismatch("trace A < 3");
    }
    if !matches!(classify(&c.matrix), Ok(MatClass::Hyperbolic { .. })) {
        return mismatch("A is not hyperbolic");
    }
    if c.lambda.checked_cmp(&QuadraticSurd::one()).map_err(ConvexError::from)?.is_le() {
        return mismatch("lambda <= 1");
    }
    // λ² − (tr A)λ + 1 = 0.
    let tr = Q::from_integer(c.matrix.trace());
    let char_poly = (&c.lambda * &c.lambda) - c.lambda.scale(&tr) + QuadraticSurd::one();
    if !char_poly.is_zero() {
        return mismatch("lambda is not an eigenvalue of A");
    }
    let lam_inv = c.lambda.checked_recip().map_err(ConvexError::from)?;
    for (dir, mu, name) in [(&c.v, &c.lambda, "v"), (&c.w, &lam_inv, "w")] {
        let x = dir.vector();
        let img = c.matrix.apply_surd(&x);
        if img[0] != &x[0] * mu || img[1] != &x[1] * mu {
            return mismatch(format!("{name} is not an eigendirection for the stated eigenvalue"));
        }
    }
    let cone = model.recession_cone()?;
    let wedge = crate::convexlog::Cone2::wedge(
        if c.t_sign == Sign::Plus { c.v.clone() } else { c.v.opposite() },
        c.w.clone(),
    );
    if Some(&cone) != wedge.as_ref() {
        return mismatch("eigendirections do not span the recession cone");
    }
    let res = phi_residuals(&c.phi, &c.lambda, PHI_REDUCTIONS, crate::DEFAULT_SEED)?;
    let tol = if c.phi.is_closed_form() { 0.0 } else { 1e-12 };
    if !(res.exact_zero || res.max_abs <= tol) {
        return mismatch(format!("functional equation residual {:e}", res.max_abs));
    }
    if res != c.residuals {
        return mismatch("stored residuals differ from the recomputed ones");
    }
    Ok(res.max_abs)
}

/// Random unimodular `(A, b̃)` admissible for `model`: when the domain meets
/// coordinate axes, `A` must map each met axis onto an axis.
pub fn random_equivalence(model: &LogDomainModel, rng: &mut ChaCha8Rng) -> (Mat2Z, [Q; 2]) {
    let axes = model.axes();
    let shift = [
        Q::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=6).into()),
        Q::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=6).into()),
    ];
    let m = match (axes[0], axes[1]) {
        (false, false) => {
            let mut m = Mat2Z::identity();
            for _ in 0..rng.gen_range(1..5) {
                let k = rng.gen_range(-2i64..=2);
                let g = match rng.gen_range(0..3) {
                    0 => Mat2Z::new(1, k, 0, 1),
                    1 => Mat2Z::new(1, 0, k, 1),
                    _ => Mat2Z::new(0, 1, 1, 0),
                };
                m = g.mul(&m);
            }
            if rng.gen_bool(0.5) {
                m.neg()
            } else {
                m
            }
        }
        (true, false) | (false, true) => {
            // Column j must be e_j or e_{1−j}; the other column is (k, ±1) up to order.
            let j = if axes[0] { 0 } else { 1 };
            let k = rng.gen_range(-3i64..=3);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let swap = rng.gen_bool(0.5);
            let mut cols = [[0i64; 2]; 2];
            cols[j] = if swap { [0, 1] } else { [1, 0] };
            cols[1 - j] = if swap { [s, k] } else { [k, s] };
            Mat2Z::new(cols[0][0], cols[1][0], cols[0][1], cols[1][1])
        }
        (true, true) => {
            if rng.gen_bool(0.5) {
                Mat2Z::identity()
            } else {
                Mat2Z::new(0, 1, 1, 0)
            }
        }
    };
    let shift = if axes == [true, true] { [q(0), q(0)] } else { shift };
    (m, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexlog::PsiSpec;
    use crate::rat::qf;

    fn cl() -> LogDomainModel {
        LogDomainModel::hyperbolic(Mat2Z::new(2, 1, 1, 1), PhiSpec::Zero, Sign::Plus)
    }

    #[test]
    fn coeure_loeb_is_not_a_member() {
        let v = classify_serre(&cl()).unwrap();
        assert!(!v.member);
        assert_eq!(v.case_label, CaseLabel::T0Hyperbolic);
        let Certificate::Hyperbolic(c) = &v.certificate else { panic!() };
        assert!(c.residuals.exact_zero);
        let rep = verify_certificate(&v, &cl(), &SuiteConfig::default()).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn tampered_lambda_is_rejected() {
        let mut v = classify_serre(&cl()).unwrap();
        if let Certificate::Hyperbolic(c) = &mut v.certificate {
            c.lambda = QuadraticSurd::one();
        }
        assert!(matches!(
            verify_certificate(&v, &cl(), &SuiteConfig::default()),
            Err(SerreError::CertificateMismatch(_))
        ));
    }

    #[test]
    fn t1_labels() {
        let v = classify_serre(&LogDomainModel::new(Shape::Model4 { r: 0.25 })).unwrap();
        assert_eq!(v.case_label, CaseLabel::T1Model4);
        assert!(matches!(v.certificate, Certificate::Exhaustion { function: ExhaustionFn::U4 { r }, .. } if r == 0.25));
        let strip = LogDomainModel::polyhedral(
            vec![
                HalfPlane::from_ints(1, 2, q(0)),
                HalfPlane::from_ints(0, 1, q(0)),
                HalfPlane::from_ints(0, -1, q(2)),
            ],
            [true, false],
        );
        let v = classify_serre(&strip).unwrap();
        assert_eq!(v.case_label, CaseLabel::T1Model4);
        let Certificate::Exhaustion { function: ExhaustionFn::U4 { r }, .. } = v.certificate else { panic!() };
        assert!((r - (-2f64).exp()).abs() < 1e-15);
        let wedge = LogDomainModel::polyhedral(
            vec![HalfPlane::from_ints(1, 0, q(0)), HalfPlane::from_ints(0, 1, q(0)), HalfPlane::from_ints(1, -1, q(1))],
            [true, false],
        );
        assert_eq!(classify_serre(&wedge).unwrap().case_label, CaseLabel::T1Compact);
    }

    #[test]
    fn parabolic_reduction_flips_beta() {
        let m = LogDomainModel::parabolic(Mat2Z::new(1, 0, 2, 1), qf(1, 2), PsiSpec::Canonical);
        let v = classify_serre(&m).unwrap();
        assert_eq!(v.case_label, CaseLabel::T0Parabolic);
        let Certificate::Exhaustion { function: ExhaustionFn::UParabolic { beta2, .. }, .. } = v.certificate else {
            panic!()
        };
        assert_eq!(beta2, qf(-1, 2));
    }

    #[test]
    fn non_hyperbolic_rejected() {
        let hp = LogDomainModel::polyhedral(vec![HalfPlane::from_ints(1, 0, q(0))], [false, false]);
        assert_eq!(classify_serre(&hp), Err(SerreError::NotHyperbolicDomain));
    }

    #[test]
    fn random_equivalences_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m6 = LogDomainModel::new(Shape::Model6 {});
        for _ in 0..50 {
            let (a, b) = random_equivalence(&m6, &mut rng);
            assert!(a.is_unimodular());
            assert!(m6.apply_monomial(&a, &b).is_ok());
        }
    }
}
