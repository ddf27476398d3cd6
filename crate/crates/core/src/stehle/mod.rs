//! Explicit exhaustion functions for the model domains and numerical checks
//! of the hypotheses in Stehlé's criterion: plurisubharmonicity, exhaustion,
//! and boundedness from above of `u∘F − u` over automorphisms `F`.

mod auts;
mod exhaust;
mod psh;

pub use auts::{check_bounded_above, random_automorphisms, u_tilde_invariance, BoundedReport, HoloAut};
pub use exhaust::{check_exhaustion, ExhaustionReport, LevelReport, SequenceReport};
pub use psh::{check_psh, GridSpec, PshReport};

use crate::autgroup::AutError;
use crate::convexlog::{ConvexError, LogDomainModel, ParabolicData, PsiSpec, Shape};
use crate::intmat::Mat2Z;
use crate::rat::Q;
use crate::DEFAULT_SEED;
use num::complex::Complex64;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StehleError {
    #[error("point lies outside the domain of the function")]
    OutsideDomain,
    #[error("grid point ({0:?}) is too close to the boundary for the finite-difference stencil")]
    GridTouchesBoundary([f64; 4]),
    #[error("automorphism rejected: {0}")]
    AutomorphismRejected(String),
    #[error("invalid exhaustion function: {0}")]
    Invalid(String),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

/// `ρ(t) = −1/t` on `t < 0`, and `+∞` elsewhere.
pub fn rho(t: f64) -> f64 {
    if t < 0.0 {
        -1.0 / t
    } else {
        f64::INFINITY
    }
}

/// The explicit exhaustion functions, plus a non-plurisubharmonic control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum ExhaustionFn {
    /// `max{−log(1−|z₁|²), −log dist(z₂, C∖P(r,1))}` on `Δ × P(r,1)`.
    U4 { r: f64 },
    /// `max{log|z₂| − (p/2)log(1−|z₁|²), −log|z₂|}`, taken literally.
    U5 { p: f64 },
    /// `max{ρ(log|z₂| − (p/2)log(1−|z₁|²)), −log|z₂|}`.
    U5Rho { p: f64 },
    /// `ũ = log|z₂| + |z₁|²`.
    UTilde6,
    /// `ρ∘ũ`.
    RhoUTilde6,
    /// `max{ρ(ũ), log⁺|z₁|}`.
    U6,
    /// `max{ρ(s − ψ(t)), ℓ, −ℓ}` on a parabolic model with `β₂ < 0`, where
    /// `ℓ = log|z_j|` for the coordinate transverse to a coordinate `w`, and
    /// `ℓ = t` otherwise.
    UParabolic {
        matrix: Mat2Z,
        #[serde(with = "crate::rat::serde_q")]
        beta2: Q,
        psi: PsiSpec,
    },
    /// `−|z₁|²`, which is not plurisubharmonic.
    NegSquare,
}

impl ExhaustionFn {
    pub fn name(&self) -> &'static str {
        match self {
            ExhaustionFn::U4 { .. } => "u4",
            ExhaustionFn::U5 { .. } => "u5",
            ExhaustionFn::U5Rho { .. } => "u5_rho",
            ExhaustionFn::UTilde6 => "u_tilde6",
            ExhaustionFn::RhoUTilde6 => "rho_u_tilde6",
            ExhaustionFn::U6 => "u6",
            ExhaustionFn::UParabolic { .. } => "u_parabolic",
            ExhaustionFn::NegSquare => "neg_square",
        }
    }

    /// The model the function is written for.
    pub fn model(&self) -> Option<LogDomainModel> {
        Some(match self {
            ExhaustionFn::U4 { r } => LogDomainModel::new(Shape::Model4 { r: *r }),
            ExhaustionFn::U5 { p } | ExhaustionFn::U5Rho { p } => LogDomainModel::new(Shape::Model5 { p: *p }),
            ExhaustionFn::UTilde6 | ExhaustionFn::RhoUTilde6 | ExhaustionFn::U6 => {
                LogDomainModel::new(Shape::Model6 {})
            }
            ExhaustionFn::UParabolic { matrix, beta2, psi } => {
                LogDomainModel::parabolic(matrix.clone(), beta2.clone(), psi.clone())
            }
            ExhaustionFn::NegSquare => return None,
        })
    }

    /// Compiles the function for repeated evaluation.
    pub fn prepare(&self) -> Result<PreparedFn, StehleError> {
        let par = match self {
            ExhaustionFn::UParabolic { beta2, .. } => {
                if !beta2.is_negative() {
                    return Err(StehleError::Invalid("the parabolic function needs beta2 < 0".into()));
                }
                let m = self.model().expect("parabolic model");
                m.validate()?;
                let data = m.parabolic_data().ok_or_else(|| StehleError::Invalid("not a parabolic model".into()))?;
                let ell_axis = if data.w[0].is_zero() {
                    Some(0)
                } else if data.w[1].is_zero() {
                    Some(1)
                } else {
                    None
                };
                Some(Box::new(ParPrep::new(data, ell_axis)))
            }
            ExhaustionFn::U4 { r } if !(0.0..1.0).contains(r) => {
                return Err(StehleError::Invalid("r must lie in [0, 1)".into()))
            }
            ExhaustionFn::U5 { p } | ExhaustionFn::U5Rho { p } if !(*p > 0.0) => {
                return Err(StehleError::Invalid("p must be positive".into()))
            }
            _ => None,
        };
        Ok(PreparedFn { f: self.clone(), par })
    }

    /// The coordinate axis added to the domain on which the function is an
    /// exhaustion: near it the function stays bounded.
    pub fn enlarged_axis(&self) -> Option<usize> {
        match self {
            ExhaustionFn::UTilde6 | ExhaustionFn::RhoUTilde6 | ExhaustionFn::U6 => Some(1),
            ExhaustionFn::UParabolic { .. } => {
                let p = self.prepare().ok()?;
                let w = &p.par.as_ref()?.data.w;
                // The recession ray is −w; it approaches {z_j = 0} when −w is −e_j.
                (0..2).find(|&j| w[1 - j].is_zero() && w[j].is_positive())
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
struct ParPrep {
    data: ParabolicData,
    /// `j` with `w_j = 0`, so that `ℓ = log|z_j|`.
    ell_axis: Option<usize>,
    v: [f64; 2],
    w: [f64; 2],
    offset: [f64; 2],
    beta2: f64,
    psi_pts: Vec<(f64, f64)>,
}

impl ParPrep {
    fn new(data: ParabolicData, ell_axis: Option<usize>) -> Self {
        let f = crate::rat::to_f64;
        ParPrep {
            v: [f(&data.v[0]), f(&data.v[1])],
            w: [f(&data.w[0]), f(&data.w[1])],
            offset: [f(&data.offset[0]), f(&data.offset[1])],
            beta2: f(&data.beta2),
            psi_pts: data.psi.period_points_f64(&data.beta2),
            data,
            ell_axis,
        }
    }

    /// Coordinates of a log-space displacement in the basis `(v, w)`.
    fn linear(&self, dx: [f64; 2]) -> (f64, f64) {
        let (v, w) = (self.v, self.w);
        let det = v[0] * w[1] - v[1] * w[0];
        ((dx[0] * w[1] - dx[1] * w[0]) / det, (v[0] * dx[1] - v[1] * dx[0]) / det)
    }

    fn coords(&self, x: [f64; 2]) -> (f64, f64) {
        self.linear([x[0] - self.offset[0], x[1] - self.offset[1]])
    }

    fn psi(&self, t: f64) -> f64 {
        PsiSpec::eval_with(self.beta2, &self.psi_pts, t)
    }
}

/// An exhaustion function ready for evaluation.
#[derive(Debug, Clone)]
pub struct PreparedFn {
    f: ExhaustionFn,
    par: Option<Box<ParPrep>>,
}

/// Up to three branch values; the function is their maximum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Branches {
    vals: [f64; 3],
    len: usize,
}

impl Branches {
    fn of(v: &[f64]) -> Self {
        let mut vals = [f64::NEG_INFINITY; 3];
        vals[..v.len()].copy_from_slice(v);
        Branches { vals, len: v.len() }
    }

    pub(crate) fn max(&self) -> f64 {
        self.vals[..self.len].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest branch and its lead over the runner-up.
    pub(crate) fn active(&self) -> (usize, f64) {
        let mut best = 0;
        for i in 1..self.len {
            if self.vals[i] > self.vals[best] {
                best = i;
            }
        }
        let second = (0..self.len).filter(|&i| i != best).map(|i| self.vals[i]).fold(f64::NEG_INFINITY, f64::max);
        (best, self.vals[best] - second)
    }
}

impl PreparedFn {
    pub fn function(&self) -> &ExhaustionFn {
        &self.f
    }

    pub(crate) fn branches(&self, z: [Complex64; 2]) -> Branches {
        let m = [z[0].norm(), z[1].norm()];
        self.branches_log([m[0].ln(), m[1].ln()], m)
    }

    /// Branches at the point with log-moduli `x` and moduli `m = exp(x)`;
    /// logarithms are read from `x`, so `m` may underflow or overflow.
    fn branches_log(&self, x: [f64; 2], m: [f64; 2]) -> Branches {
        let [m1, m2] = m;
        match &self.f {
            ExhaustionFn::U4 { r } => {
                Branches::of(&[-(-m1 * m1).ln_1p(), -(m2 - r).ln(), -(1.0 - m2).ln()])
            }
            ExhaustionFn::U5 { p } => Branches::of(&[u5_inner(*p, m1, x[1]), -x[1]]),
            ExhaustionFn::U5Rho { p } => Branches::of(&[rho(u5_inner(*p, m1, x[1])), -x[1]]),
            ExhaustionFn::UTilde6 => Branches::of(&[u_tilde(m1, x[1])]),
            ExhaustionFn::RhoUTilde6 => Branches::of(&[rho(u_tilde(m1, x[1]))]),
            ExhaustionFn::U6 => Branches::of(&[rho(u_tilde(m1, x[1])), 0.0, x[0]]),
            ExhaustionFn::UParabolic { .. } => {
                let par = self.par.as_ref().expect("prepared");
                let (t, s) = par.coords(x);
                let ell = match par.ell_axis {
                    Some(j) => x[j],
                    None => t,
                };
                let inner = if s == f64::NEG_INFINITY { s } else { s - par.psi(t) };
                Branches::of(&[rho(inner), ell, -ell])
            }
            ExhaustionFn::NegSquare => Branches::of(&[-m1 * m1]),
        }
    }

    /// `u` at the point with log-moduli `x`, without a domain check. Usable
    /// far beyond the range where `exp(x)` is representable.
    pub(crate) fn eval_log(&self, x: [f64; 2]) -> f64 {
        self.branches_log(x, [x[0].exp(), x[1].exp()]).max()
    }

    /// Increments `b(z + dz) − b(z)` of every branch, computed from the
    /// increments of the squared moduli so that the rounding error is
    /// relative to the increment rather than to the branch value.
    pub(crate) fn branch_deltas(&self, z: [Complex64; 2], dz: [Complex64; 2]) -> Branches {
        let st = Step::new(z, dz);
        let m1 = st.m2[0].sqrt();
        let m2 = st.m2[1].sqrt();
        match &self.f {
            ExhaustionFn::U4 { r } => Branches::of(&[
                -st.dln_one_minus_sq(0),
                -(st.dm(1) / (m2 - r)).ln_1p(),
                -(-st.dm(1) / (1.0 - m2)).ln_1p(),
            ]),
            ExhaustionFn::U5 { p } => Branches::of(&[st.dln(1) - 0.5 * p * st.dln_one_minus_sq(0), -st.dln(1)]),
            ExhaustionFn::U5Rho { p } => {
                let d = st.dln(1) - 0.5 * p * st.dln_one_minus_sq(0);
                Branches::of(&[rho_delta(u5_inner(*p, m1, m2.ln()), d), -st.dln(1)])
            }
            ExhaustionFn::UTilde6 => Branches::of(&[st.dln(1) + st.dm2[0]]),
            ExhaustionFn::RhoUTilde6 => Branches::of(&[rho_delta(u_tilde(m1, m2.ln()), st.dln(1) + st.dm2[0])]),
            ExhaustionFn::U6 => {
                Branches::of(&[rho_delta(u_tilde(m1, m2.ln()), st.dln(1) + st.dm2[0]), 0.0, st.dln(0)])
            }
            ExhaustionFn::UParabolic { .. } => {
                let par = self.par.as_ref().expect("prepared");
                let x = [m1.ln(), m2.ln()];
                let dx = [st.dln(0), st.dln(1)];
                let (t, s) = par.coords(x);
                let (dt, ds) = par.linear(dx);
                let dpsi = if par.psi_pts.is_empty() {
                    let b = par.beta2;
                    dt * (2.0 * t + dt - b) / (2.0 * b)
                } else {
                    par.psi(t + dt) - par.psi(t)
                };
                let dell = match par.ell_axis {
                    Some(j) => dx[j],
                    None => dt,
                };
                Branches::of(&[rho_delta(s - par.psi(t), ds - dpsi), dell, -dell])
            }
            ExhaustionFn::NegSquare => Branches::of(&[-st.dm2[0]]),
        }
    }

    /// Evaluates without a domain check.
    pub fn eval_unchecked(&self, z: [Complex64; 2]) -> f64 {
        self.branches(z).max()
    }
}

/// Squared moduli at `z` and their increments towards `z + dz`.
struct Step {
    m2: [f64; 2],
    dm2: [f64; 2],
}

impl Step {
    fn new(z: [Complex64; 2], dz: [Complex64; 2]) -> Self {
        let inc = |a: Complex64, d: Complex64| 2.0 * (a.re * d.re + a.im * d.im) + d.norm_sqr();
        Step { m2: [z[0].norm_sqr(), z[1].norm_sqr()], dm2: [inc(z[0], dz[0]), inc(z[1], dz[1])] }
    }

    /// Increment of `log|z_j|`.
    fn dln(&self, j: usize) -> f64 {
        0.5 * (self.dm2[j] / self.m2[j]).ln_1p()
    }

    /// Increment of `|z_j|`.
    fn dm(&self, j: usize) -> f64 {
        self.dm2[j] / (self.m2[j].sqrt() + (self.m2[j] + self.dm2[j]).sqrt())
    }

    /// Increment of `log(1 − |z_j|²)`.
    fn dln_one_minus_sq(&self, j: usize) -> f64 {
        (-self.dm2[j] / (1.0 - self.m2[j])).ln_1p()
    }
}

/// `ρ(x + dx) − ρ(x)` for `ρ(t) = −1/t`.
fn rho_delta(x: f64, dx: f64) -> f64 {
    dx / (x * (x + dx))
}

fn u5_inner(p: f64, m1: f64, x2: f64) -> f64 {
    x2 - 0.5 * p * (-m1 * m1).ln_1p()
}

fn u_tilde(m1: f64, x2: f64) -> f64 {
    x2 + m1 * m1
}

/// Whether `z` lies in the domain on which `f` is defined: the model, plus
/// the enlarged axis if any.
pub(crate) fn in_domain(f: &ExhaustionFn, model: Option<&LogDomainModel>, z: [Complex64; 2]) -> bool {
    let Some(model) = model else {
        return z.iter().all(|c| c.re.is_finite() && c.im.is_finite());
    };
    match model.contains(z) {
        Ok(b) => b,
        Err(ConvexError::AxisViolation(j)) if f.enlarged_axis() == Some(j) => {
            // The enlarged domain contains the axis point iff nearby points
            // off the axis lie in the model.
            let mut near = z;
            near[j] = Complex64::new(1e-300, 0.0);
            model.contains(near).unwrap_or(false)
        }
        Err(_) => false,
    }
}

/// `u(z)`, or `OutsideDomain` when `z` is not in the function's domain.
pub fn eval_u(f: &ExhaustionFn, z: [Complex64; 2]) -> Result<f64, StehleError> {
    let model = f.model();
    if !in_domain(f, model.as_ref(), z) {
        return Err(StehleError::OutsideDomain);
    }
    let v = f.prepare()?.eval_unchecked(z);
    if v.is_nan() {
        return Err(StehleError::OutsideDomain);
    }
    Ok(v)
}

/// Parameters for [`run_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub grid: GridSpec,
    pub psh_tol: f64,
    pub levels: Vec<f64>,
    pub exhaustion_samples: usize,
    pub bounded_samples: usize,
    pub automorphisms: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            grid: GridSpec::default(),
            psh_tol: 1e-6,
            levels: vec![1.0, 2.0, 5.0, 10.0, 20.0],
            exhaustion_samples: 10_000,
            bounded_samples: 100_000,
            automorphisms: 10,
        }
    }
}

/// Outcome of the three checks for one function on one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StehleReport {
    pub function: ExhaustionFn,
    pub model: String,
    pub seed: u64,
    pub psh_min_eigen: f64,
    pub psh_pass: bool,
    pub exhaustion_pass: bool,
    pub bounded_pass: bool,
    pub pass: bool,
    pub psh: PshReport,
    pub exhaustion: ExhaustionReport,
    pub bounded: Vec<BoundedReport>,
}

/// Runs all checks for `f` on `model`, with either the given automorphisms
/// or seeded random ones from the model's family.
pub fn run_suite(
    f: &ExhaustionFn,
    model: &LogDomainModel,
    auts: Option<Vec<HoloAut>>,
    cfg: &SuiteConfig,
) -> Result<StehleReport, StehleError> {
    let psh = check_psh(f, model, &cfg.grid, cfg.psh_tol)?;
    let exhaustion = check_exhaustion(f, model, &cfg.levels, cfg.exhaustion_samples, cfg.seed)?;
    let auts = match auts {
        Some(a) => a,
        None => random_automorphisms(model, cfg.automorphisms, cfg.seed)?,
    };
    let bounded = auts
        .iter()
        .map(|a| check_bounded_above(f, model, a, cfg.bounded_samples, cfg.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let bounded_pass = bounded.iter().all(|b| b.stable);
    let pass = psh.pass && exhaustion.pass && bounded_pass;
    Ok(StehleReport {
        function: f.clone(),
        model: model.kind().to_string(),
        seed: cfg.seed,
        psh_min_eigen: psh.min_eigen,
        psh_pass: psh.pass,
        exhaustion_pass: exhaustion.pass,
        bounded_pass,
        pass,
        psh,
        exhaustion,
        bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eval_examples() {
        let v = eval_u(&ExhaustionFn::UTilde6, [c(0.0), c((-1f64).exp())]).unwrap();
        assert!((v + 1.0).abs() < 1e-15);
        let v = eval_u(&ExhaustionFn::U4 { r: 0.25 }, [c(0.0), c(0.5)]).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-15);
        assert_eq!(eval_u(&ExhaustionFn::U4 { r: 0.25 }, [c(0.0), c(0.2)]), Err(StehleError::OutsideDomain));
        // The literal U5 tends to 0 at (0, 1⁻).
        let v = eval_u(&ExhaustionFn::U5 { p: 2.0 }, [c(0.0), c(1.0 - 1e-12)]).unwrap();
        assert!(v.abs() < 1e-11);
        let v = eval_u(&ExhaustionFn::U5Rho { p: 2.0 }, [c(0.0), c(1.0 - 1e-12)]).unwrap();
        assert!(v > 1e11);
    }

    #[test]
    fn enlarged_axes() {
        assert_eq!(ExhaustionFn::U6.enlarged_axis(), Some(1));
        let v = eval_u(&ExhaustionFn::U6, [c(0.5), c(0.0)]).unwrap();
        assert_eq!(v, 0.0);
        let par = ExhaustionFn::UParabolic { matrix: Mat2Z::new(1, 0, 2, 1), beta2: q(-1), psi: PsiSpec::Canonical };
        assert_eq!(par.enlarged_axis(), Some(1));
        assert!(eval_u(&ExhaustionFn::U4 { r: 0.0 }, [c(0.5), c(0.0)]).is_err());
        let bad = ExhaustionFn::UParabolic { matrix: Mat2Z::new(1, 0, 2, 1), beta2: qf(1, 2), psi: PsiSpec::Canonical };
        assert!(bad.prepare().is_err());
    }

    #[test]
    fn parabolic_branch_uses_log_z1() {
        let f = ExhaustionFn::UParabolic { matrix: Mat2Z::new(1, 0, 1, 1), beta2: q(-1), psi: PsiSpec::Canonical };
        let p = f.prepare().unwrap();
        let z = [c(3f64.exp()), c((-30f64).exp())];
        // t = 3 gives ψ = 3·4/(−2) = −6 and s = −30, so ρ(−24) < 3.
        assert!((p.eval_unchecked(z) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rho_is_increasing_and_blows_up() {
        assert_eq!(rho(-1.0), 1.0);
        assert!(rho(-1e-9) > 1e8);
        assert_eq!(rho(0.0), f64::INFINITY);
        assert!(rho(-2.0) < rho(-1.0));
    }
}
