//! Boundary profiles of the two noncompact model families.
//!
//! `φ` obeys `φ(λt) = φ(t)/λ` on `t > 0` and `ψ` obeys `ψ(t+β₂) = ψ(t) + t`.
//! Tables store a single period and every evaluation reduces through the
//! functional equation, so the equation holds by construction.

use super::ConvexError;
use crate::intmat::QuadraticSurd;
use crate::rat::{q, to_f64, Q};
use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Profile `φ` of a hyperbolic-type log image, evaluated on `|t|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PhiSpec {
    Zero,
    /// `φ(t) = a/|t|`.
    AOverT {
        #[serde(with = "crate::rat::serde_q")]
        a: Q,
    },
    /// Piecewise-linear samples `(|t|, φ)` on the period `[1, λ)`; the first
    /// knot sits at `|t| = 1` and `φ(λ) = φ(1)/λ` closes the period.
    Table {
        #[serde(with = "crate::rat::serde_q2_list")]
        knots: Vec<[Q; 2]>,
    },
}

/// Profile `ψ` of a parabolic-type log image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PsiSpec {
    /// `ψ(t) = t(t − β₂)/(2β₂)`.
    Canonical,
    /// Piecewise-linear samples `(t, ψ)` on one period: `[0, β₂)` when
    /// `β₂ > 0`, `(β₂, 0]` when `β₂ < 0`; the knot `t = 0` is mandatory and
    /// `ψ(β₂) = ψ(0)` closes the period.
    Table {
        #[serde(with = "crate::rat::serde_q2_list")]
        knots: Vec<[Q; 2]>,
    },
}

fn sq(x: &Q) -> QuadraticSurd {
    QuadraticSurd::rational(x.clone())
}

/// Piecewise-linear interpolation through sorted breakpoints.
fn interp(points: &[(QuadraticSurd, QuadraticSurd)], x: &QuadraticSurd) -> QuadraticSurd {
    let idx = points
        .windows(2)
        .position(|w| *x >= w[0].0 && *x <= w[1].0)
        .unwrap_or(points.len().saturating_sub(2));
    let (x0, y0) = &points[idx];
    let (x1, y1) = &points[idx + 1];
    let frac = &(x - x0) / &(x1 - x0);
    y0 + &(&frac * &(y1 - y0))
}

fn interp_f64(points: &[(f64, f64)], x: f64) -> f64 {
    let idx = points
        .windows(2)
        .position(|w| x >= w[0].0 && x <= w[1].0)
        .unwrap_or(points.len().saturating_sub(2));
    let (x0, y0) = points[idx];
    let (x1, y1) = points[idx + 1];
    y0 + (x - x0) / (x1 - x0) * (y1 - y0)
}

fn slopes_monotone(points: &[(QuadraticSurd, QuadraticSurd)], increasing: bool) -> bool {
    let slopes: Vec<QuadraticSurd> = points
        .windows(2)
        .map(|w| &(&w[1].1 - &w[0].1) / &(&w[1].0 - &w[0].0))
        .collect();
    slopes.windows(2).all(|s| {
        let ord = s[0].partial_cmp(&s[1]).unwrap_or(Ordering::Equal);
        if increasing {
            ord != Ordering::Greater
        } else {
            ord != Ordering::Less
        }
    })
}

/// Exact `k` with `λ^k ≤ t < λ^{k+1}` for `t > 0`, `λ > 1`.
pub fn log_floor(lambda: &QuadraticSurd, t: &QuadraticSurd) -> Result<i64, ConvexError> {
    let lf = lambda.to_f64().ln();
    let tf = t.to_f64();
    let mut k = if tf > 0.0 && tf.is_finite() {
        (tf.ln() / lf).floor() as i64
    } else {
        0
    };
    loop {
        let lo = lambda.pow(k);
        let hi = &lo * lambda;
        if t.checked_cmp(&lo)? == Ordering::Less {
            k -= 1;
        } else if t.checked_cmp(&hi)? != Ordering::Less {
            k += 1;
        } else {
            return Ok(k);
        }
    }
}

impl PhiSpec {
    fn period_points(&self, lambda: &QuadraticSurd) -> Vec<(QuadraticSurd, QuadraticSurd)> {
        match self {
            PhiSpec::Table { knots } => {
                let mut pts: Vec<_> = knots.iter().map(|k| (sq(&k[0]), sq(&k[1]))).collect();
                pts.push((lambda.clone(), &sq(&knots[0][1]) / lambda));
                pts
            }
            _ => Vec::new(),
        }
    }

    /// Checks knot placement, nonnegativity and global convexity of the
    /// extension across a period boundary.
    pub fn validate(&self, lambda: &QuadraticSurd) -> Result<(), ConvexError> {
        match self {
            PhiSpec::Zero => Ok(()),
            PhiSpec::AOverT { a } if a.is_negative() => {
                Err(ConvexError::Invalid("a_over_t requires a >= 0".into()))
            }
            PhiSpec::AOverT { .. } => Ok(()),
            PhiSpec::Table { knots } => {
                if knots.is_empty() || knots[0][0] != q(1) {
                    return Err(ConvexError::Invalid("phi table must start at |t| = 1".into()));
                }
                if knots.windows(2).any(|w| w[0][0] >= w[1][0]) {
                    return Err(ConvexError::Invalid("phi knots must increase".into()));
                }
                if sq(&knots[knots.len() - 1][0]) >= *lambda {
                    return Err(ConvexError::Invalid("phi knots must lie below lambda".into()));
                }
                if knots.iter().any(|k| k[1].is_negative()) {
                    return Err(ConvexError::Invalid("phi values must be nonnegative".into()));
                }
                let first = self.period_points(lambda);
                let mut two = first.clone();
                two.extend(first.iter().skip(1).map(|(x, y)| (x * lambda, y / lambda)));
                if !slopes_monotone(&two, true) {
                    return Err(ConvexError::Invalid("phi table is not convex".into()));
                }
                Ok(())
            }
        }
    }

    /// Exact value at `|t| = t > 0`.
    pub fn eval_exact(&self, lambda: &QuadraticSurd, t: &QuadraticSurd) -> Result<QuadraticSurd, ConvexError> {
        if !t.is_positive() {
            return Err(ConvexError::DomainSignViolation);
        }
        match self {
            PhiSpec::Zero => Ok(QuadraticSurd::zero()),
            PhiSpec::AOverT { a } => Ok(sq(a).checked_div(t)?),
            PhiSpec::Table { .. } => {
                let k = log_floor(lambda, t)?;
                let t0 = t.checked_mul(&lambda.pow(-k))?;
                let base = interp(&self.period_points(lambda), &t0);
                Ok(base.checked_mul(&lambda.pow(-k))?)
            }
        }
    }

    /// Double-precision value at `|t| = t > 0`.
    pub fn eval_f64(&self, lambda: f64, t: f64) -> f64 {
        match self {
            PhiSpec::Zero => 0.0,
            PhiSpec::AOverT { a } => to_f64(a) / t,
            PhiSpec::Table { knots } => {
                let mut k = (t.ln() / lambda.ln()).floor();
                let mut t0 = t / lambda.powf(k);
                if t0 >= lambda {
                    t0 /= lambda;
                    k += 1.0;
                } else if t0 < 1.0 {
                    t0 *= lambda;
                    k -= 1.0;
                }
                let mut pts: Vec<(f64, f64)> = knots.iter().map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect();
                pts.push((lambda, to_f64(&knots[0][1]) / lambda));
                interp_f64(&pts, t0) / lambda.powf(k)
            }
        }
    }

    /// Supremum of `t·φ(t)` over `t > 0`; the product is `λ`-periodic, so
    /// one period suffices.
    pub fn sup_t_phi(&self, lambda: f64) -> f64 {
        match self {
            PhiSpec::Zero => 0.0,
            PhiSpec::AOverT { a } => to_f64(a),
            PhiSpec::Table { knots } => {
                let mut pts: Vec<(f64, f64)> = knots.iter().map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect();
                pts.push((lambda, to_f64(&knots[0][1]) / lambda));
                let mut best = f64::NEG_INFINITY;
                for w in pts.windows(2) {
                    let (x0, y0) = w[0];
                    let (x1, y1) = w[1];
                    let beta = (y1 - y0) / (x1 - x0);
                    let alpha = y0 - beta * x0;
                    let f = |x: f64| x * (alpha + beta * x);
                    best = best.max(f(x0)).max(f(x1));
                    if beta != 0.0 {
                        let vx = -alpha / (2.0 * beta);
                        if vx > x0 && vx < x1 {
                            best = best.max(f(vx));
                        }
                    }
                }
                best
            }
        }
    }

    /// Breakpoints `|t|` of one period (empty for closed-form families).
    pub fn period_breakpoints(&self) -> Vec<Q> {
        match self {
            PhiSpec::Table { knots } => knots.iter().map(|k| k[0].clone()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, PhiSpec::Table { .. })
    }
}

impl PsiSpec {
    /// Breakpoints of the fundamental period in ascending `t`, including the
    /// closing endpoint `(β₂, ψ(0))`.
    fn period_points(&self, beta2: &Q) -> Vec<(Q, Q)> {
        match self {
            PsiSpec::Canonical => Vec::new(),
            PsiSpec::Table { knots } => {
                let psi0 = knots.iter().find(|k| k[0].is_zero()).map(|k| k[1].clone()).unwrap_or_default();
                let mut pts: Vec<(Q, Q)> = knots.iter().map(|k| (k[0].clone(), k[1].clone())).collect();
                pts.push((beta2.clone(), psi0));
                pts.sort_by(|a, b| a.0.cmp(&b.0));
                pts
            }
        }
    }

    pub fn validate(&self, beta2: &Q) -> Result<(), ConvexError> {
        if beta2.is_zero() {
            return Err(ConvexError::Invalid("beta2 must be nonzero".into()));
        }
        let PsiSpec::Table { knots } = self else {
            return Ok(());
        };
        if !knots.iter().any(|k| k[0].is_zero()) {
            return Err(ConvexError::Invalid("psi table needs a knot at t = 0".into()));
        }
        if knots.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(ConvexError::Invalid("psi knots must increase".into()));
        }
        let inside = |t: &Q| {
            if beta2.is_positive() {
                !t.is_negative() && t < beta2
            } else {
                !t.is_positive() && t > beta2
            }
        };
        if !knots.iter().all(|k| inside(&k[0])) {
            return Err(ConvexError::Invalid("psi knots must lie in one period".into()));
        }
        // Three consecutive periods cover both junction types.
        let base = self.period_points(beta2);
        let mut pts: Vec<(QuadraticSurd, QuadraticSurd)> = Vec::new();
        for n in -1..=1i64 {
            for (i, (t, y)) in base.iter().enumerate() {
                if n > -1 && i == 0 {
                    continue;
                }
                let shift = q(n) * beta2;
                let tt = t + &shift;
                let val = self.eval_rational(beta2, &tt);
                debug_assert!(val == *y || n != 0);
                pts.push((sq(&tt), sq(&val)));
            }
        }
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.dedup_by(|a, b| a.0 == b.0);
        if !slopes_monotone(&pts, beta2.is_positive()) {
            let word = if beta2.is_positive() { "convex" } else { "concave" };
            return Err(ConvexError::Invalid(format!("psi table is not {word}")));
        }
        Ok(())
    }

    fn eval_rational(&self, beta2: &Q, t: &Q) -> Q {
        self.eval_exact(beta2, &sq(t))
            .ok()
            .and_then(|v| v.as_rational().cloned())
            .expect("rational input gives rational psi")
    }

    /// Exact value at any real surd `t`.
    pub fn eval_exact(&self, beta2: &Q, t: &QuadraticSurd) -> Result<QuadraticSurd, ConvexError> {
        match self {
            PsiSpec::Canonical => {
                let num = t.checked_mul(&t.add_rational(&-beta2.clone()))?;
                Ok(num.scale(&(Q::from_integer(BigInt::from(1)) / (q(2) * beta2))))
            }
            PsiSpec::Table { .. } => {
                let n = t.scale(&(Q::from_integer(BigInt::from(1)) / beta2)).floor();
                let nq = Q::from_integer(n.clone());
                let t0 = t.add_rational(&-(&nq * beta2));
                let base = interp(
                    &self
                        .period_points(beta2)
                        .into_iter()
                        .map(|(x, y)| (sq(&x), sq(&y)))
                        .collect::<Vec<_>>(),
                    &t0,
                );
                let tri = Q::new(&n * (&n - 1), BigInt::from(2)) * beta2;
                Ok(&(&base + &t0.scale(&nq)) + &sq(&tri))
            }
        }
    }

    pub fn eval_f64(&self, beta2_q: &Q, t: f64) -> f64 {
        PsiSpec::eval_with(to_f64(beta2_q), &self.period_points_f64(beta2_q), t)
    }

    /// Knots of one period in double precision; empty for the canonical
    /// family.
    pub fn period_points_f64(&self, beta2: &Q) -> Vec<(f64, f64)> {
        match self {
            PsiSpec::Canonical => Vec::new(),
            PsiSpec::Table { .. } => self.period_points(beta2).iter().map(|(x, y)| (to_f64(x), to_f64(y))).collect(),
        }
    }

    /// Value at `t` from precomputed period knots (canonical when `pts` is
    /// empty).
    pub fn eval_with(beta2: f64, pts: &[(f64, f64)], t: f64) -> f64 {
        if pts.is_empty() {
            return t * (t - beta2) / (2.0 * beta2);
        }
        let n = (t / beta2).floor();
        let t0 = t - n * beta2;
        interp_f64(pts, t0) + n * t0 + beta2 * n * (n - 1.0) / 2.0
    }

    /// Breakpoints of one period (empty for the canonical family).
    pub fn period_breakpoints(&self) -> Vec<Q> {
        match self {
            PsiSpec::Table { knots } => knots.iter().map(|k| k[0].clone()).collect(),
            PsiSpec::Canonical => Vec::new(),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, PsiSpec::Canonical)
    }

    /// The profile `t ↦ −ψ(−t)`, which has period `−β₂` and satisfies the
    /// same functional equation.
    pub fn reflected(&self) -> PsiSpec {
        match self {
            PsiSpec::Canonical => PsiSpec::Canonical,
            PsiSpec::Table { knots } => {
                let mut k: Vec<[Q; 2]> = knots.iter().map(|[t, y]| [-t.clone(), -y.clone()]).collect();
                k.reverse();
                PsiSpec::Table { knots: k }
            }
        }
    }
}
