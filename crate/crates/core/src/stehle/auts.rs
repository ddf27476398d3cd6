//! Automorphism families of the model domains and the boundedness check for
//! `u∘F − u`.

use super::{in_domain, ExhaustionFn, StehleError};
use crate::autgroup::{model_generator, parabolic_reflection, preserves, AffineMap2};
use crate::convexlog::{LogDomainModel, Shape};
use crate::rat::to_f64;
use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Serde adapter writing a complex number as `{"re":..,"im":..}`.
mod serde_c {
    use num::complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct C {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        C { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let c = C::deserialize(d)?;
        Ok(Complex64::new(c.re, c.im))
    }
}

/// A holomorphic automorphism of one of the model domains. Angles give the
/// unimodular constants `α = e^{iθ}`, `γ = e^{iθ'}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HoloAut {
    /// `(α(z₁−β)/(1−β̄z₁), γz₂)`, or `γr/z₂` in the second slot when inverting.
    Model4 {
        alpha: f64,
        #[serde(with = "serde_c")]
        beta: Complex64,
        gamma: f64,
        invert: bool,
    },
    /// `(α(z₁−β)/(1−β̄z₁), γ(1−|β|²)^{p/2} z₂/(1−β̄z₁)^p)`.
    Model5 {
        alpha: f64,
        #[serde(with = "serde_c")]
        beta: Complex64,
        gamma: f64,
    },
    /// `(αz₁+β, γ exp(−2αβ̄z₁−|β|²) z₂)`.
    Model6 {
        alpha: f64,
        #[serde(with = "serde_c")]
        beta: Complex64,
        gamma: f64,
    },
    /// `z ↦ (e^{b̃₁+iθ₁} z^{A¹}, e^{b̃₂+iθ₂} z^{A²})` for an affine log map.
    Monomial { map: AffineMap2, args: [f64; 2] },
}

fn mobius(alpha: f64, beta: Complex64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, alpha) * (z - beta) / (Complex64::new(1.0, 0.0) - beta.conj() * z)
}

/// Multiplies by `e^{iθ}`, exactly when `θ` is a multiple of `π/2`.
fn rotate(theta: f64, z: Complex64) -> Complex64 {
    let quarter = theta / (PI / 2.0);
    if quarter == quarter.round() {
        match (quarter.round() as i64).rem_euclid(4) {
            0 => z,
            1 => Complex64::new(-z.im, z.re),
            2 => -z,
            _ => Complex64::new(z.im, -z.re),
        }
    } else {
        Complex64::from_polar(1.0, theta) * z
    }
}

impl HoloAut {
    fn family(&self) -> &'static str {
        match self {
            HoloAut::Model4 { .. } => "model4",
            HoloAut::Model5 { .. } => "model5",
            HoloAut::Model6 { .. } => "model6",
            HoloAut::Monomial { .. } => "monomial",
        }
    }

    /// Checks that the map belongs to the automorphism group of `model`.
    pub fn admissible(&self, model: &LogDomainModel) -> Result<(), StehleError> {
        let rej = |m: &str| Err(StehleError::AutomorphismRejected(m.to_string()));
        if let HoloAut::Monomial { map, .. } = self {
            return if preserves(model, map)?.preserved { Ok(()) } else { rej("the monomial map does not preserve the model") };
        }
        if !model.frame.is_identity() {
            return rej("model families act on unframed models only");
        }
        match (self, &model.shape) {
            (HoloAut::Model4 { beta, invert, .. }, Shape::Model4 { r }) => {
                if beta.norm() >= 1.0 {
                    return rej("|beta| must be below 1");
                }
                if *invert && *r == 0.0 {
                    return rej("the punctured disc admits no inversion");
                }
                Ok(())
            }
            (HoloAut::Model5 { beta, .. }, Shape::Model5 { .. }) if beta.norm() < 1.0 => Ok(()),
            (HoloAut::Model6 { .. }, Shape::Model6 {}) => Ok(()),
            _ => rej(&format!("{} maps do not act on {}", self.family(), model.kind())),
        }
    }

    pub fn apply(&self, model: &LogDomainModel, z: [Complex64; 2]) -> [Complex64; 2] {
        match self {
            HoloAut::Model4 { alpha, beta, gamma, invert } => {
                let r = match model.shape {
                    Shape::Model4 { r } => r,
                    _ => 0.0,
                };
                let w1 = if beta.is_zero() { rotate(*alpha, z[0]) } else { mobius(*alpha, *beta, z[0]) };
                let w2 = if *invert { rotate(*gamma, Complex64::new(r, 0.0) / z[1]) } else { rotate(*gamma, z[1]) };
                [w1, w2]
            }
            HoloAut::Model5 { alpha, beta, gamma } => {
                let p = match model.shape {
                    Shape::Model5 { p } => p,
                    _ => 1.0,
                };
                let denom = Complex64::new(1.0, 0.0) - beta.conj() * z[0];
                let scale = (1.0 - beta.norm_sqr()).powf(p / 2.0);
                [mobius(*alpha, *beta, z[0]), Complex64::from_polar(scale, *gamma) * z[1] / denom.powf(p)]
            }
            HoloAut::Model6 { alpha, beta, gamma } => {
                let a = Complex64::from_polar(1.0, *alpha);
                let e = (-2.0 * a * beta.conj() * z[0] - beta.norm_sqr()).exp();
                [a * z[0] + beta, Complex64::from_polar(1.0, *gamma) * e * z[1]]
            }
            HoloAut::Monomial { map, args } => {
                let e = map.matrix.as_i64().expect("small exponents");
                let mono = |row: [i64; 2]| z[0].powi(row[0] as i32) * z[1].powi(row[1] as i32);
                let coef = |j: usize| Complex64::from_polar(to_f64(&map.shift[j]).exp(), args[j]);
                [coef(0) * mono(e[0]), coef(1) * mono(e[1])]
            }
        }
    }

    /// A closed-form bound for `sup(u∘F − u)`, where one is known.
    pub fn analytic_bound(&self, f: &ExhaustionFn, model: &LogDomainModel) -> Option<f64> {
        let hyp = |b: f64| ((1.0 + b) / (1.0 - b)).ln();
        match (self, f) {
            (HoloAut::Model4 { beta, invert, .. }, ExhaustionFn::U4 { r }) => {
                let inv = if *invert { -r.ln() } else { 0.0 };
                Some(hyp(beta.norm()).max(inv))
            }
            (HoloAut::Model5 { beta, .. }, ExhaustionFn::U5 { p } | ExhaustionFn::U5Rho { p }) => {
                Some(0.5 * p * hyp(beta.norm()))
            }
            (HoloAut::Model6 { .. }, ExhaustionFn::UTilde6 | ExhaustionFn::RhoUTilde6) => Some(0.0),
            (HoloAut::Model6 { beta, .. }, ExhaustionFn::U6) => Some(beta.norm().ln_1p()),
            (HoloAut::Monomial { map, .. }, ExhaustionFn::UParabolic { .. }) => {
                // ρ(s − ψ(t)) is invariant; ±ℓ moves by at most the shift of ℓ.
                let data = model.parabolic_data()?;
                if data.w[0].is_zero() {
                    Some(to_f64(&map.shift[0]).abs())
                } else if data.w[1].is_zero() {
                    Some(to_f64(&map.shift[1]).abs())
                } else {
                    let d = map.apply_f64([0.0, 0.0]);
                    let c = data.coords_f64([0.0, 0.0]);
                    let shifted = data.coords_f64(d);
                    Some((shifted.0 - c.0).abs())
                }
            }
            _ => None,
        }
    }
}

/// Seeded random automorphisms from the model's family. For parabolic
/// models these are the generator, its inverse and square, and the
/// reflection when one exists.
pub fn random_automorphisms(model: &LogDomainModel, count: usize, seed: u64) -> Result<Vec<HoloAut>, StehleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_A075);
    let angle = |rng: &mut ChaCha8Rng| rng.gen_range(0.0..2.0 * PI);
    let disc = |rng: &mut ChaCha8Rng, rad: f64| Complex64::from_polar(rad * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
    let mut out = Vec::new();
    match &model.shape {
        Shape::Model4 { r } if model.frame.is_identity() => {
            for _ in 0..count {
                let invert = *r > 0.0 && rng.gen_bool(0.5);
                out.push(HoloAut::Model4 { alpha: angle(&mut rng), beta: disc(&mut rng, 0.9), gamma: angle(&mut rng), invert });
            }
        }
        Shape::Model5 { .. } if model.frame.is_identity() => {
            for _ in 0..count {
                out.push(HoloAut::Model5 { alpha: angle(&mut rng), beta: disc(&mut rng, 0.9), gamma: angle(&mut rng) });
            }
        }
        Shape::Model6 {} if model.frame.is_identity() => {
            for _ in 0..count {
                out.push(HoloAut::Model6 { alpha: angle(&mut rng), beta: disc(&mut rng, 1.5), gamma: angle(&mut rng) });
            }
        }
        _ => {
            if let Some(g) = model_generator(model) {
                let mut maps = vec![g.clone(), g.inverse()?, g.compose(&g)];
                if let Some(r) = parabolic_reflection(model) {
                    maps.push(r.compose(&g));
                    maps.push(r);
                }
                for map in maps {
                    out.push(HoloAut::Monomial { map, args: [angle(&mut rng), angle(&mut rng)] });
                }
            }
        }
    }
    Ok(out)
}

/// Empirical supremum of `u∘F − u` at growing sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedReport {
    pub automorphism: HoloAut,
    /// `(sample count, sup)` for nested prefixes of one seeded sample.
    pub sups: Vec<(usize, f64)>,
    pub analytic_bound: Option<f64>,
    pub stable: bool,
}

/// Seeded points of C² with moduli in the log image and random arguments.
pub(crate) fn sample_points(model: &LogDomainModel, n: usize, seed: u64) -> Vec<[Complex64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let logs = model.sample_log_points(&mut rng, n);
    logs.iter()
        .map(|x| {
            let a = [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)];
            [Complex64::from_polar(x[0].exp(), a[0]), Complex64::from_polar(x[1].exp(), a[1])]
        })
        .collect()
}

/// Supremum of `u∘F − u` over `n` seeded samples, reported at `n/100`,
/// `n/10` and `n` points.
pub fn check_bounded_above(
    f: &ExhaustionFn,
    model: &LogDomainModel,
    aut: &HoloAut,
    n: usize,
    seed: u64,
) -> Result<BoundedReport, StehleError> {
    aut.admissible(model)?;
    let prep = f.prepare()?;
    let pts = sample_points(model, n, seed);
    let marks = [n / 100, n / 10, n];
    let mut sups = Vec::new();
    let mut sup = f64::NEG_INFINITY;
    let mut outside = 0usize;
    for (i, z) in pts.iter().enumerate() {
        let w = aut.apply(model, *z);
        if !in_domain(f, Some(model), w) {
            outside += 1;
        } else {
            let d = prep.eval_unchecked(w) - prep.eval_unchecked(*z);
            if d.is_nan() {
                outside += 1;
            } else {
                sup = sup.max(d);
            }
        }
        if marks.contains(&(i + 1)) && sups.last().map(|s: &(usize, f64)| s.0) != Some(i + 1) {
            sups.push((i + 1, sup));
        }
    }
    if outside > 0 {
        return Err(StehleError::AutomorphismRejected(format!("{outside} sampled images left the domain")));
    }
    let bound = aut.analytic_bound(f, model);
    let finite = sups.iter().all(|s| s.1.is_finite());
    let stable = finite
        && match (bound, sups.first(), sups.last()) {
            (Some(b), _, Some(last)) => last.1 <= b + 1e-9,
            (None, Some(first), Some(last)) => last.1 - first.1 <= 0.1 * first.1.abs().max(1.0),
            _ => false,
        };
    Ok(BoundedReport { automorphism: aut.clone(), sups, analytic_bound: bound, stable })
}

/// Largest `|ũ(Φ(z)) − ũ(z)|` over `n` samples for each of `maps` random
/// automorphisms of the model with `ũ = log|z₂| + |z₁|²`.
pub fn u_tilde_invariance(n: usize, maps: usize, seed: u64) -> Result<f64, StehleError> {
    let model = LogDomainModel::new(Shape::Model6 {});
    let prep = ExhaustionFn::UTilde6.prepare()?;
    let pts = sample_points(&model, n, seed);
    let mut worst = 0.0f64;
    for aut in random_automorphisms(&model, maps, seed)? {
        for z in &pts {
            let d = prep.eval_unchecked(aut.apply(&model, *z)) - prep.eval_unchecked(*z);
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::Mat2Z;
    use crate::rat::q;

    fn m6() -> LogDomainModel {
        LogDomainModel::new(Shape::Model6 {})
    }

    #[test]
    fn eq10_example_map() {
        let aut = HoloAut::Model6 { alpha: 0.0, beta: Complex64::new(0.5, 0.0), gamma: 0.0 };
        let rep = check_bounded_above(&ExhaustionFn::UTilde6, &m6(), &aut, 10_000, crate::DEFAULT_SEED).unwrap();
        assert!(rep.sups.last().unwrap().1 <= 1e-10);
        let rep = check_bounded_above(&ExhaustionFn::U6, &m6(), &aut, 10_000, crate::DEFAULT_SEED).unwrap();
        assert!(rep.stable);
        assert!(rep.sups.last().unwrap().1 <= 1.5f64.ln() + 1e-12);
        assert_eq!(rep.analytic_bound, Some(1.5f64.ln()));
    }

    #[test]
    fn quarter_turns_give_exact_zero() {
        let model = LogDomainModel::new(Shape::Model4 { r: 0.25 });
        let aut = HoloAut::Model4 { alpha: PI / 2.0, beta: Complex64::new(0.0, 0.0), gamma: PI, invert: false };
        let rep = check_bounded_above(&ExhaustionFn::U4 { r: 0.25 }, &model, &aut, 1000, 7).unwrap();
        assert_eq!(rep.sups.last().unwrap().1, 0.0);
        let rot = HoloAut::Model4 { alpha: 1.0, beta: Complex64::new(0.0, 0.0), gamma: 2.0, invert: false };
        let rep = check_bounded_above(&ExhaustionFn::U4 { r: 0.25 }, &model, &rot, 1000, 7).unwrap();
        assert!(rep.sups.last().unwrap().1.abs() <= 1e-13);
    }

    #[test]
    fn rejects_foreign_maps() {
        let model = LogDomainModel::new(Shape::Model4 { r: 0.0 });
        let inv = HoloAut::Model4 { alpha: 0.0, beta: Complex64::new(0.0, 0.0), gamma: 0.0, invert: true };
        assert!(matches!(inv.admissible(&model), Err(StehleError::AutomorphismRejected(_))));
        let six = HoloAut::Model6 { alpha: 0.0, beta: Complex64::new(0.5, 0.0), gamma: 0.0 };
        assert!(six.admissible(&model).is_err());
        let par = LogDomainModel::parabolic(Mat2Z::new(1, 0, 1, 1), q(-1), crate::convexlog::PsiSpec::Canonical);
        let bad = HoloAut::Monomial { map: AffineMap2::new(Mat2Z::identity(), [q(1), q(0)]), args: [0.0, 0.0] };
        assert!(bad.admissible(&par).is_err());
    }

    #[test]
    fn inversion_swaps_annulus_edges() {
        let model = LogDomainModel::new(Shape::Model4 { r: 0.25 });
        let aut = HoloAut::Model4 { alpha: 0.0, beta: Complex64::new(0.0, 0.0), gamma: 0.0, invert: true };
        let w = aut.apply(&model, [Complex64::new(0.1, 0.0), Complex64::new(0.3, 0.0)]);
        assert!((w[1].re - 0.25 / 0.3).abs() < 1e-15);
    }

    #[test]
    fn invariance_residual_small() {
        assert!(u_tilde_invariance(2000, 3, 11).unwrap() <= 1e-10);
    }

    #[test]
    fn parabolic_families() {
        let par = LogDomainModel::parabolic(Mat2Z::new(1, 0, 2, 1), q(-1), crate::convexlog::PsiSpec::Canonical);
        let auts = random_automorphisms(&par, 10, 3).unwrap();
        assert_eq!(auts.len(), 5);
        let f = ExhaustionFn::UParabolic { matrix: Mat2Z::new(1, 0, 2, 1), beta2: q(-1), psi: crate::convexlog::PsiSpec::Canonical };
        for a in &auts {
            let rep = check_bounded_above(&f, &par, a, 10_000, 5).unwrap();
            assert!(rep.stable, "{rep:?}");
        }
    }
}
