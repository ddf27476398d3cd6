//! Exhaustion checks: sublevel statistics and divergence along sequences
//! that leave the domain.

use super::auts::sample_points;
use super::psh::interior_radius;
use super::{in_domain, ExhaustionFn, StehleError};
use crate::convexlog::LogDomainModel;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: f64,
    /// Sampled points with `u < level`.
    pub count: usize,
    /// `N(c)`: largest norm among those points.
    pub max_norm: f64,
    /// `δ(c)`: smallest estimated distance to the boundary among them.
    pub min_boundary_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceReport {
    /// `boundary` for `b + (x − b)2^{−k}`, `infinity` for rays to infinity.
    pub kind: String,
    /// Log-space start point and direction of the ray.
    pub start: [f64; 2],
    pub direction: [f64; 2],
    pub values: Vec<f64>,
    pub diverges: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustionReport {
    pub levels: Vec<LevelReport>,
    pub sequences: Vec<SequenceReport>,
    pub failures: usize,
    pub pass: bool,
}

/// Approach steps `2^{−k}`; the sequence also stops once points repeat.
const BOUNDARY_STEPS: i32 = 52;
const TAIL: usize = 4;
/// Rays to infinity are sampled at `t = 2^k`, `k ≤ INFINITY_STEPS`, in log
/// coordinates.
const INFINITY_STEPS: i32 = 30;
const START_POINTS: usize = 6;
const RAY_DIRECTIONS: usize = 8;

/// Limit of `exp` of a log ray: zero, a finite modulus, or infinity per
/// coordinate. `None` means the limit escapes to infinity.
fn ray_limit(x: [f64; 2], d: [f64; 2]) -> Option<[Complex64; 2]> {
    let mut z = [Complex64::new(0.0, 0.0); 2];
    for j in 0..2 {
        if d[j] > 1e-12 {
            return None;
        }
        z[j] = if d[j] < -1e-12 { Complex64::new(0.0, 0.0) } else { Complex64::new(x[j].exp(), 0.0) };
    }
    Some(z)
}

/// Sublevel statistics on seeded samples, and divergence of `u` along
/// log-space rays from sampled points towards the boundary and towards
/// infinity. Rays whose limit is an interior point of the function's domain
/// are skipped.
pub fn check_exhaustion(
    f: &ExhaustionFn,
    model: &LogDomainModel,
    levels: &[f64],
    n: usize,
    seed: u64,
) -> Result<ExhaustionReport, StehleError> {
    let prep = f.prepare()?;
    let inside = |z: [Complex64; 2]| in_domain(f, Some(model), z);
    let pts = sample_points(model, n, seed);
    let vals: Vec<f64> = pts.iter().map(|z| prep.eval_unchecked(*z)).collect();
    let mut level_reports = Vec::new();
    for &c in levels {
        let mut rep = LevelReport { level: c, count: 0, max_norm: 0.0, min_boundary_distance: f64::INFINITY };
        for (z, v) in pts.iter().zip(&vals) {
            if *v < c {
                rep.count += 1;
                rep.max_norm = rep.max_norm.max((z[0].norm_sqr() + z[1].norm_sqr()).sqrt());
                let r = interior_radius(f, Some(model), *z, 1e-300).unwrap_or(0.0);
                rep.min_boundary_distance = rep.min_boundary_distance.min(r);
            }
        }
        level_reports.push(rep);
    }
    let top = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0DA);
    let starts = model.sample_log_points(&mut rng, START_POINTS);
    let mut sequences = Vec::new();
    for x in starts {
        let phase = rng.gen_range(0.0..2.0 * PI);
        for k in 0..RAY_DIRECTIONS {
            let th = phase + 2.0 * PI * k as f64 / RAY_DIRECTIONS as f64;
            let d = [th.cos(), th.sin()];
            if let Some(seq) = ray_sequence(&prep, model, &inside, x, d) {
                let diverges = diverges(&seq.values, top);
                sequences.push(SequenceReport { diverges, ..seq });
            }
        }
    }
    let failures = sequences.iter().filter(|s| !s.diverges).count();
    Ok(ExhaustionReport { levels: level_reports, pass: failures == 0 && !sequences.is_empty(), failures, sequences })
}

/// The last value exceeds `top`, and the last `TAIL` values are either
/// strictly increasing or all above `top`.
fn diverges(values: &[f64], top: f64) -> bool {
    if values.len() < TAIL || !values.last().is_some_and(|v| *v > top) {
        return false;
    }
    let tail = &values[values.len() - TAIL..];
    tail.iter().all(|v| *v > top) || tail.windows(2).all(|w| w[1] > w[0])
}

fn ray_sequence(
    prep: &super::PreparedFn,
    model: &LogDomainModel,
    inside: &dyn Fn([Complex64; 2]) -> bool,
    x: [f64; 2],
    d: [f64; 2],
) -> Option<SequenceReport> {
    let at = |t: f64| [x[0] + t * d[0], x[1] + t * d[1]];
    // Find where the ray leaves the log image, if within reach.
    let reach = 2f64.powi(INFINITY_STEPS);
    let mut hi = 1.0;
    while hi <= reach && model.contains_log(at(hi)) {
        hi *= 2.0;
    }
    if hi > reach {
        let limit = ray_limit(x, d);
        if limit.is_some_and(|z| inside(z)) {
            return None;
        }
        let values = (0..=INFINITY_STEPS)
            .map(|k| at(2f64.powi(k)))
            .map(|p| prep.eval_log(p))
            .collect();
        return Some(SequenceReport { kind: "infinity".into(), start: x, direction: d, values, diverges: false });
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if model.contains_log(at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Refine the exit on the final segment, where coordinates near the
    // exit keep full precision, then approach it from the start point.
    let (e, f) = (at(lo), at(hi));
    let seg = |s: f64| [e[0] + s * (f[0] - e[0]), e[1] + s * (f[1] - e[1])];
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if model.contains_log(seg(mid)) {
            a = mid;
        } else {
            b = mid;
        }
    }
    let bnd = seg(a);
    let mut values = Vec::new();
    let mut prev = x;
    for k in 1..=BOUNDARY_STEPS {
        let w = 2f64.powi(-k);
        let p = [bnd[0] + (x[0] - bnd[0]) * w, bnd[1] + (x[1] - bnd[1]) * w];
        if p == prev {
            break;
        }
        values.push(prep.eval_log(p));
        prev = p;
    }
    Some(SequenceReport { kind: "boundary".into(), start: x, direction: d, values, diverges: false })
}
