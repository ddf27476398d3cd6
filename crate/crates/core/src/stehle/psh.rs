//! Finite-difference Levi form estimates.
//!
//! Along a complex line `ζ ↦ z + ζd`, the mean of `u` over a circle of radius
//! `h` satisfies `M(h) = u(z) + (h²/4)Δu + O(h⁴)`; two radii and Richardson
//! extrapolation give the Laplacian to `O(h⁴)`, which equals `4·d*Hd` for
//! the Levi matrix `H`.

use super::{in_domain, ExhaustionFn, PreparedFn, StehleError};
use crate::convexlog::LogDomainModel;
use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Grid of base points: `radial²` seeded log-moduli nodes times an
/// `angular × angular` grid of arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub seed: u64,
    /// Stencil radius as a fraction of the local interior radius.
    pub h_fraction: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { radial: 20, angular: 20, seed: crate::DEFAULT_SEED, h_fraction: 1.0 / 32.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PshReport {
    /// Smallest Levi eigenvalue divided by `max(1, ‖H‖)`.
    pub min_eigen: f64,
    /// Smallest Levi eigenvalue without normalisation.
    pub min_eigen_raw: f64,
    /// Base point attaining `min_eigen`, as `(|z₁|, arg z₁, |z₂|, arg z₂)`.
    pub worst_point: [f64; 4],
    pub points_checked: usize,
    pub points_skipped_at_kinks: usize,
    /// Largest relative mismatch between the two spare directions and the
    /// reconstructed Hermitian form.
    pub reconstruction_residual: f64,
    /// Largest normalised rounding bound of the difference quotients. A point
    /// fails when its eigenvalue is below `−(tol + allowance)`.
    pub rounding_allowance: f64,
    pub smallest_step: f64,
    pub tol: f64,
    pub pass: bool,
}

const CIRCLE: usize = 16;
/// Smallest interior radius, relative to `max(1, |z|)`, at which the
/// stencil is resolved in double precision.
pub(crate) const RESOLVABLE: f64 = 1e-4;

fn directions() -> [[Complex64; 2]; 8] {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, FRAC_1_SQRT_2);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let s5 = 5f64.sqrt();
    [
        [one, zero],
        [zero, one],
        [r, r],
        [r, -r],
        [r, i],
        [r, -i],
        [Complex64::new(1.0 / s5, 0.0), Complex64::new(2.0 / s5, 0.0)],
        [Complex64::new(2.0 / s5, 0.0), Complex64::new(0.0, 1.0 / s5)],
    ]
}

/// Largest radius `2^{−k} ≤ 1`, not below `floor`, such that the closed
/// polydisc of that radius about `z` lies in the function's domain.
///
/// The moduli of the polydisc fill the box `∏[|z_j| − r, |z_j| + r]`. The
/// domain is a logarithmically convex Reinhardt domain that is complete in
/// every axis direction it meets, so the box lies inside once its four
/// corners do (a lower corner clamped to `0` stands for the axis).
pub(crate) fn interior_radius(
    f: &ExhaustionFn,
    model: Option<&LogDomainModel>,
    z: [Complex64; 2],
    floor: f64,
) -> Option<f64> {
    let m = [z[0].norm(), z[1].norm()];
    let corner = |r: f64, a: f64, b: f64| {
        let c = [(m[0] + a * r).max(0.0), (m[1] + b * r).max(0.0)];
        in_domain(f, model, [Complex64::new(c[0], 0.0), Complex64::new(c[1], 0.0)])
    };
    let mut r: f64 = 1.0;
    while r >= floor {
        if corner(r, -1.0, -1.0) && corner(r, -1.0, 1.0) && corner(r, 1.0, -1.0) && corner(r, 1.0, 1.0) {
            return Some(r);
        }
        r *= 0.5;
    }
    None
}

/// Interior radius, further limited to half the modulus on the enlarged
/// axis so that stencils never straddle the hyperplane where the
/// logarithmic branch is singular. `None` below the resolvable floor.
fn stencil_radius(
    f: &ExhaustionFn,
    enlarged: Option<usize>,
    model: &LogDomainModel,
    m: [f64; 2],
) -> Option<f64> {
    let floor = RESOLVABLE * m[0].max(m[1]).max(1.0);
    let z = [Complex64::new(m[0], 0.0), Complex64::new(m[1], 0.0)];
    let mut r = interior_radius(f, Some(model), z, floor)?;
    if let Some(j) = enlarged {
        while m[j] > 0.0 && r > 0.5 * m[j] {
            r *= 0.5;
        }
    }
    (r >= floor).then_some(r)
}

/// Laplacian of one branch along the complex line through `z` in direction
/// `d`, with a bound on its rounding error.
fn line_laplacian(p: &PreparedFn, branch: usize, z: [Complex64; 2], d: [Complex64; 2], h: f64) -> (f64, f64) {
    let mut big: f64 = 0.0;
    let mut mean = |rad: f64| {
        let mut s = 0.0;
        for k in 0..CIRCLE {
            let zeta = Complex64::from_polar(rad, 2.0 * PI * (k as f64 + 0.5) / CIRCLE as f64);
            let du = p.branch_deltas(z, [zeta * d[0], zeta * d[1]]).vals[branch];
            big = big.max(du.abs());
            s += du;
        }
        s / CIRCLE as f64
    };
    let dh = 4.0 * mean(h) / (h * h);
    let dh2 = 4.0 * mean(h / 2.0) / (h * h / 4.0);
    // Increments carry a few ulps of relative error; the quotient by
    // `(h/2)²` and the Richardson weights amplify them at most 32-fold.
    ((4.0 * dh2 - dh) / 3.0, 32.0 * f64::EPSILON * big / (h * h))
}

struct Levi {
    min_eigen: f64,
    scale: f64,
    residual: f64,
    rounding: f64,
}

fn levi_at(p: &PreparedFn, branch: usize, z: [Complex64; 2], h: f64) -> Levi {
    let dirs = directions();
    let mut rounding: f64 = 0.0;
    let qd: Vec<f64> = dirs
        .iter()
        .map(|d| {
            let (lap, err) = line_laplacian(p, branch, z, *d, h);
            rounding = rounding.max(err / 4.0);
            lap / 4.0
        })
        .collect();
    let h11 = qd[0];
    let h22 = qd[1];
    let re12 = (qd[2] - qd[3]) / 2.0;
    let im12 = -(qd[4] - qd[5]) / 2.0;
    let half_tr = (h11 + h22) / 2.0;
    let disc = (((h11 - h22) / 2.0).powi(2) + re12 * re12 + im12 * im12).sqrt();
    let form = |d: [Complex64; 2]| {
        let a = d[0].norm_sqr() * h11 + d[1].norm_sqr() * h22;
        let cross = d[0].conj() * Complex64::new(re12, im12) * d[1];
        a + 2.0 * cross.re
    };
    let scale = qd.iter().fold(1.0f64, |m, v| m.max(v.abs())).max(h11.abs() + h22.abs());
    let residual = (6..8).map(|k| (form(dirs[k]) - qd[k]).abs() / scale).fold(0.0, f64::max);
    let min_dir = qd.iter().copied().fold(f64::INFINITY, f64::min);
    Levi { min_eigen: (half_tr - disc).min(min_dir), scale, residual, rounding }
}

/// Seeded log-moduli nodes at which the stencil is resolvable. Nodes drawn
/// too close to the boundary are redrawn.
fn resolvable_nodes(
    f: &ExhaustionFn,
    enlarged: Option<usize>,
    model: &LogDomainModel,
    grid: &GridSpec,
) -> Result<Vec<[f64; 2]>, StehleError> {
    let want = grid.radial * grid.radial;
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut out = Vec::with_capacity(want);
    let mut last = [0.0; 4];
    for _ in 0..50 {
        for x in model.sample_log_points(&mut rng, want) {
            let m = [x[0].exp(), x[1].exp()];
            if stencil_radius(f, enlarged, model, m).is_some() {
                out.push(x);
                if out.len() == want {
                    return Ok(out);
                }
            } else {
                last = [m[0], 0.0, m[1], 0.0];
            }
        }
    }
    Err(StehleError::GridTouchesBoundary(last))
}

/// Minimum normalised Levi eigenvalue of `f` over a grid inside `model`.
///
/// At each base point the branch attaining the maximum is differentiated;
/// points where the top two branches are within one stencil step are
/// skipped.
pub fn check_psh(f: &ExhaustionFn, model: &LogDomainModel, grid: &GridSpec, tol: f64) -> Result<PshReport, StehleError> {
    let prep = f.prepare()?;
    let enlarged = f.enlarged_axis();
    let nodes = resolvable_nodes(f, enlarged, model, grid)?;
    let mut rep = PshReport {
        min_eigen: f64::INFINITY,
        min_eigen_raw: f64::INFINITY,
        worst_point: [0.0; 4],
        points_checked: 0,
        points_skipped_at_kinks: 0,
        reconstruction_residual: 0.0,
        rounding_allowance: 0.0,
        smallest_step: f64::INFINITY,
        tol,
        pass: false,
    };
    let na = grid.angular.max(1);
    let mut violations = 0;
    for x in &nodes {
        let m = [x[0].exp(), x[1].exp()];
        let r = stencil_radius(f, enlarged, model, m).ok_or(StehleError::GridTouchesBoundary([m[0], 0.0, m[1], 0.0]))?;
        let h = r * grid.h_fraction;
        for a1 in 0..na {
            for a2 in 0..na {
                let th = [2.0 * PI * a1 as f64 / na as f64, 2.0 * PI * a2 as f64 / na as f64];
                let z = [Complex64::from_polar(m[0], th[0]), Complex64::from_polar(m[1], th[1])];
                let tag = [m[0], th[0], m[1], th[1]];
                let (branch, lead) = prep.branches(z).active();
                if lead <= h {
                    rep.points_skipped_at_kinks += 1;
                    continue;
                }
                let levi = levi_at(&prep, branch, z, h);
                rep.points_checked += 1;
                rep.smallest_step = rep.smallest_step.min(h);
                rep.reconstruction_residual = rep.reconstruction_residual.max(levi.residual);
                let allowance = levi.rounding / levi.scale;
                rep.rounding_allowance = rep.rounding_allowance.max(allowance);
                if levi.min_eigen / levi.scale < -(tol + allowance) {
                    violations += 1;
                }
                rep.min_eigen_raw = rep.min_eigen_raw.min(levi.min_eigen);
                let normed = levi.min_eigen / levi.scale;
                if normed < rep.min_eigen {
                    rep.min_eigen = normed;
                    rep.worst_point = tag;
                }
            }
        }
    }
    rep.pass = rep.points_checked > 0 && violations == 0;
    Ok(rep)
}
