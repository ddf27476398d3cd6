//! Numerical realisation of the Coeuré–Loeb construction for hyperbolic-type
//! domains.
//!
//! For `R > 1` the disc map `f_R(ζ) = log i(R+ζ)/(R−ζ)` has `0 < Im f_R < π`
//! and `Re f_R(0) = 0`. Holomorphic `g_R`, `h_R` on the closed disc are
//! obtained from their boundary imaginary parts
//!
//! ```text
//! Im g_R = s·e^{Re f_R},   Im h_R = s·a·e^{−Re f_R}   on |ζ| = 1,
//! ```
//!
//! where `s = ±1` selects the branch `Im ζ₁ ≷ 0` and `a` has sign `s`. The
//! harness checks that `g_R v + h_R w` stays in the tube over the log image,
//! that the boundary is reduced by the deck group into fixed compact
//! intervals, and that the centre values diverge as `R → 1⁺`.

use crate::convexlog::{LogDomainModel, PhiSpec, Sign};
use crate::intmat::{Mat2Z, QuadraticSurd};
use crate::serreclass::HyperbolicCertificate;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoeureLoebError {
    #[error("the model is not of hyperbolic type")]
    NotHyperbolic,
    #[error("invalid radius list: {0}")]
    InvalidRadius(String),
    #[error("sample count {0} must be a power of two, at least 16")]
    InvalidResolution(usize),
    #[error("spectral tail energy {tail:.3e} exceeds 1e-10 at N = {n}, R = {r}")]
    ResolutionTooLow { n: usize, r: f64, tail: f64 },
    #[error("spectral and quadrature values differ by {0:.3e}")]
    CrossValidation(f64),
    #[error("membership margin {margin:.3e} at zeta = {re} + {im}i")]
    MarginViolation { re: f64, im: f64, margin: f64 },
    #[error("{what} = {value} outside its interval at theta = {theta}")]
    IntervalViolation { theta: f64, what: String, value: f64 },
}

/// Spectral tail energy above which the sampling is declared too coarse.
pub const TAIL_TOL: f64 = 1e-10;
/// Agreement required between the spectral and quadrature evaluations.
pub const CROSS_TOL: f64 = 1e-8;
/// Slack at the closed ends of the reduction intervals.
pub const INTERVAL_SLACK: f64 = 1e-9;
pub const DEFAULT_R_LIST: [f64; 4] = [1.5, 1.1, 1.01, 1.001];
const CROSS_POINTS: usize = 10;
const CROSS_RADIUS: f64 = 0.9;

/// Parameters of the construction for one hyperbolic-type domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CLParams {
    pub matrix: Mat2Z,
    pub lambda: QuadraticSurd,
    pub lambda_f64: f64,
    /// Eigendirections for `λ` and `1/λ`, oriented as in the log image.
    pub v: [f64; 2],
    pub w: [f64; 2],
    pub phi: PhiSpec,
    /// Signed constant with `a/t > φ(t)` on the branch.
    pub a: f64,
    /// `|a| − sup |t|φ(|t|)`.
    pub margin: f64,
    pub sign: Sign,
}

/// `a = s·(sup tφ(t) + 1)`, with `sup` over one period of the `λ`-periodic
/// product `tφ(t)`. Returns `(a, margin)`.
pub fn choose_a(phi: &PhiSpec, lambda: f64, sign: Sign) -> (f64, f64) {
    let sup = phi.sup_t_phi(lambda).max(0.0);
    (sign.as_f64() * (sup + 1.0), 1.0)
}

impl CLParams {
    fn build(matrix: Mat2Z, lambda: QuadraticSurd, v: [f64; 2], w: [f64; 2], phi: PhiSpec, sign: Sign) -> Self {
        let lambda_f64 = lambda.to_f64();
        let (a, margin) = choose_a(&phi, lambda_f64, sign);
        CLParams { matrix, lambda, lambda_f64, v, w, phi, a, margin, sign }
    }

    /// Parameters of a hyperbolic-type model on its own branch.
    pub fn from_model(model: &LogDomainModel) -> Result<Self, CoeureLoebError> {
        let d = model.hyperbolic_data().ok_or(CoeureLoebError::NotHyperbolic)?;
        let f = |x: &crate::intmat::SurdVec| [x[0].to_f64(), x[1].to_f64()];
        Ok(Self::build(d.matrix, d.lambda, f(&d.v), f(&d.w), d.phi, d.t_sign))
    }

    pub fn from_certificate(c: &HyperbolicCertificate) -> Self {
        Self::build(c.matrix.clone(), c.lambda.clone(), c.v.to_f64(), c.w.to_f64(), c.phi.clone(), c.t_sign)
    }

    /// The same domain data on the other branch.
    pub fn with_sign(&self, sign: Sign) -> Self {
        Self::build(self.matrix.clone(), self.lambda.clone(), self.v, self.w, self.phi.clone(), sign)
    }

    fn s(&self) -> f64 {
        self.sign.as_f64()
    }
}

/// `f_R(ζ) = log i(R+ζ)/(R−ζ)`, principal branch.
pub fn f_r(r: f64, z: Complex64) -> Complex64 {
    let one = Complex64::new(r, 0.0);
    (Complex64::i() * (one + z) / (one - z)).ln()
}

/// A holomorphic function on the closed disc determined by the imaginary
/// part of its boundary values, normalised by `Re G(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskFn {
    pub samples: Vec<f64>,
    /// Taylor coefficients `G = Σ_{k≤N/2} c_k ζ^k`.
    coeffs: Vec<Complex64>,
    /// Two-sided energy of the Fourier modes `N/4 < |k| ≤ N/2`.
    pub tail_energy: f64,
}

impl DiskFn {
    /// Spectral conjugation of boundary samples `Im G(e^{2πij/N})`.
    pub fn from_samples(samples: &[f64]) -> Result<DiskFn, CoeureLoebError> {
        let n = samples.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(CoeureLoebError::InvalidResolution(n));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let hat: Vec<Complex64> = buf.iter().map(|c| c / n as f64).collect();
        let half = n / 2;
        let i = Complex64::i();
        let mut coeffs = Vec::with_capacity(half + 1);
        coeffs.push(i * hat[0].re);
        for c in &hat[1..half] {
            coeffs.push(2.0 * i * c);
        }
        coeffs.push(i * hat[half].re);
        let tail_energy = 2.0 * hat[n / 4 + 1..half].iter().map(|c| c.norm_sqr()).sum::<f64>() + hat[half].norm_sqr();
        Ok(DiskFn { samples: samples.to_vec(), coeffs, tail_energy })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Values at `ρe^{2πik/m}`, `k = 0..m`, by folding the coefficients
    /// modulo `m` and one inverse FFT.
    pub fn eval_circle(&self, rho: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut p = 1.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            buf[j % m] += c * p;
            p *= rho;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64)
    }
}

/// Schwarz integral `G(z) = (i/2π)∫ u(θ)(e^{iθ}+z)/(e^{iθ}−z) dθ` by the
/// midpoint rule on `m` nodes.
pub fn schwarz_quadrature(u: &dyn Fn(f64) -> f64, z: Complex64, m: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
        let e = Complex64::from_polar(1.0, th);
        acc += u(th) * (e + z) / (e - z);
    }
    Complex64::i() * acc / m as f64
}

/// Node count for the quadrature oracle: fine enough for the `1/(R−1)`
/// boundary peak and for the kernel at the test radius.
pub fn quadrature_nodes(r: f64) -> usize {
    ((64.0 / (r - 1.0)).max(1024.0)).log2().ceil().exp2() as usize
}

/// A power of two `N ≥ 256` scaling like `64/(R−1)`.
pub fn scaled_resolution(r: f64) -> usize {
    ((64.0 / (r - 1.0)).max(256.0)).log2().ceil().exp2() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhSolution {
    pub r: f64,
    pub g: DiskFn,
    pub h: DiskFn,
    /// Largest relative spectral-versus-quadrature difference.
    pub cross_check: f64,
    /// Largest normalised Cauchy–Riemann residual over the test grid.
    pub cr_residual: f64,
    /// Largest relative error of `Im g`, `Im h` between boundary samples.
    pub boundary_interp_error: f64,
}

fn check_n(n: usize) -> Result<(), CoeureLoebError> {
    if n < 16 || !n.is_power_of_two() {
        return Err(CoeureLoebError::InvalidResolution(n));
    }
    Ok(())
}

/// Solves for `g_R`, `h_R` from `N` boundary samples and cross-checks them
/// against the Schwarz quadrature at seeded interior points.
pub fn solve_gh(params: &CLParams, r: f64, n: usize) -> Result<GhSolution, CoeureLoebError> {
    check_n(n)?;
    if r.is_nan() || r <= 1.0 {
        return Err(CoeureLoebError::InvalidRadius(format!("R = {r} must exceed 1")));
    }
    let s = params.s();
    let a = params.a;
    let data_g = move |th: f64| s * f_r(r, Complex64::from_polar(1.0, th)).re.exp();
    let data_h = move |th: f64| s * a * (-f_r(r, Complex64::from_polar(1.0, th)).re).exp();
    let nodes: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
    let g = DiskFn::from_samples(&nodes.iter().map(|&t| data_g(t)).collect::<Vec<_>>())?;
    let h = DiskFn::from_samples(&nodes.iter().map(|&t| data_h(t)).collect::<Vec<_>>())?;
    let tail = g.tail_energy.max(h.tail_energy / (a * a));
    if tail > TAIL_TOL {
        return Err(CoeureLoebError::ResolutionTooLow { n, r, tail });
    }

    let m = quadrature_nodes(r);
    let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
    let mut cross_check: f64 = 0.0;
    for _ in 0..CROSS_POINTS {
        let z = Complex64::from_polar(CROSS_RADIUS * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
        for (f, u) in [(&g, &data_g as &dyn Fn(f64) -> f64), (&h, &data_h)] {
            let spec = f.eval(z);
            let quad = schwarz_quadrature(u, z, m);
            cross_check = cross_check.max((spec - quad).norm() / spec.norm().max(1.0));
        }
    }
    if cross_check > CROSS_TOL {
        return Err(CoeureLoebError::CrossValidation(cross_check));
    }

    let cr_residual = cauchy_riemann(&g).max(cauchy_riemann(&h));
    let mut boundary_interp_error: f64 = 0.0;
    for j in (0..n).step_by((n / 512).max(1)) {
        let th = 2.0 * PI * (j as f64 + 0.5) / n as f64;
        let z = Complex64::from_polar(1.0, th);
        for (f, u) in [(&g, &data_g as &dyn Fn(f64) -> f64), (&h, &data_h)] {
            let want = u(th);
            boundary_interp_error = boundary_interp_error.max((f.eval(z).im - want).abs() / want.abs().max(1.0));
        }
    }
    Ok(GhSolution { r, g, h, cross_check, cr_residual, boundary_interp_error })
}

/// Cauchy–Riemann residual of the real and imaginary parts of `f`, from
/// Richardson-extrapolated central differences on a 32-point grid in
/// `|ζ| ≤ 0.8`, relative to `max(1, |f'|)`.
pub fn cauchy_riemann(f: &DiskFn) -> f64 {
    let step = 1e-3;
    let diff = |z: Complex64, d: Complex64| {
        let c = |h: f64| (f.eval(z + d * h) - f.eval(z - d * h)) / (2.0 * h);
        (4.0 * c(step / 2.0) - c(step)) / 3.0
    };
    let mut worst: f64 = 0.0;
    for i in 1..=4 {
        for k in 0..8 {
            let z = Complex64::from_polar(0.2 * i as f64, 2.0 * PI * k as f64 / 8.0);
            let dx = diff(z, Complex64::new(1.0, 0.0));
            let dy = diff(z, Complex64::i());
            let r1 = dx.re - dy.im;
            let r2 = dy.re + dx.im;
            let scale = f.derivative(z).norm().max(1.0);
            worst = worst.max(r1.abs().max(r2.abs()) / scale);
        }
    }
    worst
}

/// Polar grid of the closed disc: `radial + 1` radii from 0 to 1 inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid { radial: 32, angular: 256 }
    }
}

impl ScanGrid {
    fn point_count(&self) -> usize {
        1 + self.radial * self.angular
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub points: usize,
    /// Smallest `Im h − φ(|Im g|)` over the grid.
    pub min_margin: f64,
    pub worst_point: [f64; 2],
    pub center_margin: f64,
}

fn margin(params: &CLParams, g: Complex64, h: Complex64) -> f64 {
    let t = params.s() * g.im;
    if t <= 0.0 {
        return f64::NEG_INFINITY;
    }
    h.im - params.phi.eval_f64(params.lambda_f64, t)
}

/// Checks `φ(Im g_R) − Im h_R < 0`, with `Im g_R` on the branch side, on
/// the closed disc.
pub fn membership_scan(params: &CLParams, sol: &GhSolution, grid: &ScanGrid) -> Result<MembershipReport, CoeureLoebError> {
    let mut rep = MembershipReport {
        points: grid.point_count(),
        min_margin: f64::INFINITY,
        worst_point: [0.0; 2],
        center_margin: 0.0,
    };
    let origin = Complex64::new(0.0, 0.0);
    let mut visit = |z: Complex64, g: Complex64, h: Complex64| {
        let m = margin(params, g, h);
        if m < rep.min_margin {
            rep.min_margin = m;
            rep.worst_point = [z.re, z.im];
        }
        if m > 0.0 {
            Ok(m)
        } else {
            Err(CoeureLoebError::MarginViolation { re: z.re, im: z.im, margin: m })
        }
    };
    let center = visit(origin, sol.g.eval(origin), sol.h.eval(origin))?;
    for i in 1..=grid.radial {
        let rho = i as f64 / grid.radial as f64;
        let (gs, hs) = (sol.g.eval_circle(rho, grid.angular), sol.h.eval_circle(rho, grid.angular));
        for k in 0..grid.angular {
            let z = Complex64::from_polar(rho, 2.0 * PI * k as f64 / grid.angular as f64);
            visit(z, gs[k], hs[k])?;
        }
    }
    rep.center_margin = center;
    Ok(rep)
}

/// One boundary sample of the deck-group reduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionRow {
    pub theta: f64,
    pub re_f: f64,
    pub im_g: f64,
    pub im_h: f64,
    pub k: i64,
    /// `s·λ^{−k} Im g`, expected in `[1, λ)`.
    pub reduced_g: f64,
    /// `λ^{k} Im h`, expected in `(|a|/λ, |a|]`.
    pub reduced_h: f64,
    /// Reduced first coordinate `f/log λ − k`.
    pub reduced_f: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub samples: usize,
    pub in_interval: usize,
    /// Largest relative mismatch between `A^{−k}(g v + h w)` and
    /// `λ^{−k} g v + λ^{k} h w`.
    pub action_residual: f64,
    #[serde(skip)]
    pub rows: Vec<ReductionRow>,
}

fn within(x: f64, lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> bool {
    let lo_ok = if lo_closed { x >= lo - INTERVAL_SLACK } else { x > lo - INTERVAL_SLACK };
    let hi_ok = if hi_closed { x <= hi + INTERVAL_SLACK } else { x < hi + INTERVAL_SLACK };
    lo_ok && hi_ok
}

/// Reduces `n_theta` boundary points by the deck element with
/// `ζ₀ = −⌊Re f_R/log λ⌋` and checks the compact intervals, comparing the
/// reduced fibre point with the integer matrix action.
pub fn reduction_check(params: &CLParams, sol: &GhSolution, n_theta: usize) -> Result<ReductionReport, CoeureLoebError> {
    let lam = params.lambda_f64;
    let ll = lam.ln();
    let abs_a = params.a.abs();
    let s = params.s();
    let mut rep = ReductionReport { samples: n_theta, in_interval: 0, action_residual: 0.0, rows: Vec::with_capacity(n_theta) };
    let det = params.v[0] * params.w[1] - params.v[1] * params.w[0];
    let (gs, hs) = (sol.g.eval_circle(1.0, n_theta), sol.h.eval_circle(1.0, n_theta));
    for j in 0..n_theta {
        let theta = 2.0 * PI * j as f64 / n_theta as f64;
        let f = f_r(sol.r, Complex64::from_polar(1.0, theta));
        let (g, h) = (gs[j], hs[j]);
        let k = (f.re / ll).floor() as i64;
        let lk = lam.powi(k as i32);
        let row = ReductionRow {
            theta,
            re_f: f.re,
            im_g: g.im,
            im_h: h.im,
            k,
            reduced_g: s * g.im / lk,
            reduced_h: h.im * lk,
            reduced_f: [f.re / ll - k as f64, f.im / ll],
        };
        let checks = [
            ("reduced Im g", row.reduced_g, within(row.reduced_g, 1.0, lam, true, false)),
            ("reduced Im h", row.reduced_h, within(row.reduced_h, abs_a / lam, abs_a, false, true)),
            ("reduced Re f", row.reduced_f[0], within(row.reduced_f[0], 0.0, 1.0, true, false)),
            ("reduced Im f", row.reduced_f[1], row.reduced_f[1] > 0.0 && row.reduced_f[1] < PI / ll),
        ];
        for (what, value, ok) in checks {
            if !ok {
                return Err(CoeureLoebError::IntervalViolation { theta, what: what.to_string(), value });
            }
        }
        rep.in_interval += 1;

        let b = [g * params.v[0] + h * params.w[0], g * params.v[1] + h * params.w[1]];
        let m = params.matrix.pow(-k).to_f64();
        let ab = [b[0] * m[0][0] + b[1] * m[0][1], b[0] * m[1][0] + b[1] * m[1][1]];
        let c1 = (ab[0] * params.w[1] - ab[1] * params.w[0]) / det;
        let c2 = (params.v[0] * ab[1] - params.v[1] * ab[0]) / det;
        let (e1, e2) = (g / lk, h * lk);
        let res = ((c1 - e1).norm() / e1.norm().max(1.0)).max((c2 - e2).norm() / e2.norm().max(1.0));
        rep.action_residual = rep.action_residual.max(res);
        rep.rows.push(row);
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupRow {
    pub r: f64,
    pub n: usize,
    pub im_g0: f64,
    pub im_h0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupTable {
    pub rows: Vec<BlowupRow>,
    /// `s·Im g_R(0)` strictly increases along the list.
    pub g_increasing: bool,
    pub h_increasing: bool,
    /// Largest `s·Im g_R(0)` in the table.
    pub max_center_g: f64,
}

fn check_r_list(rs: &[f64]) -> Result<(), CoeureLoebError> {
    if rs.is_empty() || rs.iter().any(|r| r.is_nan() || *r <= 1.0) {
        return Err(CoeureLoebError::InvalidRadius("every R must exceed 1".into()));
    }
    if rs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CoeureLoebError::InvalidRadius("R values must strictly decrease".into()));
    }
    Ok(())
}

fn table(params: &CLParams, sols: &[GhSolution]) -> BlowupTable {
    let s = params.s();
    let rows: Vec<BlowupRow> = sols
        .iter()
        .map(|sol| {
            let z = Complex64::new(0.0, 0.0);
            BlowupRow { r: sol.r, n: sol.g.n(), im_g0: sol.g.eval(z).im, im_h0: sol.h.eval(z).im }
        })
        .collect();
    let inc = |f: &dyn Fn(&BlowupRow) -> f64| rows.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    BlowupTable {
        g_increasing: inc(&|r| s * r.im_g0),
        h_increasing: inc(&|r| r.im_h0),
        max_center_g: rows.iter().map(|r| s * r.im_g0).fold(f64::NEG_INFINITY, f64::max),
        rows,
    }
}

/// Centre values `Im g_R(0)`, `Im h_R(0)` along a decreasing list of radii.
/// With `n = None` each radius uses [`scaled_resolution`].
pub fn blowup_table(params: &CLParams, rs: &[f64], n: Option<usize>) -> Result<BlowupTable, CoeureLoebError> {
    check_r_list(rs)?;
    let sols = rs
        .iter()
        .map(|&r| solve_gh(params, r, n.unwrap_or_else(|| scaled_resolution(r))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(table(params, &sols))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    pub r: f64,
    pub n: usize,
    pub cross_check: f64,
    pub cr_residual: f64,
    pub boundary_interp_error: f64,
    pub membership: MembershipReport,
    pub reduction: ReductionReport,
}

/// Everything the counterexample harness reports for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub params: CLParams,
    pub radii: Vec<RadiusReport>,
    pub blowup: BlowupTable,
    /// Boundary values stay in fixed compact intervals while the centre
    /// values grow without bound along the list.
    pub contradiction: String,
    pub pass: bool,
}

/// Solves, scans and reduces at each radius, then tabulates the blow-up.
pub fn run_counterexample(
    params: &CLParams,
    rs: &[f64],
    n: Option<usize>,
    grid: &ScanGrid,
) -> Result<(CounterexampleReport, Vec<Vec<ReductionRow>>), CoeureLoebError> {
    check_r_list(rs)?;
    let mut sols = Vec::new();
    let mut radii = Vec::new();
    let mut rows = Vec::new();
    for &r in rs {
        let nn = n.unwrap_or_else(|| scaled_resolution(r));
        let sol = solve_gh(params, r, nn)?;
        let membership = membership_scan(params, &sol, grid)?;
        let mut reduction = reduction_check(params, &sol, nn)?;
        rows.push(std::mem::take(&mut reduction.rows));
        radii.push(RadiusReport {
            r,
            n: nn,
            cross_check: sol.cross_check,
            cr_residual: sol.cr_residual,
            boundary_interp_error: sol.boundary_interp_error,
            membership,
            reduction,
        });
        sols.push(sol);
    }
    let blowup = table(params, &sols);
    let pass = blowup.g_increasing && blowup.h_increasing;
    let (lo, hi) = (params.a.abs() / params.lambda_f64, params.a.abs());
    let contradiction = format!(
        "boundary: s*reduced Im g in [1, {:.6}), reduced Im h in ({lo:.6}, {hi:.6}] at every R; centre: s*Im g_R(0) rises to {:.6} and Im h_R(0) to {:.6}",
        params.lambda_f64,
        blowup.max_center_g,
        blowup.rows.last().map_or(f64::NAN, |r| r.im_h0),
    );
    Ok((CounterexampleReport { params: params.clone(), radii, blowup, contradiction, pass }, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn golden(phi: PhiSpec) -> CLParams {
        let m = LogDomainModel::hyperbolic(Mat2Z::new(2, 1, 1, 1), phi, Sign::Plus);
        CLParams::from_model(&m).unwrap()
    }

    #[test]
    fn f_r_examples() {
        let z0 = f_r(2.0, Complex64::new(0.0, 0.0));
        assert!(z0.re.abs() < 1e-15 && (z0.im - PI / 2.0).abs() < 1e-15);
        let z1 = f_r(2.0, Complex64::new(1.0, 0.0));
        assert!((z1.re - 3f64.ln()).abs() < 1e-15 && (z1.im - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn choose_a_examples() {
        assert_eq!(choose_a(&PhiSpec::Zero, 2.6, Sign::Plus).0, 1.0);
        assert_eq!(choose_a(&PhiSpec::AOverT { a: q(3) }, 2.6, Sign::Plus).0, 4.0);
        assert_eq!(choose_a(&PhiSpec::AOverT { a: q(3) }, 2.6, Sign::Minus).0, -4.0);
    }

    #[test]
    fn constant_boundary_gives_constant() {
        let f = DiskFn::from_samples(&[2.5; 256]).unwrap();
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.7)] {
            assert!((f.eval(z) - Complex64::new(0.0, 2.5)).norm() < 1e-14);
        }
        assert!(f.tail_energy < 1e-28);
    }

    #[test]
    fn circle_evaluation_matches_horner() {
        let p = golden(PhiSpec::Zero);
        let sol = solve_gh(&p, 1.2, 512).unwrap();
        let vals = sol.g.eval_circle(0.7, 24);
        for (k, v) in vals.iter().enumerate() {
            let z = Complex64::from_polar(0.7, 2.0 * PI * k as f64 / 24.0);
            assert!((v - sol.g.eval(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn resolution_is_validated() {
        let p = golden(PhiSpec::Zero);
        assert_eq!(solve_gh(&p, 2.0, 100), Err(CoeureLoebError::InvalidResolution(100)));
        assert_eq!(solve_gh(&p, 2.0, 8), Err(CoeureLoebError::InvalidResolution(8)));
        assert!(matches!(solve_gh(&p, 1.001, 256), Err(CoeureLoebError::ResolutionTooLow { .. })));
        assert!(matches!(solve_gh(&p, 1.001, 64), Err(CoeureLoebError::ResolutionTooLow { n: 64, .. })));
    }

    #[test]
    fn reduction_at_r2_theta0() {
        let p = golden(PhiSpec::Zero);
        let sol = solve_gh(&p, 2.0, 512).unwrap();
        let rep = reduction_check(&p, &sol, 512).unwrap();
        let row = &rep.rows[0];
        assert_eq!(row.k, 1);
        assert!((row.reduced_g - 3.0 / p.lambda_f64).abs() < 1e-9);
        assert_eq!(rep.in_interval, rep.samples);
        assert!(rep.action_residual < 1e-9);
    }

    #[test]
    fn minus_branch_mirrors_plus() {
        let p = golden(PhiSpec::AOverT { a: q(1) });
        let m = p.with_sign(Sign::Minus);
        let (sp, sm) = (solve_gh(&p, 1.5, 512).unwrap(), solve_gh(&m, 1.5, 512).unwrap());
        let z = Complex64::new(0.0, 0.0);
        assert!((sp.g.eval(z).im + sm.g.eval(z).im).abs() < 1e-12);
        assert!((sp.h.eval(z).im - sm.h.eval(z).im).abs() < 1e-12);
        assert!(membership_scan(&m, &sm, &ScanGrid { radial: 8, angular: 64 }).unwrap().min_margin > 0.0);
        assert_eq!(reduction_check(&m, &sm, 512).unwrap().in_interval, 512);
    }

    #[test]
    fn invalid_a_is_caught() {
        let mut p = golden(PhiSpec::AOverT { a: q(2) });
        p.a = 1.0;
        let sol = solve_gh(&p, 1.5, 512).unwrap();
        assert!(matches!(membership_scan(&p, &sol, &ScanGrid::default()), Err(CoeureLoebError::MarginViolation { .. })));
    }
}
