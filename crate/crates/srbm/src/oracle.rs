//! Independent ground truth: the contour-integral representation of `φ₁`,
//! a Monte Carlo simulator, numerical Laplace transforms of densities, and
//! Taylor coefficients by Cauchy integrals.

use crate::closed_form::{DensityForm, LaplaceForm};
use crate::error::{Error, Result};
use crate::kernel::KernelGeometry;
use crate::model::{Model, QuadrantModel};
use crate::special_fn::InvariantW;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

type C = Complex64;

/// Order of the Gauss–Legendre panels.
pub const PANEL_ORDER: usize = 32;
/// Distance from the equality `2β − 2ε − θ = 0` within which the integral is refused.
pub const POLE_BOUNDARY_TOL: f64 = 1e-6;
/// Below this distance the pole is taken to sit exactly at `y(−1)`.
pub const POLE_EXACT_TOL: f64 = 1e-12;

/// Adaptive composite Gauss–Legendre quadrature of complex integrands.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pairs: Vec<(f64, f64)>,
    max_depth: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(PANEL_ORDER)
    }
}

impl Quadrature {
    pub fn new(order: usize) -> Quadrature {
        let rule = gauss_quad::GaussLegendre::new(order.max(2)).expect("order at least 2");
        Quadrature {
            pairs: rule.as_node_weight_pairs().to_vec(),
            max_depth: 40,
        }
    }

    /// One panel on `[a, b]`.
    pub fn panel<F: FnMut(f64) -> C>(&self, a: f64, b: f64, f: &mut F) -> C {
        let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
        h * self.pairs.iter().map(|&(x, w)| w * f(m + h * x)).sum::<C>()
    }

    /// Integrate over `[a, b]`, starting from `pieces` panels and bisecting a
    /// panel until it agrees with its halves to its share of `tol`.
    /// Returns the value and the sum of the local error estimates.
    pub fn adaptive<F: FnMut(f64) -> C>(&self, a: f64, b: f64, pieces: usize, tol: f64, f: &mut F) -> Result<(C, f64)> {
        let len = b - a;
        if len == 0.0 {
            return Ok((C::new(0.0, 0.0), 0.0));
        }
        let mut total = C::new(0.0, 0.0);
        let mut err = 0.0;
        let mut stack: Vec<(f64, f64, C, u32)> = Vec::new();
        let n = pieces.max(1);
        for i in (0..n).rev() {
            let (lo, hi) = (a + len * i as f64 / n as f64, a + len * (i + 1) as f64 / n as f64);
            let v = self.panel(lo, hi, f);
            stack.push((lo, hi, v, 0));
        }
        while let Some((lo, hi, whole, depth)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let l = self.panel(lo, mid, f);
            let r = self.panel(mid, hi, f);
            let diff = (l + r - whole).norm();
            // The floor stops bisection at isolated points where the
            // integrand is evaluated only to rounding, such as a removable 0/0.
            let share = tol * ((hi - lo) / len).max(1e-6);
            if !diff.is_finite() {
                return Err(Error::QuadratureFailure(format!(
                    "non-finite integrand on [{lo}, {hi}]"
                )));
            }
            if diff <= share {
                total += l + r;
                err += diff;
            } else if depth >= self.max_depth {
                return Err(Error::QuadratureFailure(format!(
                    "panel [{lo:e}, {hi:e}] still differs by {diff:e} after {depth} bisections"
                )));
            } else {
                stack.push((mid, hi, r, depth + 1));
                stack.push((lo, mid, l, depth + 1));
            }
        }
        Ok((total, err))
    }
}

/// The contour-integral representation of `φ₁`, valid without any angle condition.
///
/// The canonical invariant maps `G_R` onto `ℂ ∖ (−∞, −1]`. Along the slit,
/// parameterized by `ζ = −cosh(au)`, `u > 0`, the point `y(−e^u)` of `R`
/// is reached from below, so `log φ₁` jumps by `J(u) = log G(y(−e^u))`
/// across the slit. The jump is unwrapped continuously from `J(0) = 0`, or
/// from `−iπ` when the pole of `φ₁` sits at the end point `y(−1)`.
#[derive(Debug, Clone)]
pub struct IntegralOracle {
    k: KernelGeometry,
    w: InvariantW,
    a: f64,
    mass: f64,
    w0: C,
    /// `(p, w(p))` when `φ₁` has a pole.
    pole: Option<(f64, C)>,
    /// Unwrapped `arg G` on a grid of `u`.
    args: Vec<(f64, f64)>,
    u_max: f64,
    /// The pole sits at the end point `y(−1)` of the contour, where `G → −1`.
    at_end: bool,
    quad: Quadrature,
    /// Absolute tolerance on the exponent.
    pub tol: f64,
}

impl IntegralOracle {
    pub fn new(m: &Model) -> Result<IntegralOracle> {
        let k = m.kernel;
        let w = InvariantW::new(&k);
        let a = w.a;
        let wd = &m.wedge;
        let v = 2.0 * wd.beta - 2.0 * wd.eps - wd.theta;
        let at_end = v.abs() < POLE_EXACT_TOL;
        if !at_end && v.abs() < POLE_BOUNDARY_TOL {
            return Err(Error::NotCovered(format!(
                "2 beta - 2 eps - theta = {v:e} is within {POLE_BOUNDARY_TOL:e} of 0: the pole lies on the contour"
            )));
        }
        let pole = if v > 0.0 && !at_end {
            let p = k.y_of(k.s1).re;
            Some((p, w.eval(C::new(p, 0.0))?))
        } else {
            None
        };
        let w0 = w.eval(C::new(0.0, 0.0))?;
        let u_max = 45.0 / a;
        let mut o = IntegralOracle {
            k,
            w,
            a,
            mass: m.masses.0,
            w0,
            pole,
            args: Vec::new(),
            u_max,
            at_end,
            quad: Quadrature::default(),
            tol: 1e-11,
        };
        o.args = o.tabulate_args()?;
        Ok(o)
    }

    /// `y(−e^u)`, a point of `R`.
    pub fn contour_point(&self, u: f64) -> C {
        self.k.y_of(C::new(-u.exp(), 0.0))
    }

    fn g_at(&self, u: f64) -> Result<C> {
        self.k.g_ratio(self.contour_point(u))
    }

    fn tabulate_args(&self) -> Result<Vec<(f64, f64)>> {
        // With the pole at the end point the jump starts from −iπ: the limit
        // from a pole inside G_R (factor 1/(w + 1), J ≈ −iπ) and the limit
        // from no pole (J ≈ +iπ) differ by exactly that factor.
        let start = if self.at_end { -PI } else { 0.0 };
        let mut out = vec![(0.0, start)];
        let (mut u, mut prev) = (0.0f64, start);
        let mut h = 0.01;
        while u < self.u_max {
            let un = (u + h).min(self.u_max);
            let raw = self.g_at(un)?.arg();
            let next = raw + 2.0 * PI * ((prev - raw) / (2.0 * PI)).round();
            if (next - prev).abs() > 0.25 && h > 1e-9 {
                h *= 0.5;
                continue;
            }
            out.push((un, next));
            (u, prev) = (un, next);
            h = (h * 1.5).min(0.05);
        }
        Ok(out)
    }

    fn arg_hint(&self, u: f64) -> f64 {
        let i = self.args.partition_point(|&(x, _)| x <= u);
        if i == 0 {
            return self.args[0].1;
        }
        if i >= self.args.len() {
            return self.args[self.args.len() - 1].1;
        }
        let (u0, a0) = self.args[i - 1];
        let (u1, a1) = self.args[i];
        a0 + (a1 - a0) * (u - u0) / (u1 - u0)
    }

    /// The continuous `log G(y(−e^u))`.
    pub fn jump(&self, u: f64) -> Result<C> {
        let g = self.g_at(u)?;
        let raw = g.arg();
        let hint = self.arg_hint(u);
        Ok(C::new(
            g.norm().ln(),
            raw + 2.0 * PI * ((hint - raw) / (2.0 * PI)).round(),
        ))
    }

    fn exponent(&self, z: C) -> Result<C> {
        let a = self.a;
        let w0 = self.w0;
        let mut fail = None;
        let mut f = |u: f64| {
            let zeta = -(a * u).cosh();
            match self.jump(u) {
                Ok(j) => j * (a * (a * u).sinh()) * (z - w0) / ((zeta - z) * (zeta - w0)),
                Err(e) => {
                    fail = Some(e);
                    C::new(0.0, 0.0)
                }
            }
        };
        let (v, _) = self.quad.adaptive(0.0, self.u_max, 24, self.tol, &mut f)?;
        if let Some(e) = fail {
            return Err(Error::QuadratureFailure(format!("log G could not be evaluated: {e}")));
        }
        Ok(v / C::new(0.0, 2.0 * PI))
    }

    /// `φ₁(y)` for `y` in `G_R`.
    pub fn eval(&self, y: C) -> Result<C> {
        if self.k.region_of(y) != crate::kernel::Region::InteriorGR {
            return Err(Error::Input(format!("y = {y} is not inside G_R")));
        }
        let z = self.w.eval(y)?;
        let mut v = self.mass * self.exponent(z)?.exp();
        if let Some((p, wp)) = self.pole {
            if (y - p).norm() <= 1e-10 * (1.0 + p.abs()) {
                return Err(Error::AtPole(format!("y = {y} is the pole {p}")));
            }
            v *= (self.w0 - wp) / (z - wp);
        }
        Ok(v)
    }

    /// The pole of `φ₁` in the closure of `G_R`, if any.
    pub fn pole(&self) -> Option<f64> {
        self.pole.map(|p| p.0)
    }
}

/// `φ₁(y)` from the contour integral.
pub fn phi1_integral(m: &Model, y: C) -> Result<C> {
    IntegralOracle::new(m)?.eval(y)
}

/// Residual of `γ₁φ₁(y) + γ₂φ₂(x) = 0` at real points of `γ = 0` near the
/// origin, with `φ₁` and `φ₂` supplied by the caller. Points where either
/// function reports an input outside its domain are skipped. Returns the
/// largest relative residual and the number of points used.
pub fn kernel_residual<F1, F2>(k: &KernelGeometry, phi1: F1, phi2: F2, n: usize) -> Result<(f64, usize)>
where
    F1: Fn(C) -> Result<C>,
    F2: Fn(C) -> Result<C>,
{
    let mut worst = 0.0f64;
    let mut used = 0;
    for i in 0..n {
        let tau = 0.6 * (i as f64 + 1.0) / n as f64 * if i % 2 == 0 { 1.0 } else { -1.0 };
        let (x, y) = k.uniformize(k.s0 * C::from_polar(1.0, tau));
        let (x, y) = (C::new(x.re, 0.0), C::new(y.re, 0.0));
        let (_, g1, g2) = k.gamma(x, y);
        let (a, b) = match (phi1(y), phi2(x)) {
            (Ok(a), Ok(b)) => (g1 * a, g2 * b),
            (Err(Error::Input(_)), _) | (_, Err(Error::Input(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        worst = worst.max((a + b).norm() / (a.norm() + b.norm()));
        used += 1;
    }
    if used == 0 {
        return Err(Error::Input(
            "no sampled point of the kernel curve lies in both domains".into(),
        ));
    }
    Ok((worst, used))
}

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub burn_in_fraction: f64,
    pub seed: u64,
    pub n_paths: usize,
    /// Histogram cells per axis.
    pub bins: usize,
    /// Upper edges of the histogram in each coordinate.
    pub hist_max: [f64; 2],
    /// Number of batches per path for the batch-means standard errors.
    pub batches: usize,
    /// Record `Zᵢ + 0.5826·√(σᵢᵢ·dt)`. The projected Euler chain behaves to
    /// first order like the reflected process on a quadrant moved out by
    /// that amount, and reflection commutes with translation.
    pub boundary_shift: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            horizon: 1e4,
            burn_in_fraction: 0.05,
            seed: 1,
            n_paths: 8,
            bins: 20,
            hist_max: [5.0, 5.0],
            batches: 16,
            boundary_shift: true,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::Input(s.into()));
        if !(self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(0.0..1.0).contains(&self.burn_in_fraction) {
            return bad("burn_in_fraction must lie in [0, 1)");
        }
        if !(self.horizon > self.dt) || self.n_paths == 0 || self.bins == 0 || self.batches == 0 {
            return bad("horizon, paths, bins and batches must be positive");
        }
        if !(self.hist_max[0] > 0.0 && self.hist_max[1] > 0.0) {
            return bad("histogram bounds must be positive");
        }
        Ok(())
    }
}

/// Time-averaged occupation of a grid of cells in the quadrant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub bins: usize,
    pub hist_max: [f64; 2],
    /// Row-major masses, first index along `z₁`.
    pub mass: Vec<f64>,
    /// Mass outside the grid; `Σ mass + overflow = 1`.
    pub overflow: f64,
}

impl Histogram2D {
    fn new(bins: usize, hist_max: [f64; 2]) -> Histogram2D {
        Histogram2D {
            bins,
            hist_max,
            mass: vec![0.0; bins * bins],
            overflow: 0.0,
        }
    }

    /// Cell edges `(z1_lo, z1_hi, z2_lo, z2_hi)` and mass, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64, f64)> + '_ {
        let (h1, h2) = (self.hist_max[0] / self.bins as f64, self.hist_max[1] / self.bins as f64);
        (0..self.bins * self.bins).map(move |c| {
            let (i, j) = (c / self.bins, c % self.bins);
            (
                i as f64 * h1,
                (i + 1) as f64 * h1,
                j as f64 * h2,
                (j + 1) as f64 * h2,
                self.mass[c],
            )
        })
    }

    /// CSV with columns `z1_lo, z1_hi, z2_lo, z2_hi, mass`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("z1_lo,z1_hi,z2_lo,z2_hi,mass\n");
        for (a, b, c, d, m) in self.cells() {
            s.push_str(&format!("{a},{b},{c},{d},{m}\n"));
        }
        s
    }
}

/// A moment estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

/// Statistics of a simulation after burn-in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub config: SimConfig,
    /// Recorded steps over all paths.
    pub steps: u64,
    /// `E[Z_i^p]` for `i = 1, 2` and `p = 1..4`.
    pub moments: [[Estimate; 4]; 2],
    /// Fraction of time with `Z_i < √dt`, divided by `√dt`: a proxy for the boundary-measure density at 0.
    pub boundary_strip: [Estimate; 2],
    /// Smallest coordinate after projection, before any shift.
    pub min_coordinate: f64,
    pub histogram: Histogram2D,
}

impl SampleStats {
    pub fn mean(&self, i: usize) -> Estimate {
        self.moments[i][0]
    }
}

/// Per-batch sums: 8 moment sums and 2 strip counts.
type BatchSums = [f64; 10];

struct PathResult {
    batches: Vec<BatchSums>,
    batch_len: Vec<u64>,
    hist: Vec<f64>,
    overflow: f64,
    min_coord: f64,
}

fn sqrt_sigma(q: &QuadrantModel) -> [[f64; 2]; 2] {
    // Symmetric square root of a 2×2 SPD matrix.
    let (a, b, d) = (q.sigma11, q.sigma12, q.sigma22);
    let s = (a * d - b * b).sqrt();
    let t = (a + d + 2.0 * s).sqrt();
    [[(a + s) / t, b / t], [b / t, (d + s) / t]]
}

/// The constant of the continuity correction for a discretely monitored boundary.
pub const BOUNDARY_SHIFT: f64 = 0.5825971579390107;

/// One step of the Skorokhod map: the point `z + Rc` with `c ≥ 0`, inside
/// the quadrant, and `cᵢ > 0` only where `zᵢ` lands on the boundary.
fn project(q: &QuadrantModel, z1: f64, z2: f64) -> Option<(f64, f64)> {
    // Only the first face.
    let c = -z1 / q.r11;
    if c >= 0.0 && z2 + q.r21 * c >= 0.0 {
        return Some((0.0, z2 + q.r21 * c));
    }
    // Only the second face.
    let c = -z2 / q.r22;
    if c >= 0.0 && z1 + q.r12 * c >= 0.0 {
        return Some((z1 + q.r12 * c, 0.0));
    }
    // Both faces: the corner.
    let det = q.r11 * q.r22 - q.r12 * q.r21;
    let c1 = (-z1 * q.r22 + z2 * q.r12) / det;
    let c2 = (-z2 * q.r11 + z1 * q.r21) / det;
    (c1 >= 0.0 && c2 >= 0.0).then_some((0.0, 0.0))
}

fn run_path(q: &QuadrantModel, cfg: &SimConfig, path: usize) -> Result<PathResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(path as u64);
    let l = sqrt_sigma(q);
    let sdt = cfg.dt.sqrt();
    let n_steps = (cfg.horizon / cfg.dt).round() as u64;
    let burn = (n_steps as f64 * cfg.burn_in_fraction).round() as u64;
    let recorded = n_steps - burn;
    let per_batch = (recorded / cfg.batches as u64).max(1);
    let mut batches = vec![[0.0; 10]; cfg.batches];
    let mut batch_len = vec![0u64; cfg.batches];
    let mut hist = vec![0.0; cfg.bins * cfg.bins];
    let mut overflow = 0.0;
    let mut min_coord = f64::INFINITY;
    let cell = [cfg.hist_max[0] / cfg.bins as f64, cfg.hist_max[1] / cfg.bins as f64];
    let shift = if cfg.boundary_shift {
        [
            BOUNDARY_SHIFT * (q.sigma11 * cfg.dt).sqrt(),
            BOUNDARY_SHIFT * (q.sigma22 * cfg.dt).sqrt(),
        ]
    } else {
        [0.0, 0.0]
    };
    let (mut z1, mut z2) = (0.0f64, 0.0f64);
    for step in 0..n_steps {
        let x1: f64 = StandardNormal.sample(&mut rng);
        let x2: f64 = StandardNormal.sample(&mut rng);
        z1 += q.mu1 * cfg.dt + sdt * (l[0][0] * x1 + l[0][1] * x2);
        z2 += q.mu2 * cfg.dt + sdt * (l[1][0] * x1 + l[1][1] * x2);
        if z1 < 0.0 || z2 < 0.0 {
            (z1, z2) = project(q, z1, z2).ok_or(Error::PushbackDivergence { step })?;
        }
        if step < burn {
            continue;
        }
        min_coord = min_coord.min(z1.min(z2));
        let b = (((step - burn) / per_batch) as usize).min(cfg.batches - 1);
        let s = &mut batches[b];
        if z1 < sdt {
            s[8] += 1.0;
        }
        if z2 < sdt {
            s[9] += 1.0;
        }
        let (z1, z2) = (z1 + shift[0], z2 + shift[1]);
        let (mut p1, mut p2) = (1.0, 1.0);
        for p in 0..4 {
            p1 *= z1;
            p2 *= z2;
            s[p] += p1;
            s[4 + p] += p2;
        }
        batch_len[b] += 1;
        let (i, j) = ((z1 / cell[0]) as usize, (z2 / cell[1]) as usize);
        if i < cfg.bins && j < cfg.bins {
            hist[i * cfg.bins + j] += 1.0;
        } else {
            overflow += 1.0;
        }
    }
    Ok(PathResult {
        batches,
        batch_len,
        hist,
        overflow,
        min_coord,
    })
}

/// Simulate the reflected diffusion by an Euler scheme with oblique pushback.
/// Paths run in parallel on independent streams of one seeded generator, so
/// the result is deterministic for a fixed configuration.
pub fn simulate(q: &QuadrantModel, cfg: &SimConfig) -> Result<SampleStats> {
    cfg.validate()?;
    if !crate::model::validate(q).valid() {
        return Err(Error::InvalidModel {
            condition: "model validity".into(),
        });
    }
    let results: Vec<Result<PathResult>> = (0..cfg.n_paths).into_par_iter().map(|p| run_path(q, cfg, p)).collect();
    let mut means: Vec<BatchSums> = Vec::new();
    let mut hist = Histogram2D::new(cfg.bins, cfg.hist_max);
    let mut total = 0u64;
    let mut min_coordinate = f64::INFINITY;
    for r in results {
        let r = r?;
        for (s, &n) in r.batches.iter().zip(&r.batch_len) {
            if n > 0 {
                means.push(s.map(|v| v / n as f64));
            }
            total += n;
        }
        for (h, v) in hist.mass.iter_mut().zip(&r.hist) {
            *h += v;
        }
        hist.overflow += r.overflow;
        min_coordinate = min_coordinate.min(r.min_coord);
    }
    for h in hist.mass.iter_mut() {
        *h /= total as f64;
    }
    hist.overflow /= total as f64;
    let nb = means.len() as f64;
    let est = |i: usize, scale: f64| {
        let m = means.iter().map(|b| b[i]).sum::<f64>() / nb;
        let var = means.iter().map(|b| (b[i] - m).powi(2)).sum::<f64>() / (nb - 1.0).max(1.0);
        Estimate {
            value: m * scale,
            se: (var / nb).sqrt() * scale,
        }
    };
    let moments = [
        [est(0, 1.0), est(1, 1.0), est(2, 1.0), est(3, 1.0)],
        [est(4, 1.0), est(5, 1.0), est(6, 1.0), est(7, 1.0)],
    ];
    let strip = 1.0 / cfg.dt.sqrt();
    Ok(SampleStats {
        config: *cfg,
        steps: total,
        moments,
        boundary_strip: [est(8, strip), est(9, strip)],
        min_coordinate,
        histogram: hist,
    })
}

/// Tail cut-off `V` for the substitution `z = v²` against `e^{−c·v²}`.
fn tail_cut(decay: f64) -> f64 {
    (45.0 / decay).sqrt()
}

/// `∫₀^∞ e^{yz} p(z) dz` for a one-dimensional density, by quadrature in `z = v²`.
pub fn numeric_laplace1d(d: &DensityForm, y: C) -> Result<C> {
    let decay = match d {
        DensityForm::SumOfExponentials { terms } => terms.iter().map(|t| t.rate).fold(f64::INFINITY, f64::min),
        DensityForm::GammaHalf { rate, .. } => *rate,
        DensityForm::Erf { a, .. } => *a,
        DensityForm::WedgePolar { .. } => return Err(Error::Input("use the two-dimensional transform".into())),
    } - y.re;
    if !(decay > 0.0) {
        return Err(Error::Input(format!("the transform diverges at y = {y}")));
    }
    let q = Quadrature::default();
    let mut fail = None;
    let mut f = |v: f64| {
        let z = v * v;
        match d.pdf(z) {
            // dz = 2v dv absorbs the 1/√z singularity.
            Ok(p) => 2.0 * v * p * (y * z).exp(),
            Err(e) => {
                fail = Some(e);
                C::new(0.0, 0.0)
            }
        }
    };
    let (v, _) = q.adaptive(0.0, tail_cut(decay), 16, 1e-12, &mut f)?;
    match fail {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `∬ e^{xz₁+yz₂} p(z₁,z₂) dz₁dz₂` for the two-dimensional stationary density.
///
/// The integral runs in oblique polar coordinates `u₁ + u₂e^{iβ} = ρe^{iφ}`
/// of the normalized variables `uᵢ = sᵢzᵢ`, with `ρ = v²` to absorb the
/// `1/√ρ` singularity at the corner.
pub fn numeric_laplace2d(d: &DensityForm, x: C, y: C, tol: f64) -> Result<C> {
    let DensityForm::WedgePolar {
        beta,
        theta,
        scale_x,
        scale_y,
        ..
    } = *d
    else {
        return Err(Error::Input("a two-dimensional density is required".into()));
    };
    if x.re > 0.0 || y.re > 0.0 {
        return Err(Error::Input(
            "the transform is evaluated for Re x <= 0 and Re y <= 0".into(),
        ));
    }
    let sb = beta.sin();
    let c_min = (0.5 * theta).cos().powi(2).min((0.5 * (beta - theta)).cos().powi(2));
    let v_max = tail_cut(2.0 * c_min);
    let q = Quadrature::default();
    let jac = 1.0 / (scale_x * scale_y * sb);
    let mut inner_fail = None;
    let mut outer = |phi: f64| {
        let (e1, e2) = ((beta - phi).sin() / sb, phi.sin() / sb);
        let mut f = |v: f64| {
            let rho = v * v;
            let (u1, u2) = (rho * e1, rho * e2);
            let (z1, z2) = (u1 / scale_x, u2 / scale_y);
            match d.pdf2(z1, z2) {
                Ok(p) => 2.0 * v * rho * p * (x * z1 + y * z2).exp(),
                Err(_) => C::new(0.0, 0.0),
            }
        };
        match q.adaptive(0.0, v_max, 8, tol * 1e-2, &mut f) {
            Ok((v, _)) => v * jac,
            Err(e) => {
                inner_fail = Some(e);
                C::new(0.0, 0.0)
            }
        }
    };
    let (v, _) = q.adaptive(0.0, beta, 4, tol, &mut outer)?;
    match inner_fail {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Number of trapezoid nodes on the Cauchy circle.
pub const CAUCHY_NODES: usize = 512;
/// Cauchy radius as a fraction of the distance to the nearest singularity.
pub const CAUCHY_FRACTION: f64 = 0.8;

/// Taylor coefficients `[yⁿ]φ₁` for `n = 0..=n_max` by the trapezoid rule on a circle.
pub fn series_coeffs(f: &LaplaceForm, k: &KernelGeometry, n_max: usize) -> Result<Vec<f64>> {
    let dist = f
        .singularities(k)
        .iter()
        .map(|s| s.norm())
        .fold(f64::INFINITY, f64::min);
    let radius = CAUCHY_FRACTION * dist;
    if !(radius > 1e-8) {
        return Err(Error::RadiusTooSmall(radius));
    }
    let n = CAUCHY_NODES.max(2 * n_max + 2);
    let vals: Vec<C> = (0..n)
        .map(|j| f.eval(C::from_polar(radius, 2.0 * PI * j as f64 / n as f64)))
        .collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|m| {
            let s: C = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C::from_polar(1.0, -2.0 * PI * (j * m) as f64 / n as f64))
                .sum();
            s.re / n as f64 / radius.powi(m as i32)
        })
        .collect())
}
