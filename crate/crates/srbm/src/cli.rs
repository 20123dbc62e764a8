//! Command-line front end. Every subcommand prints one JSON `RunReport`
//! on stdout; diagnostics go to stderr.

use crate::catalog;
use crate::classify::{self, Classification};
use crate::closed_form::{self, LaplaceForm};
use crate::error::{Error, Result};
use crate::kernel::{KernelGeometry, Region};
use crate::model::{self, AnglesDoc, ExactAngles, Model, ModelDocument};
use crate::oracle::{self, IntegralOracle, SimConfig};
use crate::special_fn::InvariantW;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

type C = Complex64;

/// Default tolerance of the verification checks.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "srbm", version, about = "Stationary reflected Brownian motion in a wedge")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the model comes from.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// JSON model document with a quadrant block, an exact-angles block, or both.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Wedge angle β as a multiple of π, written n/d.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Drift angle θ as a multiple of π.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Reflection angle δ as a multiple of π.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Reflection angle ε as a multiple of π.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponents, angle conditions and the nature of the Laplace transform.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Wedge angles, quadrant parameters and validity conditions in both forms.
    Angles {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Evaluate the boundary transforms and the full transform.
    Laplace {
        #[command(flatten)]
        model: ModelArgs,
        /// Evaluation point such as "x=-1,y=-0.5+0.2i"; repeatable.
        #[arg(long)]
        eval: Vec<String>,
        /// Real grid "n=..,max=.." of y in [-max, 0] for φ₁.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Densities of the boundary measures and, when catalogued, of the stationary law.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        /// Grid "n=..,max=.." of z in [0, max].
        #[arg(long, default_value = "n=41,max=5")]
        grid: String,
        /// Write an SVG plot to this file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Moments of the boundary measure ν₁.
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest order.
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Monte Carlo simulation of the reflected diffusion.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1e4)]
        horizon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        paths: usize,
        /// Histogram "n=..,max=.." per axis.
        #[arg(long, default_value = "n=20,max=5")]
        grid: String,
        /// Record the raw Euler chain, without the boundary-shift correction.
        #[arg(long)]
        no_shift: bool,
        /// Write the histogram as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write an SVG heat map of the histogram to this file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Run every applicable oracle-agreement check.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Re-run the catalogued examples and compare with their expected data.
    Examples {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// One named check with its measured value and threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: &str, value: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tol,
            pass: value.is_finite() && value < tol,
        }
    }

    fn exact(name: &str, ok: bool) -> Check {
        Check {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tol: 0.5,
            pass: ok,
        }
    }
}

/// The JSON document printed by every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_fingerprint: Option<String>,
    pub results: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Parse `n/d` or `n` into a pair.
pub fn parse_ratio(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Input(format!("angle `{s}` is not a rational n/d"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(Error::Input(format!("angle `{s}` has a zero denominator")));
    }
    Ok((n, d))
}

/// Parse `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<C> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Input(format!("`{s}` is not a complex number"));
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|v| C::new(v, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let im = |v: &str| match v {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => v.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(i) => Ok(C::new(body[..i].parse().map_err(|_| bad())?, im(&body[i..])?)),
        None => Ok(C::new(0.0, im(body)?)),
    }
}

/// Parse `key=value` pairs separated by commas.
fn parse_pairs(s: &str) -> Result<BTreeMap<String, String>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::Input(format!("expected key=value, found `{p}`")))
        })
        .collect()
}

/// Parse a grid `n=..,max=..`.
pub fn parse_grid(s: &str) -> Result<(usize, f64)> {
    let p = parse_pairs(s)?;
    let n = p.get("n").ok_or_else(|| Error::Input("grid needs n".into()))?;
    let max = p.get("max").ok_or_else(|| Error::Input("grid needs max".into()))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::Input(format!("grid n `{n}` is not a count")))?;
    let max: f64 = max
        .parse()
        .map_err(|_| Error::Input(format!("grid max `{max}` is not a number")))?;
    if n < 2 || !(max > 0.0) {
        return Err(Error::Input("grid needs n >= 2 and max > 0".into()));
    }
    Ok((n, max))
}

/// Parse an evaluation point `x=..,y=..`; either coordinate may be omitted.
pub fn parse_eval(s: &str) -> Result<(Option<C>, Option<C>)> {
    let p = parse_pairs(s)?;
    if let Some(k) = p.keys().find(|k| *k != "x" && *k != "y") {
        return Err(Error::Input(format!("unknown coordinate `{k}` in --eval")));
    }
    let x = p.get("x").map(|v| parse_complex(v)).transpose()?;
    let y = p.get("y").map(|v| parse_complex(v)).transpose()?;
    if x.is_none() && y.is_none() {
        return Err(Error::Input("--eval needs x, y or both".into()));
    }
    Ok((x, y))
}

impl ModelArgs {
    fn angle_flags(&self) -> Result<Option<AnglesDoc>> {
        let flags = [&self.beta, &self.theta, &self.delta, &self.eps];
        if flags.iter().all(|f| f.is_none()) {
            return Ok(None);
        }
        if flags.iter().any(|f| f.is_none()) {
            return Err(Error::Input(
                "--beta, --theta, --delta and --eps must be given together".into(),
            ));
        }
        let r = |f: &Option<String>| parse_ratio(f.as_deref().unwrap_or_default()).map(|(n, d)| [n, d]);
        Ok(Some(AnglesDoc {
            beta: r(&self.beta)?,
            theta: r(&self.theta)?,
            delta: r(&self.delta)?,
            eps: r(&self.eps)?,
        }))
    }

    /// The model document from the file and the angle flags; flags fill the exact-angles block.
    pub fn document(&self) -> Result<ModelDocument> {
        let mut doc = match &self.model {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad model document: {e}")))?
            }
            None => ModelDocument::default(),
        };
        if let Some(a) = self.angle_flags()? {
            if doc.angles_exact.is_some_and(|b| b != a) {
                return Err(Error::Input(
                    "angle flags disagree with the exact-angles block of the model file".into(),
                ));
            }
            doc.angles_exact = Some(a);
        }
        if doc == ModelDocument::default() {
            return Err(Error::Input("give --model or the four angle flags".into()));
        }
        Ok(doc)
    }

    pub fn load(&self) -> Result<(Model, String)> {
        let doc = self.document()?;
        let m = doc.to_model()?;
        let report = model::validate(&m.quadrant);
        if !report.valid() {
            return Err(Error::InvalidModel {
                condition: report.failed.join(", "),
            });
        }
        let fp = fingerprint(&m);
        Ok((m, fp))
    }
}

/// The canonical document of a model: its quadrant block plus exact angles when declared.
pub fn canonical_document(m: &Model) -> ModelDocument {
    let mut doc = ModelDocument::from_quadrant(&m.quadrant);
    doc.angles_exact = m.exact.map(|e: ExactAngles| {
        let p = |r: num_rational::Rational64| [*r.numer(), *r.denom()];
        AnglesDoc {
            beta: p(e.beta),
            theta: p(e.theta),
            delta: p(e.delta),
            eps: p(e.eps),
        }
    });
    doc
}

/// SHA-256 of the canonical JSON of a model.
pub fn fingerprint(m: &Model) -> String {
    let json = serde_json::to_string(&canonical_document(m)).unwrap_or_default();
    Sha256::digest(json.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn c_json(z: C) -> Value {
    json!([z.re, z.im])
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Branch of `w₀` when `δ + ε + β = 2π`: compares `2ε + θ` with `2π`.
pub fn w0_branch(m: &Model) -> Option<&'static str> {
    let [b, t, d, e] = m.pi_angles();
    let two = crate::angle::PiAngle::from_ratio(2, 1);
    if d.add(e).add(b).sub(two).turns().abs() > 1e-9 {
        return None;
    }
    let v = e.scale(2).add(t).sub(two).turns();
    Some(if v.abs() <= 1e-9 {
        "2eps+theta = 2pi"
    } else if v < 0.0 {
        "2eps+theta < 2pi"
    } else {
        "2eps+theta > 2pi"
    })
}

fn classification_json(m: &Model, c: &Classification) -> Value {
    let double = c.conditions.double.map(|d| {
        json!({"rbar1": d.rbar1(), "kbar1": d.kbar1(), "rbar2": d.rbar2(), "kbar2": d.kbar2(),
               "r1": d.r1, "k1": d.k1, "e1": d.e1, "eps1": d.eps1, "r2": d.r2, "k2": d.k2, "e2": d.e2, "eps2": d.eps2})
    });
    json!({
        "nature": c.nature.class,
        "recip_phi1_dfinite": c.nature.recip_phi1_dfinite,
        "logderiv_phi1_dfinite": c.nature.logderiv_dfinite,
        "alpha": c.angles.alpha,
        "alpha1": c.angles.alpha1,
        "alpha2": c.angles.alpha2,
        "mode": c.angles.mode,
        "beta_over_pi": c.angles.beta_over_pi,
        "simple": c.conditions.simple,
        "double": double,
        "w0_branch": w0_branch(m),
    })
}

fn angles_json(m: &Model) -> Value {
    let w = &m.wedge;
    let exact = m
        .exact
        .map(|e| [e.beta, e.theta, e.delta, e.eps].map(|r| format!("{}/{}", r.numer(), r.denom())));
    json!({
        "beta": w.beta, "theta": w.theta, "delta": w.delta, "eps": w.eps,
        "exact_over_pi": exact,
    })
}

/// Closed forms of `φ₁` and `φ₂`, when their conditions hold.
struct Forms {
    phi1: Option<LaplaceForm>,
    phi2: Option<LaplaceForm>,
    swapped: Model,
}

impl Forms {
    fn new(m: &Model, c: &Classification) -> Result<Forms> {
        let phi1 = match closed_form::build_phi1(m, &c.conditions) {
            Ok(f) => Some(f),
            Err(Error::NoDecoupling | Error::NotCovered(_)) => None,
            Err(e) => return Err(e),
        };
        let phi2 = match closed_form::build_phi2(m) {
            Ok(f) => Some(f),
            Err(Error::NoDecoupling | Error::NotCovered(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Forms {
            phi1,
            phi2,
            swapped: m.swapped()?,
        })
    }
}

/// `φ₁(y)` by the closed form when available, else by the contour integral.
fn phi1_value(m: &Model, f: Option<&LaplaceForm>, y: C) -> Result<(C, &'static str)> {
    match f {
        Some(f) => Ok((f.eval(y)?, "closed_form")),
        None => Ok((oracle::phi1_integral(m, y)?, "integral")),
    }
}

fn laplace(m: &Model, c: &Classification, evals: &[String], grid: Option<&str>) -> Result<Value> {
    let forms = Forms::new(m, c)?;
    let mut points = Vec::new();
    for e in evals {
        let (x, y) = parse_eval(e)?;
        let mut row = serde_json::Map::new();
        let p1 = y.map(|y| phi1_value(m, forms.phi1.as_ref(), y)).transpose()?;
        let p2 = x
            .map(|x| phi1_value(&forms.swapped, forms.phi2.as_ref(), x))
            .transpose()?;
        if let (Some(x), Some(y), Some((a, _)), Some((b, _))) = (x, y, p1, p2) {
            let (g, g1, g2) = m.kernel.gamma(x, y);
            if g.norm() < 1e-12 * (1.0 + x.norm() + y.norm()).powi(2) {
                return Err(Error::AtKernelZero(format!("x = {x}, y = {y}")));
            }
            row.insert("phi".into(), c_json(-(g1 * a + g2 * b) / g));
        }
        if let Some(x) = x {
            row.insert("x".into(), c_json(x));
        }
        if let Some(y) = y {
            row.insert("y".into(), c_json(y));
        }
        if let Some((v, how)) = p1 {
            row.insert("phi1".into(), c_json(v));
            row.insert("phi1_method".into(), json!(how));
        }
        if let Some((v, how)) = p2 {
            row.insert("phi2".into(), c_json(v));
            row.insert("phi2_method".into(), json!(how));
        }
        points.push(Value::Object(row));
    }
    let grid_rows = match grid {
        Some(g) => {
            let (n, max) = parse_grid(g)?;
            (0..n)
                .map(|i| {
                    let y = -max + max * i as f64 / (n - 1) as f64;
                    phi1_value(m, forms.phi1.as_ref(), C::new(y, 0.0)).map(|(v, _)| json!([y, v.re]))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    Ok(json!({
        "classification": classification_json(m, c),
        "phi1_closed_form": forms.phi1.is_some(),
        "phi2_closed_form": forms.phi2.is_some(),
        "points": points,
        "phi1_grid": grid_rows,
    }))
}

fn density(m: &Model, c: &Classification, grid: &str, plot: Option<&PathBuf>) -> Result<Value> {
    let (n, max) = parse_grid(grid)?;
    let zs: Vec<f64> = (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect();
    let forms = Forms::new(m, c)?;
    let mut out = serde_json::Map::new();
    let mut series = Vec::new();
    for (name, f) in [("nu1", &forms.phi1), ("nu2", &forms.phi2)] {
        let Some(d) = f.as_ref().and_then(|f| closed_form::density(f).ok()) else {
            continue;
        };
        let vals: Vec<f64> = zs.iter().map(|&z| d.pdf(z)).collect::<Result<_>>()?;
        series.push((name, vals.clone()));
        out.insert(name.into(), json!({"form": d, "mass": d.mass(), "z": zs, "pdf": vals}));
    }
    let mut heat = None;
    if let Ok(d) = closed_form::stationary_density(m) {
        let cells: Vec<Vec<f64>> = zs
            .iter()
            .map(|&z1| zs.iter().map(|&z2| d.pdf2(z1, z2)).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        heat = Some(cells.clone());
        out.insert("stationary".into(), json!({"form": d, "z": zs, "pdf": cells}));
    }
    if out.is_empty() {
        return Err(Error::NotCovered("no catalogued density for this model".into()));
    }
    if let Some(path) = plot {
        let svg = match (&heat, series.is_empty()) {
            (Some(h), true) => svg_heatmap(h, max, "stationary density"),
            _ => svg_lines(&zs, &series, "boundary densities"),
        };
        write_file(path, &svg)?;
    }
    Ok(Value::Object(out))
}

fn moments(m: &Model, c: &Classification, n: usize) -> Result<(Value, Vec<Check>)> {
    let forms = Forms::new(m, c)?;
    let f = forms
        .phi1
        .ok_or_else(|| Error::NotCovered("no closed form of phi1 for the series".into()))?;
    let coeffs = oracle::series_coeffs(&f, &m.kernel, n)?;
    let mut fact = 1.0;
    let series: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i > 0 {
                fact *= i as f64;
            }
            fact * c
        })
        .collect();
    let mut checks = Vec::new();
    let rec = match closed_form::moment_recurrence(m) {
        Ok(r) => {
            let mt = r.moments(n);
            let worst = mt
                .iter()
                .zip(&series)
                .map(|(a, b)| (a - b).abs() / b.abs())
                .fold(0.0, f64::max);
            checks.push(Check::below("recurrence vs series", worst, 1e-8));
            json!({"coefficients": r, "tilde": r.tilde(n), "moments": mt})
        }
        Err(Error::NotCovered(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok((
        json!({"moments_from_series": series, "recurrence": rec, "w0_branch": w0_branch(m)}),
        checks,
    ))
}

fn simulate(
    m: &Model,
    c: &Classification,
    cfg: SimConfig,
    csv: Option<&PathBuf>,
    plot: Option<&PathBuf>,
) -> Result<(Value, Vec<Check>)> {
    let stats = oracle::simulate(&m.quadrant, &cfg)?;
    if let Some(path) = csv {
        write_file(path, &stats.histogram.to_csv())?;
    }
    if let Some(path) = plot {
        let b = stats.histogram.bins;
        let cells: Vec<Vec<f64>> = (0..b)
            .map(|i| stats.histogram.mass[i * b..(i + 1) * b].to_vec())
            .collect();
        write_file(
            path,
            &svg_heatmap(&cells, stats.histogram.hist_max[0], "occupation histogram"),
        )?;
    }
    let mut checks = Vec::new();
    let means = exact_means(m, c).ok();
    if let Some(mu) = means {
        for i in 0..2 {
            let e = stats.mean(i);
            let z = (e.value - mu[i]).abs() / e.se;
            checks.push(Check::below(
                &format!("mean of Z{} within 3 standard errors", i + 1),
                z,
                3.0,
            ));
        }
    }
    Ok((json!({"stats": stats, "closed_form_means": means}), checks))
}

/// `E[Z₁], E[Z₂]` from closed forms of both boundary transforms.
pub fn exact_means(m: &Model, c: &Classification) -> Result<[f64; 2]> {
    let forms = Forms::new(m, c)?;
    let (Some(f1), Some(f2)) = (forms.phi1, forms.phi2) else {
        return Err(Error::NotCovered("the means need closed forms of phi1 and phi2".into()));
    };
    let d1 = oracle::series_coeffs(&f1, &m.kernel, 1)?[1];
    let d2 = oracle::series_coeffs(&f2, &forms.swapped.kernel, 1)?[1];
    Ok(closed_form::stationary_means(&m.quadrant, d1, d2))
}

/// Points of `R`: `y(s)` for `s ∈ [−10, −0.1]`.
pub fn boundary_points(k: &KernelGeometry, n: usize) -> Vec<(C, C)> {
    (0..n)
        .map(|i| {
            let s = C::new(-0.1 - 9.9 * i as f64 / (n - 1).max(1) as f64, 0.0);
            (s, k.y_of(s))
        })
        .filter(|(_, y)| y.im.abs() > 1e-12)
        .collect()
}

/// Interior points of `G_R`: images of `s` in the sector `π < arg s < π + 2β`.
pub fn interior_points(k: &KernelGeometry, beta: f64, n: usize) -> Vec<C> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < n && i < 50 * n {
        let t = 0.1 + 0.8 * ((i * 7) % 19) as f64 / 18.0;
        let rho = 0.35 + 2.5 * ((i * 5) % 11) as f64 / 10.0;
        let y = k.y_of(C::from_polar(rho, PI + 2.0 * beta * t));
        if k.region_of(y) == Region::InteriorGR && y.norm() < 50.0 {
            out.push(y);
        }
        i += 1;
    }
    out
}

/// Slope of `log|f(−t)|` against `log t` for `t ∈ [10³, 10⁵]` by least squares.
pub fn tail_slope(f: &LaplaceForm) -> Result<f64> {
    let n = 21;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let lt = 1e3f64.ln() + 1e2f64.ln() * i as f64 / (n - 1) as f64;
        let v = f.eval(C::new(-lt.exp(), 0.0))?.norm().ln();
        (sx, sy, sxx, sxy) = (sx + lt, sy + v, sxx + lt * lt, sxy + lt * v);
    }
    let n = n as f64;
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Facts about the canonical invariant.
pub fn invariant_checks(k: &KernelGeometry, tol: f64) -> Result<Vec<Check>> {
    let w = InvariantW::new(k);
    let at_m1 = (w.eval(C::new(k.y_at_minus_one(), 0.0))? + 1.0).norm();
    let at_minus = (w.eval(C::new(k.y_minus, 0.0))? - 1.0).norm();
    let mut round = 0.0f64;
    for i in 0..100 {
        let z = C::new(
            -0.9 + 6.0 * ((i * 37) % 100) as f64 / 100.0,
            3.0 * (((i * 61) % 100) as f64 / 100.0 - 0.5),
        );
        let y = w.inverse(k, z)?;
        round = round.max((w.eval(y)? - z).norm() / (1.0 + z.norm()));
    }
    let mut sym = 0.0f64;
    for (_, y) in boundary_points(k, 50) {
        let (a, b) = (w.eval_at_s(k.s_preimage(y)), w.eval_at_s(k.s_preimage(y.conj())));
        sym = sym.max((a - b).norm() / (1.0 + a.norm()));
    }
    Ok(vec![
        Check::below("w(y(-1)) = -1", at_m1, tol),
        Check::below("w(y-) = 1", at_minus, tol),
        Check::below("w(w^-1(z)) = z", round, tol),
        Check::below("w(y) = w(conj y) on R", sym, tol),
    ])
}

/// All oracle-agreement checks that apply to a model.
pub fn verify_model(m: &Model, c: &Classification, tol: f64) -> Result<Vec<Check>> {
    let k = &m.kernel;
    let mut checks = invariant_checks(k, tol.max(1e-10))?;
    let forms = Forms::new(m, c)?;
    let oracle1 = match IntegralOracle::new(m) {
        Ok(o) => Some(o),
        Err(Error::NotCovered(_)) => None,
        Err(e) => return Err(e),
    };
    let oracle2 = match IntegralOracle::new(&forms.swapped) {
        Ok(o) => Some(o),
        Err(Error::NotCovered(_)) => None,
        Err(e) => return Err(e),
    };
    if let (Some(o1), Some(o2)) = (&oracle1, &oracle2) {
        let (r, _) = oracle::kernel_residual(k, |y| o1.eval(y), |x| o2.eval(x), 20)?;
        checks.push(Check::below("integral: kernel relation on the real curve", r, 1e-8));
    }
    if let Some(f) = &forms.phi1 {
        let (mut bc, mut er) = (0.0f64, 0.0f64);
        for (s, y) in boundary_points(k, 50) {
            let a = f.eval(y)?;
            bc = bc.max((f.eval(y.conj())? - k.g_ratio(y)? * a).norm() / (1.0 + a.norm()));
            let b = f.eval(k.y_of(k.q * s))?;
            er = er.max((b - k.e_func(s)? * a).norm() / (1.0 + a.norm()));
        }
        checks.push(Check::below("boundary relation on R", bc, tol));
        checks.push(Check::below("E-relation on the negative axis", er, tol));
        checks.push(Check::below(
            "phi1(0) equals the mass",
            (f.eval(C::new(0.0, 0.0))?.re - m.masses.0).abs(),
            tol,
        ));
        let slope = tail_slope(f)?;
        checks.push(Check::below(
            "tail exponent alpha - 1",
            (slope - (c.angles.alpha - 1.0)).abs(),
            1e-2,
        ));
        if let Some(o) = &oracle1 {
            let mut worst = 0.0f64;
            for y in interior_points(k, m.wedge.beta, 20) {
                worst = worst.max(rel(f.eval(y)?, o.eval(y)?));
            }
            checks.push(Check::below("closed form vs contour integral", worst, 1e-5));
        }
        if let Ok(d) = closed_form::density(f) {
            checks.push(Check::below(
                "boundary density mass",
                (d.mass() - m.masses.0).abs(),
                1e-4,
            ));
            let mut worst = 0.0f64;
            for y in [C::new(-0.5, 0.0), C::new(-1.5, 0.7), C::new(-0.1, -0.3)] {
                worst = worst.max(rel(oracle::numeric_laplace1d(&d, y)?, f.eval(y)?));
            }
            checks.push(Check::below("boundary density transform", worst, 1e-6));
        }
        if let Ok(r) = closed_form::moment_recurrence(m) {
            let co = oracle::series_coeffs(f, k, 20)?;
            let mt = r.moments(20);
            let mut fact = 1.0;
            let mut worst = 0.0f64;
            for (i, (a, b)) in mt.iter().zip(&co).enumerate() {
                if i > 0 {
                    fact *= i as f64;
                }
                worst = worst.max((a - fact * b).abs() / a.abs());
            }
            checks.push(Check::below("moment recurrence vs series", worst, 1e-8));
        }
    }
    if let Some(p) = &forms.phi2 {
        let mut worst = 0.0f64;
        if let Some(o) = &oracle2 {
            for x in interior_points(&forms.swapped.kernel, m.wedge.beta, 10) {
                worst = worst.max(rel(p.eval(x)?, o.eval(x)?));
            }
            checks.push(Check::below("phi2 closed form vs contour integral", worst, 1e-5));
        }
    }
    if let Ok(d) = closed_form::stationary_density(m) {
        let mass = oracle::numeric_laplace2d(&d, C::new(0.0, 0.0), C::new(0.0, 0.0), 1e-8)?;
        checks.push(Check::below("stationary density mass", (mass.re - 1.0).abs(), 1e-4));
        let mut worst = 0.0f64;
        for i in 0..10 {
            let x = C::new(-0.3 - 0.2 * i as f64, 0.1 * i as f64);
            let y = C::new(-1.0 + 0.08 * i as f64, -0.05 * i as f64);
            let a = oracle::numeric_laplace2d(&d, x, y, 1e-8)?;
            worst = worst.max(rel(a, closed_form::phi_alg_00(m, x, y)));
        }
        checks.push(Check::below("stationary density transform", worst, 1e-4));
    }
    Ok(checks)
}

fn examples(tol: f64) -> Result<(Value, Vec<Check>)> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut table =
        String::from("name                    nature            simple     double           match  worst\n");
    for ex in catalog::examples() {
        let m = ex.model()?;
        let c = classify::classify(&m)?;
        let d = c
            .conditions
            .double
            .map(|d| [d.rbar1(), d.kbar1(), d.rbar2(), d.kbar2()]);
        let matches = c.nature.class == ex.class
            && c.conditions.simple == ex.simple
            && d == ex.double
            && c.nature.recip_phi1_dfinite == ex.recip_dfinite;
        checks.push(Check::exact(&format!("{}: classification", ex.name), matches));
        let vc = verify_model(&m, &c, tol)?;
        let failed: Vec<&str> = vc.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let worst = vc.iter().map(|c| c.value / c.tol).fold(0.0, f64::max);
        checks.push(Check::exact(&format!("{}: verification", ex.name), failed.is_empty()));
        let simple = c
            .conditions
            .simple
            .map(|s| format!("({},{})", s.r, s.k))
            .unwrap_or("-".into());
        let dbl = d.map(|d| format!("{d:?}")).unwrap_or("-".into());
        table.push_str(&format!(
            "{:<23} {:<17} {:<10} {:<16} {:<6} {:.1e}\n",
            ex.name,
            serde_json::to_value(c.nature.class)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            simple,
            dbl,
            matches,
            worst
        ));
        rows.push(json!({
            "name": ex.name,
            "description": ex.description,
            "classification": classification_json(&m, &c),
            "expected": {"nature": ex.class, "recip_phi1_dfinite": ex.recip_dfinite, "simple": ex.simple, "double": ex.double},
            "matches": matches,
            "failed_checks": failed,
            "worst_ratio_to_tolerance": worst,
        }));
    }
    eprint!("{table}");
    Ok((json!({"examples": rows}), checks))
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Line plot of one or more series over a common abscissa.
pub fn svg_lines(xs: &[f64], series: &[(&str, Vec<f64>)], title: &str) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let xmax = xs.iter().cloned().fold(f64::MIN, f64::max).max(1e-300);
    let ymax = series
        .iter()
        .flat_map(|s| s.1.iter())
        .filter(|v| v.is_finite())
        .cloned()
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n<text x=\"{pad}\" y=\"20\">{title}</text>\n\
         <rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for (j, (name, ys)) in series.iter().enumerate() {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| y.is_finite())
            .map(|(x, y)| {
                format!(
                    "{:.2},{:.2}",
                    pad + x / xmax * (w - 2.0 * pad),
                    h - pad - (y / ymax).min(1.0) * (h - 2.0 * pad)
                )
            })
            .collect();
        let color = PALETTE[j % PALETTE.len()];
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>\n",
            w - pad - 60.0,
            pad + 16.0 * (j + 1) as f64
        ));
    }
    s.push_str("</svg>\n");
    s
}

/// Heat map of `cells[i][j]` over `[0, max]²`, first index along the horizontal axis.
pub fn svg_heatmap(cells: &[Vec<f64>], max: f64, title: &str) -> String {
    let (size, pad) = (480.0, 40.0);
    let n = cells.len().max(1);
    let vmax = cells
        .iter()
        .flatten()
        .filter(|v| v.is_finite())
        .cloned()
        .fold(0.0, f64::max)
        .max(1e-300);
    let cell = size / n as f64;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n<text x=\"{pad}\" y=\"20\">{title} on [0, {max}]^2</text>\n",
        size + 2.0 * pad,
        size + 2.0 * pad
    );
    for (i, row) in cells.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let t = if v.is_finite() { (v / vmax).clamp(0.0, 1.0) } else { 1.0 };
            let shade = (255.0 * (1.0 - t)).round() as u8;
            s.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb(255,{shade},{shade})\"/>\n",
                pad + i as f64 * cell,
                pad + size - (j + 1) as f64 * cell,
                cell,
                cell
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}

fn execute(cli: &Cli) -> Result<(Option<String>, Value, BTreeMap<String, f64>, Vec<Check>)> {
    let mut tolerances = BTreeMap::new();
    let load = |a: &ModelArgs| -> Result<(Model, String, Classification)> {
        let (m, fp) = a.load()?;
        let c = classify::classify(&m)?;
        Ok((m, fp, c))
    };
    Ok(match &cli.command {
        Command::Classify { model } => {
            let (m, fp, c) = load(model)?;
            (
                Some(fp),
                json!({"angles": angles_json(&m), "classification": classification_json(&m, &c)}),
                tolerances,
                vec![],
            )
        }
        Command::Angles { model } => {
            let doc = model.document()?;
            let m = doc.to_model()?;
            let report = model::validate(&m.quadrant);
            let checks = vec![Check::exact("wedge and quadrant conditions agree", report.consistent())];
            let res = json!({
                "angles": angles_json(&m),
                "quadrant": canonical_document(&m),
                "conditions": report,
                "masses": [m.masses.0, m.masses.1],
            });
            (Some(fingerprint(&m)), res, tolerances, checks)
        }
        Command::Laplace { model, eval, grid } => {
            let (m, fp, c) = load(model)?;
            (Some(fp), laplace(&m, &c, eval, grid.as_deref())?, tolerances, vec![])
        }
        Command::Density { model, grid, plot } => {
            let (m, fp, c) = load(model)?;
            (Some(fp), density(&m, &c, grid, plot.as_ref())?, tolerances, vec![])
        }
        Command::Moments { model, n } => {
            let (m, fp, c) = load(model)?;
            tolerances.insert("recurrence".into(), 1e-8);
            let (v, checks) = moments(&m, &c, *n)?;
            (Some(fp), v, tolerances, checks)
        }
        Command::Simulate {
            model,
            dt,
            horizon,
            seed,
            paths,
            grid,
            no_shift,
            csv,
            plot,
        } => {
            let (m, fp, c) = load(model)?;
            let (bins, max) = parse_grid(grid)?;
            let cfg = SimConfig {
                dt: *dt,
                horizon: *horizon,
                seed: *seed,
                n_paths: *paths,
                bins,
                hist_max: [max, max],
                boundary_shift: !no_shift,
                ..SimConfig::default()
            };
            tolerances.insert("standard_errors".into(), 3.0);
            let (v, checks) = simulate(&m, &c, cfg, csv.as_ref(), plot.as_ref())?;
            (Some(fp), v, tolerances, checks)
        }
        Command::Verify { model, tol } => {
            let (m, fp, c) = load(model)?;
            tolerances.insert("relations".into(), *tol);
            tolerances.insert("integral".into(), 1e-5);
            tolerances.insert("tail_exponent".into(), 1e-2);
            tolerances.insert("densities".into(), 1e-4);
            let checks = verify_model(&m, &c, *tol)?;
            (
                Some(fp),
                json!({"classification": classification_json(&m, &c)}),
                tolerances,
                checks,
            )
        }
        Command::Examples { tol } => {
            tolerances.insert("relations".into(), *tol);
            let (v, checks) = examples(*tol)?;
            (None, v, tolerances, checks)
        }
    })
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli) {
        Ok((model_fingerprint, results, tolerances, checks)) => {
            let pass = checks.iter().all(|c| c.pass);
            for c in checks.iter().filter(|c| !c.pass) {
                log::error!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tol);
            }
            let report = RunReport {
                command,
                model_fingerprint,
                results,
                tolerances,
                checks,
                pass,
            };
            match serde_json::to_string_pretty(&report) {
                Ok(s) => println!("{s}"),
                Err(e) => {
                    eprintln!("error: cannot serialize the report: {e}");
                    return 4;
                }
            }
            if pass {
                0
            } else {
                4
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
