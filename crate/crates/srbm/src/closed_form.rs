//! Explicit Laplace transforms under the simple or double angle condition,
//! the catalogued densities, and the moment recurrence.
//!
//! Every polynomial is stored by its roots, which are known values
//! `y(σq^j)` or `w(y(σq^j))`. Evaluation goes through a factor plan that
//! pairs a root of the `y` part with the matching root of the `w` part, so
//! removable singularities are evaluated without cancellation.

use crate::angle::{ArcPosition, PiAngle};
use crate::classify::{self, ConditionData, Double, Simple};
use crate::error::{Error, Result};
use crate::kernel::KernelGeometry;
use crate::model::{normal_scales, Model, QuadrantModel};
use crate::special_fn::{arccos_pair, InvariantW};
use astro_float::{ctx::Context, expr, BigFloat, Consts, RoundingMode};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::PI;

type C = Complex64;

/// Relative tolerance for merging coincident roots.
pub const MERGE_TOL: f64 = 1e-9;
/// Relative distance to the pole below which evaluation is refused.
pub const POLE_TOL: f64 = 1e-10;

/// The special points `s₁`, `s₂` and the rotation `q`, as angles.
#[derive(Debug, Clone, Copy)]
struct Points {
    beta: PiAngle,
    s1: PiAngle,
    s2: PiAngle,
    /// `2β − 2ε − θ`.
    pole_angle: PiAngle,
}

impl Points {
    fn new(m: &Model) -> Points {
        let [b, t, d, e] = m.pi_angles();
        let one = PiAngle::from_ratio(1, 1);
        let pole_angle = b.scale(2).sub(e.scale(2)).sub(t);
        Points {
            beta: b,
            s1: one.add(pole_angle),
            s2: one.add(d.scale(2)).sub(t),
            pole_angle,
        }
    }

    /// `σ·q^j`.
    fn shift(&self, sigma: PiAngle, j: i64) -> PiAngle {
        shift(self.beta, sigma, j)
    }

    fn inside(&self, sigma: PiAngle) -> bool {
        sigma.arc_position(&self.beta) == ArcPosition::Inside
    }

    /// Sign of `2β − 2ε − θ`.
    fn pole_sign(&self) -> Ordering {
        match self.pole_angle {
            PiAngle::Exact(r) => r.cmp(&num_rational::Rational64::from_integer(0)),
            PiAngle::Approx(v) => {
                if (v * PI).abs() < classify::LATTICE_TOL {
                    log::warn!("2*beta - 2*eps - theta is within 1e-9 of 0; treating it as 0");
                    Ordering::Equal
                } else if v > 0.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }
}

fn shift(beta: PiAngle, sigma: PiAngle, j: i64) -> PiAngle {
    sigma.add(beta.scale(2 * j)).reduce2()
}

/// `m₊(σ; a, b)` (`sign = 1`) or `m₋(σ; a, b)` (`sign = −1`): the number of
/// `j ∈ [a, b]` with `σq^{±j} = −1`.
pub fn mult(beta: PiAngle, sigma: PiAngle, sign: i64, a: i64, b: i64) -> i64 {
    (a..=b).filter(|&j| shift(beta, sigma, sign * j).is_minus_one()).count() as i64
}

/// `⌊v/2⌋` for an angle `v` in units of π, snapping float values within `1e-9`.
fn floor_half(v: PiAngle) -> i64 {
    match v {
        PiAngle::Exact(r) => (r / num_rational::Rational64::from_integer(2)).floor().to_integer(),
        PiAngle::Approx(x) => {
            let h = 0.5 * x;
            let n = h.round();
            if ((h - n) * 2.0 * PI).abs() < classify::LATTICE_TOL {
                n as i64
            } else {
                h.floor() as i64
            }
        }
    }
}

/// Number of roots (`r ≥ 0`) or poles (`r < 0`) of `F_{r,σ}` in the open domain `G_R`.
pub fn count_in_gr(beta: PiAngle, sigma: PiAngle, r: i64) -> i64 {
    let one = PiAngle::from_ratio(1, 1);
    let base = floor_half(sigma.sub(one));
    let shifted = floor_half(sigma.sub(one).sub(beta.scale(2 * r)));
    if r >= 0 {
        base - shifted - mult(beta, sigma, -1, 0, r - 1)
    } else {
        shifted - base - mult(beta, sigma, 1, 1, -r)
    }
}

/// The same count by direct enumeration of `y(σq^{∓j})` with [`KernelGeometry::region_of`].
pub fn count_in_gr_enumerated(k: &KernelGeometry, beta: PiAngle, sigma: PiAngle, r: i64) -> i64 {
    let js: Vec<i64> = if r >= 0 {
        (0..r).map(|j| -j).collect()
    } else {
        (1..=-r).collect()
    };
    js.into_iter()
        .filter(|&j| {
            let y = y_unit(k, shift(beta, sigma, j));
            k.region_of(C::new(y, 0.0)) == crate::kernel::Region::InteriorGR
        })
        .count() as i64
}

/// `y(e^{iπv})`, a real number.
fn y_unit(k: &KernelGeometry, v: PiAngle) -> f64 {
    k.y_on_circle(v.reduce2().radians())
}

/// A root with multiplicity; `preimage` is the point `y ∈ G_R` a root of `w`
/// comes from, when it has one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub value: f64,
    pub mult: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage: Option<f64>,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * (1.0 + a.abs().max(b.abs()))
}

fn push_root(list: &mut Vec<Root>, value: f64, mult: u32, preimage: Option<f64>) {
    if mult == 0 {
        return;
    }
    if let Some(r) = list.iter_mut().find(|r| close(r.value, value)) {
        r.mult += mult;
    } else {
        list.push(Root { value, mult, preimage });
    }
}

fn degree(list: &[Root]) -> i64 {
    list.iter().map(|r| r.mult as i64).sum()
}

/// A decoupling function `F` with `(γ₁/γ₂)^m = F(y)/L(x)` on `γ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecouplingPair {
    pub m: u8,
    pub numerator: Vec<Root>,
    pub denominator: Vec<Root>,
}

impl DecouplingPair {
    pub fn eval_f(&self, y: C) -> C {
        let mut v = C::new(1.0, 0.0);
        for r in &self.numerator {
            v *= (y - r.value).powi(r.mult as i32);
        }
        for r in &self.denominator {
            v /= (y - r.value).powi(r.mult as i32);
        }
        v
    }

    /// `L(x) = F(y)·(γ₂/γ₁)^m(x, y)` at a point of `γ = 0`.
    pub fn l_value(&self, k: &KernelGeometry, x: C, y: C) -> C {
        let (_, g1, g2) = k.gamma(x, y);
        self.eval_f(y) * (g2 / g1).powi(self.m as i32)
    }

    /// Relative disagreement of `L(x)` computed from the two roots `Y±(x)`.
    pub fn identity_residual(&self, k: &KernelGeometry, x: C) -> f64 {
        let roots = k.y_roots(x);
        let a = self.l_value(k, x, roots.plus);
        let b = self.l_value(k, x, roots.minus);
        (a - b).norm() / a.norm().max(b.norm())
    }
}

/// The decoupling function of the simple (`m = 1`) or double (`m = 2`) angle condition.
pub fn decoupling(m: &Model, c: &ConditionData) -> Result<DecouplingPair> {
    let pts = Points::new(m);
    let k = &m.kernel;
    let mut num = Vec::new();
    let mut den = Vec::new();
    let add_f = |num: &mut Vec<Root>, den: &mut Vec<Root>, sigma: PiAngle, r: i64, times: u32| {
        if r >= 0 {
            for j in 0..r {
                push_root(num, y_unit(k, pts.shift(sigma, -j)), times, None);
            }
        } else {
            for j in 1..=-r {
                push_root(den, y_unit(k, pts.shift(sigma, j)), times, None);
            }
        }
    };
    if let Some(s) = c.simple {
        add_f(&mut num, &mut den, pts.s1, s.r, 1);
        return Ok(DecouplingPair {
            m: 1,
            numerator: num,
            denominator: den,
        });
    }
    let d = c.double.ok_or(Error::NoDecoupling)?;
    add_f(&mut num, &mut den, pts.s1, d.r1, 2);
    add_f(&mut den, &mut num, pts.s2, d.r2, 2);
    let f_root = |eps: i64| y_unit(k, pts.beta.add(PiAngle::from_ratio(eps, 1)));
    if d.e1 == 1 {
        push_root(&mut num, f_root(d.eps1), 1, None);
    }
    if d.e2 == 1 {
        push_root(&mut den, f_root(d.eps2), 1, None);
    }
    Ok(DecouplingPair {
        m: 2,
        numerator: num,
        denominator: den,
    })
}

/// One factor of the evaluation plan, raised to `exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Factor {
    /// `(y − root)`.
    Linear { root: f64, exp: i32 },
    /// `(w(y) − root)`.
    Invariant { root: f64, exp: i32 },
    /// `(w(y) − w(y_c))/(y − y_c)`, analytic and nonzero at `y_c ∈ G_R`.
    Paired { yc: f64, zc: f64, tc: C, exp: i32 },
    /// `(w(y) + 1)/(y − y(−1))²`.
    Cusp { exp: i32 },
    /// `√(1 + w(y))/(y − y(−1))`.
    SqrtCusp { exp: i32 },
    /// `√((1 − w)/(y − y⁻))`.
    SqrtMinus { exp: i32 },
    /// `√(1 + w)`.
    SqrtPlus { exp: i32 },
    /// `√(y⁺ − y)`.
    SqrtYPlus { exp: i32 },
}

/// `sin(a·u/2)/sin(u/2)`, smooth at `u = 0`.
fn sin_ratio(a: f64, u: C) -> C {
    if u.norm() < 1e-3 {
        let v2 = 0.25 * u * u;
        let a2 = a * a;
        a * (1.0 - (a2 - 1.0) * v2 / 6.0 + (3.0 * a2 * a2 - 10.0 * a2 + 7.0) * v2 * v2 / 360.0)
    } else {
        (0.5 * a * u).sin() / (0.5 * u).sin()
    }
}

/// The explicit form of `φ₁`:
/// `κ·(Q/P)(y)·(S/R)(w(y))·√((1−w)/(y−y⁻))^{a⁻}·√(1+w)^{b}/√(y⁺−y)^{a⁺}`.
#[derive(Debug, Clone, Serialize)]
pub struct LaplaceForm {
    pub m: u8,
    /// Roots of the `y`-polynomial in the denominator.
    pub poly_p: Vec<Root>,
    /// Roots of the `y`-polynomial in the numerator.
    pub poly_q: Vec<Root>,
    /// Roots of the `w`-polynomial in the numerator.
    pub poly_s: Vec<Root>,
    /// Roots of the `w`-polynomial in the denominator.
    pub poly_r: Vec<Root>,
    pub a_minus: i32,
    pub a_plus: i32,
    pub b: i32,
    pub kappa: f64,
    /// The pole `p = y(s₁)` of `φ₁` in the closure of `G_R`, if any.
    pub pole: Option<f64>,
    /// `φ₁(0)`, the mass of the boundary measure.
    pub mass: f64,
    #[serde(skip)]
    plan: Vec<Factor>,
    #[serde(skip)]
    w: InvariantW,
    #[serde(skip)]
    y_m1: f64,
}

/// Root lists before pairing.
#[derive(Default)]
struct Lists {
    p: Vec<Root>,
    q: Vec<Root>,
    s: Vec<Root>,
    r: Vec<Root>,
}

struct Ctx<'a> {
    k: &'a KernelGeometry,
    w: InvariantW,
    pts: Points,
}

impl Ctx<'_> {
    fn y(&self, sigma: PiAngle) -> f64 {
        y_unit(self.k, sigma)
    }

    /// Push `w(y(σ))` with its preimage.
    fn push_w(&self, list: &mut Vec<Root>, sigma: PiAngle) -> Result<()> {
        let y = self.y(sigma);
        let z = self.w.eval(C::new(y, 0.0))?.re;
        push_root(list, z, 1, Some(y));
        Ok(())
    }

    fn m_plus(&self, sigma: PiAngle, a: i64, b: i64) -> u32 {
        mult(self.pts.beta, sigma, 1, a, b) as u32
    }

    fn m_minus(&self, sigma: PiAngle, a: i64, b: i64) -> u32 {
        mult(self.pts.beta, sigma, -1, a, b) as u32
    }
}

fn check_degree(which: &str, list: &[Root], expected: i64) -> Result<()> {
    let found = degree(list);
    if found != expected {
        return Err(Error::DegreeMismatch {
            which: which.into(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Build `φ₁` from whichever angle condition holds, preferring the simple one.
pub fn build_phi1(m: &Model, c: &ConditionData) -> Result<LaplaceForm> {
    if let Some(s) = c.simple {
        build_simple(m, s)
    } else if let Some(d) = c.double {
        build_double(m, d)
    } else {
        Err(Error::NotCovered("neither angle condition holds".into()))
    }
}

/// Build `φ₂`, the transform on the other boundary, by exchanging coordinates.
pub fn build_phi2(m: &Model) -> Result<LaplaceForm> {
    let sw = m.swapped()?;
    let cls = classify::classify(&sw)?;
    build_phi1(&sw, &cls.conditions)
}

fn check_simple(m: &Model, s: Simple) -> Result<()> {
    let a = classify::alphas(m);
    let res = (s.k as f64 * PI - s.r as f64 * m.wedge.beta - m.wedge.beta * (a.alpha - 1.0)).abs();
    if s.r == 0 || res > classify::LATTICE_TOL {
        return Err(Error::Input(format!(
            "({}, {}) does not solve the simple angle condition",
            s.r, s.k
        )));
    }
    Ok(())
}

/// `φ₁` under the simple angle condition `δ+ε = (1−r)β + (1+k)π`.
pub fn build_simple(m: &Model, s: Simple) -> Result<LaplaceForm> {
    check_simple(m, s)?;
    let cx = Ctx {
        k: &m.kernel,
        w: InvariantW::new(&m.kernel),
        pts: Points::new(m),
    };
    let pts = cx.pts;
    let sign = pts.pole_sign();
    let mut l = Lists::default();
    if s.r < 0 {
        let n = -s.r;
        for j in 1..=n {
            let sig = pts.shift(pts.s1, j);
            push_root(&mut l.q, cx.y(sig), 1, None);
            if pts.inside(sig) {
                cx.push_w(&mut l.r, sig)?;
            }
        }
        if sign == Ordering::Greater {
            cx.push_w(&mut l.r, pts.s1)?;
        }
        push_root(&mut l.r, -1.0, cx.m_plus(pts.s1, 0, n - 1), None);
        check_degree("R", &l.r, -s.k)?;
    } else {
        for j in 0..s.r {
            push_root(&mut l.p, cx.y(pts.shift(pts.s1, -j)), 1, None);
        }
        for j in 1..s.r {
            let sig = pts.shift(pts.s1, -j);
            if pts.inside(sig) {
                cx.push_w(&mut l.s, sig)?;
            }
        }
        if pts.inside(pts.s1) && sign != Ordering::Greater {
            cx.push_w(&mut l.s, pts.s1)?;
        }
        push_root(&mut l.s, -1.0, cx.m_minus(pts.s1, 1, s.r - 1), None);
        check_degree("S", &l.s, s.k)?;
    }
    finish(m, 1, l, (0, 0, 0), sign)
}

/// `φ₁` under the double angle condition.
pub fn build_double(m: &Model, d: Double) -> Result<LaplaceForm> {
    classify::check_conditions(
        m,
        &ConditionData {
            simple: None,
            double: Some(d),
            mode: classify::Mode::Numerical,
        },
    )?;
    let cx = Ctx {
        k: &m.kernel,
        w: InvariantW::new(&m.kernel),
        pts: Points::new(m),
    };
    let pts = cx.pts;
    let sign = pts.pole_sign();
    let mut l = Lists::default();
    let (s1, s2) = (pts.s1, pts.s2);
    // Index 1.
    if d.r1 > 0 {
        for j in 0..d.r1 {
            push_root(&mut l.p, cx.y(pts.shift(s1, -j)), 1, None);
        }
        let mut s1_roots = Vec::new();
        for j in 1..d.r1 {
            let sig = pts.shift(s1, -j);
            if pts.inside(sig) {
                cx.push_w(&mut s1_roots, sig)?;
            }
        }
        if pts.inside(s1) && sign != Ordering::Greater {
            cx.push_w(&mut s1_roots, s1)?;
        }
        push_root(&mut s1_roots, -1.0, cx.m_minus(s1, 1, d.r1 - 1), None);
        check_degree("S1", &s1_roots, d.k1)?;
        merge_into(&mut l.s, s1_roots);
    } else {
        let n = -d.r1;
        let mut r1_roots = Vec::new();
        for j in 1..=n {
            let sig = pts.shift(s1, j);
            push_root(&mut l.q, cx.y(sig), 1, None);
            if pts.inside(sig) {
                cx.push_w(&mut r1_roots, sig)?;
            }
        }
        if sign == Ordering::Greater {
            cx.push_w(&mut r1_roots, s1)?;
        }
        push_root(&mut r1_roots, -1.0, cx.m_plus(s1, 0, n), None);
        check_degree("R1", &r1_roots, -d.k1)?;
        merge_into(&mut l.r, r1_roots);
    }
    // Index 2 enters inverted.
    if d.r2 > 0 {
        let mut s2_roots = Vec::new();
        for j in 0..d.r2 {
            let sig = pts.shift(s2, -j);
            push_root(&mut l.q, cx.y(sig), 1, None);
            if pts.inside(sig) {
                cx.push_w(&mut s2_roots, sig)?;
            }
        }
        push_root(&mut s2_roots, -1.0, cx.m_minus(s2, 1, d.r2 - 1), None);
        check_degree("S2", &s2_roots, d.k2)?;
        merge_into(&mut l.r, s2_roots);
    } else {
        let n = -d.r2;
        let mut r2_roots = Vec::new();
        for j in 1..=n {
            let sig = pts.shift(s2, j);
            push_root(&mut l.p, cx.y(sig), 1, None);
            if pts.inside(sig) {
                cx.push_w(&mut r2_roots, sig)?;
            }
        }
        push_root(&mut r2_roots, -1.0, cx.m_plus(s2, 1, n), None);
        check_degree("R2", &r2_roots, -d.k2)?;
        merge_into(&mut l.s, r2_roots);
    }
    let a_minus = (d.e1 * d.eps1 - d.e2 * d.eps2) as i32;
    let a_plus = (d.e1 * (1 - d.eps1) - d.e2 * (1 - d.eps2)) as i32;
    let b = (d.eps1 * (1 - d.e1) - d.eps2 * (1 - d.e2)) as i32;
    finish(m, 2, l, (a_minus, a_plus, b), sign)
}

fn merge_into(dst: &mut Vec<Root>, src: Vec<Root>) {
    for r in src {
        push_root(dst, r.value, r.mult, r.preimage);
    }
}

/// Signed exponents keyed by root value.
fn signed(pos: &[Root], neg: &[Root]) -> Vec<(f64, i32, Option<f64>)> {
    let mut out: Vec<(f64, i32, Option<f64>)> = Vec::new();
    for (list, sg) in [(pos, 1), (neg, -1)] {
        for r in list {
            if let Some(e) = out.iter_mut().find(|e| close(e.0, r.value)) {
                e.1 += sg * r.mult as i32;
                e.2 = e.2.or(r.preimage);
            } else {
                out.push((r.value, sg * r.mult as i32, r.preimage));
            }
        }
    }
    out
}

/// Move `p` units of opposite-signed exponent out of `a` (weight 1) and `b` (weight `wb`).
fn take_pair(a: &mut i32, b: &mut i32, wb: i32) -> i32 {
    if *a == 0 || *b == 0 || a.signum() == b.signum() {
        return 0;
    }
    let p = a.abs().min(b.abs() / wb);
    let s = a.signum();
    *a -= s * p;
    *b += s * p * wb;
    s * p
}

fn finish(m: &Model, mm: u8, l: Lists, (a_minus, a_plus, b): (i32, i32, i32), sign: Ordering) -> Result<LaplaceForm> {
    let k = &m.kernel;
    let w = InvariantW::new(k);
    let y_m1 = k.y_at_minus_one();
    let mut ys = signed(&l.q, &l.p);
    let mut ws = signed(&l.s, &l.r);
    let mut plan = Vec::new();
    let ym1_idx = ys.iter().position(|e| close(e.0, y_m1));
    // Roots −1 of the w part against double roots y(−1) of the y part.
    if let Some(iy) = ym1_idx {
        if let Some(iw) = ws.iter().position(|e| close(e.0, -1.0)) {
            let p = take_pair(&mut ws[iw].1, &mut ys[iy].1, 2);
            if p != 0 {
                plan.push(Factor::Cusp { exp: p });
            }
        }
    }
    let mut b_rest = b;
    if let Some(iy) = ym1_idx {
        let p = take_pair(&mut b_rest, &mut ys[iy].1, 1);
        if p != 0 {
            plan.push(Factor::SqrtCusp { exp: p });
        }
    }
    for we in ws.iter_mut() {
        let Some(yc) = we.2 else { continue };
        if let Some(ye) = ys.iter_mut().find(|e| close(e.0, yc)) {
            let p = take_pair(&mut we.1, &mut ye.1, 1);
            if p != 0 {
                let (tc, _) = arccos_pair(w.arg(C::new(yc, 0.0)));
                plan.push(Factor::Paired {
                    yc,
                    zc: we.0,
                    tc,
                    exp: p,
                });
            }
        }
    }
    for (root, exp, _) in ys {
        if exp != 0 {
            plan.push(Factor::Linear { root, exp });
        }
    }
    for (root, exp, _) in ws {
        if exp != 0 {
            plan.push(Factor::Invariant { root, exp });
        }
    }
    for (f, e) in [
        (Factor::SqrtMinus { exp: a_minus }, a_minus),
        (Factor::SqrtPlus { exp: b_rest }, b_rest),
        (Factor::SqrtYPlus { exp: -a_plus }, a_plus),
    ] {
        if e != 0 {
            plan.push(f);
        }
    }
    let pole = match sign {
        Ordering::Less => None,
        _ => Some(k.y_on_circle(PI + m.wedge.beta * 2.0 - 2.0 * m.wedge.eps - m.wedge.theta)),
    };
    let mass = m.masses.0;
    let mut f = LaplaceForm {
        m: mm,
        poly_p: l.p,
        poly_q: l.q,
        poly_s: l.s,
        poly_r: l.r,
        a_minus,
        a_plus,
        b,
        kappa: 1.0,
        pole,
        mass,
        plan,
        w,
        y_m1,
    };
    let u0 = f.unnormalized(C::new(0.0, 0.0))?;
    if !(u0.norm().is_finite() && u0.norm() > 0.0) || u0.im.abs() > 1e-8 * u0.norm() {
        return Err(Error::Consistency(format!("the unnormalized form at 0 is {u0}")));
    }
    f.kappa = mass / u0.re;
    Ok(f)
}

impl LaplaceForm {
    fn factor_value(&self, f: &Factor, y: C, wv: C, t: C) -> Result<C> {
        let w = &self.w;
        let bb = 2.0 / (w.y_plus - w.y_minus);
        let a = w.a;
        let beta = w.beta;
        let align = |tc: C| if (t - tc).norm() <= (-t - tc).norm() { t } else { -t };
        Ok(match *f {
            Factor::Linear { root, exp } => (y - root).powi(exp),
            Factor::Invariant { root, exp } => (wv - root).powi(exp),
            Factor::Paired { yc, zc, tc, exp } => {
                let ta = align(tc);
                let v = if (ta - tc).norm() < 1.0 {
                    -bb * sin_ratio(a, ta + tc) * sin_ratio(a, ta - tc)
                } else {
                    (wv - zc) / (y - yc)
                };
                v.powi(exp)
            }
            Factor::Cusp { exp } => {
                let tc = C::new(beta, 0.0);
                let ta = align(tc);
                let v = if (ta - tc).norm() < 1.0 {
                    let s = (0.5 * (ta + tc)).sin();
                    bb * bb * sin_ratio(a, ta - tc).powi(2) / (2.0 * s * s)
                } else {
                    (wv + 1.0) / (y - self.y_m1).powi(2)
                };
                v.powi(exp)
            }
            Factor::SqrtCusp { exp } => {
                let tc = C::new(beta, 0.0);
                let ta = align(tc);
                let v = if (ta - tc).norm() < 1.0 {
                    let u = ta + tc;
                    -bb * std::f64::consts::SQRT_2 * (0.25 * a * u).sin() / (0.5 * u).sin()
                        * sin_ratio(0.5 * a, ta - tc)
                } else {
                    w.sqrt_plus(y)? / (y - self.y_m1)
                };
                v.powi(exp)
            }
            Factor::SqrtMinus { exp } => w.sqrt_minus(y)?.powi(exp),
            Factor::SqrtPlus { exp } => w.sqrt_plus(y)?.powi(exp),
            Factor::SqrtYPlus { exp } => (w.y_plus - y).sqrt().powi(exp),
        })
    }

    fn unnormalized(&self, y: C) -> Result<C> {
        let wv = self.w.eval(y)?;
        let (t, _) = arccos_pair(self.w.arg(y));
        let mut v = C::new(1.0, 0.0);
        for f in &self.plan {
            v *= self.factor_value(f, y, wv, t)?;
        }
        Ok(v)
    }

    /// `φ₁(y)` on `ℂ ∖ [y⁺, ∞)`.
    pub fn eval(&self, y: C) -> Result<C> {
        let yp = self.w.y_plus;
        if y.im.abs() <= 1e-12 * (1.0 + y.norm()) && y.re >= yp * (1.0 - 1e-12) {
            return Err(Error::OnCut(format!("y = {y} lies on [y+, inf)")));
        }
        if let Some(p) = self.pole {
            if (y - p).norm() <= POLE_TOL * (1.0 + p.abs()) {
                return Err(Error::AtPole(format!("y = {y} is the pole {p}")));
            }
        }
        Ok(self.kappa * self.unnormalized(y)?)
    }

    /// `y⁺`, the branch point bounding the domain of analyticity.
    pub fn y_plus(&self) -> f64 {
        self.w.y_plus
    }

    /// The canonical invariant used by the form.
    pub fn invariant(&self) -> &InvariantW {
        &self.w
    }

    /// Singularities of the continuation of `φ₁` to `ℂ ∖ [y⁺, ∞)`, plus `y⁺`:
    /// poles from the `y` part and the zeros of the `w` part in the denominator.
    pub fn singularities(&self, k: &KernelGeometry) -> Vec<C> {
        let w = &self.w;
        let mut out = vec![C::new(w.y_plus, 0.0)];
        let zeros_of_w = |z: f64, except: Option<f64>, out: &mut Vec<C>| {
            for y in w.preimages(k, C::new(z, 0.0)) {
                if except.is_none_or(|e| (y - e).norm() > 1e-7 * (1.0 + e.abs())) {
                    out.push(y);
                }
            }
        };
        for f in &self.plan {
            match *f {
                Factor::Linear { root, exp } if exp < 0 => out.push(C::new(root, 0.0)),
                Factor::Invariant { root, exp } if exp < 0 => zeros_of_w(root, None, &mut out),
                Factor::Paired { yc, zc, exp, .. } if exp < 0 => zeros_of_w(zc, Some(yc), &mut out),
                Factor::Cusp { exp } | Factor::SqrtCusp { exp } if exp < 0 => {
                    zeros_of_w(-1.0, Some(self.y_m1), &mut out)
                }
                Factor::SqrtPlus { exp } if exp < 0 => zeros_of_w(-1.0, None, &mut out),
                Factor::SqrtMinus { exp } if exp < 0 => zeros_of_w(1.0, Some(w.y_minus), &mut out),
                _ => {}
            }
        }
        out
    }
}

/// `φ(x, y) = −(γ₁(x,y)φ₁(y) + γ₂(x,y)φ₂(x))/γ(x,y)`.
pub fn eval_phi(k: &KernelGeometry, phi1: &LaplaceForm, phi2: &LaplaceForm, x: C, y: C) -> Result<C> {
    let (g, g1, g2) = k.gamma(x, y);
    let scale = (1.0 + x.norm() + y.norm()).powi(2);
    if g.norm() < 1e-12 * scale {
        return Err(Error::AtKernelZero(format!("gamma vanishes at ({x}, {y})")));
    }
    Ok(-(g1 * phi1.eval(y)? + g2 * phi2.eval(x)?) / g)
}

/// The algebraic expression of `φ(x, y)` when `α₁ = α₂ = 0`.
pub fn phi_alg_00(m: &Model, x: C, y: C) -> C {
    let (d, e) = (m.wedge.delta, m.wedge.eps);
    let k = &m.kernel;
    let xt = (1.0 - x / k.x_plus).sqrt();
    let yt = (1.0 - y / k.y_plus).sqrt();
    let (sd, se, cde) = (d.sin(), e.sin(), (d + e).cos());
    let k0 = -2.0 * sd * se * cde;
    k0 * (xt + yt)
        / (xt * yt * (xt * xt * sd * sd + yt * yt * se * se - 2.0 * xt * yt * sd * se * cde - (d + e).sin().powi(2)))
}

/// Stationary means `E[Z₁], E[Z₂]` from the boundary moments `φ₁′(0)` and `φ₂′(0)`.
///
/// Setting `y = 0` in the kernel equation gives
/// `(σ₁₁x/2 + μ₁)φ(x,0) = −r₁₁φ₁(0) − r₁₂φ₂(x)`; differentiating at `x = 0`
/// gives `E[Z₁] = −(σ₁₁/2 + r₁₂φ₂′(0))/μ₁`, and symmetrically for `Z₂`.
pub fn stationary_means(q: &QuadrantModel, dphi1: f64, dphi2: f64) -> [f64; 2] {
    [
        -(0.5 * q.sigma11 + q.r12 * dphi2) / q.mu1,
        -(0.5 * q.sigma22 + q.r21 * dphi1) / q.mu2,
    ]
}

/// One term `coef·z^power·e^{−rate·z}` of a density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpTerm {
    pub rate: f64,
    pub power: u32,
    pub coef: f64,
}

/// A density whose Laplace transform is a catalogued closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityForm {
    /// `Σ cᵢ z^{pᵢ} e^{−aᵢz}`.
    SumOfExponentials { terms: Vec<ExpTerm> },
    /// `mass·√(rate/π)·e^{−rate·z}/√z`.
    GammaHalf { rate: f64, mass: f64 },
    /// `k·erf(√(bz))·e^{−az}`.
    Erf { a: f64, b: f64, k: f64 },
    /// The stationary density in the quadrant, in polar form around the wedge.
    WedgePolar {
        beta: f64,
        theta: f64,
        kappa: f64,
        /// `|μ̃|`.
        mu_norm: f64,
        /// The wedge-density constant.
        kappa_prime: f64,
        scale_x: f64,
        scale_y: f64,
    },
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

impl DensityForm {
    /// Value of a one-dimensional density at `z ≥ 0`.
    pub fn pdf(&self, z: f64) -> Result<f64> {
        if z < 0.0 {
            return Ok(0.0);
        }
        match self {
            DensityForm::SumOfExponentials { terms } => Ok(terms
                .iter()
                .map(|t| t.coef * z.powi(t.power as i32) * (-t.rate * z).exp())
                .sum()),
            DensityForm::GammaHalf { rate, mass } => Ok(mass * (rate / PI).sqrt() * (-rate * z).exp() / z.sqrt()),
            DensityForm::Erf { a, b, k } => Ok(k * libm::erf((b * z).sqrt()) * (-a * z).exp()),
            DensityForm::WedgePolar { .. } => {
                Err(Error::Input("a two-dimensional density needs two coordinates".into()))
            }
        }
    }

    /// Value of the two-dimensional stationary density at `(z₁, z₂)` in the quadrant.
    pub fn pdf2(&self, z1: f64, z2: f64) -> Result<f64> {
        let DensityForm::WedgePolar {
            beta,
            theta,
            kappa,
            scale_x,
            scale_y,
            ..
        } = *self
        else {
            return Err(Error::Input("a one-dimensional density has one coordinate".into()));
        };
        if z1 < 0.0 || z2 < 0.0 {
            return Ok(0.0);
        }
        let (u1, u2) = (z1 * scale_x, z2 * scale_y);
        let r = (u1 * u1 + u2 * u2 + 2.0 * u1 * u2 * beta.cos()).max(0.0).sqrt();
        if r == 0.0 {
            return Ok(f64::INFINITY);
        }
        let c2 = ((u1 * theta.cos() + u2 * (beta - theta).cos() + r) / (2.0 * r)).clamp(0.0, 1.0);
        Ok(kappa * c2.sqrt() / r.sqrt() * (-2.0 * r * c2).exp())
    }

    /// The analytic Laplace transform `∫ e^{yz} p(z) dz` of a one-dimensional density.
    pub fn laplace(&self, y: C) -> Result<C> {
        match self {
            DensityForm::SumOfExponentials { terms } => Ok(terms
                .iter()
                .map(|t| t.coef * factorial(t.power) / (t.rate - y).powi(t.power as i32 + 1))
                .sum()),
            DensityForm::GammaHalf { rate, mass } => Ok(*mass / (1.0 - y / *rate).sqrt()),
            DensityForm::Erf { a, b, k } => Ok(*k * b.sqrt() / ((*a - y) * (*a + *b - y).sqrt())),
            DensityForm::WedgePolar { .. } => Err(Error::Input("use a two-dimensional transform".into())),
        }
    }

    /// Total mass implied by the parameters.
    pub fn mass(&self) -> f64 {
        match self {
            DensityForm::WedgePolar { .. } => 1.0,
            _ => self.laplace(C::new(0.0, 0.0)).map(|v| v.re).unwrap_or(f64::NAN),
        }
    }
}

/// Partial fractions of `κ·Π(y − aᵢ)^{−mᵢ}` into exponential terms.
fn partial_fractions(kappa: f64, roots: &[(f64, u32)]) -> Vec<ExpTerm> {
    let mut terms = Vec::new();
    for (i, &(ai, mi)) in roots.iter().enumerate() {
        let n = mi as usize;
        // Taylor series in t = y − aᵢ of Π_{j≠i}(y − aⱼ)^{−mⱼ}.
        let mut h = vec![0.0; n];
        h[0] = 1.0;
        for (j, &(aj, mj)) in roots.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = ai - aj;
            let inv: Vec<f64> = (0..n)
                .map(|p| (-1.0f64).powi(p as i32) / d.powi(p as i32 + 1))
                .collect();
            for _ in 0..mj {
                let mut next = vec![0.0; n];
                for (p, hp) in h.iter().enumerate() {
                    for (q, iq) in inv.iter().enumerate().take(n - p) {
                        next[p + q] += hp * iq;
                    }
                }
                h = next;
            }
        }
        // κ·t^{−mᵢ}·Σ hₙtⁿ; the t^{−l} coefficient is κ·h_{mᵢ−l}, and t^{−l} = (−1)^l (aᵢ − y)^{−l}.
        for l in 1..=n {
            let c = kappa * h[n - l] * (-1.0f64).powi(l as i32);
            terms.push(ExpTerm {
                rate: ai,
                power: (l - 1) as u32,
                coef: c / factorial((l - 1) as u32),
            });
        }
    }
    terms
}

/// The density of the boundary measure when `φ₁` is one of the catalogued forms.
pub fn density(f: &LaplaceForm) -> Result<DensityForm> {
    let yp = f.y_plus();
    let mut half_powers = 0i32; // exponent of (y⁺ − y), in halves
    let mut sign = 1.0;
    let mut roots: Vec<(f64, i32)> = Vec::new();
    for fac in &f.plan {
        match *fac {
            Factor::Linear { root, exp } if close(root, yp) => {
                half_powers += 2 * exp;
                if exp % 2 != 0 {
                    sign = -sign;
                }
            }
            Factor::Linear { root, exp } => roots.push((root, exp)),
            Factor::SqrtYPlus { exp } => half_powers += exp,
            _ => return Err(Error::NotCovered("the transform involves the invariant w".into())),
        }
    }
    let kappa = f.kappa * sign;
    let not_covered = || Error::NotCovered("no catalogued density for this transform".into());
    match half_powers {
        0 if roots.iter().all(|r| r.1 < 0 && r.0 > 0.0) => {
            let rs: Vec<(f64, u32)> = roots.iter().map(|r| (r.0, (-r.1) as u32)).collect();
            Ok(DensityForm::SumOfExponentials {
                terms: partial_fractions(kappa, &rs),
            })
        }
        -1 if roots.is_empty() => Ok(DensityForm::GammaHalf { rate: yp, mass: f.mass }),
        -1 if roots.len() == 1 && roots[0].1 == -1 && roots[0].0 > 0.0 && roots[0].0 < yp => {
            let a = roots[0].0;
            let b = yp - a;
            Ok(DensityForm::Erf {
                a,
                b,
                k: f.mass * a * yp.sqrt() / b.sqrt(),
            })
        }
        _ => Err(not_covered()),
    }
}

/// The two-dimensional stationary density when `α₁ = α₂ = 0`.
pub fn stationary_density(m: &Model) -> Result<DensityForm> {
    let a = classify::alphas(m);
    let zero = |v: f64| v.abs() < classify::LATTICE_TOL;
    let exact_zero = a.exact_alphas.map(|e| e[1] == 0.into() && e[2] == 0.into());
    if !exact_zero.unwrap_or(zero(a.alpha1) && zero(a.alpha2)) {
        return Err(Error::NotCovered(
            "the stationary density is catalogued only for alpha1 = alpha2 = 0".into(),
        ));
    }
    let q = &m.quadrant;
    let w = &m.wedge;
    let det = q.det_sigma();
    let dd = q.delta_scalar();
    let (sd, se) = (w.delta.sin(), w.eps.sin());
    let kappa = 2.0 * 2f64.sqrt() * dd * sd * se / (PI.sqrt() * det.powf(1.5) * (0.5 * w.beta).sin());
    let mu_norm = (dd / det).sqrt();
    let kappa_prime = (2.0 * mu_norm).powf(1.5) * sd * se / (PI.sqrt() * (0.5 * w.beta).sin());
    let (sx, sy) = normal_scales(q);
    Ok(DensityForm::WedgePolar {
        beta: w.beta,
        theta: w.theta,
        kappa,
        mu_norm,
        kappa_prime,
        scale_x: sx,
        scale_y: sy,
    })
}

/// The moment recurrence of the case `δ+ε+β = 2π`, `2ε+θ = 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRecurrence {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub kappa_prime: f64,
    pub m0: f64,
    pub m1: f64,
    /// `2/(y⁺ − y⁻)`, with `Mₙ = scaleⁿ·M̃ₙ`.
    pub scale: f64,
    /// `β` and `θ` in radians, and as multiples of π when exact.
    #[serde(skip)]
    angles: ([f64; 2], Option<[Rational64; 2]>),
}

/// Working precision in bits of the recurrence. Forward evaluation is
/// unstable: the equation is singular at `c₂ − z = 1`, where the moment
/// function is analytic, and the spurious solution from that point can
/// outgrow the true one by ten orders of magnitude over twenty steps.
pub const RECURRENCE_BITS: usize = 256;

/// Seed values and coefficients of the recurrence for `M̃ₙ = n!·[zⁿ]φ₁`, `z = 2y/(y⁺−y⁻)`.
pub fn moment_recurrence(m: &Model) -> Result<MomentRecurrence> {
    let [b, t, d, e] = m.pi_angles();
    let two = PiAngle::from_ratio(2, 1);
    let holds = d.add(e).add(b).congruent(&two)
        && d.add(e).add(b).sub(two).turns().abs() < 1e-9
        && e.scale(2).add(t).sub(two).turns().abs() < 1e-9;
    if !holds {
        return Err(Error::NotCovered(
            "the moment recurrence needs delta+eps+beta = 2pi and 2eps+theta = 2pi".into(),
        ));
    }
    let w = &m.wedge;
    let k = &m.kernel;
    let a = PI / w.beta;
    let c1 = w.beta.cos();
    let c2 = (w.beta - w.theta).cos();
    let phi0 = m.masses.0;
    let ct = (PI * w.theta / w.beta).cos();
    let st = (PI * w.theta / w.beta).sin();
    let kappa_prime = phi0 * (c2 - c1).powi(2) / (1.0 - ct);
    let m1 = phi0 * (2.0 / (c2 - c1) - a * st / ((w.beta - w.theta).sin() * (1.0 - ct)));
    let exact = m.exact.map(|e| [e.beta, e.theta]);
    Ok(MomentRecurrence {
        a,
        c1,
        c2,
        kappa_prime,
        m0: phi0,
        m1,
        scale: 2.0 / (k.y_plus - k.y_minus),
        angles: ([w.beta, w.theta], exact),
    })
}

impl MomentRecurrence {
    /// `M̃₀, …, M̃_{n}` from the fourth-order recurrence, evaluated in
    /// `RECURRENCE_BITS`-bit arithmetic from the angles and scaled by `M̃₀`.
    pub fn tilde(&self, n: usize) -> Vec<f64> {
        let mut ctx = Context::new(
            RECURRENCE_BITS,
            RoundingMode::ToEven,
            Consts::new().expect("constants cache"),
            -100000,
            100000,
        );
        let p = RECURRENCE_BITS;
        let big = |v: f64| BigFloat::from_f64(v, p);
        let (beta, theta) = match self.angles.1 {
            Some([b, t]) => {
                let r = |q: Rational64| {
                    BigFloat::from(*q.numer()).div(&BigFloat::from(*q.denom()), p, RoundingMode::ToEven)
                };
                let (rb, rt) = (r(b), r(t));
                (expr!(rb * pi, &mut ctx), expr!(rt * pi, &mut ctx))
            }
            None => (big(self.angles.0[0]), big(self.angles.0[1])),
        };
        let a = expr!(pi / beta, &mut ctx);
        let c1 = expr!(cos(beta), &mut ctx);
        let c2 = expr!(cos(beta - theta), &mut ctx);
        let ct = expr!(cos(pi * theta / beta), &mut ctx);
        let st = expr!(sin(pi * theta / beta), &mut ctx);
        let sbt = expr!(sin(beta - theta), &mut ctx);
        // Seeds for M̃₀ = 1.
        let kp = expr!((c2 - c1) * (c2 - c1) / (1 - ct), &mut ctx);
        let m1 = expr!(2 / (c2 - c1) - a * st / (sbt * (1 - ct)), &mut ctx);
        let a2 = expr!(a * a, &mut ctx);
        let lead = expr!((1 - c2 * c2) * (c1 - c2) * (c1 - c2), &mut ctx);
        let zero = big(0.0);
        let mut m = vec![big(1.0), m1];
        let mut i = 0usize;
        while m.len() <= n {
            let nf = big(i as f64);
            let get = |j: isize| if j < 0 { zero.clone() } else { m[j as usize].clone() };
            let ii = i as isize;
            let (mp1, m0, mm1, mm2) = (get(ii + 1), get(ii), get(ii - 1), get(ii - 2));
            let inhom = if i == 0 { expr!(a2 * kp, &mut ctx) } else { zero.clone() };
            let next = expr!(
                (inhom
                    + (c2 - c1) * (2 * (c1 * c2 - 2 * c2 * c2 + 1) * nf + c1 * c2 - 5 * c2 * c2 + 4) * mp1
                    + ((c1 * c1 - 6 * c1 * c2 + 6 * c2 * c2 - 1) * nf * nf
                        - 3 * (2 * c1 * c2 - 3 * c2 * c2 + 1) * nf
                        - (c1 - c2) * (c1 - c2) * a2
                        - 2 * c1 * c2
                        + 4 * c2 * c2
                        - 2)
                        * m0
                    - nf * (2 * (2 * c2 - c1) * nf * nf + 3 * c2 * nf + 2 * (c1 - c2) * a2 + c2) * mm1
                    + nf * (nf - 1) * (nf * nf - a2) * mm2)
                    / lead,
                &mut ctx
            );
            m.push(next);
            i += 1;
        }
        m.truncate(n + 1);
        m.iter()
            .map(|v| self.m0 * format!("{v}").parse::<f64>().unwrap_or(f64::NAN))
            .collect()
    }

    /// The moments `Mₙ = ∫ tⁿ ν₁(dt)`.
    pub fn moments(&self, n: usize) -> Vec<f64> {
        self.tilde(n)
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.scale.powi(i as i32))
            .collect()
    }

    /// The closed form `κ′(T_a(c₂ − z) + 1)/(c₂ − c₁ − z)²` in the variable `z`.
    pub fn closed_form(&self, z: C) -> Result<C> {
        let t = crate::special_fn::cheb_t(self.a, self.c2 - z)?;
        Ok(self.kappa_prime * (t + 1.0) / (self.c2 - self.c1 - z).powi(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExactAngles;

    type Q = (i64, i64);

    fn exact(b: Q, t: Q, d: Q, e: Q) -> Model {
        Model::from_exact(ExactAngles::new(b, t, d, e)).unwrap()
    }

    fn build(m: &Model) -> LaplaceForm {
        let c = classify::classify(m).unwrap();
        build_phi1(m, &c.conditions).unwrap()
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn pts() -> Vec<C> {
        vec![
            C::new(-0.3, 0.0),
            C::new(-1.7, 0.4),
            C::new(0.2, -0.9),
            C::new(-4.0, 2.0),
            C::new(0.05, 0.0),
        ]
    }

    #[test]
    fn skew_symmetric_is_exponential() {
        let m = exact((1, 2), (1, 4), (3, 5), (2, 5));
        let f = build(&m);
        let ys1 = m.kernel.y_of(m.kernel.s1).re;
        for y in pts() {
            let want = ys1 * m.masses.0 / (ys1 - y);
            assert!(rel(f.eval(y).unwrap(), want) < 1e-12);
        }
    }

    #[test]
    fn orthogonal_form() {
        let m = exact((3, 7), (1, 5), (3, 7), (3, 7));
        let f = build(&m);
        let w = InvariantW::new(&m.kernel);
        let w0 = w.eval(C::new(0.0, 0.0)).unwrap();
        let dw0 = w.deriv(C::new(0.0, 0.0)).unwrap();
        let c = -m.quadrant.mu1 / m.quadrant.r11;
        for y in pts() {
            let want = c * dw0 * y / (w.eval(y).unwrap() - w0);
            assert!(rel(f.eval(y).unwrap(), want) < 1e-10, "{y}");
        }
        assert!((f.eval(C::new(0.0, 0.0)).unwrap().re - m.masses.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_half_case() {
        // α₁ = α₂ = 0: θ = 2δ − π and β − θ = 2ε − π.
        let m = exact((1, 2), (1, 5), (3, 5), (13, 20));
        let f = build(&m);
        assert_eq!(f.m, 2);
        for y in pts() {
            let want = m.masses.0 / (1.0 - y / m.kernel.y_plus).sqrt();
            assert!(rel(f.eval(y).unwrap(), want) < 1e-12);
        }
        assert!(matches!(density(&f).unwrap(), DensityForm::GammaHalf { .. }));
    }

    #[test]
    fn double_root_erlang() {
        let m = exact((5, 16), (1, 4), (5, 16), (3, 8));
        let f = build(&m);
        assert_eq!(f.poly_p.len(), 1);
        assert_eq!(f.poly_p[0].mult, 2);
        let y1 = m.kernel.y_on_circle(0.0);
        for y in pts() {
            let want = y1 * y1 * m.masses.0 / (y1 - y).powi(2);
            assert!(rel(f.eval(y).unwrap(), want) < 1e-12);
        }
        let DensityForm::SumOfExponentials { terms } = density(&f).unwrap() else {
            panic!()
        };
        assert_eq!(terms.len(), 2);
        assert!(terms.iter().any(|t| t.power == 1 && t.coef > 0.0));
        assert!(terms.iter().all(|t| t.power == 1 || t.coef.abs() < 1e-9));
    }

    #[test]
    fn two_representations_agree() {
        // δ+ε+β = 2π, 2ε+θ = 2π: both r = 2 and r = −1 solve the simple condition.
        let m = exact((2, 3), (1, 2), (7, 12), (3, 4));
        let f1 = build_simple(&m, Simple { r: 2, k: 1 }).unwrap();
        let f2 = build_simple(&m, Simple { r: -1, k: -1 }).unwrap();
        for y in pts() {
            assert!(rel(f1.eval(y).unwrap(), f2.eval(y).unwrap()) < 1e-10, "{y}");
        }
        let rec = moment_recurrence(&m).unwrap();
        for y in pts() {
            let z = 2.0 * y / (m.kernel.y_plus - m.kernel.y_minus);
            assert!(rel(f1.eval(y).unwrap(), rec.closed_form(z).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn phi_total_mass_and_algebraic_form() {
        let m = exact((1, 2), (1, 5), (3, 5), (13, 20));
        let f1 = build(&m);
        let f2 = build_phi2(&m).unwrap();
        let k = &m.kernel;
        let v = eval_phi(k, &f1, &f2, C::new(-1e-3, 0.0), C::new(-2e-3, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-2);
        for (x, y) in [
            (C::new(-0.5, 0.1), C::new(-0.3, 0.0)),
            (C::new(-2.0, 0.0), C::new(-1.0, -0.5)),
        ] {
            let a = eval_phi(k, &f1, &f2, x, y).unwrap();
            assert!(rel(a, phi_alg_00(&m, x, y)) < 1e-10);
        }
    }

    #[test]
    fn partial_fraction_round_trip() {
        let roots = [(1.0, 2), (2.5, 1), (4.0, 3)];
        let terms = partial_fractions(3.0, &roots);
        let d = DensityForm::SumOfExponentials { terms };
        for y in [C::new(-0.5, 0.2), C::new(0.3, 0.0)] {
            let want: C = 3.0 / roots.iter().map(|&(a, m)| (y - a).powi(m as i32)).product::<C>();
            assert!(rel(d.laplace(y).unwrap(), want) < 1e-12);
        }
    }
}
