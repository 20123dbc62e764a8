//! The exponents `α, α₁, α₂`, the simple and double angle conditions, and
//! the resulting nature of the Laplace transform.

use crate::angle::PiAngle;
use crate::error::{Error, Result};
use crate::model::Model;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use std::f64::consts::PI;

/// Lattice tolerance in numerical mode.
pub const LATTICE_TOL: f64 = 1e-9;
/// Largest `|r|` searched in numerical mode.
pub const MAX_SHIFT: i64 = 64;
/// Largest denominator considered when asking whether a float `β/π` is rational.
pub const MAX_DENOMINATOR: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numerical,
}

/// The exponents and how they were obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleData {
    pub alpha: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub mode: Mode,
    /// `β/π = n/d` when `β/π` is taken to be rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_over_pi: Option<(i64, i64)>,
    #[serde(skip)]
    pub exact_alphas: Option<[Rational64; 3]>,
    #[serde(skip)]
    pub angles: [PiAngle; 4],
}

/// Integers with `δ+ε = (1−r)β + (1+k)π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Simple {
    pub r: i64,
    pub k: i64,
}

/// Integers with `1−α₁ = 2r₁+e₁ − (2k₁+ε₁)π/β` and `α₂ = 2r₂+e₂ − (2k₂+ε₂)π/β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Double {
    pub r1: i64,
    pub k1: i64,
    pub e1: i64,
    pub eps1: i64,
    pub r2: i64,
    pub k2: i64,
    pub e2: i64,
    pub eps2: i64,
}

impl Double {
    fn from_bars(rb1: i64, kb1: i64, rb2: i64, kb2: i64) -> Double {
        let (r1, e1) = (rb1.div_euclid(2), rb1.rem_euclid(2));
        let (k1, eps1) = (kb1.div_euclid(2), kb1.rem_euclid(2));
        let (r2, e2) = (rb2.div_euclid(2), rb2.rem_euclid(2));
        let (k2, eps2) = (kb2.div_euclid(2), kb2.rem_euclid(2));
        Double {
            r1,
            k1,
            e1,
            eps1,
            r2,
            k2,
            e2,
            eps2,
        }
    }

    pub fn rbar1(&self) -> i64 {
        2 * self.r1 + self.e1
    }
    pub fn kbar1(&self) -> i64 {
        2 * self.k1 + self.eps1
    }
    pub fn rbar2(&self) -> i64 {
        2 * self.r2 + self.e2
    }
    pub fn kbar2(&self) -> i64 {
        2 * self.k2 + self.eps2
    }
}

/// Which angle conditions hold, with their integer data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionData {
    pub simple: Option<Simple>,
    pub double: Option<Double>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum NatureClass {
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "algebraic")]
    Algebraic,
    #[serde(rename = "D-finite")]
    DFinite,
    #[serde(rename = "D-algebraic")]
    DAlgebraic,
    #[serde(rename = "D-transcendental")]
    DTranscendental,
}

/// Position of `φ₁` in the hierarchy rational ⊂ algebraic ⊂ D-finite ⊂ D-algebraic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Nature {
    pub class: NatureClass,
    /// Whether `1/φ₁` is D-finite; `None` where it is not decided.
    pub recip_phi1_dfinite: Option<bool>,
    pub logderiv_dfinite: bool,
}

/// The exponents of a model, exact when its angles are declared exactly.
pub fn alphas(m: &Model) -> AngleData {
    let angles = m.pi_angles();
    match m.exact {
        Some(e) => {
            let one = Rational64::from_integer(1);
            let two = Rational64::from_integer(2);
            let a = (e.delta + e.eps - one) / e.beta;
            let a1 = (two * e.eps + e.theta - e.beta - one) / e.beta;
            let a2 = (two * e.delta - e.theta - one) / e.beta;
            let f = |r: Rational64| r.to_f64().unwrap_or(f64::NAN);
            AngleData {
                alpha: f(a),
                alpha1: f(a1),
                alpha2: f(a2),
                mode: Mode::Exact,
                beta_over_pi: Some((*e.beta.numer(), *e.beta.denom())),
                exact_alphas: Some([a, a1, a2]),
                angles,
            }
        }
        None => {
            let w = &m.wedge;
            AngleData {
                alpha: (w.delta + w.eps - PI) / w.beta,
                alpha1: (2.0 * w.eps + w.theta - w.beta - PI) / w.beta,
                alpha2: (2.0 * w.delta - w.theta - PI) / w.beta,
                mode: Mode::Numerical,
                beta_over_pi: None,
                exact_alphas: None,
                angles,
            }
        }
    }
}

/// `n⁻¹ mod d` for coprime `n`, `d`.
fn mod_inverse(n: i64, d: i64) -> i64 {
    let g = n.extended_gcd(&d);
    g.x.mod_floor(&d)
}

/// Integer solutions of `x·n − y·d = v` with `x` near zero: `x ≡ v·n⁻¹ (mod d)`.
fn lattice_candidates(n: i64, d: i64, v: i64) -> Vec<(i64, i64)> {
    let x0 = (v.mod_floor(&d) * mod_inverse(n, d)).mod_floor(&d);
    (-3..=3)
        .map(|j| {
            let x = x0 + j * d;
            (x, (x * n - v) / d)
        })
        .collect()
}

fn exact_simple(a: &AngleData) -> Option<Simple> {
    let [b, t, de, ep] = a.angles.map(|x| match x {
        PiAngle::Exact(r) => r,
        PiAngle::Approx(_) => unreachable!(),
    });
    let _ = t;
    let (n, d) = (*b.numer(), *b.denom());
    // δ+ε−π−β = kπ − rβ, in units of π: k − r·n/d = v.
    let v = de + ep - Rational64::from_integer(1) - b;
    let vd = v * Rational64::from_integer(d);
    if !vd.is_integer() {
        return None;
    }
    // k·d − r·n = vd ⇔ r·n − k·d = −vd.
    let mut best: Option<Simple> = None;
    for (r, k) in lattice_candidates(n, d, -vd.to_integer()) {
        if r == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some(s) => (k.abs(), r.abs(), -r) < (s.k.abs(), s.r.abs(), -s.r),
        };
        if better {
            best = Some(Simple { r, k });
        }
    }
    best
}

/// Solve `ω = R̄β − K̄π` (units of π), preferring minimal `|K̄|`, then minimal `|⌊R̄/2⌋|`.
fn exact_bar(omega: Rational64, n: i64, d: i64) -> Option<(i64, i64)> {
    let wd = omega * Rational64::from_integer(d);
    if !wd.is_integer() {
        return None;
    }
    let mut cands = lattice_candidates(n, d, wd.to_integer());
    cands.sort_by_key(|&(rb, kb)| (kb.abs(), rb.div_euclid(2).abs(), rb.abs(), -rb));
    cands.first().copied()
}

fn exact_double(a: &AngleData) -> Option<Double> {
    let [b, t, de, ep] = a.angles.map(|x| match x {
        PiAngle::Exact(r) => r,
        PiAngle::Approx(_) => unreachable!(),
    });
    let (n, d) = (*b.numer(), *b.denom());
    let one = Rational64::from_integer(1);
    let two = Rational64::from_integer(2);
    let w1 = one + two * b - two * ep - t;
    let w2 = -one + two * de - t;
    let (rb1, kb1) = exact_bar(w1, n, d)?;
    let (rb2, kb2) = exact_bar(w2, n, d)?;
    Some(Double::from_bars(rb1, kb1, rb2, kb2))
}

/// Numerical search for `ω ≈ R̄β − K̄π` with `|R̄| ≤ 2·max_r + 1`.
fn numeric_bar(omega: f64, beta: f64, max_r: i64) -> Option<(i64, i64)> {
    let mut best: Option<(i64, i64)> = None;
    for rb in -(2 * max_r + 1)..=(2 * max_r + 1) {
        let kb = ((rb as f64 * beta - omega) / PI).round();
        let res = (rb as f64 * beta - kb * PI - omega).abs();
        if res < LATTICE_TOL {
            let key = |r: i64, k: i64| (k.abs(), r.div_euclid(2).abs(), r.abs(), -r);
            if best.is_none_or(|(b, bk)| key(rb, kb as i64) < key(b, bk)) {
                best = Some((rb, kb as i64));
            }
        }
    }
    best
}

fn numeric_conditions(a: &AngleData, max_r: i64) -> (Option<Simple>, Option<Double>) {
    let [b, t, de, ep] = a.angles.map(|x| x.radians());
    let target = b * (a.alpha - 1.0);
    let mut simple: Option<Simple> = None;
    for r in (-max_r..=max_r).filter(|&r| r != 0) {
        let k = ((target + r as f64 * b) / PI).round();
        if (k * PI - r as f64 * b - target).abs() < LATTICE_TOL {
            let k = k as i64;
            if simple.is_none_or(|s| (k.abs(), r.abs(), -r) < (s.k.abs(), s.r.abs(), -s.r)) {
                simple = Some(Simple { r, k });
            }
        }
    }
    let w1 = PI + 2.0 * b - 2.0 * ep - t;
    let w2 = -PI + 2.0 * de - t;
    let double = match (numeric_bar(w1, b, max_r), numeric_bar(w2, b, max_r)) {
        (Some((r1, k1)), Some((r2, k2))) => Some(Double::from_bars(r1, k1, r2, k2)),
        _ => None,
    };
    (simple, double)
}

/// Decide the angle conditions and solve for their integers.
pub fn angle_conditions(a: &AngleData) -> ConditionData {
    match a.mode {
        Mode::Exact => ConditionData {
            simple: exact_simple(a),
            double: exact_double(a),
            mode: Mode::Exact,
        },
        Mode::Numerical => {
            let max_r = match a.beta_over_pi {
                Some((_, d)) => d,
                None => MAX_SHIFT,
            };
            let (simple, double) = numeric_conditions(a, max_r);
            ConditionData {
                simple,
                double,
                mode: Mode::Numerical,
            }
        }
    }
}

fn near_int(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < LATTICE_TOL).then_some(r as i64)
}

/// Whether `α ∈ −ℕ₀`.
fn alpha_nonpositive_integer(a: &AngleData) -> bool {
    match a.exact_alphas {
        Some([al, _, _]) => al.is_integer() && !al.is_positive(),
        None => near_int(a.alpha).is_some_and(|n| n <= 0),
    }
}

/// Apply the classification table.
pub fn nature(a: &AngleData, c: &ConditionData) -> Nature {
    let rational_beta = a.beta_over_pi.is_some();
    let rational = alpha_nonpositive_integer(a);
    let class = if rational_beta {
        if rational {
            NatureClass::Rational
        } else if c.simple.is_some() || c.double.is_some() {
            NatureClass::Algebraic
        } else {
            NatureClass::DAlgebraic
        }
    } else {
        // With β/π irrational the integer data are unique.
        let s_alg = c.simple.is_some_and(|s| s.k == 0);
        let s_df = c.simple.is_some_and(|s| s.r >= 1);
        let d_alg = c.double.is_some_and(|d| d.kbar1() == 0 && d.kbar2() == 0);
        let d_df = c
            .double
            .is_some_and(|d| (d.kbar1() == 0 || d.rbar1() >= 2) && (d.kbar2() == 0 || d.rbar2() <= -1));
        if rational {
            NatureClass::Rational
        } else if s_alg || d_alg {
            NatureClass::Algebraic
        } else if s_df || d_df {
            NatureClass::DFinite
        } else if c.simple.is_some() || c.double.is_some() {
            NatureClass::DAlgebraic
        } else {
            NatureClass::DTranscendental
        }
    };
    let recip = match c.simple {
        Some(s) => Some(rational_beta || s.k == 0 || s.r < 0),
        None => match class {
            NatureClass::Rational | NatureClass::Algebraic => Some(true),
            NatureClass::DTranscendental => Some(false),
            _ => None,
        },
    };
    Nature {
        class,
        recip_phi1_dfinite: recip,
        logderiv_dfinite: rational_beta,
    }
}

/// Best rational approximation `n/d` of `x` with `d ≤ max_d`, if within `tol`.
pub fn rational_approx(x: f64, max_d: i64, tol: f64) -> Option<(i64, i64)> {
    // Continued-fraction convergents.
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_d {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() < tol {
            return Some((h2, k2));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = v - a;
        if f.abs() < 1e-15 {
            break;
        }
        v = 1.0 / f;
    }
    None
}

/// Full classification of a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub angles: AngleData,
    pub conditions: ConditionData,
    pub nature: Nature,
}

/// Classify a model. In numerical mode `β/π` is treated as irrational unless
/// it lies within `1e-9` of a rational with small denominator; then both rows
/// of the table are evaluated and a disagreement is reported as ambiguous.
pub fn classify(m: &Model) -> Result<Classification> {
    let angles = alphas(m);
    let conditions = angle_conditions(&angles);
    let nat = nature(&angles, &conditions);
    if angles.mode == Mode::Numerical {
        let bp = m.wedge.beta / PI;
        if let Some((n, d)) = rational_approx(bp, MAX_DENOMINATOR, LATTICE_TOL / PI) {
            let alt_angles = AngleData {
                beta_over_pi: Some((n, d)),
                ..angles.clone()
            };
            let alt_cond = angle_conditions(&alt_angles);
            let alt = nature(&alt_angles, &alt_cond);
            if alt.class != nat.class {
                return Err(Error::AmbiguousNumerical(format!(
                    "beta/pi is within 1e-9 of {n}/{d}: the nature is {:?} if beta/pi is rational and {:?} otherwise; declare the angles exactly",
                    alt.class, nat.class
                )));
            }
        }
    }
    check_conditions(m, &conditions)?;
    Ok(Classification {
        angles,
        conditions,
        nature: nat,
    })
}

/// Residual checks of the integer data against the special points.
pub fn check_conditions(m: &Model, c: &ConditionData) -> Result<()> {
    let k = &m.kernel;
    let b = m.wedge.beta;
    if let Some(s) = c.simple {
        let lhs = k.s1 / k.s2;
        let rhs = num_complex::Complex64::from_polar(1.0, 2.0 * b * s.r as f64);
        if (lhs - rhs).norm() > 1e-9 {
            return Err(Error::Consistency(format!(
                "s1/s2 differs from q^r by {:e}",
                (lhs - rhs).norm()
            )));
        }
    }
    if let Some(d) = c.double {
        let unit = |rb: i64, kb: i64| {
            let sign = if kb.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            sign * num_complex::Complex64::from_polar(1.0, b * rb as f64)
        };
        let e1 = (k.s1 - unit(d.rbar1(), d.kbar1())).norm();
        let e2 = (k.s2 - unit(d.rbar2(), d.kbar2())).norm();
        if e1 > 1e-9 || e2 > 1e-9 {
            return Err(Error::Consistency(format!("double-condition residuals {e1:e}, {e2:e}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExactAngles;

    fn exact(b: (i64, i64), t: (i64, i64), d: (i64, i64), e: (i64, i64)) -> Model {
        Model::from_exact(ExactAngles::new(b, t, d, e)).unwrap()
    }

    #[test]
    fn exponents() {
        let m = exact((5, 16), (1, 4), (5, 16), (3, 8));
        let a = alphas(&m);
        assert_eq!(a.exact_alphas.unwrap()[0], Rational64::from_integer(-1));
        assert!((a.alpha1 + a.alpha2 - 2.0 * a.alpha + 1.0).abs() < 1e-12);
    }

    #[test]
    fn skew_and_orthogonal_integers() {
        let skew = exact((1, 2), (1, 4), (3, 5), (2, 5));
        let c = angle_conditions(&alphas(&skew));
        assert_eq!(c.simple, Some(Simple { r: 1, k: 0 }));
        let orth = exact((3, 7), (1, 5), (3, 7), (3, 7));
        let c = angle_conditions(&alphas(&orth));
        assert_eq!(c.simple, Some(Simple { r: -1, k: -1 }));
    }

    #[test]
    fn double_integers() {
        // α₁ = −2, α₂ = 0 with β = 3π/10.
        let m = exact((3, 10), (1, 10), (11, 20), (3, 10));
        let a = alphas(&m);
        assert_eq!(a.exact_alphas.unwrap()[1], Rational64::from_integer(-2));
        assert_eq!(a.exact_alphas.unwrap()[2], Rational64::from_integer(0));
        let d = angle_conditions(&a).double.unwrap();
        assert_eq!(
            (d.r1, d.e1, d.k1, d.eps1, d.r2, d.e2, d.k2, d.eps2),
            (1, 1, 0, 0, 0, 0, 0, 0)
        );
        check_conditions(&m, &angle_conditions(&a)).unwrap();
    }

    #[test]
    fn rational_approximation() {
        assert_eq!(rational_approx(2.0 / 3.0, 1000, 1e-12), Some((2, 3)));
        assert_eq!(rational_approx(std::f64::consts::E / 3.0, 1000, 1e-12), None);
    }
}
