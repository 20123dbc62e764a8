//! Quadrant and wedge parameterizations, the linear map between them,
//! validity checks and the boundary masses.

use crate::angle::PiAngle;
use crate::error::{Error, Result};
use crate::kernel::KernelGeometry;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Margin for strict inequalities; inputs closer than this are degenerate.
pub const MARGIN: f64 = 1e-10;
/// Tolerance for cross-checking a quadrant model against exact angles.
pub const EXACT_TOL: f64 = 1e-9;

/// Reflected Brownian motion in the quadrant: covariance, drift, reflection matrix.
///
/// The reflection matrix has columns `R¹ = (r11, r21)` and `R² = (r12, r22)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrantModel {
    pub sigma11: f64,
    pub sigma12: f64,
    pub sigma22: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub r11: f64,
    pub r12: f64,
    pub r21: f64,
    pub r22: f64,
}

/// The same process after the linear map `T`: a wedge of opening `β` with
/// identity covariance, drift angle `θ` and reflection angles `δ`, `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeModel {
    pub beta: f64,
    pub theta: f64,
    pub delta: f64,
    pub eps: f64,
    /// `Δ = μ₁²σ₂₂ − 2μ₁μ₂σ₁₂ + μ₂²σ₁₁`.
    #[serde(rename = "Delta")]
    pub delta_scalar: f64,
}

/// The map `T` and its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearMap {
    pub t: [[f64; 2]; 2],
    pub t_inv: [[f64; 2]; 2],
}

/// Angles given as exact rational multiples of π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactAngles {
    pub beta: Rational64,
    pub theta: Rational64,
    pub delta: Rational64,
    pub eps: Rational64,
}

impl ExactAngles {
    pub fn new(beta: (i64, i64), theta: (i64, i64), delta: (i64, i64), eps: (i64, i64)) -> Self {
        let r = |(n, d): (i64, i64)| Rational64::new(n, d);
        ExactAngles {
            beta: r(beta),
            theta: r(theta),
            delta: r(delta),
            eps: r(eps),
        }
    }

    pub fn radians(&self) -> [f64; 4] {
        [self.beta, self.theta, self.delta, self.eps].map(|r| r.to_f64().unwrap_or(f64::NAN) * PI)
    }
}

impl QuadrantModel {
    pub fn det_sigma(&self) -> f64 {
        self.sigma11 * self.sigma22 - self.sigma12 * self.sigma12
    }

    pub fn det_r(&self) -> f64 {
        self.r11 * self.r22 - self.r12 * self.r21
    }

    /// The scalar `Δ`, invariant under the change of coordinates.
    pub fn delta_scalar(&self) -> f64 {
        self.mu1 * self.mu1 * self.sigma22 - 2.0 * self.mu1 * self.mu2 * self.sigma12
            + self.mu2 * self.mu2 * self.sigma11
    }

    /// Exchange the roles of the two coordinates.
    pub fn swapped(&self) -> QuadrantModel {
        QuadrantModel {
            sigma11: self.sigma22,
            sigma12: self.sigma12,
            sigma22: self.sigma11,
            mu1: self.mu2,
            mu2: self.mu1,
            r11: self.r22,
            r12: self.r21,
            r21: self.r12,
            r22: self.r11,
        }
    }

    /// A quadrant model realising the given wedge angles, with unit variances,
    /// unit diagonal reflection entries and `Δ = sin²β`.
    pub fn from_angles(beta: f64, theta: f64, delta: f64, eps: f64) -> QuadrantModel {
        QuadrantModel {
            sigma11: 1.0,
            sigma12: -beta.cos(),
            sigma22: 1.0,
            mu1: -(beta - theta).sin(),
            mu2: -theta.sin(),
            r11: 1.0,
            r12: (beta - delta).sin() / delta.sin(),
            r21: (beta - eps).sin() / eps.sin(),
            r22: 1.0,
        }
    }
}

fn strictly_positive(value: f64, scale: f64, name: &str) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidModel { condition: name.into() });
    }
    if value.abs() <= MARGIN * scale.max(1e-300) {
        return Err(Error::Degenerate {
            condition: name.into(),
            margin: MARGIN,
        });
    }
    if value < 0.0 {
        return Err(Error::InvalidModel { condition: name.into() });
    }
    Ok(())
}

fn check_quadrant(q: &QuadrantModel) -> Result<()> {
    let s = q.sigma11.abs() + q.sigma22.abs() + q.sigma12.abs();
    let r = q.r11.abs() + q.r12.abs() + q.r21.abs() + q.r22.abs();
    let m = q.mu1.abs() + q.mu2.abs();
    strictly_positive(q.sigma11, s, "sigma11 > 0")?;
    strictly_positive(q.sigma22, s, "sigma22 > 0")?;
    strictly_positive(q.det_sigma(), s * s, "det Sigma > 0")?;
    strictly_positive(q.r11, r, "r11 > 0")?;
    strictly_positive(q.r22, r, "r22 > 0")?;
    strictly_positive(-q.mu1, m, "mu1 < 0")?;
    strictly_positive(-q.mu2, m, "mu2 < 0")?;
    strictly_positive(q.det_r(), r * r, "det R > 0")?;
    strictly_positive(-(q.r22 * q.mu1 - q.r12 * q.mu2), r * m, "r22*mu1 - r12*mu2 < 0")?;
    strictly_positive(-(q.r11 * q.mu2 - q.r21 * q.mu1), r * m, "r11*mu2 - r21*mu1 < 0")?;
    Ok(())
}

/// The map `T` of the change of coordinates and its inverse.
pub fn transform_matrix(q: &QuadrantModel) -> Result<LinearMap> {
    let det = q.det_sigma();
    if !(q.sigma11 > 0.0 && q.sigma22 > 0.0 && det > 0.0) {
        return Err(Error::InvalidModel {
            condition: "Sigma positive definite".into(),
        });
    }
    let s22 = q.sigma22.sqrt();
    let t = [
        [(q.sigma22 / det).sqrt(), -q.sigma12 / (q.sigma22 * det).sqrt()],
        [0.0, 1.0 / s22],
    ];
    let t_inv = [[(det / q.sigma22).sqrt(), q.sigma12 / s22], [0.0, s22]];
    Ok(LinearMap { t, t_inv })
}

impl LinearMap {
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.t[0][0] * v[0] + self.t[0][1] * v[1],
            self.t[1][0] * v[0] + self.t[1][1] * v[1],
        ]
    }

    pub fn det(&self) -> f64 {
        self.t[0][0] * self.t[1][1] - self.t[0][1] * self.t[1][0]
    }
}

/// Raw angles, defined whenever Σ is positive definite and `r11, r22 > 0`.
fn raw_angles(q: &QuadrantModel) -> Option<WedgeModel> {
    let det = q.det_sigma();
    if !(q.sigma11 > 0.0 && q.sigma22 > 0.0 && det > 0.0 && q.r11 > 0.0 && q.r22 > 0.0) {
        return None;
    }
    let (s11, s22) = (q.sigma11, q.sigma22);
    let beta = (-q.sigma12 / (s11 * s22).sqrt()).clamp(-1.0, 1.0).acos();
    let (sb, cb) = (beta.sin(), beta.cos());
    let dd = q.delta_scalar();
    let theta = if dd > 0.0 {
        let c = ((q.mu2 * q.sigma12 - q.mu1 * s22) / (s22 * dd).sqrt()).clamp(-1.0, 1.0);
        let sgn = if q.mu2 > 0.0 {
            1.0
        } else if q.mu2 < 0.0 {
            -1.0
        } else {
            0.0
        };
        -sgn * c.acos()
    } else {
        f64::NAN
    };
    let delta = sb.atan2(q.r12 / q.r22 * (s22 / s11).sqrt() + cb);
    let eps = sb.atan2(q.r21 / q.r11 * (s11 / s22).sqrt() + cb);
    Some(WedgeModel {
        beta,
        theta,
        delta,
        eps,
        delta_scalar: dd,
    })
}

/// Convert a valid quadrant model to its wedge form.
pub fn to_wedge(q: &QuadrantModel) -> Result<WedgeModel> {
    check_quadrant(q)?;
    let w = raw_angles(q).ok_or_else(|| Error::InvalidModel {
        condition: "Sigma positive definite".into(),
    })?;
    let pi = PI;
    strictly_positive(1.0 - (w.delta + w.eps - pi) / w.beta, 1.0, "alpha < 1")?;
    strictly_positive(w.theta, pi, "theta > 0")?;
    strictly_positive(w.beta - w.theta, pi, "theta < beta")?;
    strictly_positive(w.theta - (w.beta - w.eps), pi, "beta - eps < theta")?;
    strictly_positive(w.delta - w.theta, pi, "theta < delta")?;
    Ok(w)
}

/// Per-condition outcome of the validity checks in both parameterizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// Σ positive definite and `r11, r22 > 0`, so that the angles exist.
    pub defined: bool,
    /// `α < 1`.
    pub wedge_semimartingale: bool,
    /// `0 < θ < β`.
    pub wedge_drift: bool,
    /// `β − ε < θ < δ`.
    pub wedge_stationary: bool,
    /// All three wedge conditions.
    pub wedge_all: bool,
    /// `det R > 0` or (`r12 > 0` and `r21 > 0`).
    pub quadrant_semimartingale: bool,
    /// `μ1 < 0` and `μ2 < 0`.
    pub quadrant_drift: bool,
    /// `det R > 0`, `r22μ1 − r12μ2 < 0`, `r11μ2 − r21μ1 < 0`.
    pub quadrant_stationary: bool,
    /// The three equivalences: semimartingale, drift, full set.
    pub equivalences: [bool; 3],
    /// Names of failing conditions.
    pub failed: Vec<String>,
}

impl ConditionReport {
    pub fn consistent(&self) -> bool {
        self.equivalences.iter().all(|&b| b)
    }

    pub fn valid(&self) -> bool {
        self.defined && self.wedge_all && self.quadrant_drift && self.quadrant_stationary
    }
}

/// Evaluate the validity conditions in wedge and quadrant form and compare them.
pub fn validate(q: &QuadrantModel) -> ConditionReport {
    let mut failed = Vec::new();
    let q_semi = q.det_r() > 0.0 || (q.r12 > 0.0 && q.r21 > 0.0);
    let q_drift = q.mu1 < 0.0 && q.mu2 < 0.0;
    let q_stat = q.det_r() > 0.0 && q.r22 * q.mu1 - q.r12 * q.mu2 < 0.0 && q.r11 * q.mu2 - q.r21 * q.mu1 < 0.0;
    // Slacks of the quadrant conditions, used to excuse disagreements at equality.
    let q_semi_slack = q.det_r().abs().min(q.r12.abs()).min(q.r21.abs());
    let q_drift_slack = q.mu1.abs().min(q.mu2.abs());
    let q_stat_slack = q_drift_slack
        .min(q.det_r().abs())
        .min((q.r22 * q.mu1 - q.r12 * q.mu2).abs())
        .min((q.r11 * q.mu2 - q.r21 * q.mu1).abs());
    if !q_semi {
        failed.push("semimartingale (quadrant)".to_string());
    }
    if !q_drift {
        failed.push("negative drift (quadrant)".to_string());
    }
    if !q_stat {
        failed.push("stationarity (quadrant)".to_string());
    }
    let Some(w) = raw_angles(q) else {
        failed.push("Sigma positive definite, r11 > 0, r22 > 0".to_string());
        return ConditionReport {
            defined: false,
            wedge_semimartingale: false,
            wedge_drift: false,
            wedge_stationary: false,
            wedge_all: false,
            quadrant_semimartingale: q_semi,
            quadrant_drift: q_drift,
            quadrant_stationary: q_stat,
            equivalences: [true; 3],
            failed,
        };
    };
    let semi_slack = w.delta + w.eps - PI - w.beta;
    let w_semi = semi_slack < 0.0;
    let w_drift = w.theta > 0.0 && w.theta < w.beta;
    let w_stat = w.beta - w.eps < w.theta && w.theta < w.delta;
    let w_all = w_semi && w_drift && w_stat;
    let drift_slack = w.theta.abs().min((w.beta - w.theta).abs());
    let all_slack = semi_slack
        .abs()
        .min(drift_slack)
        .min((w.theta - w.beta + w.eps).abs())
        .min((w.delta - w.theta).abs());
    if !w_semi {
        failed.push("alpha < 1 (wedge)".to_string());
    }
    if !w_drift {
        failed.push("0 < theta < beta (wedge)".to_string());
    }
    if !w_stat {
        failed.push("beta - eps < theta < delta (wedge)".to_string());
    }
    let agree = |a: bool, b: bool, s1: f64, s2: f64| a == b || s1.abs() < MARGIN || s2.abs() < MARGIN;
    let equivalences = [
        agree(w_semi, q_semi, semi_slack, q_semi_slack),
        agree(w_drift, q_drift, drift_slack, q_drift_slack),
        agree(w_all, q_drift && q_stat, all_slack, q_stat_slack),
    ];
    ConditionReport {
        defined: true,
        wedge_semimartingale: w_semi,
        wedge_drift: w_drift,
        wedge_stationary: w_stat,
        wedge_all: w_all,
        quadrant_semimartingale: q_semi,
        quadrant_drift: q_drift,
        quadrant_stationary: q_stat,
        equivalences,
        failed,
    }
}

/// The masses `φ₁(0)` and `φ₂(0)` of the boundary measures.
///
/// Computed from the reflection matrix and cross-checked against the
/// angle form; a disagreement beyond `1e-10` is a consistency error.
pub fn boundary_masses(q: &QuadrantModel) -> Result<(f64, f64)> {
    let w = to_wedge(q)?;
    let den = q.r12 * q.r21 - q.r11 * q.r22;
    let m1 = (q.mu1 * q.r22 - q.mu2 * q.r12) / den;
    let m2 = (q.mu2 * q.r11 - q.mu1 * q.r21) / den;
    let (b, t, d, e, dd) = (w.beta, w.theta, w.delta, w.eps, w.delta_scalar);
    let common = (b - d - e).sin() * b.sin();
    let n1 = (dd / q.sigma22).sqrt() / q.r11 * (t - d).sin() * e.sin() / common;
    let n2 = (dd / q.sigma11).sqrt() / q.r22 * (b - t - e).sin() * d.sin() / common;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    if rel(m1, n1) > 1e-10 || rel(m2, n2) > 1e-10 {
        return Err(Error::Consistency(format!(
            "masses ({m1}, {m2}) differ from angle form ({n1}, {n2})"
        )));
    }
    Ok((m1, m2))
}

/// Normal variables: `xn = x·detΣ/√(Δσ₂₂)`, `yn = y·detΣ/√(Δσ₁₁)`.
pub fn normalize_xy(q: &QuadrantModel, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (sx, sy) = normal_scales(q);
    (x / sx, y / sy)
}

/// Inverse of [`normalize_xy`].
pub fn denormalize_xy(q: &QuadrantModel, xn: Complex64, yn: Complex64) -> (Complex64, Complex64) {
    let (sx, sy) = normal_scales(q);
    (xn * sx, yn * sy)
}

/// The factors `√(Δσ₂₂)/detΣ` and `√(Δσ₁₁)/detΣ` with `x = sx·xn`, `y = sy·yn`.
pub fn normal_scales(q: &QuadrantModel) -> (f64, f64) {
    let det = q.det_sigma();
    let dd = q.delta_scalar();
    ((dd * q.sigma22).sqrt() / det, (dd * q.sigma11).sqrt() / det)
}

/// A validated model with both parameterizations and its kernel geometry.
#[derive(Debug, Clone)]
pub struct Model {
    pub quadrant: QuadrantModel,
    pub wedge: WedgeModel,
    pub exact: Option<ExactAngles>,
    pub kernel: KernelGeometry,
    pub masses: (f64, f64),
}

impl Model {
    /// Build from a quadrant model, optionally declaring its angles exactly.
    pub fn new(quadrant: QuadrantModel, exact: Option<ExactAngles>) -> Result<Model> {
        let wedge = to_wedge(&quadrant)?;
        if let Some(ex) = exact {
            let got = [wedge.beta, wedge.theta, wedge.delta, wedge.eps];
            let names = ["beta", "theta", "delta", "eps"];
            for ((g, e), n) in got.iter().zip(ex.radians()).zip(names) {
                if (g - e).abs() > EXACT_TOL {
                    return Err(Error::Input(format!(
                        "exact angle {n} = {e} disagrees with the quadrant model value {g}"
                    )));
                }
            }
        }
        let masses = boundary_masses(&quadrant)?;
        let kernel = KernelGeometry::new(&quadrant, &wedge);
        Ok(Model {
            quadrant,
            wedge,
            exact,
            kernel,
            masses,
        })
    }

    /// Build from exact angles, realised by the canonical quadrant model.
    pub fn from_exact(exact: ExactAngles) -> Result<Model> {
        let [b, t, d, e] = exact.radians();
        Model::new(QuadrantModel::from_angles(b, t, d, e), Some(exact))
    }

    /// Build from float angles in radians.
    pub fn from_radians(beta: f64, theta: f64, delta: f64, eps: f64) -> Result<Model> {
        Model::new(QuadrantModel::from_angles(beta, theta, delta, eps), None)
    }

    /// The model with coordinates exchanged.
    pub fn swapped(&self) -> Result<Model> {
        let exact = self.exact.map(|e| ExactAngles {
            beta: e.beta,
            theta: e.beta - e.theta,
            delta: e.eps,
            eps: e.delta,
        });
        Model::new(self.quadrant.swapped(), exact)
    }

    /// Angles as multiples of π, exact when declared.
    pub fn pi_angles(&self) -> [PiAngle; 4] {
        match self.exact {
            Some(e) => [e.beta, e.theta, e.delta, e.eps].map(PiAngle::Exact),
            None => [self.wedge.beta, self.wedge.theta, self.wedge.delta, self.wedge.eps].map(PiAngle::from_radians),
        }
    }
}

/// JSON model document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<[f64; 2]>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles_exact: Option<AnglesDoc>,
}

/// Exact angles in a model document, each `[n, d]` meaning `nπ/d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglesDoc {
    pub beta: [i64; 2],
    pub theta: [i64; 2],
    pub delta: [i64; 2],
    pub eps: [i64; 2],
}

impl AnglesDoc {
    pub fn to_exact(&self) -> Result<ExactAngles> {
        for p in [self.beta, self.theta, self.delta, self.eps] {
            if p[1] == 0 {
                return Err(Error::Input("zero denominator in exact angle".into()));
            }
        }
        let t = |p: [i64; 2]| (p[0], p[1]);
        Ok(ExactAngles::new(
            t(self.beta),
            t(self.theta),
            t(self.delta),
            t(self.eps),
        ))
    }
}

impl ModelDocument {
    pub fn from_quadrant(q: &QuadrantModel) -> ModelDocument {
        ModelDocument {
            sigma: Some([q.sigma11, q.sigma12, q.sigma22]),
            mu: Some([q.mu1, q.mu2]),
            r: Some([[q.r11, q.r12], [q.r21, q.r22]]),
            angles_exact: None,
        }
    }

    pub fn quadrant(&self) -> Result<Option<QuadrantModel>> {
        match (self.sigma, self.mu, self.r) {
            (Some(s), Some(m), Some(r)) => Ok(Some(QuadrantModel {
                sigma11: s[0],
                sigma12: s[1],
                sigma22: s[2],
                mu1: m[0],
                mu2: m[1],
                r11: r[0][0],
                r12: r[0][1],
                r21: r[1][0],
                r22: r[1][1],
            })),
            (None, None, None) => Ok(None),
            _ => Err(Error::Input("sigma, mu and R must be given together".into())),
        }
    }

    /// Build the model, cross-checking the two blocks when both are present.
    pub fn to_model(&self) -> Result<Model> {
        let exact = self.angles_exact.map(|a| a.to_exact()).transpose()?;
        match (self.quadrant()?, exact) {
            (Some(q), ex) => Model::new(q, ex),
            (None, Some(ex)) => Model::from_exact(ex),
            (None, None) => Err(Error::Input(
                "model document has neither a quadrant block nor exact angles".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> QuadrantModel {
        QuadrantModel {
            sigma11: 1.3,
            sigma12: 0.4,
            sigma22: 0.8,
            mu1: -0.7,
            mu2: -0.5,
            r11: 1.0,
            r12: 0.3,
            r21: -0.2,
            r22: 1.2,
        }
    }

    #[test]
    fn identity_covariance_is_right_angle() {
        let mut q = generic();
        q.sigma11 = 1.0;
        q.sigma22 = 1.0;
        q.sigma12 = 0.0;
        assert!((to_wedge(&q).unwrap().beta - PI / 2.0).abs() < 1e-15);
        q.sigma12 = -0.5;
        assert!((to_wedge(&q).unwrap().beta - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_reflection_gives_delta_eps_beta() {
        let mut q = generic();
        q.r12 = 0.0;
        q.r21 = 0.0;
        let w = to_wedge(&q).unwrap();
        assert!((w.delta - w.beta).abs() < 1e-14 && (w.eps - w.beta).abs() < 1e-14);
    }

    #[test]
    fn transform_inverse_and_drift_angle() {
        let q = generic();
        let t = transform_matrix(&q).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let v: f64 = (0..2).map(|k| t.t[i][k] * t.t_inv[k][j]).sum();
                assert!((v - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(t.det() > 0.0);
        let w = to_wedge(&q).unwrap();
        let mt = t.apply([q.mu1, q.mu2]);
        // Drift in the wedge points at angle θ + π.
        let ang = mt[1].atan2(mt[0]);
        assert!(((ang - w.theta - PI).rem_euclid(2.0 * PI)).min((w.theta + PI - ang).rem_euclid(2.0 * PI)) < 1e-12);
        let (sb, cb) = (w.beta.sin(), w.beta.cos());
        let tan = sb / (q.mu1 / q.mu2 * (q.sigma22 / q.sigma11).sqrt() + cb);
        assert!((w.theta.tan() - tan).abs() < 1e-12);
        // Identity covariance maps to the identity.
        let id = QuadrantModel {
            sigma11: 1.0,
            sigma12: 0.0,
            sigma22: 1.0,
            ..q
        };
        let t = transform_matrix(&id).unwrap();
        assert!((t.t[0][0] - 1.0).abs() < 1e-15 && t.t[0][1].abs() < 1e-15 && (t.t[1][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn canonical_realisation_round_trips() {
        let (b, t, d, e) = (2.0, 0.7, 1.9, 1.4);
        let q = QuadrantModel::from_angles(b, t, d, e);
        let w = to_wedge(&q).unwrap();
        for (x, y) in [(w.beta, b), (w.theta, t), (w.delta, d), (w.eps, e)] {
            assert!((x - y).abs() < 1e-13);
        }
        assert!((w.delta_scalar - b.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_mass() {
        let mut q = generic();
        q.r12 = 0.0;
        q.r21 = 0.0;
        q.r11 = 2.0;
        let (m1, m2) = boundary_masses(&q).unwrap();
        assert!((m1 + q.mu1 / q.r11).abs() < 1e-14);
        assert!((m2 + q.mu2 / q.r22).abs() < 1e-14);
    }

    #[test]
    fn invalid_and_degenerate_inputs_are_named() {
        let mut q = generic();
        q.mu1 = 0.3;
        assert_eq!(
            to_wedge(&q),
            Err(Error::InvalidModel {
                condition: "mu1 < 0".into()
            })
        );
        q.mu1 = 0.0;
        assert!(matches!(to_wedge(&q), Err(Error::Degenerate { .. })));
        let r = validate(&QuadrantModel { mu1: 0.3, ..generic() });
        assert!(!r.wedge_drift && !r.quadrant_drift && r.consistent());
    }

    #[test]
    fn normal_variables() {
        let q = generic();
        let w = to_wedge(&q).unwrap();
        let k = KernelGeometry::new(&q, &w);
        let (xn, _) = normalize_xy(&q, Complex64::new(k.x_plus, 0.0), Complex64::new(0.0, 0.0));
        assert!((xn.re - (w.theta.cos() + 1.0)).abs() < 1e-13);
        let (_, yn) = normalize_xy(&q, Complex64::new(0.0, 0.0), Complex64::new(k.y_minus, 0.0));
        assert!((yn.re - ((w.beta - w.theta).cos() - 1.0)).abs() < 1e-13);
        let (x, y) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
        let (a, b) = normalize_xy(&q, x, y);
        let (x2, y2) = denormalize_xy(&q, a, b);
        assert!((x2 - x).norm() < 1e-14 && (y2 - y).norm() < 1e-14);
    }

    #[test]
    fn document_blocks_are_cross_checked() {
        let doc: ModelDocument = serde_json::from_str(
            r#"{"sigma":[1,0,1],"mu":[-1,-1],"R":[[1,0],[0,1]],
                "angles_exact":{"beta":[1,2],"theta":[1,4],"delta":[1,2],"eps":[1,2]}}"#,
        )
        .unwrap();
        assert!(doc.to_model().is_ok());
        let mut bad = doc.clone();
        bad.angles_exact.as_mut().unwrap().theta = [1, 3];
        assert!(matches!(bad.to_model(), Err(Error::Input(_))));
    }
}
