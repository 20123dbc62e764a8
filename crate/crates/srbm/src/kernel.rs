//! The kernel `γ`, its roots and branch points, the rational uniformization
//! of `γ = 0`, the curve `R`, the domain `G_R`, and the functions `G` and `E`.

use crate::error::{Error, Result};
use crate::model::{QuadrantModel, WedgeModel};
use num_complex::Complex64;
use serde::Serialize;

type C = Complex64;

/// Distance below which a point counts as lying on a cut or on `R`.
pub const CUT_TOL: f64 = 1e-12;

/// Branch points, special points and the rotation `q = e^{2iβ}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelGeometry {
    pub x_plus: f64,
    pub x_minus: f64,
    pub y_plus: f64,
    pub y_minus: f64,
    #[serde(skip)]
    pub s0: C,
    #[serde(skip)]
    pub s1: C,
    #[serde(skip)]
    pub s2: C,
    #[serde(skip)]
    pub q: C,
    #[serde(skip)]
    quad: QuadrantModel,
    #[serde(skip)]
    wedge: WedgeModel,
}

/// The two roots of `γ(·, y) = 0` (or `γ(x, ·) = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRoots {
    pub minus: C,
    pub plus: C,
    /// The argument lies within `1e-12` of a cut, where the roots are a conjugate pair.
    pub on_cut: bool,
}

/// Position of a point relative to the curve `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    InteriorGR,
    OnR,
    Outside,
}

impl KernelGeometry {
    pub fn new(q: &QuadrantModel, w: &WedgeModel) -> KernelGeometry {
        let det = q.det_sigma();
        let dd = q.delta_scalar();
        let xr = (q.sigma22 * dd).sqrt();
        let yr = (q.sigma11 * dd).sqrt();
        let xc = q.mu2 * q.sigma12 - q.mu1 * q.sigma22;
        let yc = q.mu1 * q.sigma12 - q.mu2 * q.sigma11;
        let (b, t, d, e) = (w.beta, w.theta, w.delta, w.eps);
        let neg_unit = |phi: f64| -C::from_polar(1.0, phi);
        KernelGeometry {
            x_plus: (xc + xr) / det,
            x_minus: (xc - xr) / det,
            y_plus: (yc + yr) / det,
            y_minus: (yc - yr) / det,
            s0: neg_unit(t),
            s1: neg_unit(2.0 * b - 2.0 * e - t),
            s2: neg_unit(2.0 * d - t),
            q: C::from_polar(1.0, 2.0 * b),
            quad: *q,
            wedge: *w,
        }
    }

    pub fn beta(&self) -> f64 {
        self.wedge.beta
    }

    pub fn quadrant(&self) -> &QuadrantModel {
        &self.quad
    }

    pub fn wedge(&self) -> &WedgeModel {
        &self.wedge
    }

    /// `(γ, γ₁, γ₂)` at `(x, y)`.
    pub fn gamma(&self, x: C, y: C) -> (C, C, C) {
        let q = &self.quad;
        let g = 0.5 * (q.sigma11 * x * x + 2.0 * q.sigma12 * x * y + q.sigma22 * y * y) + q.mu1 * x + q.mu2 * y;
        (g, q.r11 * x + q.r21 * y, q.r12 * x + q.r22 * y)
    }

    /// `(γ, γ₁, γ₂)` written in the normal variables; equal to [`Self::gamma`]
    /// at the corresponding `(x, y)`.
    pub fn gamma_normal(&self, xn: C, yn: C) -> (C, C, C) {
        let q = &self.quad;
        let w = &self.wedge;
        let det = q.det_sigma();
        let dd = w.delta_scalar;
        let (sb, cb) = (w.beta.sin(), w.beta.cos());
        let g = dd / (2.0 * sb * sb * det)
            * (xn * xn + yn * yn
                - 2.0 * xn * yn * cb
                - 2.0 * xn * sb * (w.beta - w.theta).sin()
                - 2.0 * yn * sb * w.theta.sin());
        let g1 = q.r11 * (dd * q.sigma22).sqrt() / det * (xn + yn * (w.beta - w.eps).sin() / w.eps.sin());
        let g2 = q.r22 * (dd * q.sigma11).sqrt() / det * (xn * (w.beta - w.delta).sin() / w.delta.sin() + yn);
        (g, g1, g2)
    }

    fn near_cut(&self, z: C, lo: f64, hi: f64) -> bool {
        let tol = CUT_TOL * (1.0 + z.norm());
        z.im.abs() <= tol && (z.re <= lo + tol || z.re >= hi - tol)
    }

    /// `X±(y)`, the roots in `x` of `γ(x, y) = 0`.
    pub fn x_roots(&self, y: C) -> KernelRoots {
        let q = &self.quad;
        let disc = y * y * (q.sigma12 * q.sigma12 - q.sigma11 * q.sigma22)
            + 2.0 * y * (q.mu1 * q.sigma12 - q.mu2 * q.sigma11)
            + q.mu1 * q.mu1;
        let r = disc.sqrt();
        let b = -(q.sigma12 * y + q.mu1);
        KernelRoots {
            minus: (b - r) / q.sigma11,
            plus: (b + r) / q.sigma11,
            on_cut: self.near_cut(y, self.y_minus, self.y_plus),
        }
    }

    /// `Y±(x)`, the roots in `y` of `γ(x, y) = 0`.
    pub fn y_roots(&self, x: C) -> KernelRoots {
        let q = &self.quad;
        let disc = x * x * (q.sigma12 * q.sigma12 - q.sigma11 * q.sigma22)
            + 2.0 * x * (q.mu2 * q.sigma12 - q.mu1 * q.sigma22)
            + q.mu2 * q.mu2;
        let r = disc.sqrt();
        let b = -(q.sigma12 * x + q.mu2);
        KernelRoots {
            minus: (b - r) / q.sigma22,
            plus: (b + r) / q.sigma22,
            on_cut: self.near_cut(x, self.x_minus, self.x_plus),
        }
    }

    /// The parameterization `s ↦ (x(s), y(s))` of `γ = 0`.
    pub fn uniformize(&self, s: C) -> (C, C) {
        (self.x_of(s), self.y_of(s))
    }

    pub fn x_of(&self, s: C) -> C {
        let (p, m) = (self.x_plus, self.x_minus);
        0.5 * (p + m) + 0.25 * (p - m) * (s + 1.0 / s)
    }

    pub fn y_of(&self, s: C) -> C {
        let (p, m) = (self.y_plus, self.y_minus);
        let e = C::from_polar(1.0, self.wedge.beta);
        0.5 * (p + m) + 0.25 * (p - m) * (s / e + e / s)
    }

    /// `y(e^{iφ})`, real.
    pub fn y_on_circle(&self, phi: f64) -> f64 {
        let (p, m) = (self.y_plus, self.y_minus);
        0.5 * (p + m) + 0.5 * (p - m) * (phi - self.wedge.beta).cos()
    }

    /// `x(e^{iφ})`, real.
    pub fn x_on_circle(&self, phi: f64) -> f64 {
        let (p, m) = (self.x_plus, self.x_minus);
        0.5 * (p + m) + 0.5 * (p - m) * phi.cos()
    }

    /// `y(−1)`, the real point of `R`.
    pub fn y_at_minus_one(&self) -> f64 {
        self.y_on_circle(std::f64::consts::PI)
    }

    /// The normal-variable parameterization.
    pub fn uniformize_normal(&self, s: C) -> (C, C) {
        let w = &self.wedge;
        let e = C::from_polar(1.0, w.beta);
        let xn = 0.5 * (2.0 * w.theta.cos() + s + 1.0 / s);
        let yn = 0.5 * (2.0 * (w.beta - w.theta).cos() + s / e + e / s);
        (xn, yn)
    }

    /// A preimage `s` of `y` with `|s e^{-iβ}| ≥ 1`; the other is `q/s`.
    pub fn s_preimage(&self, y: C) -> C {
        let c = 0.5 * (self.y_plus + self.y_minus);
        let d = 0.25 * (self.y_plus - self.y_minus);
        let xi = (y - c) / (2.0 * d);
        let r = (xi * xi - 1.0).sqrt();
        let (u1, u2) = (xi + r, xi - r);
        let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
        u * C::from_polar(1.0, self.wedge.beta)
    }

    /// Classify `y` as inside `G_R`, on `R`, or outside.
    pub fn region_of(&self, y: C) -> Region {
        let s = self.s_preimage(y);
        // arg s ∈ (π, π+2β) iff |arg(−s e^{−iβ})| < β.
        let u = -s * C::from_polar(1.0, -self.wedge.beta);
        let a = u.arg().abs();
        let b = self.wedge.beta;
        if (a - b).abs() <= CUT_TOL {
            Region::OnR
        } else if a < b {
            Region::InteriorGR
        } else {
            Region::Outside
        }
    }

    /// `G(y) = (γ₁/γ₂)(X⁻(y), y) · (γ₂/γ₁)(X⁻(ȳ), ȳ)` for `y ∈ R`.
    pub fn g_ratio(&self, y: C) -> Result<C> {
        let yb = y.conj();
        let x1 = self.x_roots(y).minus;
        let x2 = self.x_roots(yb).minus;
        let (_, a1, a2) = self.gamma(x1, y);
        let (_, b1, b2) = self.gamma(x2, yb);
        let scale = 1.0 + x1.norm() + y.norm();
        if a2.norm() < CUT_TOL * scale || b1.norm() < CUT_TOL * scale {
            return Err(Error::PoleOfG(format!("{y}")));
        }
        Ok(a1 / a2 * b2 / b1)
    }

    /// `E(s) = (s₂/s₁)(s−s₁)(s−1/s₂)/((s−s₂)(s−1/s₁))`.
    pub fn e_func(&self, s: C) -> Result<C> {
        let (s1, s2) = (self.s1, self.s2);
        let den = (s - s2) * (s - 1.0 / s1);
        if den.norm() < 1e-14 * (1.0 + s.norm_sqr()) {
            return Err(Error::PoleOfE(format!("{s}")));
        }
        Ok(s2 / s1 * (s - s1) * (s - 1.0 / s2) / den)
    }

    /// `E(s)` from its definition as a ratio of `γ₁/γ₂` at `s` and `1/s`.
    pub fn e_from_gammas(&self, s: C) -> C {
        let (x, y) = self.uniformize(s);
        let (xi, yi) = self.uniformize(1.0 / s);
        let (_, a1, a2) = self.gamma(x, y);
        let (_, b1, b2) = self.gamma(xi, yi);
        a1 / a2 * b2 / b1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Model;
    use std::f64::consts::PI;

    fn model() -> Model {
        Model::from_radians(2.1, 0.8, 1.9, 1.6).unwrap()
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn branch_points_and_special_points() {
        let k = model().kernel;
        assert!(k.y_minus < 0.0 && 0.0 < k.y_plus && k.x_minus < 0.0 && 0.0 < k.x_plus);
        assert!(close(k.x_of(C::new(1.0, 0.0)), C::new(k.x_plus, 0.0), 1e-14));
        let e = C::from_polar(1.0, k.beta());
        assert!(close(k.y_of(e), C::new(k.y_plus, 0.0), 1e-14));
        let (x0, y0) = k.uniformize(k.s0);
        assert!(x0.norm() < 1e-14 && y0.norm() < 1e-14);
        let w = k.wedge();
        assert!(close(k.s0 * k.s1, C::from_polar(1.0, 2.0 * (w.beta - w.eps)), 1e-14));
        assert!(close(k.s0 * k.s2, C::from_polar(1.0, 2.0 * w.delta), 1e-14));
        assert!(!close(k.s2, C::new(-1.0, 0.0), 1e-9));
        let (_, g1, _) = {
            let (x, y) = k.uniformize(k.s1);
            k.gamma(x, y)
        };
        let (_, _, g2) = {
            let (x, y) = k.uniformize(k.s2);
            k.gamma(x, y)
        };
        assert!(g1.norm() < 1e-12 && g2.norm() < 1e-12);
        let alpha = (w.delta + w.eps - PI) / w.beta;
        assert!(close(
            k.s1 / k.s2,
            C::from_polar(1.0, 2.0 * w.beta * (1.0 - alpha)),
            1e-13
        ));
    }

    #[test]
    fn roots_satisfy_the_kernel() {
        let k = model().kernel;
        for y in [C::new(0.3, 0.2), C::new(-1.5, 2.0), C::new(0.1, -0.7)] {
            let r = k.x_roots(y);
            assert!(!r.on_cut);
            for x in [r.minus, r.plus] {
                assert!(k.gamma(x, y).0.norm() < 1e-12 * (1.0 + x.norm_sqr() + y.norm_sqr()));
            }
        }
        let r = k.x_roots(C::new(k.y_plus, 0.0));
        assert!((r.minus - r.plus).norm() < 1e-6);
        let yr = k.y_roots(C::new(k.x_minus, 0.0));
        assert!((yr.minus.re - k.y_at_minus_one()).abs() < 1e-7);
        assert!(k.y_at_minus_one() > 0.0 && k.y_at_minus_one() < k.y_plus);
        assert!(k.x_roots(C::new(k.y_plus + 1.0, 0.0)).on_cut);
    }

    #[test]
    fn uniformization_is_consistent() {
        let k = model().kernel;
        for s in [C::new(0.4, 1.3), C::new(-2.0, 0.3), C::new(1.7, -0.2)] {
            let (x, y) = k.uniformize(s);
            assert!(k.gamma(x, y).0.norm() < 1e-12 * (1.0 + x.norm_sqr() + y.norm_sqr()));
            assert!(close(k.x_of(1.0 / s), x, 1e-13));
            assert!(close(k.y_of(k.q / s), y, 1e-13));
            let roots = k.y_roots(x);
            let yi = k.y_of(1.0 / s);
            let ok = (close(roots.minus, y, 1e-10) && close(roots.plus, yi, 1e-10))
                || (close(roots.minus, yi, 1e-10) && close(roots.plus, y, 1e-10));
            assert!(ok);
            let (xn, yn) = k.uniformize_normal(s);
            assert!(k.gamma_normal(xn, yn).0.norm() < 1e-12);
            let (sx, sy) = crate::model::normal_scales(k.quadrant());
            let (g, g1, g2) = k.gamma(xn * sx, yn * sy);
            let (h, h1, h2) = k.gamma_normal(xn, yn);
            assert!(close(g, h, 1e-12) && close(g1, h1, 1e-12) && close(g2, h2, 1e-12));
        }
        let y = k.y_of(C::from_polar(1.0, 0.9));
        assert!(y.im.abs() < 1e-14);
    }

    #[test]
    fn regions() {
        let k = model().kernel;
        assert_eq!(k.region_of(C::new(0.0, 0.0)), Region::InteriorGR);
        assert_eq!(k.region_of(C::new(k.y_at_minus_one(), 0.0)), Region::OnR);
        assert_eq!(k.region_of(C::new(k.y_plus, 0.0)), Region::Outside);
        assert_eq!(k.region_of(C::new(k.y_minus, 0.0)), Region::InteriorGR);
        for s in [-0.2, -3.0, -7.5] {
            let y = k.y_of(C::new(s, 0.0));
            assert_eq!(k.region_of(y), Region::OnR);
            assert_eq!(k.region_of(y.conj()), Region::OnR);
        }
        let y = C::new(0.4, 5.0);
        assert_eq!(k.region_of(y), k.region_of(y.conj()));
    }

    #[test]
    fn g_and_e_on_r() {
        let k = model().kernel;
        for s in [-0.15, -0.6, -2.5, -9.0] {
            let s = C::new(s, 0.0);
            let y = k.y_of(s);
            let xr = k.x_roots(y).minus;
            assert!(close(xr, k.x_of(s), 1e-10) && xr.im.abs() < 1e-9 && xr.re <= k.x_minus + 1e-12);
            let xs = k.x_roots(y.conj()).minus;
            assert!(close(xs, xr, 1e-10));
            let g = k.g_ratio(y).unwrap();
            let gb = k.g_ratio(y.conj()).unwrap();
            assert!(close(g * gb, C::new(1.0, 0.0), 1e-10));
            assert!(close(g, k.e_func(s).unwrap(), 1e-10));
            let d = k.x_roots(y);
            assert!((d.plus - d.minus).re >= -1e-12);
        }
        let g = k.g_ratio(C::new(k.y_at_minus_one(), 0.0)).unwrap();
        assert!(close(g, C::new(1.0, 0.0), 1e-12));
        assert!(close(k.e_func(C::new(0.0, 0.0)).unwrap(), k.s1 / k.s2, 1e-14));
        let big = k.e_func(C::new(1e9, 0.0)).unwrap();
        assert!(close(big, k.s2 / k.s1, 1e-8));
        for s in [C::new(0.3, 0.8), C::new(-1.2, -0.4)] {
            assert!(close(k.e_func(s).unwrap(), k.e_from_gammas(s), 1e-10));
        }
        assert!(k.e_func(k.s2).is_err());
    }
}
