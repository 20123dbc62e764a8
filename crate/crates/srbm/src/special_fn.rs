//! The generalized Chebyshev function `T_a(x) = cos(a·arccos x)`, its
//! square-root companions, and the canonical invariant `w`.

use crate::error::{Error, Result};
use crate::kernel::KernelGeometry;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

type C = Complex64;

const SERIES_RADIUS: f64 = 0.5;

fn on_cut(x: C) -> bool {
    let tol = 1e-12 * (1.0 + x.norm());
    x.im.abs() <= tol && x.re <= -1.0 + tol
}

/// `arccos x` up to sign, together with the `√(1−x)` it was built from.
///
/// The sign ambiguity is harmless: every quantity below is even in the angle,
/// or odd in both the angle and `√(1−x)`.
pub fn arccos_pair(x: C) -> (C, C) {
    let s = (1.0 - x).sqrt();
    let v = C::i() * s * (1.0 + x).sqrt();
    let (e1, e2) = (x + v, x - v);
    // Use the larger of the two reciprocal candidates to avoid cancellation.
    let t = if e1.norm() >= e2.norm() {
        -C::i() * e1.ln()
    } else {
        C::i() * e2.ln()
    };
    (t, s)
}

/// Gauss hypergeometric series `₂F₁(a, b; c; z)` with its first three
/// `z`-derivatives; requires `|z| < 1`.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: C) -> [C; 4] {
    let mut out = [C::new(0.0, 0.0); 4];
    // Coefficients t_n of z^n; derivative k uses n(n−1)…(n−k+1) z^{n−k}.
    let mut coef = 1.0f64;
    let mut n = 0usize;
    let mut pw = Vec::with_capacity(200);
    pw.push(C::new(1.0, 0.0));
    loop {
        let zn = pw[n];
        let nf = n as f64;
        out[0] += coef * zn;
        if n >= 1 {
            out[1] += coef * nf * pw[n - 1];
        }
        if n >= 2 {
            out[2] += coef * nf * (nf - 1.0) * pw[n - 2];
        }
        if n >= 3 {
            out[3] += coef * nf * (nf - 1.0) * (nf - 2.0) * pw[n - 3];
        }
        let next = coef * (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        let term = (next * zn * z).norm() * (nf + 4.0).powi(3);
        coef = next;
        n += 1;
        pw.push(pw[n - 1] * z);
        let scale = out[0].norm().max(1e-300);
        if (term < 1e-17 * scale && n > 3) || n > 5000 || coef == 0.0 {
            break;
        }
    }
    out
}

/// `T_a(x)` and its first three derivatives.
pub fn cheb_t_derivs(a: f64, x: C) -> Result<[C; 4]> {
    if on_cut(x) {
        return Err(Error::OnCut(format!("{x}")));
    }
    if (1.0 - x).norm() < SERIES_RADIUS {
        // T_a(x) = ₂F₁(−a, a; 1/2; (1−x)/2).
        let h = hyp2f1_series(-a, a, 0.5, (1.0 - x) / 2.0);
        return Ok([h[0], -0.5 * h[1], 0.25 * h[2], -0.125 * h[3]]);
    }
    let (t, _) = arccos_pair(x);
    let tv = (a * t).cos();
    let d1 = a * (a * t).sin() / t.sin();
    let one = 1.0 - x * x;
    let d2 = (x * d1 - a * a * tv) / one;
    let d3 = (3.0 * x * d2 - (a * a - 1.0) * d1) / one;
    Ok([tv, d1, d2, d3])
}

/// `T_a(x)` on `ℂ ∖ (−∞, −1]`.
pub fn cheb_t(a: f64, x: C) -> Result<C> {
    if on_cut(x) {
        return Err(Error::OnCut(format!("{x}")));
    }
    if (1.0 - x).norm() < 1e-4 {
        return Ok(hyp2f1_series(-a, a, 0.5, (1.0 - x) / 2.0)[0]);
    }
    let (t, _) = arccos_pair(x);
    Ok((a * t).cos())
}

/// The algebraic form `½((x+√(x²−1))^a + (x−√(x²−1))^a)` with principal branches.
pub fn cheb_t_alg(a: f64, x: C) -> C {
    let r = (x * x - 1.0).sqrt();
    0.5 * ((x + r).powf(a) + (x - r).powf(a))
}

/// `√(1 + T_a(x)) = √2·T_{a/2}(x)`.
pub fn sqrt_one_plus_t(a: f64, x: C) -> Result<C> {
    Ok(SQRT_2 * cheb_t(0.5 * a, x)?)
}

/// `√(1 − T_a(x)) = √2·sin((a/2)·arccos x)`.
pub fn sqrt_one_minus_t(a: f64, x: C) -> Result<C> {
    Ok(sqrt_one_minus_t_over(a, x)? * a * (1.0 - x).sqrt())
}

/// `(1/a)·√((1 − T_a(x))/(1 − x)) = ₂F₁((1−a)/2, (1+a)/2; 3/2; (1−x)/2)`,
/// analytic on `ℂ ∖ (−∞, −1]`.
pub fn sqrt_one_minus_t_over(a: f64, x: C) -> Result<C> {
    if on_cut(x) {
        return Err(Error::OnCut(format!("{x}")));
    }
    if (1.0 - x).norm() < 1e-3 {
        return Ok(hyp2f1_series(0.5 * (1.0 - a), 0.5 * (1.0 + a), 1.5, (1.0 - x) / 2.0)[0]);
    }
    let (t, s) = arccos_pair(x);
    Ok(SQRT_2 * (0.5 * a * t).sin() / (a * s))
}

/// The canonical invariant `w(y) = T_{π/β}(−(2y − (y⁺+y⁻))/(y⁺−y⁻))`.
#[derive(Debug, Clone, Copy)]
pub struct InvariantW {
    pub a: f64,
    pub beta: f64,
    pub y_plus: f64,
    pub y_minus: f64,
}

impl InvariantW {
    pub fn new(k: &KernelGeometry) -> InvariantW {
        InvariantW {
            a: PI / k.beta(),
            beta: k.beta(),
            y_plus: k.y_plus,
            y_minus: k.y_minus,
        }
    }

    /// The Chebyshev argument `x_T(y)`.
    pub fn arg(&self, y: C) -> C {
        -(2.0 * y - (self.y_plus + self.y_minus)) / (self.y_plus - self.y_minus)
    }

    fn darg(&self) -> f64 {
        -2.0 / (self.y_plus - self.y_minus)
    }

    pub fn eval(&self, y: C) -> Result<C> {
        cheb_t(self.a, self.arg(y))
    }

    /// `w` and its first three derivatives in `y`.
    pub fn derivs(&self, y: C) -> Result<[C; 4]> {
        let d = cheb_t_derivs(self.a, self.arg(y))?;
        let c = self.darg();
        Ok([d[0], d[1] * c, d[2] * c * c, d[3] * c * c * c])
    }

    pub fn deriv(&self, y: C) -> Result<C> {
        Ok(self.derivs(y)?[1])
    }

    /// `√((1 − w(y))/(y − y⁻))`, analytic off `[y⁺, ∞)`.
    pub fn sqrt_minus(&self, y: C) -> Result<C> {
        let f = sqrt_one_minus_t_over(self.a, self.arg(y))?;
        Ok(self.a * f * (2.0 / (self.y_plus - self.y_minus)).sqrt())
    }

    /// `√(1 + w(y))`, analytic off `[y⁺, ∞)`.
    pub fn sqrt_plus(&self, y: C) -> Result<C> {
        sqrt_one_plus_t(self.a, self.arg(y))
    }

    /// `w(y(s)) = −½((−s)^a + (−s)^{−a})`, with the logarithm of `−s` cut along `e^{iβ}ℝ₋`.
    pub fn eval_at_s(&self, s: C) -> C {
        let l = log_cut(-s, self.beta);
        let p = (self.a * l).exp();
        -0.5 * (p + 1.0 / p)
    }

    /// The unique preimage of `z ∉ (−∞, −1)` in `G_R` (the closure for `z = −1`).
    pub fn inverse(&self, k: &KernelGeometry, z: C) -> Result<C> {
        if z.im.abs() <= 1e-12 * (1.0 + z.norm()) && z.re < -1.0 - 1e-12 {
            return Err(Error::OnCut(format!("{z}")));
        }
        // Solve −½(ζ + 1/ζ) = z, then (−s)^a = ζ with s in the arc (π, π+2β).
        let r = (z * z - 1.0).sqrt();
        let zeta = -z + r;
        let zeta = if zeta.norm() < 1e-300 { -z - r } else { zeta };
        let mut phi = zeta.arg();
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        let rho = zeta.norm().powf(1.0 / self.a);
        let s = C::from_polar(rho, PI + phi / self.a);
        let mut y = k.y_of(s);
        let tol = 1e-13 * (1.0 + z.norm());
        for _ in 0..30 {
            let f = self.eval(y)? - z;
            if f.norm() <= tol {
                return Ok(y);
            }
            let d = self.deriv(y)?;
            if d.norm() < 1e-300 {
                break;
            }
            let mut step = f / d;
            // Damp steps that would leave the domain or grow the residual.
            let mut ok = false;
            for _ in 0..30 {
                let cand = y - step;
                if let Ok(v) = self.eval(cand) {
                    if (v - z).norm() < f.norm() {
                        y = cand;
                        ok = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !ok {
                break;
            }
        }
        let f = (self.eval(y)? - z).norm();
        if f <= 1e-10 * (1.0 + z.norm()) {
            Ok(y)
        } else {
            Err(Error::NoConvergence(format!("w(y) = {z}: residual {f:e}")))
        }
    }

    /// All `y ∉ [y⁺, ∞)` with `w(y) = z`.
    pub fn preimages(&self, k: &KernelGeometry, z: C) -> Vec<C> {
        let r = (z * z - 1.0).sqrt();
        let mut out: Vec<C> = Vec::new();
        for zeta in [-z + r, -z - r] {
            if zeta.norm() < 1e-300 {
                continue;
            }
            let phi = zeta.arg();
            let lo = self.a * (self.beta - PI);
            let hi = self.a * (self.beta + PI);
            let kmin = ((lo - phi) / (2.0 * PI)).floor() as i64 - 1;
            let kmax = ((hi - phi) / (2.0 * PI)).ceil() as i64 + 1;
            for kk in kmin..=kmax {
                let ang = phi + 2.0 * PI * kk as f64;
                if ang <= lo || ang >= hi {
                    continue;
                }
                let s = -C::from_polar(zeta.norm().powf(1.0 / self.a), ang / self.a);
                let y = k.y_of(s);
                if let Ok(v) = self.eval(y) {
                    if (v - z).norm() <= 1e-8 * (1.0 + z.norm())
                        && !out.iter().any(|o| (o - y).norm() <= 1e-9 * (1.0 + y.norm()))
                    {
                        out.push(y);
                    }
                }
            }
        }
        out
    }
}

/// Logarithm with branch cut along `e^{iβ}ℝ₋`, i.e. argument in `(β−π, β+π]`.
pub fn log_cut(u: C, beta: f64) -> C {
    let mut arg = u.arg();
    while arg <= beta - PI {
        arg += 2.0 * PI;
    }
    while arg > beta + PI {
        arg -= 2.0 * PI;
    }
    C::new(u.norm().ln(), arg)
}
