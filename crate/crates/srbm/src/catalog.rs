//! Named example models with their expected classification.

use crate::classify::{NatureClass, Simple};
use crate::error::Result;
use crate::model::{ExactAngles, Model};

/// How the angles of an example are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angles {
    /// `(β, θ, δ, ε)` as multiples of π.
    Exact([(i64, i64); 4]),
    /// `(β, θ, δ, ε)` in radians.
    Radians([f64; 4]),
}

/// The density family expected for `ν₁`, if one is catalogued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    SumOfExponentials,
    GammaHalf,
    Erf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    pub angles: Angles,
    pub class: NatureClass,
    /// Whether `1/φ₁` is D-finite, where the table decides it.
    pub recip_dfinite: Option<bool>,
    pub simple: Option<Simple>,
    /// `(R̄₁, K̄₁, R̄₂, K̄₂)` of the double condition.
    pub double: Option<[i64; 4]>,
    pub density: Option<DensityKind>,
}

impl Example {
    pub fn model(&self) -> Result<Model> {
        match self.angles {
            Angles::Exact([b, t, d, e]) => Model::from_exact(ExactAngles::new(b, t, d, e)),
            Angles::Radians([b, t, d, e]) => Model::from_radians(b, t, d, e),
        }
    }

    /// Whether an explicit form of `φ₁` exists.
    pub fn has_closed_form(&self) -> bool {
        self.simple.is_some() || self.double.is_some()
    }
}

/// `δ + ε + β = 2π` and `2ε + θ = 2π` with `β/π` irrational.
const MOMENT_IRRATIONAL: [f64; 4] = {
    let beta = 2.0;
    let theta = 0.7;
    let eps = std::f64::consts::PI - 0.5 * theta;
    [beta, theta, 2.0 * std::f64::consts::PI - beta - eps, eps]
};

/// `α₁ = α₂ = 0` with `β/π` irrational.
const PURE_IRRATIONAL: [f64; 4] = {
    let beta = 1.3;
    let delta = 1.9;
    let theta = 2.0 * delta - std::f64::consts::PI;
    [beta, theta, delta, 0.5 * (beta - theta + std::f64::consts::PI)]
};

/// The catalogue.
pub fn examples() -> Vec<Example> {
    use DensityKind::*;
    use NatureClass::*;
    let ex = |n: [(i64, i64); 4]| Angles::Exact(n);
    vec![
        Example {
            name: "skew-symmetric",
            description: "delta + eps = pi: exponential boundary density",
            angles: ex([(1, 2), (1, 4), (3, 5), (2, 5)]),
            class: Rational,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: 1, k: 0 }),
            double: None,
            density: Some(SumOfExponentials),
        },
        Example {
            name: "sum-of-exponentials",
            description: "alpha = -1 with simple poles",
            angles: ex([(1, 3), (1, 6), (3, 10), (11, 30)]),
            class: Rational,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: 2, k: 0 }),
            double: None,
            density: Some(SumOfExponentials),
        },
        Example {
            name: "erlang",
            description: "alpha = -1 with a double pole: Gamma(2) boundary density",
            angles: ex([(5, 16), (1, 4), (5, 16), (3, 8)]),
            class: Rational,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: 2, k: 0 }),
            double: Some([2, 0, -2, 0]),
            density: Some(SumOfExponentials),
        },
        Example {
            name: "orthogonal",
            description: "diagonal reflection matrix, beta/pi irrational: 1/phi1 is D-finite",
            angles: Angles::Radians([1.0, 0.4, 1.0, 1.0]),
            class: DAlgebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: None,
            density: None,
        },
        Example {
            name: "orthogonal-rational",
            description: "diagonal reflection matrix, beta = 3pi/7",
            angles: ex([(3, 7), (1, 5), (3, 7), (3, 7)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: None,
            density: None,
        },
        Example {
            name: "quadratic",
            description: "beta = 2pi/3 and alpha = 1/2",
            angles: ex([(2, 3), (1, 3), (3, 4), (7, 12)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: None,
            density: None,
        },
        Example {
            name: "quadratic-cusp",
            description: "beta = 2pi/3, alpha = 1/2 and s1 = -1",
            angles: ex([(2, 3), (1, 3), (5, 6), (1, 2)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: Some([0, -1, -1, -1]),
            density: None,
        },
        Example {
            name: "moments-below",
            description: "delta + eps + beta = 2pi with 2 eps + theta < 2pi",
            angles: ex([(2, 3), (1, 4), (5, 6), (1, 2)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: None,
            density: None,
        },
        Example {
            name: "moments-above",
            description: "delta + eps + beta = 2pi with 2 eps + theta > 2pi",
            angles: ex([(2, 3), (1, 4), (4, 9), (8, 9)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: None,
            density: None,
        },
        Example {
            name: "moments",
            description: "delta + eps + beta = 2pi with 2 eps + theta = 2pi",
            angles: ex([(2, 3), (1, 2), (7, 12), (3, 4)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: Some(Simple { r: -1, k: -1 }),
            double: Some([-1, -1, 1, 1]),
            density: None,
        },
        Example {
            name: "moments-irrational",
            description: "delta + eps + beta = 2pi, 2 eps + theta = 2pi, beta/pi irrational",
            angles: Angles::Radians(MOMENT_IRRATIONAL),
            class: DFinite,
            recip_dfinite: Some(false),
            simple: Some(Simple { r: 2, k: 1 }),
            double: Some([2, 1, -2, -1]),
            density: None,
        },
        Example {
            name: "pure",
            description: "alpha1 = alpha2 = 0: Gamma(1/2) boundary density and explicit 2-D density",
            angles: ex([(1, 2), (1, 5), (3, 5), (13, 20)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: None,
            double: Some([1, 0, 0, 0]),
            density: Some(GammaHalf),
        },
        Example {
            name: "pure-irrational",
            description: "alpha1 = alpha2 = 0 with beta/pi irrational",
            angles: Angles::Radians(PURE_IRRATIONAL),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: None,
            double: Some([1, 0, 0, 0]),
            density: Some(GammaHalf),
        },
        Example {
            name: "erf",
            description: "alpha1 = -2, alpha2 = 0: erf boundary density",
            angles: ex([(3, 10), (1, 10), (11, 20), (3, 10)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: None,
            double: Some([3, 0, 0, 0]),
            density: Some(Erf),
        },
        Example {
            name: "gamma-times-root",
            description: "alpha1 = -1, alpha2 = 1",
            angles: ex([(1, 2), (1, 4), (7, 8), (3, 8)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: None,
            double: Some([2, 0, 1, 0]),
            density: None,
        },
        Example {
            name: "erf-symmetric",
            description: "alpha1 = alpha2 = -1: erf boundary density",
            angles: ex([(1, 2), (1, 4), (3, 8), (3, 8)]),
            class: Algebraic,
            recip_dfinite: Some(true),
            simple: None,
            double: Some([2, 0, -1, 0]),
            density: Some(Erf),
        },
        Example {
            name: "generic",
            description: "beta/pi irrational and neither angle condition",
            angles: Angles::Radians([1.0, 0.4, 1.3, 1.1]),
            class: DTranscendental,
            recip_dfinite: Some(false),
            simple: None,
            double: None,
            density: None,
        },
    ]
}

/// Look up an example by name.
pub fn example(name: &str) -> Option<Example> {
    examples().into_iter().find(|e| e.name == name)
}
