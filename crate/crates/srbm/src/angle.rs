//! Angles stored as multiples of π, either exactly (rational) or as floats.

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use std::f64::consts::PI;

/// Tolerance (radians) used for coincidence tests between float angles.
pub const ANGLE_TOL: f64 = 1e-9;

/// An angle `v·π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PiAngle {
    Exact(Rational64),
    Approx(f64),
}

/// Position of a unit complex number `e^{iπv}` relative to the arc `(π, π+2β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcPosition {
    Inside,
    Boundary,
    Outside,
}

impl PiAngle {
    pub fn from_ratio(n: i64, d: i64) -> Self {
        PiAngle::Exact(Rational64::new(n, d))
    }

    pub fn from_radians(x: f64) -> Self {
        PiAngle::Approx(x / PI)
    }

    /// The multiple of π as a float.
    pub fn turns(&self) -> f64 {
        match self {
            PiAngle::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            PiAngle::Approx(v) => *v,
        }
    }

    pub fn radians(&self) -> f64 {
        self.turns() * PI
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, PiAngle::Exact(_))
    }

    pub fn add(self, o: PiAngle) -> PiAngle {
        match (self, o) {
            (PiAngle::Exact(a), PiAngle::Exact(b)) => PiAngle::Exact(a + b),
            _ => PiAngle::Approx(self.turns() + o.turns()),
        }
    }

    pub fn sub(self, o: PiAngle) -> PiAngle {
        self.add(o.scale(-1))
    }

    pub fn scale(self, k: i64) -> PiAngle {
        match self {
            PiAngle::Exact(a) => PiAngle::Exact(a * Rational64::from_integer(k)),
            PiAngle::Approx(v) => PiAngle::Approx(v * k as f64),
        }
    }

    /// `e^{iπv}`.
    pub fn unit(&self) -> Complex64 {
        // Reduce first so large multiples keep full accuracy.
        let t = self.reduce2().turns();
        Complex64::from_polar(1.0, t * PI)
    }

    /// Representative in `[0, 2)`.
    pub fn reduce2(&self) -> PiAngle {
        match self {
            PiAngle::Exact(a) => {
                let two = Rational64::from_integer(2);
                let q = (a / two).floor();
                PiAngle::Exact(a - q * two)
            }
            PiAngle::Approx(v) => PiAngle::Approx(v.rem_euclid(2.0)),
        }
    }

    /// Whether the two angles define the same point of the unit circle.
    pub fn congruent(&self, o: &PiAngle) -> bool {
        let d = self.sub(*o).reduce2();
        match d {
            PiAngle::Exact(r) => r.is_zero(),
            PiAngle::Approx(v) => v * PI < ANGLE_TOL || (2.0 - v) * PI < ANGLE_TOL,
        }
    }

    /// Whether `e^{iπv} = -1`.
    pub fn is_minus_one(&self) -> bool {
        self.congruent(&PiAngle::Exact(Rational64::from_integer(1)))
    }

    /// Position of `e^{iπv}` relative to the open arc `(π, π + 2β)` with `β = b·π`.
    pub fn arc_position(&self, b: &PiAngle) -> ArcPosition {
        let t = self.sub(PiAngle::from_ratio(1, 1)).reduce2();
        let w = b.scale(2);
        match (t, w) {
            (PiAngle::Exact(t), PiAngle::Exact(w)) => {
                if t.is_zero() || t == w {
                    ArcPosition::Boundary
                } else if t < w {
                    ArcPosition::Inside
                } else {
                    ArcPosition::Outside
                }
            }
            _ => {
                let (t, w) = (t.turns(), w.turns());
                let near = |a: f64, c: f64| ((a - c) * PI).abs() < ANGLE_TOL;
                if near(t, 0.0) || near(t, 2.0) || near(t, w) {
                    ArcPosition::Boundary
                } else if t < w {
                    ArcPosition::Inside
                } else {
                    ArcPosition::Outside
                }
            }
        }
    }
}
