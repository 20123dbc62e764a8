//! Randomized invariants of the model layer and the kernel geometry.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use srbm::angle::PiAngle;
use srbm::model::{self, Model, QuadrantModel};
use std::f64::consts::PI;

fn angles() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.2..3.0f64, 0.05..0.95f64, 0.05..3.1f64, 0.05..3.1f64).prop_map(|(b, t, d, e)| (b, t * b, d, e))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exact_angle_arithmetic_round_trips(n1 in -40i64..40, d1 in 1i64..30, n2 in -40i64..40, d2 in 1i64..30) {
        let (a, b) = (PiAngle::from_ratio(n1, d1), PiAngle::from_ratio(n2, d2));
        prop_assert!(a.add(b).sub(b).congruent(&a));
        prop_assert!(a.is_exact() && a.add(b).is_exact());
        prop_assert!((a.radians() - PI * n1 as f64 / d1 as f64).abs() < 1e-12 * (1.0 + a.radians().abs()));
        prop_assert!(a.scale(2).reduce2().congruent(&a.add(a)));
    }

    #[test]
    fn wedge_parameters_round_trip((b, t, d, e) in angles()) {
        let q = QuadrantModel::from_angles(b, t, d, e);
        let report = model::validate(&q);
        prop_assert!(report.consistent());
        prop_assume!(report.valid());
        let w = model::to_wedge(&q).unwrap();
        for (x, y) in [(w.beta, b), (w.theta, t), (w.delta, d), (w.eps, e)] {
            prop_assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn uniformization_parameterizes_the_kernel_curve((b, t, d, e) in angles(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let Ok(m) = Model::from_radians(b, t, d, e) else { return Ok(()); };
        let s = C::new(re, im);
        prop_assume!(s.norm() > 0.1);
        let (x, y) = m.kernel.uniformize(s);
        let (g, _, _) = m.kernel.gamma(x, y);
        prop_assert!(g.norm() < 1e-9 * (1.0 + x.norm() + y.norm()).powi(2), "gamma = {}", g);
    }

    #[test]
    fn swapping_twice_is_the_identity((b, t, d, e) in angles()) {
        let Ok(m) = Model::from_radians(b, t, d, e) else { return Ok(()); };
        let back = m.swapped().unwrap().swapped().unwrap();
        prop_assert_eq!(back.quadrant, m.quadrant);
        prop_assert!((back.masses.0 - m.masses.0).abs() < 1e-12 * m.masses.0);
    }
}
