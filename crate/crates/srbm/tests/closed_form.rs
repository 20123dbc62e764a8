//! Closed forms against each other and against independent numerics.

use num_complex::Complex64 as C;
use srbm::catalog;
use srbm::classify;
use srbm::closed_form::{self, LaplaceForm};
use srbm::error::Error;
use srbm::model::Model;
use srbm::oracle;

fn phi1(m: &Model) -> LaplaceForm {
    let c = classify::classify(m).unwrap();
    closed_form::build_phi1(m, &c.conditions).unwrap()
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Central difference of order four for a real function.
fn derivative(f: impl Fn(f64) -> C, h: f64) -> f64 {
    ((f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)).re
}

#[test]
fn catalogued_densities_reproduce_their_transforms() {
    let mut seen = 0;
    for ex in catalog::examples().into_iter().filter(|e| e.density.is_some()) {
        let m = ex.model().unwrap();
        let f = phi1(&m);
        let d = closed_form::density(&f).unwrap_or_else(|e| panic!("{}: {e}", ex.name));
        assert!(
            (d.mass() - f.mass).abs() < 1e-12 * f.mass,
            "{}: mass {} vs {}",
            ex.name,
            d.mass(),
            f.mass
        );
        for y in [
            C::new(-0.5, 0.0),
            C::new(-2.0, 0.0),
            C::new(-1.0, 1.0),
            C::new(0.0, 0.3),
        ] {
            let exact = f.eval(y).unwrap();
            assert!(rel(d.laplace(y).unwrap(), exact) < 1e-12, "{} analytic at {y}", ex.name);
            let num = oracle::numeric_laplace1d(&d, y).unwrap();
            assert!(rel(num, exact) < 1e-9, "{} numeric at {y}: {num} vs {exact}", ex.name);
        }
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn densities_are_nonnegative() {
    for ex in catalog::examples().into_iter().filter(|e| e.density.is_some()) {
        let d = closed_form::density(&phi1(&ex.model().unwrap())).unwrap();
        for i in 1..200 {
            let z = 0.05 * i as f64;
            assert!(d.pdf(z).unwrap() >= 0.0, "{} at {z}", ex.name);
        }
    }
}

#[test]
fn phi2_is_phi1_of_the_swapped_model() {
    for ex in catalog::examples().into_iter().filter(|e| e.double.is_some()) {
        let m = ex.model().unwrap();
        let f2 = closed_form::build_phi2(&m).unwrap();
        let g = phi1(&m.swapped().unwrap());
        for x in [C::new(-0.7, 0.0), C::new(-3.0, 0.5), C::new(0.1, -0.2)] {
            assert!(
                rel(f2.eval(x).unwrap(), g.eval(x).unwrap()) < 1e-12,
                "{} at {x}",
                ex.name
            );
        }
        assert!((f2.mass - m.masses.1).abs() < 1e-12 * m.masses.1, "{}", ex.name);
    }
}

#[test]
fn means_agree_with_the_joint_transform() {
    for name in ["pure", "pure-irrational"] {
        let m = catalog::example(name).unwrap().model().unwrap();
        let (f1, f2) = (phi1(&m), closed_form::build_phi2(&m).unwrap());
        let h = 1e-3;
        let d1 = derivative(|t| f1.eval(C::new(t, 0.0)).unwrap(), h);
        let d2 = derivative(|t| f2.eval(C::new(t, 0.0)).unwrap(), h);
        let means = closed_form::stationary_means(&m.quadrant, d1, d2);
        let z = C::new(0.0, 0.0);
        let e1 = derivative(|t| closed_form::phi_alg_00(&m, C::new(t, 0.0), z), h);
        let e2 = derivative(|t| closed_form::phi_alg_00(&m, z, C::new(t, 0.0)), h);
        assert!((means[0] - e1).abs() < 1e-8 * e1.abs(), "{name}: {} vs {e1}", means[0]);
        assert!((means[1] - e2).abs() < 1e-8 * e2.abs(), "{name}: {} vs {e2}", means[1]);
    }
}

#[test]
fn joint_transform_matches_the_kernel_equation() {
    let m = catalog::example("pure").unwrap().model().unwrap();
    let (f1, f2) = (phi1(&m), closed_form::build_phi2(&m).unwrap());
    for (x, y) in [
        (C::new(-0.4, 0.0), C::new(-1.1, 0.0)),
        (C::new(-2.0, 0.3), C::new(-0.5, -0.2)),
    ] {
        let a = closed_form::eval_phi(&m.kernel, &f1, &f2, x, y).unwrap();
        let b = closed_form::phi_alg_00(&m, x, y);
        assert!(rel(a, b) < 1e-10, "at ({x}, {y}): {a} vs {b}");
    }
}

#[test]
fn first_moment_is_the_derivative_at_zero() {
    for name in ["moments", "moments-irrational"] {
        let m = catalog::example(name).unwrap().model().unwrap();
        let rec = closed_form::moment_recurrence(&m).unwrap();
        let f = phi1(&m);
        let mom = rec.moments(3);
        assert!((mom[0] - f.mass).abs() < 1e-12 * f.mass, "{name}");
        let d = derivative(|t| f.eval(C::new(t, 0.0)).unwrap(), 1e-3);
        assert!((mom[1] - d).abs() < 1e-8 * d.abs(), "{name}: {} vs {d}", mom[1]);
    }
}

#[test]
fn moment_recurrence_needs_its_angle_case() {
    let m = catalog::example("skew-symmetric").unwrap().model().unwrap();
    assert!(matches!(closed_form::moment_recurrence(&m), Err(Error::NotCovered(_))));
    assert!(matches!(closed_form::stationary_density(&m), Err(Error::NotCovered(_))));
}

#[test]
fn forms_refuse_the_cut_and_the_pole() {
    for ex in catalog::examples().into_iter().filter(|e| e.has_closed_form()) {
        let f = phi1(&ex.model().unwrap());
        assert!(
            matches!(f.eval(C::new(f.y_plus() + 1.0, 0.0)), Err(Error::OnCut(_))),
            "{}",
            ex.name
        );
        if let Some(p) = f.pole {
            assert!(matches!(f.eval(C::new(p, 0.0)), Err(Error::AtPole(_))), "{}", ex.name);
        }
    }
}
