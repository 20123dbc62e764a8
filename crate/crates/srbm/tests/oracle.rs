//! The numerical oracles on their own and against the closed forms.

use num_complex::Complex64 as C;
use srbm::catalog;
use srbm::classify;
use srbm::closed_form;
use srbm::error::Error;
use srbm::model::Model;
use srbm::oracle::{self, IntegralOracle, SimConfig};

fn model(name: &str) -> Model {
    catalog::example(name).unwrap().model().unwrap()
}

/// Total-variation distance allowed between the simulated histogram and the
/// cell integrals of the exact density.
const HISTOGRAM_TV_TOL: f64 = 0.03;

#[test]
fn kernel_equation_holds_for_the_generic_model() {
    let m = model("generic");
    let (o1, o2) = (
        IntegralOracle::new(&m).unwrap(),
        IntegralOracle::new(&m.swapped().unwrap()).unwrap(),
    );
    let (res, used) = oracle::kernel_residual(&m.kernel, |y| o1.eval(y), |x| o2.eval(x), 20).unwrap();
    assert!(used >= 10, "only {used} points");
    assert!(res < 1e-12, "residual {res:e}");
}

#[test]
fn integral_oracle_matches_a_rational_closed_form() {
    let m = model("skew-symmetric");
    let c = classify::classify(&m).unwrap();
    let f = closed_form::build_phi1(&m, &c.conditions).unwrap();
    let o = IntegralOracle::new(&m).unwrap();
    for y in [C::new(-0.5, 0.0), C::new(-2.0, 1.0), C::new(0.2, -0.1)] {
        let (a, b) = (o.eval(y).unwrap(), f.eval(y).unwrap());
        assert!((a - b).norm() < 1e-12 * b.norm(), "at {y}: {a} vs {b}");
    }
}

#[test]
fn integral_oracle_refuses_a_pole_near_the_contour() {
    // 2β − 2ε − θ = 1e-8, between the exact and the refusal thresholds.
    let (beta, theta, delta) = (1.5, 0.5, 1.0);
    let eps = 0.5 * (2.0 * beta - theta - 1e-8);
    let m = Model::from_radians(beta, theta, delta, eps).unwrap();
    assert!(matches!(IntegralOracle::new(&m), Err(Error::NotCovered(_))));
}

#[test]
fn integral_oracle_rejects_points_outside_the_domain() {
    let m = model("skew-symmetric");
    let o = IntegralOracle::new(&m).unwrap();
    let outside = C::new(m.kernel.y_plus + 1.0, 0.0);
    assert!(matches!(o.eval(outside), Err(Error::Input(_))));
}

#[test]
fn series_starts_at_the_boundary_mass() {
    for ex in catalog::examples().into_iter().filter(|e| e.has_closed_form()) {
        let m = ex.model().unwrap();
        let c = classify::classify(&m).unwrap();
        let f = closed_form::build_phi1(&m, &c.conditions).unwrap();
        let s = oracle::series_coeffs(&f, &m.kernel, 4).unwrap();
        assert!(
            (s[0] - f.mass).abs() < 1e-12 * f.mass,
            "{}: {} vs {}",
            ex.name,
            s[0],
            f.mass
        );
        assert!(s[1] > 0.0, "{}: the first moment is positive", ex.name);
    }
}

#[test]
fn numeric_2d_transform_matches_the_algebraic_form() {
    let m = model("pure-irrational");
    let d = closed_form::stationary_density(&m).unwrap();
    for (x, y) in [
        (C::new(-0.3, 0.0), C::new(-0.6, 0.0)),
        (C::new(-1.0, 0.5), C::new(-0.2, -0.4)),
    ] {
        let num = oracle::numeric_laplace2d(&d, x, y, 1e-9).unwrap();
        let exact = closed_form::phi_alg_00(&m, x, y);
        assert!(
            (num - exact).norm() < 1e-7 * exact.norm(),
            "at ({x}, {y}): {num} vs {exact}"
        );
    }
}

fn short_config(seed: u64) -> SimConfig {
    SimConfig {
        horizon: 200.0,
        n_paths: 2,
        seed,
        ..SimConfig::default()
    }
}

#[test]
fn simulation_is_deterministic_per_seed() {
    let q = model("skew-symmetric").quadrant;
    let a = oracle::simulate(&q, &short_config(5)).unwrap();
    let b = oracle::simulate(&q, &short_config(5)).unwrap();
    let c = oracle::simulate(&q, &short_config(6)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.mean(0).value, c.mean(0).value);
}

#[test]
fn simulation_rejects_bad_settings() {
    let q = model("skew-symmetric").quadrant;
    for cfg in [
        SimConfig {
            dt: 0.0,
            ..short_config(1)
        },
        SimConfig {
            n_paths: 0,
            ..short_config(1)
        },
        SimConfig {
            burn_in_fraction: 1.0,
            ..short_config(1)
        },
    ] {
        assert!(matches!(oracle::simulate(&q, &cfg), Err(Error::Input(_))));
    }
}

#[test]
fn histogram_is_a_probability_vector() {
    let q = model("pure").quadrant;
    let s = oracle::simulate(&q, &short_config(3)).unwrap();
    let h = &s.histogram;
    assert!(h.mass.iter().all(|&p| p >= 0.0));
    assert!((h.mass.iter().sum::<f64>() + h.overflow - 1.0).abs() < 1e-12);
    assert!(s.min_coordinate >= 0.0);
    let csv = h.to_csv();
    assert_eq!(csv.lines().next(), Some("z1_lo,z1_hi,z2_lo,z2_hi,mass"));
    assert_eq!(csv.lines().count(), 1 + h.bins * h.bins);
}

/// `∫∫ p` over `[a₁, b₁] × [a₂, b₂]` in the variables `zᵢ = tᵢ²`, which
/// absorbs the `1/√r` singularity at the corner.
fn cell_mass(d: &closed_form::DensityForm, a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    let rule = gauss_quad::GaussLegendre::new(24).unwrap();
    let (s1, t1) = (a1.sqrt(), b1.sqrt());
    let (s2, t2) = (a2.sqrt(), b2.sqrt());
    rule.integrate(s1, t1, |u| {
        rule.integrate(s2, t2, |v| 4.0 * u * v * d.pdf2(u * u, v * v).unwrap())
    })
}

#[test]
fn histogram_matches_the_stationary_density() {
    let m = model("pure");
    let d = closed_form::stationary_density(&m).unwrap();
    let cfg = SimConfig {
        horizon: 2000.0,
        n_paths: 4,
        seed: 11,
        bins: 8,
        hist_max: [4.0, 4.0],
        ..SimConfig::default()
    };
    let s = oracle::simulate(&m.quadrant, &cfg).unwrap();
    let (mut diff, mut inside) = (0.0, 0.0);
    for (a1, b1, a2, b2, p) in s.histogram.cells() {
        let exact = cell_mass(&d, a1, b1, a2, b2);
        inside += exact;
        diff += (p - exact).abs();
    }
    let tv = 0.5 * (diff + (s.histogram.overflow - (1.0 - inside)).abs());
    println!("total variation {tv:.4}, exact mass inside the grid {inside:.4}");
    assert!(inside > 0.5 && inside <= 1.0 + 1e-9);
    assert!(tv < HISTOGRAM_TV_TOL, "total variation {tv}");
}
