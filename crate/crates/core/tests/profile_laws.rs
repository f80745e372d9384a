use proptest::prelude::*;
use voronoi_core::profile::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn density_and_moment_normalization() {
    let spec = spec();
    assert!((rho_mass(&spec).unwrap() - 1.0).abs() < 1e-9);
    assert!((mu_mass(&spec).unwrap() - mean_perimeter_constant()).abs() < 1e-9);
}

#[test]
fn two_routes_to_the_density() {
    let spec = spec();
    for k in 0..=29 {
        let s = 0.1 + 0.1 * k as f64;
        let a = rho(s, &spec).unwrap();
        let b = rho_lambda(s, 0.0, &spec).unwrap();
        assert!((a - b).abs() < 1e-8, "S = {s}");
        if s >= 0.3 {
            assert!((a - b).abs() < 10.0 * spec.abs_tol, "S = {s}: {:e}", a - b);
        }
    }
}

#[test]
fn moment_is_minus_the_lambda_slope() {
    let spec = spec();
    for (s, tol) in [(0.3, 1e-7), (1.0, 1e-7), (2.0, 1e-7), (3.0, 1e-5)] {
        let m = mu(s, &spec).unwrap();
        let d = mu_from_lambda_derivative(s, 1e-3, &spec).unwrap();
        assert!((d / m - 1.0).abs() < tol, "S = {s}");
    }
}

#[test]
fn small_s_leading_terms() {
    let spec = spec();
    // both profiles approach their leading power with an O(S) correction
    let lead = |f: &dyn Fn(f64) -> f64, g: fn(f64) -> f64, s: f64| f(s) / g(s);
    let r = |s| rho(s, &spec).unwrap();
    let m = |s| mu(s, &spec).unwrap();
    for (f, g) in [(&r as &dyn Fn(f64) -> f64, rho_small_s as fn(f64) -> f64), (&m, mu_small_s)] {
        let (a, b) = (lead(f, g, 0.02), lead(f, g, 0.01));
        assert!((2.0 * b - a - 1.0).abs() < 2e-3, "{a} {b}");
    }
}

#[test]
fn large_s_saddle_points() {
    let spec = spec();
    let dev = |s: f64| {
        (
            rho(s, &spec).unwrap() / rho_large_s(s) - 1.0,
            mu(s, &spec).unwrap() / mu_large_s(s) - 1.0,
            expected_perimeter_ratio(s, &spec).unwrap() / ratio_large_s(s) - 1.0,
        )
    };
    let (r4, m4, q4) = dev(4.0);
    let (r6, m6, q6) = dev(6.0);
    assert!(r6.abs() < r4.abs() && m6.abs() < m4.abs() && q6.abs() < q4.abs());
    assert!(r6.abs() < 0.1 && m6.abs() < 0.1 && q6.abs() < 0.1);
}

#[test]
fn psi_against_the_deformed_density() {
    let spec = spec();
    // (1 - E)/S = psi + O(S); one Richardson step in S removes the correction
    let ratio = |s: f64, l: f64| {
        let r = rho(s, &spec).unwrap();
        (r - rho_lambda(s, l, &spec).unwrap()) / r / s
    };
    for l in [0.5, 1.0, 2.0] {
        let p = psi(l, &spec).unwrap();
        let extrapolated = 2.0 * ratio(0.025, l) - ratio(0.05, l);
        assert!((extrapolated / p - 1.0).abs() < 5e-3, "lambda = {l}");
    }
}

#[test]
fn psi_shape() {
    let spec = spec();
    let mut prev = 0.0;
    for l in [1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let p = psi(l, &spec).unwrap();
        assert!(p > prev);
        prev = p;
    }
    assert!(psi(1e-8, &spec).unwrap() < 1e-7);
    let slope = psi_slope_at_zero(&spec).unwrap();
    assert!((slope / small_s_ratio_slope() - 1.0).abs() < 1e-5);
}

#[test]
fn ratio_stays_positive() {
    let spec = spec();
    for k in 1..=60 {
        let s = 0.1 * k as f64;
        assert!(expected_perimeter_ratio(s, &spec).unwrap() > 0.0, "S = {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn laplace_deformation_lowers_the_density(s in 0.1f64..3.0, l in 0.05f64..3.0) {
        let spec = spec();
        let r = rho(s, &spec).unwrap();
        let a = rho_lambda(s, l, &spec).unwrap();
        let b = rho_lambda(s, 1.5 * l, &spec).unwrap();
        prop_assert!(a > 0.0 && a < r);
        prop_assert!(b < a);
    }

    #[test]
    fn contour_points_sit_on_the_diagonals(t in 1e-6f64..40.0) {
        let c = ContourPoint::new(t);
        prop_assert_eq!(c.a_plus, c.a_minus.conj());
        prop_assert!((c.a_minus.re - (3.0 * t).sqrt()).abs() <= 1e-15 * c.a_minus.re);
        prop_assert!((c.a_minus.im + c.a_minus.re).abs() == 0.0);
    }
}
