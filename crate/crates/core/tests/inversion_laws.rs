use voronoi_core::laplace::*;

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn both_rules_agree_on_the_local_law() {
    for spec in [
        InversionSpec::default(),
        InversionSpec::new(Method::Talbot, 16).unwrap(),
        InversionSpec::new(Method::Gaver, 16).unwrap(),
    ] {
        let table = density_table(&log_grid(0.01, 50.0, 41), &spec).unwrap();
        assert!(table.cross_residual < 1e-4, "{:?}", spec);
        assert_eq!(table.clipped, 0);
    }
}

#[test]
fn tails_and_mass() {
    let table = density_table(&log_grid(1e-3, 200.0, 241), &InversionSpec::default()).unwrap();
    let first = table.rows.first().unwrap();
    let last = table.rows.last().unwrap();
    assert!((first.small_tail_ratio - 1.0).abs() < 5e-3);
    assert!((last.large_tail_ratio - 1.0).abs() < 1e-2);
    // both tail ratios move monotonically toward 1 at the grid extremes
    let small: Vec<f64> = table.rows.iter().take(20).map(|r| r.small_tail_ratio).collect();
    assert!(small.windows(2).all(|w| w[0] > w[1]));
    let large: Vec<f64> = table.rows.iter().rev().take(20).map(|r| r.large_tail_ratio).collect();
    assert!(large.windows(2).all(|w| w[0] > w[1]));
    assert!(table.rows.iter().all(|r| r.p >= 0.0));
    let mass = table.mass_accounting(100.0);
    assert!((mass - 1.0).abs() < 1e-2, "{mass}");
}

#[test]
fn first_moment_keeps_growing() {
    let table = density_table(&log_grid(1e-3, 200.0, 241), &InversionSpec::default()).unwrap();
    let m: Vec<f64> = [10.0, 40.0, 160.0].iter().map(|&l| table.first_moment(l)).collect();
    // each quadrupling of L adds about 2 c sqrt(L), c the tail coefficient
    let c = large_ell_coefficient();
    for (w, l) in m.windows(2).zip([10.0f64, 40.0]) {
        let gain = w[1] - w[0];
        let want = 2.0 * c * l.sqrt();
        assert!(gain > 0.8 * want && gain < 1.2 * want, "gain {gain} vs {want}");
    }
}

#[test]
fn rules_reproduce_a_known_density() {
    // Gamma(3/2) density: Phi = (1 + w)^{-3/2}, P = 2 sqrt(l/pi) e^{-l}
    let f = |w: num_complex::Complex64| Ok((1.0 + w).powf(-1.5));
    let spec = InversionSpec::default();
    for ell in [0.01f64, 0.3, 1.0, 4.0, 20.0] {
        let want = 2.0 * (ell / std::f64::consts::PI).sqrt() * (-ell).exp();
        assert!((invert_at(&f, ell, &spec).unwrap() - want).abs() < 1e-9);
    }
    let t = density_table_for(&f, &[0.5, 1.0], &spec).unwrap();
    assert!(t.cross_residual < 1e-4);
}
