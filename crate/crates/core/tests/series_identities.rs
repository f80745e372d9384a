use num_traits::One;
use std::time::Instant;
use voronoi_core::Error;
use voronoi_core::series::{
    expected_zl, x_infinity_series, Rational, XstTable,
};

const ORDER: usize = 10;

#[test]
fn z_equal_one_identities_for_small_distances() {
    let start = Instant::now();
    let table = XstTable::new(ORDER);
    let one = Rational::one();
    for s in 0..=5 {
        for t in 0..=5 {
            let x = table.x_st(s, t).unwrap();
            let closed = table.x_st_closed_z1(s, t).unwrap();
            assert_eq!(x.at_z(&one), closed, "X_{{{s},{t}}} at z = 1");
        }
    }
    for s in 1..=5 {
        let f = table.f(s).unwrap();
        let closed = table.f_closed_z1(s).unwrap();
        assert_eq!(f.at_z(&one), closed, "F_{s} at z = 1");
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn x_st_is_symmetric_nonnegative_and_degree_bounded() {
    let table = XstTable::new(8);
    for s in 1..=4 {
        for t in s..=4 {
            let a = table.x_st(s, t).unwrap();
            assert_eq!(a, table.x_st(t, s).unwrap());
            for (n, p) in a.coeffs().iter().enumerate() {
                assert!(p.is_nonnegative(), "X_{{{s},{t}}} at g^{n}");
                assert!(p.degree().is_none_or(|d| d <= n));
            }
        }
    }
}

#[test]
fn two_point_function_coefficients() {
    let table = XstTable::new(8);
    for s in 1..=4 {
        let f = table.f(s).unwrap();
        assert_eq!(f.coeff(0).degree(), None);
        for (n, p) in f.coeffs().iter().enumerate() {
            assert!(p.is_nonnegative(), "F_{s} at g^{n}");
            assert!(p.degree().is_none_or(|d| d <= n));
        }
        // fewer than s faces cannot produce a face at distance s
        for n in 1..s {
            assert_eq!(f.coeff(n).degree(), None);
        }
    }
}

#[test]
fn expected_zl_is_a_probability_polynomial() {
    for n in 1..=6 {
        for s in 1..=n {
            let p = match expected_zl(n, s) {
                Ok(p) => p,
                Err(Error::EmptyEnsemble { .. }) => {
                    assert!(s > 1, "distance 1 is always populated");
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            assert_eq!(p.eval(&Rational::one()), Rational::one());
            assert!(p.is_nonnegative());
            // at least one face sits at distance s, at most all of them
            assert_eq!(p.coeff(0), Rational::from_integer(0.into()));
            assert!(p.degree().unwrap() <= n);
        }
    }
}

#[test]
fn stabilization_towards_the_infinite_limit() {
    let order = 7;
    let table = XstTable::new(order);
    let xi = x_infinity_series(order).unwrap();
    // X_{s,t} and X_inf agree up to g^(min(s,t) - 1)
    for s in 1..=order + 1 {
        let x = table.x_st(s, s + 1).unwrap();
        let agree = (0..=order).take_while(|&k| x.coeff(k) == xi.coeff(k)).count();
        assert!(agree >= s.min(order + 1), "s = {s}: agree to {agree}");
    }
}

#[test]
fn json_round_trip_of_a_bivariate_series() {
    let x = XstTable::new(4).x_st(1, 2).unwrap();
    let text = serde_json::to_string(&x).unwrap();
    let back: voronoi_core::series::BivariateSeries = serde_json::from_str(&text).unwrap();
    assert_eq!(back, x);
}

#[test]
fn populated_distances_for_small_maps() {
    let populated = |n: usize| (1..=n).filter(|&s| expected_zl(n, s).is_ok()).count();
    // reaching distance s takes at least 2s - 1 faces
    for n in 1..=6 {
        assert_eq!(populated(n), n.div_ceil(2), "n = {n}");
    }
}
