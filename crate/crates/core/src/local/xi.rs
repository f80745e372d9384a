//! Small-`S` resummation of `Xi(S, omega) = 2F1(1, 2A + 2; 2A + 3; e^{-sqrt6 S})`
//! with `A = sqrt(1 + omega / (2 S^2))`:
//! `Xi = sum_{i=-1}^{5} xi_i(2 sqrt(3 omega)) (S / sqrt6)^i + O(S^6)`.

use crate::dd;
use crate::diff::derivative_checked;
use crate::error::{Error, Result};
use crate::scaling::residual::Residual;
use crate::special::{exp_e1_scaled_dd, hyp2f1_unit};
use num_complex::Complex64;
use twofloat::TwoFloat;

pub const FIRST: i32 = -1;
pub const LAST: i32 = 5;

fn poly(c: &[f64], r: TwoFloat) -> TwoFloat {
    c.iter()
        .rev()
        .fold(TwoFloat::from(0.0), |acc, &v| acc * r + v)
}

/// `xi_i(r)` in double-double. The closed forms subtract two terms of size
/// `r^(i+1)` that agree to `O(1)`, so plain doubles lose `(i+1) log10 r`
/// digits at large `r`.
pub fn xi_dd(i: i32, r: TwoFloat) -> Result<TwoFloat> {
    let e = exp_e1_scaled_dd(r)?;
    let rp = |k: i32| r.powi(k);
    let v = match i {
        -1 => r * e / 6.0,
        0 => ((r + 1.0) * e * 4.0 - 3.0) / 2.0,
        1 => dd::div(poly(&[1.0, 3.0, 1.0], r) * e * 24.0 - poly(&[47.0, 23.0], r), r * 2.0),
        2 => {
            dd::div(
                r * poly(&[6.0, 6.0, 1.0], r) * e * 8.0 - poly(&[17.0, 40.0, 8.0], r),
                rp(2),
            ) * 6.0
        }
        3 => {
            dd::div(
                poly(&[-3.0, 3.0, 21.0, 10.0, 1.0], r) * e * 480.0
                    - poly(&[-2034.0, 6246.0, 4323.0, 481.0], r),
                rp(3) * 10.0,
            ) * 3.0
        }
        4 => {
            dd::div(
                r * poly(&[-30.0, 30.0, 55.0, 15.0, 1.0], r) * e * 32.0
                    - poly(&[-518.0, -36.0, 1343.0, 448.0, 32.0], r),
                rp(4) * 5.0,
            ) * 54.0
        }
        5 => {
            dd::div(
                poly(&[45.0, -45.0, -135.0, 150.0, 120.0, 21.0, 1.0], r) * e * 2688.0
                    - poly(&[154608.0, -393240.0, 177600.0, 271468.0, 53755.0, 2687.0], r),
                rp(5) * 35.0,
            ) * 9.0
        }
        _ => return Err(Error::Domain(format!("xi_i is defined for -1 <= i <= 5, got {i}"))),
    };
    Ok(v)
}

pub fn xi(i: i32, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("xi needs r > 0, got {r}")));
    }
    Ok(xi_dd(i, TwoFloat::from(r))?.hi())
}

/// `r = 2 sqrt(3 omega)`
pub fn r_of_omega(omega: f64) -> f64 {
    2.0 * (3.0 * omega).sqrt()
}

/// The seven-term resummed expansion of `Xi`.
pub fn xi_sum(s: f64, omega: f64) -> Result<f64> {
    if !(s > 0.0 && omega > 0.0) {
        return Err(Error::Domain("xi_sum needs S > 0 and omega > 0".into()));
    }
    let r = r_of_omega(omega);
    let u = s / 6f64.sqrt();
    let mut acc = 0.0;
    for i in FIRST..=LAST {
        acc += xi(i, r)? * u.powi(i);
    }
    Ok(acc)
}

/// `Xi` from the hypergeometric series itself.
pub fn xi_direct(s: f64, omega: f64) -> Result<f64> {
    if !(s > 0.0 && omega > 0.0) {
        return Err(Error::Domain("xi_direct needs S > 0 and omega > 0".into()));
    }
    let big_a = (1.0 + omega / (2.0 * s * s)).sqrt();
    let sigma = (-6f64.sqrt() * s).exp();
    Ok(hyp2f1_unit(Complex64::new(2.0 * big_a + 2.0, 0.0), Complex64::new(sigma, 0.0))?.re)
}

/// Coefficients of `1/S` contributed by the first `n` terms of the naive
/// expansion (expand each `(2A + 2)/(m + 2A + 2)` in `S`, then sum over `m`).
/// Term `k` is `(-1)^k k! / (sqrt6 r^k)`: every term sits at the same order
/// and the sum is the divergent asymptotic series of `sqrt6 xi_{-1}(r)`.
pub fn naive_inverse_s_terms(omega: f64, n: usize) -> Vec<f64> {
    let r = r_of_omega(omega);
    let mut out = Vec::with_capacity(n);
    let mut t = 1.0 / 6f64.sqrt();
    for k in 0..n {
        if k > 0 {
            t *= -(k as f64) / r;
        }
        out.push(t);
    }
    out
}

/// Coefficients `a_m` of `A + 1` in `u = S / sqrt6` for `m = -1..=5`
/// (index `m + 1`), at fixed `r`.
fn a_plus_one(r: f64) -> [f64; 7] {
    let rho = r / 12.0;
    // binomial(1/2, j) for j = 0..=3
    let b = [1.0, 0.5, -0.125, 0.0625];
    let mut a = [0.0; 7];
    a[0] = rho;
    a[1] = 1.0;
    for j in 1..=3 {
        a[2 * j] = b[j] * rho.powi(1 - 2 * j as i32);
    }
    a
}

/// Coefficients of `u^(n-1)` in `1/(1 - e^{-6u})`, `n = 0..=6`.
const INV_ONE_MINUS_SIGMA: [f64; 7] = [1.0 / 6.0, 0.5, 0.5, 0.0, -0.3, 0.0, 9.0 / 35.0];

/// Residual of the order-`k` equation obtained by inserting the expansion
/// into `d_S Xi + (2 omega/S) d_omega Xi - 2 sqrt6 (A + 1)(Xi - 1/(1 - sigma)) = 0`
/// and collecting `u^(k-1)`:
/// `k xi_k + r xi_k' - 12 sum_m a_m xi_{k-1-m} + 12 [u^(k-1)] (A+1)/(1-sigma)`.
pub fn xi_residual(k: i32, r: f64) -> Result<Residual> {
    if !(FIRST..=LAST).contains(&k) {
        return Err(Error::Domain(format!("no xi_{k}")));
    }
    let a = a_plus_one(r);
    let lift = |v: f64| Complex64::new(v, 0.0);
    let f = move |x: f64| lift(xi(k, x).unwrap_or(f64::NAN));
    let d = derivative_checked(f, r, 1e-5 * r.max(1.0)).re;
    let mut terms = vec![k as f64 * xi(k, r)?, r * d];
    // (A + 1) Xi
    for m in -1..=5 {
        let i = k - 1 - m;
        if i >= FIRST {
            terms.push(-12.0 * a[(m + 1) as usize] * xi(i, r)?);
        }
    }
    // (A + 1)/(1 - sigma)
    let j = k - 1;
    let mut c = 0.0;
    for m in -1..=5 {
        let n = j + 1 - m;
        if (0..7).contains(&n) {
            c += a[(m + 1) as usize] * INV_ONE_MINUS_SIGMA[n as usize];
        }
    }
    terms.push(12.0 * c);
    let terms: Vec<Complex64> = terms.into_iter().map(lift).collect();
    Residual::new(terms.iter().sum(), &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // 30-digit evaluations of the closed forms
        let table: [(f64, [f64; 7]); 3] = [
            (0.3, [0.061126780254029275, 1.6785925732095224, 7.480500831081277, -438.00438547960215, -2243.2750682347314, 282739.72902718367, 2102559.0027673105]),
            (2.0, [0.1204428722960742, 0.6679717013293355, 0.5976887146226906, -2.7184902830184754, 5.291464029805194, 32.57695233448924, -155.67529096913393]),
            (40.0, [0.16269410053085717, 0.5011374365295432, 0.5123446156122339, -0.0037542756067778463, -0.32308656835961824, 0.007450430992570533, 0.2915141941032597]),
        ];
        for (r, want) in table {
            for (k, w) in want.iter().enumerate() {
                let got = xi(k as i32 - 1, r).unwrap();
                assert!((got - w).abs() <= 1e-13 * w.abs(), "xi_{} at r = {r}", k as i32 - 1);
            }
        }
    }

    #[test]
    fn leading_function_limits() {
        let big = 1e6;
        assert!((xi(-1, big).unwrap() - 1.0 / 6.0).abs() < 1e-6);
        for r in [50.0, 100.0, 200.0] {
            let three = (1.0 - 1.0 / r + 2.0 / (r * r)) / 6.0;
            // next term is -6/r^3
            assert!((xi(-1, r).unwrap() - three).abs() < 1.5 / r.powi(3));
        }
    }

    #[test]
    fn ode_hierarchy() {
        for r in [0.4, 1.0, 3.0, 12.0, 40.0] {
            for k in FIRST..=LAST {
                let res = xi_residual(k, r).unwrap();
                assert!(res.relative() < 1e-8, "k = {k}, r = {r}: {:e}", res.relative());
            }
        }
    }

    #[test]
    fn large_omega_limit() {
        let s = 0.1;
        let sum = xi_sum(s, 1e8).unwrap();
        let want = 1.0 / (1.0 - (-6f64.sqrt() * s).exp());
        assert!((sum - want).abs() < 1e-3 * want);
    }

    #[test]
    fn naive_expansion_fails_at_order_inverse_s() {
        let omega = 0.3;
        let r = r_of_omega(omega);
        let true_coeff = 6f64.sqrt() * xi(-1, r).unwrap();
        let terms = naive_inverse_s_terms(omega, 12);
        // every term is O(1/S) and of comparable size
        assert!(terms.iter().take(4).all(|t| t.abs() > 0.05 * terms[0].abs()));
        let mut partial = 0.0;
        let mut best = f64::INFINITY;
        for t in &terms {
            partial += t;
            best = best.min((partial - true_coeff).abs());
        }
        assert!(best > 0.05 * true_coeff, "best partial error {best}");
        // while the resummed coefficient is what S * Xi approaches
        let s = 1e-3;
        let direct = s * xi_direct(s, omega).unwrap();
        assert!((direct - true_coeff).abs() < 2e-2 * true_coeff);
    }

    #[test]
    fn domain() {
        assert!(xi(0, 0.0).is_err());
        assert!(xi(6, 1.0).is_err());
        assert!(xi_sum(-1.0, 1.0).is_err());
    }
}
