//! Finite differences used by the residual checks.

use num_complex::Complex64;

/// Five-point central first derivative.
pub fn derivative(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (f(x - 2.0 * h) - f(x - h) * 8.0 + f(x + h) * 8.0 - f(x + 2.0 * h)) / (12.0 * h)
}

/// Five-point central second derivative.
pub fn second_derivative(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    (-f(x - 2.0 * h) + f(x - h) * 16.0 - f(x) * 30.0 + f(x + h) * 16.0 - f(x + 2.0 * h))
        / (12.0 * h * h)
}

/// Ridders' extrapolation of central differences, returning the estimate
/// and an error indication.
pub fn ridders(f: impl Fn(f64) -> Complex64, x: f64, h0: f64) -> (Complex64, f64) {
    const N: usize = 10;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    let mut a = [[Complex64::new(0.0, 0.0); N]; N];
    let mut h = h0;
    a[0][0] = (f(x + h) - f(x - h)) / (2.0 * h);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..N {
        h /= CON;
        a[0][i] = (f(x + h) - f(x - h)) / (2.0 * h);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (a[j][i] - a[j - 1][i])
                .norm()
                .max((a[j][i] - a[j - 1][i - 1]).norm());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).norm() >= 2.0 * err {
            break;
        }
    }
    (best, err)
}

/// First derivative: the five-point rule with step `h`, replaced by
/// Ridders' extrapolation when the two are inconsistent with the expected
/// rounding noise.
pub fn derivative_checked(f: impl Fn(f64) -> Complex64 + Copy, x: f64, h: f64) -> Complex64 {
    let d = derivative(f, x, h);
    let (r, err) = ridders(f, x, 100.0 * h);
    let noise = 1e-12 * (f(x).norm() / h).max(1.0);
    if (d - r).norm() > noise.max(10.0 * err) {
        r
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_derivatives() {
        let f = |x: f64| Complex64::new(0.3, 1.1) * Complex64::new(x, 0.5).exp();
        let want = f(0.7);
        assert!((derivative(f, 0.7, 1e-3) - want).norm() < 1e-11);
        assert!((second_derivative(f, 0.7, 1e-3) - want).norm() < 1e-8);
        let (r, err) = ridders(f, 0.7, 0.1);
        assert!((r - want).norm() < 1e-12 && err < 1e-10);
        assert!((derivative_checked(f, 0.7, 1e-5) - want).norm() < 1e-10);
    }
}
