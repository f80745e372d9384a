//! Continuum limits of the generating functions: `r`, `x`, `V`, `Y`, the
//! primitive `C`, `H` and the scaling function `F(S, a, lambda)`.

pub mod residual;
pub mod tables;

pub use tables::{standard, IntPolynomial, PolynomialFamily, SigmaAPolynomial, LAMBDA_CHECKSUM, OMEGA_CHECKSUM, Q_CHECKSUMS};

use crate::error::{Error, Result};
use crate::special::hyp2f1_unit_auto;
use num_complex::Complex64;

/// Below this modulus `W(sigma, A)` is treated as a zero.
pub const W_FLOOR: f64 = 1e-12;

/// A point `(S, a, lambda)` with the derived `sigma = e^{-aS}` and
/// `A = sqrt(1 + 3 lambda / a^2)` (principal branch).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingPoint {
    pub s: f64,
    pub a: Complex64,
    pub lambda: f64,
    pub sigma: Complex64,
    pub big_a: Complex64,
}

impl ScalingPoint {
    pub fn new(s: f64, a: Complex64, lambda: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("S must be positive, got {s}")));
        }
        if !(a.re > 0.0 && a.im.is_finite() && a.re.is_finite()) {
            return Err(Error::Domain(format!("Re a must be positive, got {a}")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self::unchecked(s, a, lambda))
    }

    /// No domain checks; used for one-sided-free differences in `lambda`.
    pub(crate) fn unchecked(s: f64, a: Complex64, lambda: f64) -> Self {
        let big_a = (1.0 + 3.0 * lambda / (a * a)).sqrt();
        ScalingPoint {
            s,
            a,
            lambda,
            sigma: (-a * s).exp(),
            big_a,
        }
    }

    pub fn conj(&self) -> Self {
        Self::unchecked(self.s, self.a.conj(), self.lambda)
    }

    /// `a S`, the logarithm of `1/sigma` continued along the path from
    /// `S = 0`; it fixes the branch of `sigma^A`.
    pub fn kappa(&self) -> Complex64 {
        self.a * self.s
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub fn r_scal(s: f64, a: Complex64) -> Result<Complex64> {
    let sigma = (-a * s).exp();
    if sigma == one() {
        return Err(Error::Domain("r(S, a) is singular at sigma = 1".into()));
    }
    let om = 1.0 - sigma;
    Ok(-a * a * (1.0 + 10.0 * sigma + sigma * sigma) / (3.0 * om * om))
}

/// `x(S, T, a, 0)` in closed form.
pub fn x_lambda0(s: f64, t: f64, a: Complex64) -> Result<Complex64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::Domain("x(S, T, a, 0) needs S, T > 0".into()));
    }
    let ss = (-a * s).exp();
    let st = (-a * t).exp();
    let num = ss + st - 3.0 * ss * st + ss * ss * st * st;
    let den = (1.0 - ss) * (1.0 - st) * (1.0 - ss * st);
    Ok(-3.0 * a - 6.0 * a * num / den)
}

pub fn w_value(sigma: Complex64, big_a: Complex64) -> Complex64 {
    standard().w.eval(&sigma, &big_a)
}

pub fn u_value(sigma: Complex64, big_a: Complex64) -> Complex64 {
    standard().u.eval(&sigma, &big_a)
}

pub fn p_value(sigma: Complex64, big_a: Complex64) -> Complex64 {
    standard().p.eval(&sigma, &big_a)
}

pub fn q_value(sigma: Complex64, big_a: Complex64) -> Complex64 {
    standard().q.eval(&sigma, &big_a)
}

/// `A (A - 1) (A^2 - 1) (4A^2 - 1) (4A^2 - 9)`, vanishing at `A = 1`.
pub fn k_prefactor(big_a: Complex64) -> Complex64 {
    let a2 = big_a * big_a;
    big_a * (big_a - 1.0) * (a2 - 1.0) * (4.0 * a2 - 1.0) * (4.0 * a2 - 9.0)
}

fn checked_w(tables: &PolynomialFamily, sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    let w = tables.w.eval(&sigma, &big_a);
    if w.norm() < W_FLOOR {
        return Err(Error::DegenerateW(w.norm()));
    }
    Ok(w)
}

fn check_sigma(sigma: Complex64) -> Result<()> {
    if sigma.norm() >= 1.0 {
        return Err(Error::Domain(format!("need |sigma| < 1, got {}", sigma.norm())));
    }
    Ok(())
}

/// `sigma^A W / (1 - sigma)^3` with `sigma^A = e^{-A a S}`.
pub fn v_tilde(p: &ScalingPoint) -> Result<Complex64> {
    let w = checked_w(standard(), p.sigma, p.big_a)?;
    Ok((-p.big_a * p.kappa()).exp() * w / (1.0 - p.sigma).powu(3))
}

/// `V~` as a function of `sigma` alone, principal `sigma^A`.
pub fn v_tilde_sigma(sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    check_sigma(sigma)?;
    let w = checked_w(standard(), sigma, big_a)?;
    Ok((big_a * sigma.ln()).exp() * w / (1.0 - sigma).powu(3))
}

/// `Y~ = -3A - 36 sigma U / ((1 - sigma) W)`
pub fn y_tilde(sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    let w = checked_w(standard(), sigma, big_a)?;
    Ok(-3.0 * big_a - 36.0 * sigma * u_value(sigma, big_a) / ((1.0 - sigma) * w))
}

/// `Y(S, a, lambda) = a Y~`
pub fn y_scal(p: &ScalingPoint) -> Result<Complex64> {
    Ok(p.a * y_tilde(p.sigma, p.big_a)?)
}

/// Integrand whose primitive in `sigma` is `C`; `sigma^(2A+1)` taken from
/// `e^{-(2A+1) kappa}`.
pub fn m_integrand_at(
    tables: &PolynomialFamily,
    sigma: Complex64,
    big_a: Complex64,
    kappa: Complex64,
) -> Result<Complex64> {
    let w = checked_w(tables, sigma, big_a)?;
    let p = tables.p.eval(&sigma, &big_a);
    let pow = (-(2.0 * big_a + 1.0) * kappa).exp();
    Ok(216.0 * pow * p * p / ((1.0 - sigma).powu(10) * w * w))
}

pub fn m_integrand(sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    check_sigma(sigma)?;
    m_integrand_at(standard(), sigma, big_a, -sigma.ln())
}

pub fn c_primitive_at(
    tables: &PolynomialFamily,
    sigma: Complex64,
    big_a: Complex64,
    kappa: Complex64,
) -> Result<Complex64> {
    check_sigma(sigma)?;
    let w = checked_w(tables, sigma, big_a)?;
    let q = tables.q.eval(&sigma, &big_a);
    let k = k_prefactor(big_a);
    let hyp = if k == Complex64::new(0.0, 0.0) {
        k
    } else {
        k * hyp2f1_unit_auto(2.0 * big_a + 2.0, sigma)?
    };
    let pow = (-(2.0 * big_a + 2.0) * kappa).exp();
    Ok(12.0 / 35.0 * pow * (q / ((1.0 - sigma).powu(9) * w) - hyp))
}

/// The primitive `C(sigma, A)` with principal `sigma^(2A+2)`.
pub fn c_primitive(sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    check_sigma(sigma)?;
    if sigma == Complex64::new(0.0, 0.0) {
        return Ok(sigma);
    }
    c_primitive_at(standard(), sigma, big_a, -sigma.ln())
}

pub fn h_tilde_with(tables: &PolynomialFamily, sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    check_sigma(sigma)?;
    let w = checked_w(tables, sigma, big_a)?;
    let q = tables.q.eval(&sigma, &big_a);
    let om = 1.0 - sigma;
    let rational = q / (om.powu(3) * w * w * w);
    let k = k_prefactor(big_a);
    let hyp = if k == Complex64::new(0.0, 0.0) {
        k
    } else {
        k * om.powu(6) / (w * w) * hyp2f1_unit_auto(2.0 * big_a + 2.0, sigma)?
    };
    Ok(12.0 / 35.0 * sigma * sigma * (rational - hyp))
}

/// `H~(sigma, A)`; only integer powers of `sigma` occur, so no branch
/// choice is involved.
pub fn h_tilde(sigma: Complex64, big_a: Complex64) -> Result<Complex64> {
    h_tilde_with(standard(), sigma, big_a)
}

/// `H(S, a, lambda) = a^3 H~`
pub fn h_scal(p: &ScalingPoint) -> Result<Complex64> {
    Ok(p.a.powu(3) * h_tilde(p.sigma, p.big_a)?)
}

/// The scaling function `F(S, a, lambda) = a^3 H~ / 3`.
pub fn f_scaling(p: &ScalingPoint) -> Result<Complex64> {
    Ok(h_scal(p)? / 3.0)
}

/// `F(S, a, 0) = 2 a^3 sigma^2 (1 + sigma^2) / (1 - sigma^2)^3`
pub fn f_lambda0_closed(s: f64, a: Complex64) -> Complex64 {
    let sigma = (-a * s).exp();
    let s2 = sigma * sigma;
    2.0 * a.powu(3) * s2 * (1.0 + s2) / (1.0 - s2).powu(3)
}

/// First-order coefficient in `lambda` of `F(S, a, lambda)`.
pub fn df_dlambda_closed(s: f64, a: Complex64) -> Complex64 {
    let x = (-a * s).exp();
    let poly = 385.0 - 189.0 * x + 154.0 * x.powu(2) + 54.0 * x.powu(3)
        - 11.0 * x.powu(4)
        - 9.0 * x.powu(5);
    -(a * x * x * poly) / (70.0 * (1.0 - x) * (1.0 + x).powu(4))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn r_limits() {
        let a = c(1.3, 0.4);
        assert!((r_scal(40.0, a).unwrap() + a * a / 3.0).norm() < 1e-14);
        let s = 1e-4;
        let r = r_scal(s, c(1.0, 0.0)).unwrap();
        // -4/S^2 + O(1)
        assert!((r.re * s * s + 4.0).abs() < 1e-7);
        assert_eq!(r_scal(0.7, c(2.0, 0.0)).unwrap().im, 0.0);
        assert!(r_scal(0.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn x_lambda0_symmetry_and_limit() {
        let a = c(0.9, -0.3);
        let u = x_lambda0(0.4, 1.1, a).unwrap();
        assert!((u - x_lambda0(1.1, 0.4, a).unwrap()).norm() < 1e-14 * u.norm());
        let far = x_lambda0(0.4, 60.0, a).unwrap();
        let sigma = (-a * 0.4).exp();
        assert!((far - (-3.0 * a - 6.0 * a * sigma / (1.0 - sigma))).norm() < 1e-12);
    }

    #[test]
    fn y_matches_x_on_the_diagonal_at_zero_lambda() {
        for a in [c(0.7, 0.0), c(3f64.sqrt(), -3f64.sqrt()), c(1.3, 0.2)] {
            for s in [0.3, 1.0, 2.5] {
                let p = ScalingPoint::new(s, a, 0.0).unwrap();
                let y = y_scal(&p).unwrap();
                let x = x_lambda0(s, s, a).unwrap();
                assert!((y - x).norm() < 1e-12 * x.norm(), "a = {a}, S = {s}");
            }
        }
    }

    #[test]
    fn y_tends_to_minus_three_a_big_a() {
        let p = ScalingPoint::new(30.0, c(1.2, 0.0), 2.0).unwrap();
        let want = -3.0 * (p.a * p.a + 6.0).sqrt();
        assert!((y_scal(&p).unwrap() - want).norm() < 1e-12);
    }

    #[test]
    fn small_sigma_laws() {
        let sigma = c(1e-6, 0.0);
        for big_a in [c(1.7, 0.0), c(1.3, 0.5)] {
            let h = h_tilde(sigma, big_a).unwrap() / (sigma * sigma);
            let want = 108.0 / ((big_a + 1.0) * (2.0 * big_a + 1.0).powu(2));
            assert!((h - want).norm() < 1e-4 * want.norm());
            let cc = c_primitive(sigma, big_a).unwrap() / (sigma.ln() * (2.0 * big_a + 2.0)).exp();
            let want = 108.0 * (big_a + 1.0) * (2.0 * big_a + 3.0).powu(2);
            assert!((cc - want).norm() < 1e-4 * want.norm());
            let v = v_tilde_sigma(sigma, big_a).unwrap() / (big_a * sigma.ln()).exp();
            let w0 = 4.0 * big_a.powu(3) + 12.0 * big_a * big_a + 11.0 * big_a + 3.0;
            assert!((v - w0).norm() < 1e-4 * w0.norm());
        }
        assert_eq!(c_primitive(c(0.0, 0.0), c(1.5, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn lambda_zero_closed_form() {
        for a in [c(1.0, 0.0), c(0.7, 0.4), c(3f64.sqrt(), -3f64.sqrt())] {
            for s in [0.2, 0.5, 1.3, 2.0] {
                let p = ScalingPoint::new(s, a, 0.0).unwrap();
                let f = f_scaling(&p).unwrap();
                let want = f_lambda0_closed(s, a);
                assert!((f - want).norm() < 1e-10 * want.norm(), "a = {a}, S = {s}");
            }
        }
    }

    #[test]
    fn vanishes_at_large_distance() {
        let p = ScalingPoint::new(40.0, c(1.0, 0.5), 1.0).unwrap();
        assert!(f_scaling(&p).unwrap().norm() < 1e-30);
    }

    #[test]
    fn conjugation() {
        let p = ScalingPoint::new(0.8, c(1.1, 0.9), 0.7).unwrap();
        let q = p.conj();
        for (x, y) in [
            (f_scaling(&p).unwrap(), f_scaling(&q).unwrap()),
            (y_scal(&p).unwrap(), y_scal(&q).unwrap()),
            (v_tilde(&p).unwrap(), v_tilde(&q).unwrap()),
        ] {
            assert!((x.conj() - y).norm() <= 1e-14 * x.norm());
        }
        let r = r_scal(0.8, c(1.1, 0.9)).unwrap();
        assert!((r.conj() - r_scal(0.8, c(1.1, -0.9)).unwrap()).norm() <= 1e-14 * r.norm());
    }

    #[test]
    fn contour_keeps_re_big_a_positive() {
        for t in [1e-6f64, 0.01, 0.5, 3.0, 6.5] {
            for sign in [-1.0, 1.0] {
                let a = c(1.0, sign) * (3.0 * t).sqrt();
                for lambda in [0.0, 0.5, 2.0, 50.0] {
                    let p = ScalingPoint::new(1.0, a, lambda).unwrap();
                    assert!(p.big_a.re > 0.0);
                }
            }
        }
    }

    #[test]
    fn point_validation() {
        assert!(ScalingPoint::new(0.0, c(1.0, 0.0), 0.0).is_err());
        assert!(ScalingPoint::new(1.0, c(-1.0, 0.0), 0.0).is_err());
        assert!(ScalingPoint::new(1.0, c(1.0, 0.0), -0.1).is_err());
    }
}
