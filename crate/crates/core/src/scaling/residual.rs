//! Residuals of the differential equations and identities that the closed
//! forms are supposed to satisfy. Each check reports the absolute residual
//! together with the size of the largest term entering it.

use super::{
    c_primitive_at, df_dlambda_closed, f_scaling, h_scal, m_integrand_at, r_scal, v_tilde,
    x_lambda0, y_scal, PolynomialFamily, ScalingPoint,
};
use crate::diff::{derivative_checked, second_derivative};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Rational;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub(crate) fn new(res: Complex64, terms: &[Complex64]) -> Result<Self> {
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if !(res.norm().is_finite() && scale.is_finite()) {
            return Err(Error::NonFinite("residual".into()));
        }
        Ok(Residual {
            value: res.norm(),
            scale,
        })
    }

    /// Residual measured against the largest term.
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value
        } else {
            self.value / self.scale
        }
    }
}

/// Step for first derivatives in `S`.
pub fn first_step(s: f64) -> f64 {
    1e-5 * s.max(1.0)
}

/// Second differences need a wider step to stay clear of rounding noise.
pub fn second_step(s: f64) -> f64 {
    1e-3 * s.max(1.0)
}

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

fn along_s(
    p: &ScalingPoint,
    f: impl Fn(&ScalingPoint) -> Result<Complex64> + Copy,
) -> impl Fn(f64) -> Complex64 + Copy {
    let (a, lambda) = (p.a, p.lambda);
    move |s| f(&ScalingPoint::unchecked(s, a, lambda)).unwrap_or_else(|_| nan())
}

/// `2 x^2 + 6 (d_S x + d_T x) + 27 (r(S) + r(T))` at `lambda = 0`.
pub fn pde_lambda0(s: f64, t: f64, a: Complex64) -> Result<Residual> {
    let x = x_lambda0(s, t, a)?;
    let dxs = derivative_checked(|u| x_lambda0(u, t, a).unwrap_or_else(|_| nan()), s, first_step(s));
    let dxt = derivative_checked(|u| x_lambda0(s, u, a).unwrap_or_else(|_| nan()), t, first_step(t));
    let rr = r_scal(s, a)? + r_scal(t, a)?;
    let terms = [2.0 * x * x, 6.0 * dxs, 6.0 * dxt, 27.0 * rr];
    Residual::new(terms.iter().sum(), &terms)
}

/// `2 Y^2 + 6 Y' + 54 r - 54 lambda`
pub fn riccati(p: &ScalingPoint) -> Result<Residual> {
    let y = y_scal(p)?;
    let dy = derivative_checked(along_s(p, y_scal), p.s, first_step(p.s));
    let terms = [
        2.0 * y * y,
        6.0 * dy,
        54.0 * r_scal(p.s, p.a)?,
        Complex64::new(-54.0 * p.lambda, 0.0),
    ];
    Residual::new(terms.iter().sum(), &terms)
}

/// `sigma V~' + sigma^2 V~'' - (A^2 + 12 sigma/(1 - sigma)^2) V~`, using
/// `sigma d/dsigma = -(1/a) d/dS` so that the branch of `sigma^A` follows `S`.
pub fn linear_ode(p: &ScalingPoint) -> Result<Residual> {
    let v = v_tilde(p)?;
    let d2 = second_derivative(along_s(p, v_tilde), p.s, second_step(p.s)) / (p.a * p.a);
    let pot = p.big_a * p.big_a + 12.0 * p.sigma / (1.0 - p.sigma).powu(2);
    let terms = [d2, -pot * v];
    Residual::new(terms.iter().sum(), &terms)
}

/// `4 Y H + (Y')^2 + 6 H'`
pub fn h_ode(p: &ScalingPoint) -> Result<Residual> {
    let y = y_scal(p)?;
    let h = h_scal(p)?;
    let dy = derivative_checked(along_s(p, y_scal), p.s, first_step(p.s));
    let dh = derivative_checked(along_s(p, h_scal), p.s, first_step(p.s));
    let terms = [4.0 * y * h, dy * dy, 6.0 * dh];
    Residual::new(terms.iter().sum(), &terms)
}

/// `dC/dsigma - M`, differentiating along `S`.
pub fn primitive_derivative(tables: &PolynomialFamily, p: &ScalingPoint) -> Result<Residual> {
    let c_of = move |q: &ScalingPoint| c_primitive_at(tables, q.sigma, q.big_a, q.kappa());
    let (a, lambda) = (p.a, p.lambda);
    let f = move |s: f64| c_of(&ScalingPoint::unchecked(s, a, lambda)).unwrap_or_else(|_| nan());
    let dc_ds = derivative_checked(f, p.s, first_step(p.s));
    let dc = -dc_ds / (p.a * p.sigma);
    let m = m_integrand_at(tables, p.sigma, p.big_a, p.kappa())?;
    Residual::new(dc - m, &[dc, m])
}

/// Central difference of `F` in `lambda` at zero against the closed
/// first-order coefficient.
pub fn lambda_derivative(s: f64, a: Complex64) -> Result<Residual> {
    let h = 1e-4;
    let f = |l: f64| f_scaling(&ScalingPoint::unchecked(s, a, l)).unwrap_or_else(|_| nan());
    let d = (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
    let want = df_dlambda_closed(s, a);
    Residual::new(d - want, &[want])
}

/// Exact check of `P = (W (1 - sigma))^2 d/dsigma (sigma U / ((1 - sigma) W))`,
/// i.e. `P = N' D - N D'` with `N = sigma U` and `D = (1 - sigma) W`, at
/// the given rational points `(sigma, A)`.
pub fn p_identity(tables: &PolynomialFamily, points: &[(Rational, Rational)]) -> bool {
    use super::tables::poly_mul;
    let r = |v: i64| Rational::from_i64(v);
    let eval = |c: &[Rational], x: &Rational| c.iter().rev().fold(r(0), |acc, v| acc * x + v);
    let deriv = |c: &[Rational]| -> Vec<Rational> {
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| v * r(k as i64))
            .collect()
    };
    points.iter().all(|(sigma, big_a)| {
        let n = poly_mul(&tables.u.sigma_coefficients(big_a), &[r(0), r(1)]);
        let d = poly_mul(&tables.w.sigma_coefficients(big_a), &[r(1), r(-1)]);
        let lhs = tables.p.eval(sigma, big_a);
        let rhs = eval(&deriv(&n), sigma) * eval(&d, sigma) - eval(&n, sigma) * eval(&deriv(&d), sigma);
        lhs == rhs
    })
}

/// 36 distinct rational points, more than the total degree of the identity.
pub fn identity_points() -> Vec<(Rational, Rational)> {
    let mut pts = Vec::new();
    for i in 0..6i64 {
        for j in 0..6i64 {
            pts.push((
                Rational::new((2 * i - 5).into(), 7.into()),
                Rational::new((3 * j + 1).into(), 4.into()),
            ));
        }
    }
    pts
}
