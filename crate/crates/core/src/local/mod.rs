//! Local limit at fixed distance: the Laplace transform `Phi(omega)` of the
//! rescaled perimeter `l = L / s^2`, from the `S^3` coefficient of
//! `F(S, sqrt6, omega / S^2)`.

pub mod laurent;
pub mod xi;

use crate::error::{Error, Result};
use crate::scaling::{standard, PolynomialFamily};
use crate::series::{Rational, UniSeries};
use crate::special::exp_e1_scaled;
use laurent::Laurent;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;
use twofloat::TwoFloat;

/// `[S^3] F` at `omega = 0` is `16/7`, and `9800 * 16/7 = 22400`.
pub const S3_AT_ZERO: (i64, i64) = (16, 7);
pub const S3_NORMALIZER: i64 = 9800;
pub const PHI_NORMALIZER: i64 = 22400;

/// `omega >= 0` together with `q = sqrt(omega / 3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaPoint {
    pub omega: f64,
    pub q: f64,
}

impl OmegaPoint {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("omega must be >= 0, got {omega}")));
        }
        Ok(OmegaPoint {
            omega,
            q: (omega / 3.0).sqrt(),
        })
    }
}

/// `Lambda(q)/Pi(q) + 6 (6q)^3 Omega(q) e^{6q} E1(6q)` and `Pi(q)`.
fn closed_parts(q: Complex64) -> Result<(Complex64, Complex64)> {
    let t = standard();
    let pi = t.pi.eval(&q);
    let mut num = t.lambda.eval(&q) / pi;
    if q != Complex64::new(0.0, 0.0) {
        let x = 6.0 * q;
        num += 6.0 * x.powu(3) * t.omega.eval(&q) * exp_e1_scaled(x)?;
    }
    Ok((num, pi))
}

fn q_of(omega: Complex64) -> Complex64 {
    (omega / 3.0).sqrt()
}

/// `[S^3] F(S, sqrt6, omega/S^2)` in closed form, principal `sqrt` for
/// complex `omega`.
pub fn s3_closed_complex(omega: Complex64) -> Result<Complex64> {
    let (num, pi) = closed_parts(q_of(omega))?;
    Ok(num / (S3_NORMALIZER as f64 * pi.powu(3)))
}

pub fn s3_closed(omega: f64) -> Result<f64> {
    let p = OmegaPoint::new(omega)?;
    Ok(s3_closed_complex(Complex64::new(p.omega, 0.0))?.re)
}

/// Above this `|q|` the closed form is replaced by its expansion in `1/q`.
/// The two terms of the closed form are of size `q^10` while `Phi` is of
/// size `q^-3`, so direct evaluation loses about `4 log10 |q|` digits.
pub const LARGE_Q: f64 = 10.0;
/// Terms kept in the `1/q` expansion; the first omitted one is below
/// `1e-22` relative at `|q| = 10`.
pub const LARGE_Q_TERMS: usize = 40;

fn reversed(coeffs: &[i64], order: usize) -> UniSeries {
    let c = coeffs.iter().rev().map(|&v| Rational::from_integer(v.into())).collect();
    UniSeries::new(c, order)
}

/// Exact coefficients `d_k` of `Phi = sum_k d_k q^-k`, `k = 0 .. 3 + LARGE_Q_TERMS`,
/// from `e^x E1(x) ~ sum_j (-1)^j j! / x^{j+1}`. With `u = 1/q` and hats for
/// the reversed polynomials, `Phi = (L^/P^ + 1296 O^ E(u)) / (22400 u P^^3)`.
pub fn large_q_coefficients() -> &'static [Rational] {
    static COEFFS: OnceLock<Vec<Rational>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let t = standard();
        let order = LARGE_Q_TERMS + 5;
        let pi = reversed(t.pi.coeffs(), order);
        let mut e = Vec::with_capacity(order + 1);
        let mut fact = Rational::from_integer(1.into());
        let mut six = Rational::from_integer(6.into());
        for j in 0..=order {
            if j > 0 {
                fact *= Rational::from_integer(j.into());
                six *= Rational::from_integer(6.into());
            }
            let v = &fact / &six;
            e.push(if j % 2 == 0 { v } else { -v });
        }
        let e = UniSeries::new(e, order);
        let rational = reversed(t.lambda.coeffs(), order).div(&pi).expect("Pi(0) != 0");
        let pole = (&reversed(t.omega.coeffs(), order) * &e).scale(&Rational::from_integer(1296.into()));
        let bracket = &rational + &pole;
        // Phi = O(q^-3): the bracket starts at u^4
        for k in 0..4 {
            assert!(bracket.coeff(k).is_zero(), "u^{k} survives in the large-q bracket");
        }
        let den = pi.pow(3).scale(&Rational::from_integer(PHI_NORMALIZER.into()));
        let quotient = bracket.div(&den).expect("Pi(0) != 0");
        // divide by u
        (1..=order).map(|k| quotient.coeff(k).clone()).take(LARGE_Q_TERMS + 4).collect()
    })
}

fn phi_large_q(q: Complex64) -> Complex64 {
    static FLOATS: OnceLock<Vec<f64>> = OnceLock::new();
    let c = FLOATS.get_or_init(|| large_q_coefficients().iter().map(|v| v.to_f64().unwrap()).collect());
    let u = q.inv();
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &v| acc * u + v)
}

/// `Phi(omega) = E[e^{-omega l}]`, normalized by its value at zero so that
/// `Phi(0) = 1` exactly.
pub fn phi_complex(omega: Complex64) -> Result<Complex64> {
    if !(omega.re.is_finite() && omega.im.is_finite()) {
        return Err(Error::NonFinite(format!("omega = {omega}")));
    }
    let q = q_of(omega);
    if q.norm() >= LARGE_Q {
        return Ok(phi_large_q(q));
    }
    phi_closed_complex(omega)
}

/// The closed form without the large-`q` switch.
pub fn phi_closed_complex(omega: Complex64) -> Result<Complex64> {
    let (num, pi) = closed_parts(q_of(omega))?;
    Ok(num / (PHI_NORMALIZER as f64 * pi.powu(3)))
}

pub fn phi(omega: f64) -> Result<f64> {
    let p = OmegaPoint::new(omega)?;
    Ok(phi_complex(Complex64::new(p.omega, 0.0))?.re)
}

/// `(sqrt3/4) w^{-3/2} - (15 sqrt3/16) w^{-5/2} + (39/16) w^{-3}`
pub fn phi_large_omega(omega: f64) -> f64 {
    let r3 = 3f64.sqrt();
    r3 / 4.0 * omega.powf(-1.5) - 15.0 * r3 / 16.0 * omega.powf(-2.5) + 39.0 / 16.0 * omega.powi(-3)
}

/// `1 - (4389 sqrt3/3200) sqrt(w) + (1713/560) w`
pub fn phi_small_omega(omega: f64) -> f64 {
    1.0 - 4389.0 * 3f64.sqrt() / 3200.0 * omega.sqrt() + 1713.0 / 560.0 * omega
}

/// Coefficients of `S^-3 ... S^3` in the small-`S` expansion of
/// `F(S, sqrt6, omega/S^2)` at fixed `omega`.
#[derive(Clone, Debug, PartialEq)]
pub struct SExpansion {
    pub omega: f64,
    coeffs: [f64; 7],
}

/// Tolerance, relative to the largest coefficient, for the powers that
/// must vanish.
pub const PARITY_TOL: f64 = 1e-9;

impl SExpansion {
    pub const LOWEST: i32 = -3;
    pub const HIGHEST: i32 = 3;

    pub fn coefficient(&self, power: i32) -> f64 {
        if (Self::LOWEST..=Self::HIGHEST).contains(&power) {
            self.coeffs[(power - Self::LOWEST) as usize]
        } else {
            0.0
        }
    }

    /// Fails on the first even power or `S^-1` term above `tol`.
    pub fn check_parity(&self, tol: f64) -> Result<()> {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for p in [-2, -1, 0, 2] {
            let v = self.coefficient(p);
            if v.abs() > tol * scale {
                return Err(Error::SpuriousTerm { power: p, value: v });
            }
        }
        Ok(())
    }
}

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

/// Expands every factor of `H~(sigma, A)` in `S` with `sigma = e^{-sqrt6 S}`,
/// `A = sqrt(1 + omega/(2 S^2))`, and the resummed `Xi` in place of the
/// hypergeometric function, then reads off `F = 2 sqrt6 H~`.
pub fn s_expansion(omega: f64) -> Result<SExpansion> {
    s_expansion_with(standard(), omega)
}

pub fn s_expansion_with(tables: &PolynomialFamily, omega: f64) -> Result<SExpansion> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("omega must be > 0, got {omega}")));
    }
    let n = laurent::CAPACITY;
    let sq6 = dd(6.0).sqrt();

    // sigma and 1 - sigma
    let mut sig = Vec::with_capacity(n + 1);
    let mut t = dd(1.0);
    for k in 0..=n {
        if k > 0 {
            t = -t * sq6 / k as f64;
        }
        sig.push(t);
    }
    let sigma = Laurent::new(0, &sig[..n]);
    let neg: Vec<TwoFloat> = sig[1..].iter().map(|x| -*x).collect();
    let one_minus = Laurent::new(1, &neg);

    // A = sqrt(c^2 + S^2)/S with c^2 = omega/2
    let c2 = dd(omega) / 2.0;
    let c = c2.sqrt();
    let mut a = vec![dd(0.0); n];
    let mut binom = dd(1.0);
    let mut cpow = c;
    for j in 0..n.div_ceil(2) {
        a[2 * j] = binom * cpow;
        binom = binom * (0.5 - j as f64) / (j + 1) as f64;
        cpow = crate::dd::div(cpow, c2);
    }
    let big_a = Laurent::new(-1, &a);

    // Xi = sum xi_i(r) (S/sqrt6)^i
    let r = dd(12.0 * omega).sqrt();
    let mut xs = Vec::new();
    let mut scale = sq6;
    for i in xi::FIRST..=xi::LAST {
        xs.push(xi::xi_dd(i, r)? * scale);
        scale = crate::dd::div(scale, sq6);
    }
    let big_xi = Laurent::new(-1, &xs);

    let w = tables.w.eval(&sigma, &big_a);
    let q = tables.q.eval(&sigma, &big_a);
    let k = k_prefactor_series(big_a);
    let rational = q.div(&(one_minus.powu(3) * w.powu(3)))?;
    let hyp = k * one_minus.powu(6) * w.powu(2).inverse()? * big_xi;
    let h = (sigma * sigma * (rational - hyp)).scale(crate::dd::div(dd(12.0), dd(35.0)));
    let f = h.scale(sq6 * 2.0);

    let mut coeffs = [0.0; 7];
    for (i, p) in (SExpansion::LOWEST..=SExpansion::HIGHEST).enumerate() {
        coeffs[i] = f
            .coeff(p)
            .ok_or_else(|| Error::Domain(format!("S^{p} is past the truncation order")))?
            .hi();
    }
    Ok(SExpansion { omega, coeffs })
}

/// `A (A - 1) (A^2 - 1) (4A^2 - 1) (4A^2 - 9)`
fn k_prefactor_series(a: Laurent) -> Laurent {
    let one = Laurent::constant(dd(1.0));
    let a2 = a * a;
    let four_a2 = a2.scale(dd(4.0));
    a * (a - one) * (a2 - one) * (four_a2 - one) * (four_a2 - Laurent::constant(dd(9.0)))
}

/// `[S^3] F` through the series route. The vanishing of the even and `S^-1`
/// coefficients is checked, not assumed.
pub fn s3_series(omega: f64) -> Result<f64> {
    let e = s_expansion(omega)?;
    e.check_parity(PARITY_TOL)?;
    Ok(e.coefficient(3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn large_q_expansion() {
        let c = large_q_coefficients();
        // (sqrt3/4) w^{-3/2} - (15 sqrt3/16) w^{-5/2} + (39/16) w^{-3} in q = sqrt(w/3)
        assert!(c[0].is_zero() && c[1].is_zero() && c[2].is_zero() && c[4].is_zero());
        assert_eq!(c[3], rat(1, 12));
        assert_eq!(c[5], rat(-5, 48));
        assert_eq!(c[6], rat(13, 144));
        // the switch is seamless in every direction of the right half q-plane
        for k in 0..=8 {
            let arg = -1.5 + 3.0 * k as f64 / 8.0;
            for r in [10.0, 14.0] {
                let q = Complex64::from_polar(r, arg);
                let omega = 3.0 * q * q;
                let a = phi_closed_complex(omega).unwrap();
                let b = phi_large_q(q);
                assert!((a - b).norm() < 1e-11 * b.norm(), "q = {q}: {:e}", ((a - b) / b).norm());
            }
        }
    }

    #[test]
    fn normalizers_are_consistent() {
        assert_eq!(S3_NORMALIZER * S3_AT_ZERO.0, PHI_NORMALIZER * S3_AT_ZERO.1);
        let t = standard();
        let pi0 = t.pi.coeffs()[0];
        assert_eq!(t.lambda.coeffs()[0], PHI_NORMALIZER * pi0.pow(4));
    }

    #[test]
    fn phi_at_zero_is_exactly_one() {
        assert_eq!(phi(0.0).unwrap(), 1.0);
        let s3 = s3_closed(0.0).unwrap();
        assert!((s3 - 16.0 / 7.0).abs() < 1e-15);
        assert!((s3_closed(1e-14).unwrap() - 16.0 / 7.0).abs() < 1e-5);
    }

    #[test]
    fn omega_point() {
        for w in [0.0, 1e-9, 0.3, 3.0, 1e5] {
            let p = OmegaPoint::new(w).unwrap();
            assert!((p.q * p.q - w / 3.0).abs() <= 2.0 * f64::EPSILON * w / 3.0);
        }
        assert_eq!(OmegaPoint::new(3.0).unwrap().q, 1.0);
        assert!(OmegaPoint::new(-1.0).is_err());
        assert!(phi(f64::NAN).is_err());
    }

    // (omega, [S^-3], [S^1], [S^3]) from a 50-digit run of the same expansion
    const REFERENCE: [(f64, f64, f64, f64); 6] = [
        (0.01, 0.49660642308581127, -1.1610404841263715, 1.807364882422885),
        (0.1, 0.4687329286028294, -0.9476103557757204, 1.1128707389814978),
        (1.0, 0.31038326625146667, -0.3778842827318093, 0.3030287143602542),
        (3.0, 0.18021459194134634, -0.1528660321054859, 0.10520676410684669),
        (10.0, 0.06929371153008662, -0.04044729500815615, 0.024579181058031224),
        (100.0, 0.004826598805345734, -0.0018224196419124744, 0.0009582248221466054),
    ];

    #[test]
    fn series_route_against_reference() {
        for (w, m3, p1, p3) in REFERENCE {
            let e = s_expansion(w).unwrap();
            e.check_parity(PARITY_TOL).unwrap();
            for (p, want) in [(-3, m3), (1, p1), (3, p3)] {
                let got = e.coefficient(p);
                assert!((got - want).abs() < 1e-10 * want.abs(), "omega = {w}, S^{p}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn closed_route_against_reference() {
        for (w, _, _, p3) in REFERENCE {
            let got = s3_closed(w).unwrap();
            assert!((got - p3).abs() < 1e-13 * p3, "omega = {w}");
        }
    }

    #[test]
    fn parity_violations_are_reported() {
        let mut e = s_expansion(3.0).unwrap();
        e.coeffs[(-1 - SExpansion::LOWEST) as usize] = 1e-3;
        assert_eq!(
            e.check_parity(PARITY_TOL),
            Err(Error::SpuriousTerm { power: -1, value: 1e-3 })
        );
    }

    #[test]
    fn expansions_in_omega() {
        let w = 100.0;
        let gap = (phi(w).unwrap() - phi_large_omega(w)).abs() * w.powf(3.5);
        assert!(gap < 100.0, "{gap}");
        let w = 1e-4;
        assert!((phi(w).unwrap() - phi_small_omega(w)).abs() < 1e-5);
    }

    #[test]
    fn decreasing_with_a_square_root_kink() {
        let mut prev = 1.0;
        for k in 1..=60 {
            let w = 10f64.powf(-8.0 + k as f64 * 0.2);
            let v = phi(w).unwrap();
            assert!(v > 0.0 && v < prev, "omega = {w}");
            prev = v;
        }
        let slope = |w: f64| (phi(w).unwrap() - phi(1.01 * w).unwrap()) / (0.01 * w);
        let (s6, s8) = (slope(1e-6), slope(1e-8));
        // -Phi' ~ w^{-1/2}: a hundredfold smaller omega gives a tenfold slope
        assert!((s8 / s6 / 10.0 - 1.0).abs() < 0.05, "{}", s8 / s6);
    }

    #[test]
    fn complex_continuation() {
        let w = Complex64::new(2.0, 1.5);
        let v = phi_complex(w).unwrap();
        assert!((phi_complex(w.conj()).unwrap() - v.conj()).norm() < 1e-15);
        let real = phi_complex(Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(real.im, 0.0);
        assert_eq!(real.re, phi(2.0).unwrap());
        // values on the negative axis are finite (q is imaginary there)
        assert!(phi_complex(Complex64::new(-4.0, 0.0)).unwrap().norm().is_finite());
    }
}
