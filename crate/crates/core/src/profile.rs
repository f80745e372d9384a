//! Scaling-limit profiles as integrals along the contour `a = (1 -+ i) sqrt(3t)`:
//! the distance density `rho(S)`, its Laplace deformation `rho(S, lambda)`,
//! the first perimeter moment density `mu(S)` and the small-`S` slope `psi`.

use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::scaling::{f_scaling, ScalingPoint};
use crate::special::gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Upper end of the `t` integral.
    pub t_max: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            t_max: 6.5,
            abs_tol: 1e-15,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl QuadratureSpec {
    /// Tolerances must be positive and the Gaussian tail past `t_max` must
    /// sit well below `abs_tol`.
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_intervals > 0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if !((-self.t_max * self.t_max).exp() < self.abs_tol / 100.0) {
            return Err(Error::Domain(format!(
                "t_max = {} leaves a tail above abs_tol/100",
                self.t_max
            )));
        }
        Ok(())
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_intervals: self.max_intervals,
        }
    }

    fn breakpoints(&self, extra: &[f64]) -> Vec<f64> {
        let mut pts: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .chain(extra)
            .copied()
            .filter(|&p| p > 0.0 && p < self.t_max)
            .collect();
        pts.push(0.0);
        pts.push(self.t_max);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// The two conjugate contour points at parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourPoint {
    pub t: f64,
    pub a_minus: Complex64,
    pub a_plus: Complex64,
}

impl ContourPoint {
    pub fn new(t: f64) -> Self {
        let r = (3.0 * t).sqrt();
        let a_minus = Complex64::new(r, -r);
        let a_plus = a_minus.conj();
        // the measure e^{a^4/36} is replaced by e^{-t^2}
        let a4 = a_minus.powu(4);
        assert!(
            (a4 + 36.0 * t * t).norm() <= 1e-12 * (36.0 * t * t).max(f64::MIN_POSITIVE),
            "contour point off the a^4 = -36 t^2 lines"
        );
        ContourPoint { t, a_minus, a_plus }
    }

    pub fn measure(&self) -> f64 {
        (-self.t * self.t).exp()
    }
}

fn finish(r: crate::quad::Integral<f64>) -> Result<f64> {
    if !r.converged {
        return Err(Error::Quadrature {
            value: r.value,
            error: r.error,
        });
    }
    Ok(r.value)
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("S must be positive, got {s}")));
    }
    Ok(())
}

// Kernels of the real-integrand forms, as functions of x = sqrt(3t) S.

/// Odd Taylor coefficients (powers 3, 7, ..., 31) of the density kernel.
const RHO_TAYLOR: [(i32, f64); 8] = [
    (3, 0.08465608465608465),
    (7, -0.012313612313612313),
    (11, 0.001094543316765539),
    (15, -7.836331843292218e-05),
    (19, 4.968807266089524e-06),
    (23, -2.9148386181407113e-07),
    (27, 1.6198686041454098e-08),
    (31, -8.650638768999358e-10),
];

/// Taylor coefficients of the moment kernel from `x^4` to `x^24`.
const MU_TAYLOR: [f64; 21] = [
    33.25,
    -18.126984126984127,
    0.8333333333333334,
    0.0,
    -2.975,
    0.4049222382555716,
    0.6296296296296297,
    0.0,
    0.23103064373897708,
    -0.0015151515151515152,
    -0.0676557239057239,
    0.0,
    -0.019485356978412534,
    1.6979347857248075e-06,
    0.005393108181908887,
    0.0,
    0.0014504168814422082,
    -7.563148559110561e-10,
    -0.00038072450750870887,
    0.0,
    -9.791764786997248e-05,
];

pub const RHO_TAYLOR_BELOW: f64 = 0.7;
pub const MU_TAYLOR_BELOW: f64 = 0.3;
/// Above this `x` the closed-form kernels cancel O(1) terms down to `e^{-2x}`;
/// the equivalent `sigma = e^{-(1-i)x}` forms are used instead.
pub const SIGMA_FORM_ABOVE: f64 = 3.0;

struct Trig {
    ch: f64,
    sh: f64,
    co: f64,
    si: f64,
}

fn trig(x: f64) -> Trig {
    Trig {
        ch: x.cosh(),
        sh: x.sinh(),
        co: x.cos(),
        si: x.sin(),
    }
}

pub fn rho_kernel_closed(x: f64) -> f64 {
    let Trig { ch, sh, co, si } = trig(x);
    let m = co * co + ch * ch - 1.0;
    let num = ch * sh * ((2.0 * co * co - 1.0) * m - 1.0) + co * si * ((2.0 * ch * ch - 1.0) * m - 1.0);
    num / (co * co - ch * ch).powi(3)
}

pub fn rho_kernel_taylor(x: f64) -> f64 {
    RHO_TAYLOR.iter().map(|&(k, c)| c * x.powi(k)).sum()
}

fn contour_sigma(x: f64) -> Complex64 {
    (-Complex64::new(x, -x)).exp()
}

/// `-4 Im[(1 + i) s^2 (1 + s^2) / (1 - s^2)^3]`
pub fn rho_kernel_sigma(x: f64) -> f64 {
    let s = contour_sigma(x);
    let s2 = s * s;
    let h = s2 * (1.0 + s2) / (1.0 - s2).powu(3);
    -4.0 * (Complex64::new(1.0, 1.0) * h).im
}

pub fn rho_kernel(x: f64) -> f64 {
    if x < RHO_TAYLOR_BELOW {
        rho_kernel_taylor(x)
    } else if x < SIGMA_FORM_ABOVE {
        rho_kernel_closed(x)
    } else {
        rho_kernel_sigma(x)
    }
}

pub fn mu_kernel_closed(x: f64) -> f64 {
    let Trig { ch, sh, co, si } = trig(x);
    16.0 * (co - si) * (ch - sh) - 9.0 * (co * co - 2.0 * co * si - si * si) * (ch * ch - 2.0 * ch * sh + sh * sh)
        - 7.0
        - 12.0 * (si - sh) / (co - ch)
        - 40.0 * (si * si - 2.0 * si * sh - sh * sh) / (co + ch).powi(2)
        - 21.0
            * (si.powi(4) - 4.0 * si.powi(3) * sh - 6.0 * si * si * sh * sh + 4.0 * si * sh.powi(3) + sh.powi(4))
            / (co + ch).powi(4)
}

pub fn mu_kernel_taylor(x: f64) -> f64 {
    MU_TAYLOR
        .iter()
        .enumerate()
        .map(|(k, c)| c * x.powi(k as i32 + 4))
        .sum()
}

/// `Im[(1 - i) s^2 (385 - 189 s + 154 s^2 + 54 s^3 - 11 s^4 - 9 s^5) / ((1 - s)(1 + s)^4)]`
pub fn mu_kernel_sigma(x: f64) -> f64 {
    let s = contour_sigma(x);
    let poly = 385.0 - 189.0 * s + 154.0 * s.powu(2) + 54.0 * s.powu(3) - 11.0 * s.powu(4) - 9.0 * s.powu(5);
    let g = s * s * poly / ((1.0 - s) * (1.0 + s).powu(4));
    (Complex64::new(1.0, -1.0) * g).im
}

pub fn mu_kernel(x: f64) -> f64 {
    if x < MU_TAYLOR_BELOW {
        mu_kernel_taylor(x)
    } else if x < SIGMA_FORM_ABOVE {
        mu_kernel_closed(x)
    } else {
        mu_kernel_sigma(x)
    }
}

/// Distance density from the real-integrand form
/// `sqrt(3/pi) int 24 t^{5/2} e^{-t^2} G(sqrt(3t) S) dt`.
pub fn rho(s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    spec.validate()?;
    let r = integrate(rho_integrand(s), &spec.breakpoints(&[]), spec.tolerance())?;
    Ok((3.0 / PI).sqrt() * finish(r)?)
}

fn rho_integrand(s: f64) -> impl Fn(f64) -> f64 {
    move |t| 24.0 * t.powf(2.5) * (-t * t).exp() * rho_kernel((3.0 * t).sqrt() * s)
}

/// First perimeter moment density,
/// `sqrt(3/pi) int (4/35) t^{3/2} e^{-t^2} B(sqrt(3t) S) dt`.
pub fn mu(s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    spec.validate()?;
    let r = integrate(mu_integrand(s), &spec.breakpoints(&[]), spec.tolerance())?;
    Ok((3.0 / PI).sqrt() * finish(r)?)
}

fn mu_integrand(s: f64) -> impl Fn(f64) -> f64 {
    move |t| 4.0 / 35.0 * t.powf(1.5) * (-t * t).exp() * mu_kernel((3.0 * t).sqrt() * s)
}

/// Rounding floor `64 eps int size(t) dt` for an integrand whose pieces
/// have magnitude `size(t)` before they cancel.
fn rounding_floor(size: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    let coarse = Tolerance {
        abs: f64::MIN_POSITIVE,
        rel: 1e-6,
        max_intervals: spec.max_intervals,
    };
    let l1 = integrate(size, &spec.breakpoints(&[]), coarse)?.value;
    Ok(64.0 * f64::EPSILON * l1)
}

/// Integral of an oscillating `f` whose value may be far below its size,
/// taken to the rounding floor instead of `abs_tol`. Returns the value and
/// the floor.
fn integrate_to_floor(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let floor = rounding_floor(|t| f(t).abs(), spec)?;
    let tol = Tolerance {
        abs: floor,
        rel: spec.rel_tol,
        max_intervals: spec.max_intervals,
    };
    Ok((finish(integrate(f, &spec.breakpoints(&[]), tol)?)?, floor))
}

/// `(2 / (i sqrt(pi))) int 2t e^{-t^2} [F(S, a_-, lambda) - F(S, a_+, lambda)] dt`
/// with both contour branches evaluated independently.
pub fn rho_lambda(s: f64, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    rho_lambda_any(s, lambda, spec)
}

/// No sign check on `lambda`; the scaling function is analytic through 0,
/// which central differences in `lambda` rely on.
pub(crate) fn rho_lambda_any(s: f64, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    spec.validate()?;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let branches = |t: f64| {
        let c = ContourPoint::new(t);
        let eval = |a: Complex64| f_scaling(&ScalingPoint::unchecked(s, a, lambda)).unwrap_or(nan);
        (2.0 * t * c.measure(), eval(c.a_minus), eval(c.a_plus))
    };
    // At small S both branches approach the real 1/(2 S^3) and only their
    // small imaginary parts survive the difference.
    let floor = rounding_floor(
        |t| {
            let (w, m, p) = branches(t);
            w * (m.norm() + p.norm())
        },
        spec,
    )?;
    let tol = Tolerance {
        abs: spec.abs_tol.max(floor),
        ..spec.tolerance()
    };
    let f = |t: f64| {
        let (w, m, p) = branches(t);
        w * (m - p)
    };
    let r = integrate(f, &spec.breakpoints(&[]), tol)?;
    if !r.converged {
        return Err(Error::Quadrature {
            value: r.value.norm(),
            error: r.error,
        });
    }
    let v = 2.0 / (Complex64::new(0.0, 1.0) * PI.sqrt()) * r.value;
    if v.im.abs() >= spec.abs_tol {
        return Err(Error::ImaginaryResidue {
            residue: v.im.abs(),
            tol: spec.abs_tol,
        });
    }
    Ok(v.re)
}

/// `-d rho(S, lambda) / d lambda` at `lambda = 0` by a five-point central
/// difference of step `h`, an independent route to `mu(S)`.
pub fn mu_from_lambda_derivative(s: f64, h: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = |l: f64| rho_lambda_any(s, l, spec);
    let d = (f(-2.0 * h)? - 8.0 * f(-h)? + 8.0 * f(h)? - f(2.0 * h)?) / (12.0 * h);
    Ok(-d)
}

/// `rho` must exceed its quadrature rounding floor by this factor to be
/// used as a denominator.
pub const FLOOR_MARGIN: f64 = 100.0;

/// `mu(S) / rho(S)`, the limit of `E[L / N^{1/2}]` at distance `S N^{1/4}`.
/// Both integrals are exponentially small at large `S` while their
/// integrands are not, so they are taken to the rounding floor rather than
/// to `abs_tol`.
pub fn expected_perimeter_ratio(s: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    spec.validate()?;
    let (r, floor) = integrate_to_floor(rho_integrand(s), spec)?;
    if !(r.abs() > FLOOR_MARGIN * floor) {
        return Err(Error::NearZeroDenominator((3.0 / PI).sqrt() * r));
    }
    let (m, _) = integrate_to_floor(mu_integrand(s), spec)?;
    Ok(m / r)
}

/// Small-`S` slope `psi(lambda)` of `E[1 - e^{-lambda L/N^{1/2}}]`. The
/// bracket of the closed-form integrand is rewritten with
/// `sqrt(y - 1) = (2t/lambda) / sqrt(y + 1)`, `y = sqrt(1 + 4t^2/lambda^2)`,
/// which removes the cancellation between its two terms:
/// `lambda^{3/2} {...} = 2 t^3 sqrt(lambda) (15 - 8/(y + 1)) / sqrt(y + 1)`.
pub fn psi(lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("psi needs lambda > 0, got {lambda}")));
    }
    spec.validate()?;
    let f = |t: f64| {
        let u = 2.0 * t / lambda;
        let y = (1.0 + u * u).sqrt();
        let yp = y + 1.0;
        t * (-t * t).exp() * 2.0 * t.powi(3) * lambda.sqrt() * (15.0 - 8.0 / yp) / yp.sqrt()
    };
    let pts = spec.breakpoints(&[lambda / 4.0, lambda, 4.0 * lambda]);
    let r = integrate(f, &pts, spec.tolerance())?;
    Ok(133.0 / 400.0 * (3.0 / (2.0 * PI)).sqrt() * finish(r)?)
}

/// `psi'(0)` from `psi(h)/h` at `h` and `h/2` with one Richardson step
/// (the leading error of `psi(h)/h` is linear in `h`).
pub fn psi_slope_at_zero(spec: &QuadratureSpec) -> Result<f64> {
    let h = 1e-3;
    let coarse = psi(h, spec)? / h;
    let fine = psi(h / 2.0, spec)? / (h / 2.0);
    Ok(2.0 * fine - coarse)
}

// Closed-form asymptotes.

/// `(399/160) sqrt(3/pi) Gamma(9/4)`
pub fn small_s_ratio_slope() -> f64 {
    399.0 / 160.0 * (3.0 / PI).sqrt() * gamma(2.25).expect("Gamma(9/4)")
}

/// `11 / (12 2^{2/3} 3^{1/3})`
pub fn large_s_ratio_coefficient() -> f64 {
    11.0 / (12.0 * 2f64.powf(2.0 / 3.0) * 3f64.cbrt())
}

pub fn rho_small_s(s: f64) -> f64 {
    48.0 / 7.0 * s.powi(3)
}

pub fn mu_small_s(s: f64) -> f64 {
    171.0 / 10.0 * (3.0 / PI).sqrt() * gamma(2.25).expect("Gamma(9/4)") * s.powi(4)
}

pub fn ratio_small_s(s: f64) -> f64 {
    small_s_ratio_slope() * s
}

fn large_s_exponent(s: f64) -> f64 {
    -3.0 * 1.5f64.powf(2.0 / 3.0) * s.powf(4.0 / 3.0)
}

pub fn rho_large_s(s: f64) -> f64 {
    48.0 * 2f64.powf(1.0 / 6.0) * 3f64.powf(5.0 / 6.0) * s.powf(5.0 / 3.0) * large_s_exponent(s).exp()
}

pub fn mu_large_s(s: f64) -> f64 {
    22.0 * 6f64.sqrt() * s * large_s_exponent(s).exp()
}

pub fn ratio_large_s(s: f64) -> f64 {
    large_s_ratio_coefficient() * s.powf(-2.0 / 3.0)
}

/// `12 sqrt(pi) / 35`, the limit of `E[L] / N^{1/2}` over all distances.
pub fn mean_perimeter_constant() -> f64 {
    12.0 * PI.sqrt() / 35.0
}

/// Upper end of the `S` integrals; `rho(12) ~ 1e-48`.
pub const S_CUTOFF: f64 = 12.0;

fn integrate_over_s(f: impl Fn(f64) -> Result<f64>, spec: &QuadratureSpec) -> Result<f64> {
    let err = std::cell::RefCell::new(None);
    let g = |s: f64| match f(s) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let tol = Tolerance {
        abs: 1e-12,
        rel: 1e-10,
        max_intervals: spec.max_intervals,
    };
    let r = integrate(g, &[0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, S_CUTOFF], tol)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    finish(r)
}

/// `int_0^inf rho(S) dS`
pub fn rho_mass(spec: &QuadratureSpec) -> Result<f64> {
    integrate_over_s(|s| rho(s, spec), spec)
}

/// `int_0^inf mu(S) dS`
pub fn mu_mass(spec: &QuadratureSpec) -> Result<f64> {
    integrate_over_s(|s| mu(s, spec), spec)
}
