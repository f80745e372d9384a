//! Exponential integral, the hypergeometric function 2F1(1, b; b + 1; sigma)
//! and the gamma function.

use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};
use num_complex::Complex64;
use crate::dd;
use twofloat::TwoFloat;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EULER_GAMMA_LO: f64 = -4.942_915_152_430_645e-18;

/// Radius below which `e^w E1(w)` is summed as a power series.
pub const E1_CROSSOVER: f64 = 2.0;

fn check_e1_argument(w: Complex64) -> Result<()> {
    if w.re == 0.0 && w.im == 0.0 {
        return Err(Error::Domain("E1 diverges at 0".into()));
    }
    if w.im == 0.0 && w.re < 0.0 {
        return Err(Error::Domain(format!("E1 branch cut at w = {}", w.re)));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::NonFinite(format!("E1 argument {w}")));
    }
    Ok(())
}

/// `e^w E1(w)`, the primitive form: finite where `E1` alone under- or
/// overflows.
pub fn exp_e1_scaled(w: Complex64) -> Result<Complex64> {
    check_e1_argument(w)?;
    if w.norm() < E1_CROSSOVER {
        Ok(e1_series(w) * w.exp())
    } else {
        exp_e1_continued_fraction(w)
    }
}

pub fn e1(w: Complex64) -> Result<Complex64> {
    check_e1_argument(w)?;
    if w.norm() < E1_CROSSOVER {
        Ok(e1_series(w))
    } else {
        Ok(exp_e1_continued_fraction(w)? * (-w).exp())
    }
}

/// `E1(w) = -gamma - log w - sum_{k>=1} (-w)^k / (k k!)`
pub fn e1_series(w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        term = -term * w / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

/// `e^w E1(w) = 1/(w + 1 - 1/(w + 3 - 4/(w + 5 - ...)))`, evaluated by the
/// modified Lentz algorithm.
pub fn exp_e1_continued_fraction(w: Complex64) -> Result<Complex64> {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = w + 1.0;
    if f.norm() == 0.0 {
        f = tiny;
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for i in 1..100_000 {
        let a = -((i * i) as f64);
        let b = w + (2 * i + 1) as f64;
        d = b + d * a;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok(f.inv());
        }
    }
    Err(Error::Domain(format!("E1 continued fraction stalls at w = {w}")))
}

/// `e^r E1(r)` for real `r > 0` in double-double arithmetic. Used where
/// closed forms built on it cancel many digits, as in the `xi_i` at large `r`.
pub fn exp_e1_scaled_dd(r: TwoFloat) -> Result<TwoFloat> {
    if !(r.hi() > 0.0 && r.hi().is_finite()) {
        return Err(Error::Domain(format!("need r > 0, got {}", r.hi())));
    }
    if r.hi() < E1_CROSSOVER {
        let mut term = TwoFloat::from(1.0);
        let mut sum = TwoFloat::from(0.0);
        for k in 1..400 {
            term = -term * r / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs().hi() <= 1e-34 * sum.abs().hi() {
                break;
            }
        }
        let gamma = TwoFloat::new_add(EULER_GAMMA, EULER_GAMMA_LO);
        Ok((-gamma - dd::ln(r) - sum) * dd::exp(r))
    } else {
        // backward recurrence; truncation error ~ exp(-4 sqrt(n r))
        let n = (400.0 / r.hi()).ceil() as usize + 20;
        let mut t = TwoFloat::from(0.0);
        for k in (1..=n).rev() {
            let k = k as f64;
            t = dd::div(TwoFloat::from(k * k), r + (2.0 * k + 1.0) - t);
        }
        Ok(dd::recip(r + 1.0 - t))
    }
}

/// `2F1(1, b; b + 1; sigma) = b sum_n sigma^n / (n + b)`, summed directly.
pub fn hyp2f1_unit(b: Complex64, sigma: Complex64) -> Result<Complex64> {
    let r = sigma.norm();
    if r >= 1.0 {
        return Err(Error::Divergent(r));
    }
    if b.im == 0.0 && b.re <= 0.0 && b.re.fract() == 0.0 {
        return Err(Error::Pole((-b.re) as usize));
    }
    let bn = b.norm();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let max_terms = 50_000_000usize;
    for n in 0..max_terms {
        sum += pow / (b + n as f64);
        pow *= sigma;
        let m = (n + 1) as f64;
        // |x + b| grows with x once x + Re b >= 0, bounding every later term
        if m + b.re >= 0.0 {
            let tail = r.powf(m) / (1.0 - r) * bn / (b + m).norm();
            if tail <= 1e-17 * (sum * b).norm() {
                return Ok(sum * b);
            }
        }
    }
    Err(Error::Divergent(r))
}

/// `w / (1 - e^{-w}) - 1`, divided by `w`: the regular part of
/// `1/(1 - e^{-w})`.
fn regular_part(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        let w2 = w * w;
        0.5 + w * (1.0 / 12.0 + w2 * (-1.0 / 720.0 + w2 * (1.0 / 30240.0 - w2 / 1_209_600.0)))
    } else {
        (1.0 - (-w).exp()).inv() - w.inv()
    }
}

/// `2F1(1, b; b + 1; e^{-kappa})` from the Laplace representation
/// `b int_0^inf e^{-bv} / (1 - e^{-(v + kappa)}) dv`, with the pole part
/// done in closed form. Needs `Re b > 0` and `Re kappa > 0`; stays accurate
/// as `sigma` approaches one.
pub fn hyp2f1_unit_laplace(b: Complex64, kappa: Complex64) -> Result<Complex64> {
    if b.re <= 0.0 || kappa.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Laplace form needs Re b > 0 and Re kappa > 0 (b = {b}, kappa = {kappa})"
        )));
    }
    let pole = exp_e1_scaled(b * kappa)?;
    let v_max = 42.0 / b.re;
    let tol = Tolerance {
        abs: 1e-17,
        rel: 1e-14,
        max_intervals: 500,
    };
    let rest = integrate(
        |v: f64| (-b * v).exp() * regular_part(kappa + v),
        &[0.0, 0.25 * v_max, v_max],
        tol,
    )?;
    Ok(b * (pole + rest.value))
}

/// Above this `|sigma|` the Laplace form replaces the direct sum.
pub const HYP2F1_SWITCH: f64 = 0.9;

pub fn hyp2f1_unit_auto(b: Complex64, sigma: Complex64) -> Result<Complex64> {
    if sigma.norm() <= HYP2F1_SWITCH || b.re <= 0.0 {
        hyp2f1_unit(b, sigma)
    } else {
        hyp2f1_unit_laplace(b, -sigma.ln())
    }
}

pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma needs x > 0, got {x}")));
    }
    Ok(libm::tgamma(x))
}
