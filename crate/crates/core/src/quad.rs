//! Globally adaptive Gauss-Kronrod (7/15) integration for real and complex
//! integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-15,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Integral<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

fn kronrod<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> Result<Segment<V>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let sum = f(c - dx) + f(c + dx);
        k = k + sum * WGK[j];
        if j % 2 == 1 {
            g = g + sum * WG[j / 2];
        }
    }
    if !k.finite() {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    Ok(Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).magnitude(),
    })
}

/// Integrate `f` over `[points[0], points[last]]`, starting from the
/// subdivision given by `points`. Summation runs over segments sorted by
/// position, so the result does not depend on the refinement history.
pub fn integrate<V: QuadValue>(
    f: impl Fn(f64) -> V,
    points: &[f64],
    tol: Tolerance,
) -> Result<Integral<V>> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut segs = points
        .windows(2)
        .map(|w| kronrod(&f, w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    let mut evaluations = 15 * segs.len();
    let total = |segs: &[Segment<V>]| {
        let mut sorted: Vec<&Segment<V>> = segs.iter().collect();
        sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value = sorted.iter().fold(V::zero(), |acc, s| acc + s.value);
        let error: f64 = sorted.iter().map(|s| s.error).sum();
        (value, error)
    };
    loop {
        let (value, error) = total(&segs);
        let target = tol.abs.max(tol.rel * value.magnitude());
        if error <= target || segs.len() >= tol.max_intervals {
            return Ok(Integral {
                value,
                error,
                evaluations,
                converged: error <= target,
            });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval exhausted at double resolution
            let (value, error) = total(&segs);
            let (value, error) = (value + s.value, error + s.error);
            return Ok(Integral {
                value,
                error,
                evaluations,
                converged: false,
            });
        }
        segs.push(kronrod(&f, s.a, mid)?);
        segs.push(kronrod(&f, mid, s.b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(13), &[0.0, 1.0], Tolerance::default()).unwrap();
        assert!((r.value - 1.0 / 14.0).abs() < 1e-15);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate(|t: f64| (-t * t).exp(), &[0.0, 6.5], Tolerance::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let tol = Tolerance {
            abs: 1e-13,
            rel: 1e-13,
            ..Tolerance::default()
        };
        let r = integrate(|t: f64| t.sqrt(), &[0.0, 1.0], tol).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(
            |t: f64| Complex64::new(0.0, t).exp(),
            &[0.0, std::f64::consts::PI],
            Tolerance::default(),
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn nan_is_reported() {
        assert!(integrate(|t: f64| (t - 0.5).ln(), &[0.0, 1.0], Tolerance::default()).is_err());
    }
}
