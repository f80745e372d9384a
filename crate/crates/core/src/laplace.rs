//! Numerical inversion of `Phi(omega) = int_0^inf P(l) e^{-omega l} dl`.
//! A fixed Talbot contour is the primary rule; the Gaver-Stehfest
//! functional, which needs only real `omega`, serves as an independent
//! cross-check.

use crate::error::{Error, Result};
use crate::local::phi_complex;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Talbot,
    Gaver,
}

impl Method {
    pub fn other(self) -> Self {
        match self {
            Method::Talbot => Method::Gaver,
            Method::Gaver => Method::Talbot,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Talbot => "talbot",
            Method::Gaver => "gaver",
        }
    }

    /// Node count used when the method serves as the cross-check.
    pub fn default_nodes(self) -> usize {
        match self {
            Method::Talbot => 32,
            Method::Gaver => 16,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "talbot" => Ok(Method::Talbot),
            "gaver" => Ok(Method::Gaver),
            other => Err(Error::Domain(format!("unknown inversion method '{other}'"))),
        }
    }
}

/// All arithmetic is double precision; Stehfest weights are formed exactly
/// and rounded once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InversionSpec {
    pub method: Method,
    pub nodes: usize,
}

impl Default for InversionSpec {
    fn default() -> Self {
        InversionSpec {
            method: Method::Talbot,
            nodes: Method::Talbot.default_nodes(),
        }
    }
}

impl InversionSpec {
    pub fn new(method: Method, nodes: usize) -> Result<Self> {
        let spec = InversionSpec { method, nodes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.method {
            Method::Talbot => (16..=32).contains(&self.nodes),
            // with more nodes the weights amplify rounding in Phi past 1e-4
            Method::Gaver => self.nodes == 16,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "{} nodes not allowed for {} inversion",
                self.nodes,
                self.method.name()
            )));
        }
        Ok(())
    }

    fn cross(&self) -> InversionSpec {
        let method = self.method.other();
        InversionSpec {
            method,
            nodes: method.default_nodes(),
        }
    }
}

/// Fixed Talbot rule on `s(theta) = r theta (cot theta + i)`, `r = 2M/(5l)`.
pub fn talbot(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized),
    ell: f64,
    nodes: usize,
) -> Result<f64> {
    let m = nodes as f64;
    let r = 2.0 * m / (5.0 * ell);
    let mut sum = 0.5 * (r * ell).exp() * transform(Complex64::new(r, 0.0))?.re;
    for k in 1..nodes {
        let theta = k as f64 * PI / m;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let slope = Complex64::new(1.0, theta + (theta * cot - 1.0) * cot);
        sum += ((s * ell).exp() * transform(s)? * slope).re;
    }
    let v = r / m * sum;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("talbot sum at l = {ell}")));
    }
    Ok(v)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Stehfest weights `V_1..V_N`.
pub fn stehfest_weights(nodes: usize) -> Vec<f64> {
    assert!(nodes.is_multiple_of(2), "Stehfest needs an even node count");
    let half = nodes / 2;
    (1..=nodes)
        .map(|k| {
            let mut v = BigRational::zero();
            for j in k.div_ceil(2)..=k.min(half) {
                let num = BigInt::from(j).pow(half as u32) * factorial(2 * j);
                let den = factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k);
                v += BigRational::new(num, den);
            }
            if (k + half) % 2 == 1 {
                v = -v;
            }
            v.to_f64().expect("finite weight")
        })
        .collect()
}

/// Gaver-Stehfest functional `(ln 2 / l) sum_k V_k Phi(k ln 2 / l)`.
pub fn gaver(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized),
    ell: f64,
    nodes: usize,
) -> Result<f64> {
    let a = LN_2 / ell;
    let mut sum = 0.0;
    for (k, w) in stehfest_weights(nodes).iter().enumerate() {
        sum += w * transform(Complex64::new(a * (k + 1) as f64, 0.0))?.re;
    }
    let v = a * sum;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("gaver sum at l = {ell}")));
    }
    Ok(v)
}

pub fn invert_with(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized),
    ell: f64,
    spec: &InversionSpec,
) -> Result<f64> {
    match spec.method {
        Method::Talbot => talbot(transform, ell, spec.nodes),
        Method::Gaver => gaver(transform, ell, spec.nodes),
    }
}

/// Probe point for the power-law decay required of the transform.
pub const DECAY_PROBE: f64 = 1e3;
/// Smallest accepted `Phi(2w)/Phi(w)` at the probe, i.e. decay no faster
/// than `omega^{-8}`.
pub const DECAY_FLOOR: f64 = 1.0 / 256.0;

/// The rules assume `Phi` falls off like a power of `omega`; an
/// exponentially decaying transform (a shifted or point mass) is rejected.
pub fn check_power_decay(transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized)) -> Result<()> {
    let at = |w: f64| transform(Complex64::new(w, 0.0)).map(|v| v.re);
    let (a, b) = (at(DECAY_PROBE)?, at(2.0 * DECAY_PROBE)?);
    let ratio = b / a;
    if !(a > 0.0 && ratio >= DECAY_FLOOR) {
        return Err(Error::TransformDecay {
            omega: DECAY_PROBE,
            ratio,
        });
    }
    Ok(())
}

/// Agreement demanded between the two rules.
pub fn cross_tolerance(p: f64) -> f64 {
    1e-4f64.max(1e-3 * p.abs())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inversion {
    pub value: f64,
    pub cross: f64,
}

impl Inversion {
    pub fn residual(&self) -> f64 {
        (self.value - self.cross).abs()
    }
}

fn invert_checked(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized),
    ell: f64,
    spec: &InversionSpec,
) -> Result<Inversion> {
    let value = invert_with(transform, ell, spec)?;
    let cross = invert_with(transform, ell, &spec.cross())?;
    if (value - cross).abs() > cross_tolerance(value) {
        let (talbot, gaver) = match spec.method {
            Method::Talbot => (value, cross),
            Method::Gaver => (cross, value),
        };
        return Err(Error::InversionMismatch { ell, talbot, gaver });
    }
    Ok(Inversion { value, cross })
}

/// `P(l)` by the chosen rule, confirmed by the other one.
pub fn invert_at(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + ?Sized),
    ell: f64,
    spec: &InversionSpec,
) -> Result<f64> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::Domain(format!("l must be positive, got {ell}")));
    }
    spec.validate()?;
    check_power_decay(transform)?;
    Ok(invert_checked(transform, ell, spec)?.value)
}

/// `P(l) / sqrt(l) -> (1/2) sqrt(3/pi)` as `l -> 0`.
pub fn small_ell_coefficient() -> f64 {
    0.5 * (3.0 / PI).sqrt()
}

/// `P(l) l^{3/2} -> (4389/6400) sqrt(3/pi)` as `l -> inf`.
pub fn large_ell_coefficient() -> f64 {
    4389.0 / 6400.0 * (3.0 / PI).sqrt()
}

/// Rows below `-NEGATIVE_NOISE` are errors; rows between it and 0 are clipped.
pub const NEGATIVE_NOISE: f64 = 1e-8;
pub const ELL_RANGE: (f64, f64) = (1e-3, 200.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityRow {
    pub ell: f64,
    pub p: f64,
    /// The same point from the other rule.
    pub cross: f64,
    /// `P / ((1/2) sqrt(3/pi) sqrt(l))`
    pub small_tail_ratio: f64,
    /// `P l^{3/2} / ((4389/6400) sqrt(3/pi))`
    pub large_tail_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable {
    pub rows: Vec<DensityRow>,
    pub spec: InversionSpec,
    /// Largest `|P - P_cross|` over the table.
    pub cross_residual: f64,
    /// Rows whose tiny negative value was set to zero.
    pub clipped: usize,
}

impl DensityTable {
    /// `int_0^L P dl`: log-trapezoid over the rows up to `L`, with the
    /// `sqrt(l)` law below the first row and the `l^{-3/2}` law above `L`.
    pub fn mass_accounting(&self, upto: f64) -> f64 {
        let rows: Vec<&DensityRow> = self.rows.iter().filter(|r| r.ell <= upto).collect();
        let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
            return f64::NAN;
        };
        let head = 2.0 / 3.0 * small_ell_coefficient() * first.ell.powf(1.5);
        let tail = 2.0 * large_ell_coefficient() / last.ell.sqrt();
        head + log_trapezoid(&rows, |r| r.ell * r.p) + tail
    }

    /// `int_0^L l P dl` over the rows up to `L`, without tail correction.
    pub fn first_moment(&self, upto: f64) -> f64 {
        let rows: Vec<&DensityRow> = self.rows.iter().filter(|r| r.ell <= upto).collect();
        let Some(first) = rows.first() else {
            return f64::NAN;
        };
        let head = 2.0 / 5.0 * small_ell_coefficient() * first.ell.powf(2.5);
        head + log_trapezoid(&rows, |r| r.ell * r.ell * r.p)
    }
}

/// Trapezoid rule in `ln l` for an integrand already multiplied by `l`.
fn log_trapezoid(rows: &[&DensityRow], f: impl Fn(&DensityRow) -> f64) -> f64 {
    rows.windows(2)
        .map(|w| 0.5 * (f(w[0]) + f(w[1])) * (w[1].ell / w[0].ell).ln())
        .sum()
}

/// Density of `l` for a general transform over an increasing grid.
pub fn density_table_for(
    transform: &(impl Fn(Complex64) -> Result<Complex64> + Sync + ?Sized),
    grid: &[f64],
    spec: &InversionSpec,
) -> Result<DensityTable> {
    spec.validate()?;
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Grid("l grid must be non-empty and strictly increasing".into()));
    }
    if grid[0] < ELL_RANGE.0 || grid[grid.len() - 1] > ELL_RANGE.1 {
        return Err(Error::Grid(format!(
            "l grid must lie within [{}, {}]",
            ELL_RANGE.0, ELL_RANGE.1
        )));
    }
    check_power_decay(transform)?;
    let results: Vec<Inversion> = grid
        .par_iter()
        .map(|&ell| invert_checked(transform, ell, spec))
        .collect::<Result<_>>()?;
    let mut clipped = 0;
    let mut cross_residual: f64 = 0.0;
    let mut rows = Vec::with_capacity(grid.len());
    for (&ell, inv) in grid.iter().zip(&results) {
        cross_residual = cross_residual.max(inv.residual());
        let mut p = inv.value;
        if p < 0.0 {
            if p < -NEGATIVE_NOISE {
                return Err(Error::NegativeDensity { ell, value: p });
            }
            p = 0.0;
            clipped += 1;
        }
        rows.push(DensityRow {
            ell,
            p,
            cross: inv.cross,
            small_tail_ratio: p / (small_ell_coefficient() * ell.sqrt()),
            large_tail_ratio: p * ell.powf(1.5) / large_ell_coefficient(),
        });
    }
    Ok(DensityTable {
        rows,
        spec: *spec,
        cross_residual,
        clipped,
    })
}

/// `P(l)` of the local law, from `Phi` continued to complex `omega`.
pub fn density_table(grid: &[f64], spec: &InversionSpec) -> Result<DensityTable> {
    density_table_for(&phi_complex, grid, spec)
}
