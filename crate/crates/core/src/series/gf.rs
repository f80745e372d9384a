//! Generating functions of labelled trees and of the two-point maps built
//! from them, expanded in `g` with exact coefficients.

use super::{rat, BivariateSeries, Coefficient, Rational, Series, UniSeries, ZPolynomial};
use crate::error::{Error, Result};
use num_traits::One;

/// `g(x) = x (1 + x + x^2) / (1 + 4x + x^2)^2`
pub fn g_of_x(order: usize) -> UniSeries {
    let num = Series::new(vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1)], order);
    let den = Series::new(vec![rat(1, 1), rat(4, 1), rat(1, 1)], order);
    let den = &den * &den;
    num.div(&den).expect("constant term is 1")
}

/// The parameter `x` as a series in `g`: `g + 7 g^2 + 59 g^3 + ...`
pub fn x_of_g(order: usize) -> UniSeries {
    g_of_x(order.max(1)).revert().expect("g(x) = x + O(x^2)").truncate(order)
}

/// Shared data for expansions at a fixed order: `x(g)` and its powers.
#[derive(Clone, Debug)]
pub struct XstTable {
    order: usize,
    powers: Vec<UniSeries>,
    r_inf: UniSeries,
}

impl XstTable {
    pub fn new(order: usize) -> Self {
        let x = x_of_g(order);
        let mut powers = vec![Series::one(order)];
        for k in 1..=order.max(2) {
            let next = &powers[k - 1] * &x;
            powers.push(next);
        }
        let p = |c: &[i64]| {
            c.iter()
                .enumerate()
                .map(|(k, &v)| powers[k].scale(&rat(v, 1)))
                .reduce(|a, b| &a + &b)
                .unwrap()
        };
        let r_inf = p(&[1, 4, 1]).div(&p(&[1, 1, 1])).expect("unit constant term");
        XstTable {
            order,
            powers,
            r_inf,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn x(&self) -> &UniSeries {
        &self.powers[1.min(self.order)]
    }

    /// `x^k`, which vanishes identically past the order.
    fn x_pow(&self, k: usize) -> UniSeries {
        if k <= self.order {
            self.powers[k].clone()
        } else {
            Series::zero(self.order)
        }
    }

    fn one_minus_x_pow(&self, k: usize) -> UniSeries {
        &Series::one(self.order) - &self.x_pow(k)
    }

    /// Limit of `R_s` for large `s`.
    pub fn r_infinity(&self) -> &UniSeries {
        &self.r_inf
    }

    /// Trees with labels at least `1 - s`.
    pub fn r(&self, s: usize) -> Result<UniSeries> {
        if s == 0 {
            return Err(Error::Domain("R_s needs s >= 1".into()));
        }
        let num = &self.one_minus_x_pow(s) * &self.one_minus_x_pow(s + 3);
        let den = &self.one_minus_x_pow(s + 1) * &self.one_minus_x_pow(s + 2);
        Ok(&self.r_inf * &num.div(&den)?)
    }

    /// Bivariate `X_{s,t}(g, z)`; equal to one when either index is zero.
    pub fn x_st(&self, s: usize, t: usize) -> Result<BivariateSeries> {
        let n = self.order;
        if s == 0 || t == 0 {
            return Ok(Series::one(n));
        }
        // c_k = g z R_{s+k} R_{t+k}, and X_k = 1 / (1 - c_k (1 + c_{k+1} X_{k+1}))
        // where X_k stands for X_{s+k,t+k}; level k only matters to order n - k.
        let c = |k: usize, order: usize| -> Result<BivariateSeries> {
            let rr = &self.r(s + k)?.truncate(order) * &self.r(t + k)?.truncate(order);
            Ok(rr
                .map(|v| ZPolynomial::monomial(1, v.clone()))
                .shift_up(1))
        };
        let mut x_next: BivariateSeries = Series::one(0);
        let mut c_next: BivariateSeries = Series::zero(0);
        for k in (0..=n).rev() {
            let order = n - k;
            let ck = c(k, order)?;
            let inner = &Series::one(order) + &(&extend(&c_next, order) * &extend(&x_next, order));
            let d = &ck * &inner;
            x_next = (&Series::one(order) - &d).inverse()?;
            c_next = ck;
        }
        Ok(x_next)
    }

    /// Two-point function at distance `s`:
    /// `log(X_{s,s} X_{s-1,s-1} / (X_{s-1,s} X_{s,s-1}))`.
    pub fn f(&self, s: usize) -> Result<BivariateSeries> {
        if s == 0 {
            return Err(Error::Domain("F_s needs s >= 1".into()));
        }
        let a = self.x_st(s, s)?.log()?;
        let b = self.x_st(s - 1, s - 1)?.log()?;
        let c = self.x_st(s - 1, s)?.log()?;
        let d = self.x_st(s, s - 1)?.log()?;
        Ok(&(&a + &b) - &(&c + &d))
    }

    pub fn x_st_closed_z1(&self, s: usize, t: usize) -> Result<UniSeries> {
        let m = |k: usize| self.one_minus_x_pow(k);
        let num = &(&m(3) * &m(s + 1)) * &(&m(t + 1) * &m(s + t + 3));
        let den = &(&m(1) * &m(s + 3)) * &(&m(t + 3) * &m(s + t + 1));
        num.div(&den)
    }

    pub fn f_closed_z1(&self, s: usize) -> Result<UniSeries> {
        if s == 0 {
            return Err(Error::Domain("F_s needs s >= 1".into()));
        }
        let m = |k: usize| self.one_minus_x_pow(k);
        let num = &m(2 * s + 3) * &(&m(2 * s) * &m(2 * s));
        let den = &m(2 * s - 1) * &(&m(2 * s + 2) * &m(2 * s + 2));
        num.div(&den)?.log()
    }
}

/// Pad a series with unknown (zero) coefficients up to `order`. Only used
/// where the padded terms are multiplied by something of high enough
/// valuation to be irrelevant.
fn extend<C: Coefficient>(s: &Series<C>, order: usize) -> Series<C> {
    if s.order() >= order {
        s.truncate(order)
    } else {
        Series::new(s.coeffs().to_vec(), order)
    }
}

pub fn r_series(s: usize, order: usize) -> Result<UniSeries> {
    XstTable::new(order).r(s)
}

pub fn x_st_series(s: usize, t: usize, order: usize) -> Result<BivariateSeries> {
    XstTable::new(order).x_st(s, t)
}

pub fn f_series(s: usize, order: usize) -> Result<BivariateSeries> {
    XstTable::new(order).f(s)
}

pub fn x_st_closed_z1(s: usize, t: usize, order: usize) -> Result<UniSeries> {
    XstTable::new(order).x_st_closed_z1(s, t)
}

pub fn f_closed_z1(s: usize, order: usize) -> Result<UniSeries> {
    XstTable::new(order).f_closed_z1(s)
}

/// Distribution of the number of faces at distance `s` among maps with
/// `n` faces, as a polynomial in `z` whose value at `z = 1` is one.
pub fn expected_zl(n: usize, s: usize) -> Result<ZPolynomial> {
    if n == 0 || s == 0 {
        return Err(Error::Domain("need n >= 1 and s >= 1".into()));
    }
    let p = f_series(s, n)?.coeff(n).clone();
    let total = p.eval(&Rational::one());
    if total.is_zero_value() {
        return Err(Error::EmptyEnsemble { n, s });
    }
    Ok(p.scale(&total.recip()))
}

/// `s, t -> infinity` limit of `X_{s,t}`, a Motzkin series in
/// `u = z x / (1 + x + x^2)`.
pub fn x_infinity_series(order: usize) -> Result<BivariateSeries> {
    let table = XstTable::new(order);
    // M(u) = (1 - u - sqrt(1 - 2u - 3u^2)) / (2u^2)
    let disc = Series::new(vec![rat(1, 1), rat(-2, 1), rat(-3, 1)], order + 2).sqrt()?;
    let motzkin: UniSeries = Series::new(
        (0..=order).map(|k| -disc.coeff(k + 2) / rat(2, 1)).collect(),
        order,
    );
    let x = table.x();
    let q = Series::new(vec![rat(1, 1), rat(1, 1), rat(1, 1)], order);
    let u = x.div(&q.compose(x)?)?;
    let u = u.map(|v| ZPolynomial::monomial(1, v.clone()));
    motzkin.compose(&u)
}
