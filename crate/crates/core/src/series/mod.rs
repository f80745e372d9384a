//! Exact truncated power series in `g`, with coefficients that are either
//! rationals or polynomials in `z`.

mod gf;
mod poly;

pub use gf::{
    expected_zl, f_closed_z1, f_series, g_of_x, r_series, x_infinity_series, x_of_g,
    x_st_closed_z1, x_st_series, XstTable,
};
pub use poly::ZPolynomial;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;
pub type UniSeries = Series<Rational>;
pub type BivariateSeries = Series<ZPolynomial>;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Coefficient ring of a [`Series`]. Only the operations needed by the
/// kernel are required.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero_value() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn is_zero_value(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Multiplicative inverse when the element is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    fn one_value() -> Self {
        Self::from_rational(Rational::one())
    }
}

impl Coefficient for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn unit_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Power series truncated at `order`: coefficients of `g^0 ..= g^order` are
/// exact, everything above is unknown.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Series<C> {
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero_value());
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Series::constant(C::one_value(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        Series::new(vec![c], order)
    }

    /// `c g^k`, which is the zero series when `k > order`.
    pub fn monomial(k: usize, c: C, order: usize) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the truncation order");
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero_value())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    /// Multiply by `g^k`, keeping the truncation order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![C::zero_value(); n + 1];
        if k <= n {
            coeffs[k..=n].clone_from_slice(&self.coeffs[..=n - k]);
        }
        Series { coeffs }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0]
            .unit_inverse()
            .ok_or(Error::NotInvertible("constant term is not a unit"))?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = C::zero_value();
            for j in 1..=k {
                if !self.coeffs[j].is_zero_value() {
                    acc = acc.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
                }
            }
            out.push(C::zero_value().sub_ref(&acc.mul_ref(&inv0)));
        }
        Ok(Series { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// `g^k` for a series without constant term is zero past the order, so
    /// powers are cheap for the substitutions used here.
    pub fn pow(&self, mut e: usize) -> Self {
        let n = self.order();
        if let Some(v) = self.valuation() {
            if v > 0 && v.saturating_mul(e) > n {
                return Series::zero(n);
            }
        }
        let mut base = self.clone();
        let mut acc = Series::one(n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal derivative; the result is exact to `order - 1`.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Series::zero(0);
        }
        let coeffs = (1..=n)
            .map(|k| self.coeffs[k].scale(&Rational::from_integer(BigInt::from(k))))
            .collect();
        Series { coeffs }
    }

    /// Antiderivative with zero constant term; exact to `order + 1`.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero_value());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&rat(1, k as i64 + 1)));
        }
        Series { coeffs }
    }

    /// Logarithm of a series with constant term one, as the integral of
    /// `f'/f`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != C::one_value() {
            return Err(Error::NotInvertible("log needs constant term 1"));
        }
        let n = self.order();
        if n == 0 {
            return Ok(Series::zero(0));
        }
        let inv = self.truncate(n - 1).inverse()?;
        Ok((&self.derivative() * &inv).integral())
    }

    /// Square root of a series with constant term one, by Newton iteration.
    pub fn sqrt(&self) -> Result<Self> {
        if self.coeffs[0] != C::one_value() {
            return Err(Error::NotInvertible("sqrt needs constant term 1"));
        }
        let n = self.order();
        let half = rat(1, 2);
        let mut y = Series::one(0);
        let mut prec = 0;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let y_ext = Series::new(y.coeffs.clone(), prec);
            let f = self.truncate(prec);
            y = (&y_ext + &(&f * &y_ext.inverse()?)).scale(&half);
        }
        Ok(y)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl UniSeries {
    /// `g`, the variable itself.
    pub fn variable(order: usize) -> Self {
        Series::monomial(1, Rational::one(), order)
    }

    /// Substitute `inner` (no constant term) for the variable.
    pub fn compose<D: Coefficient>(&self, inner: &Series<D>) -> Result<Series<D>> {
        if !inner.coeffs[0].is_zero_value() {
            return Err(Error::Domain(
                "inner series of a composition must vanish at 0".into(),
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::constant(D::from_rational(self.coeffs[n].clone()), n);
        for k in (0..n).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].add_ref(&D::from_rational(self.coeffs[k].clone()));
        }
        Ok(acc)
    }

    /// Compositional inverse `h` with `self(h(y)) = y`.
    pub fn revert(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 || !self.coeffs[0].is_zero_value() {
            return Err(Error::NotInvertible("reversion needs f(0) = 0"));
        }
        let f1 = self.coeffs[1]
            .unit_inverse()
            .ok_or(Error::NotInvertible("reversion needs f'(0) != 0"))?;
        // h = y / f1 - (f(h) - f1 h) / f1, solved one order at a time
        let mut h = Series::monomial(1, f1.clone(), n);
        for k in 2..=n {
            let fh = self.compose(&h)?;
            let defect = fh.coeffs[k].clone();
            h.coeffs[k] = &h.coeffs[k] - &(defect * &f1);
        }
        Ok(h)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl BivariateSeries {
    pub fn lift(s: &UniSeries) -> Self {
        s.map(|c| ZPolynomial::constant(c.clone()))
    }

    pub fn at_z(&self, z: &Rational) -> UniSeries {
        self.map(|p| p.eval(z))
    }
}

impl<C: Coefficient> Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: Self) -> Series<C> {
        let n = self.order().min(rhs.order());
        Series {
            coeffs: (0..=n).map(|k| self.coeffs[k].add_ref(&rhs.coeffs[k])).collect(),
        }
    }
}

impl<C: Coefficient> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: Self) -> Series<C> {
        let n = self.order().min(rhs.order());
        Series {
            coeffs: (0..=n).map(|k| self.coeffs[k].sub_ref(&rhs.coeffs[k])).collect(),
        }
    }
}

impl<C: Coefficient> Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: Self) -> Series<C> {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero_value(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero_value() {
                    coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Series { coeffs }
    }
}

impl<C: Coefficient> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(|c| C::zero_value().sub_ref(c)).collect(),
        }
    }
}

/// Exact rationals are written as `"p/q"` strings so that no precision is
/// lost in JSON.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("not a rational: '{s}'"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

struct RationalRepr<'a>(&'a Rational);

impl Serialize for RationalRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(self.0))
    }
}

impl Serialize for UniSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&RationalRepr(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for UniSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        if raw.is_empty() {
            return Err(de::Error::custom("empty series"));
        }
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let order = coeffs.len() - 1;
        Ok(Series::new(coeffs, order))
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BivariateSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs: Vec<ZPolynomial> = Vec::deserialize(d)?;
        if coeffs.is_empty() {
            return Err(de::Error::custom("empty series"));
        }
        let order = coeffs.len() - 1;
        Ok(Series::new(coeffs, order))
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_value() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*g")?,
                _ => write!(f, "({c})*g^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(g^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uni(v: &[i64], order: usize) -> UniSeries {
        Series::new(v.iter().map(|&c| rat(c, 1)).collect(), order)
    }

    #[test]
    fn inverse_of_one_minus_g_is_geometric() {
        let s = uni(&[1, -1], 6).inverse().unwrap();
        assert_eq!(s, uni(&[1, 1, 1, 1, 1, 1, 1], 6));
    }

    #[test]
    fn log_of_exp_like_series() {
        // log(1/(1-g)) = sum g^k / k
        let s = uni(&[1, -1], 5).inverse().unwrap().log().unwrap();
        let want = Series::new(
            vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 5)],
            5,
        );
        assert_eq!(s, want);
    }

    #[test]
    fn sqrt_squares_back() {
        let f = uni(&[1, -2, -3], 12);
        let r = f.sqrt().unwrap();
        assert_eq!(&r * &r, f);
    }

    #[test]
    fn reversion_of_g_over_one_minus_g() {
        // g/(1-g) reverts to y/(1+y)
        let f = &Series::variable(8) * &uni(&[1, -1], 8).inverse().unwrap();
        let h = f.revert().unwrap();
        let want = &Series::variable(8) * &uni(&[1, 1], 8).inverse().unwrap();
        assert_eq!(h, want);
    }

    #[test]
    fn reversion_rejects_degenerate_input() {
        assert!(uni(&[1, 1], 4).revert().is_err());
        assert!(uni(&[0, 0, 1], 4).revert().is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = Series::new(vec![rat(1, 1), rat(-3, 7), rat(0, 1), rat(22, 5)], 3);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"["1/1","-3/7","0/1","22/5"]"#);
        let back: UniSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    fn arb_series(order: usize) -> impl Strategy<Value = UniSeries> {
        proptest::collection::vec((-20i64..20, 1i64..9), order + 1)
            .prop_map(move |v| Series::new(v.into_iter().map(|(p, q)| rat(p, q)).collect(), order))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reversion_round_trip(mut f in arb_series(7), lead in 1i64..6) {
            f.coeffs[0] = rat(0, 1);
            f.coeffs[1] = rat(lead, 1);
            let h = f.revert().unwrap();
            prop_assert_eq!(f.compose(&h).unwrap(), Series::variable(7));
            prop_assert_eq!(h.compose(&f).unwrap(), Series::variable(7));
        }

        #[test]
        fn log_turns_products_into_sums(mut a in arb_series(6), mut b in arb_series(6)) {
            a.coeffs[0] = rat(1, 1);
            b.coeffs[0] = rat(1, 1);
            let lhs = (&a * &b).log().unwrap();
            let rhs = &a.log().unwrap() + &b.log().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_two_sided(mut a in arb_series(6), c in 1i64..5) {
            a.coeffs[0] = rat(c, 1);
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, Series::one(6));
        }
    }
}
