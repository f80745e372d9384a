//! Truncated Laurent series in one variable with double-double coefficients.
//! A value knows its coefficients from the valuation up to `top()`; sums are
//! known up to the lower of the two tops and products keep the shorter
//! relative length, so truncation never invents coefficients. Exactly zero
//! leading terms (as in `1 - sigma` with `sigma = 1 + O(S)`) are stripped.

use crate::dd;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::ops::{Add, Mul, Neg, Sub};
use twofloat::TwoFloat;

pub const CAPACITY: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Laurent {
    val: i32,
    len: usize,
    c: [TwoFloat; CAPACITY],
}

fn zero() -> TwoFloat {
    TwoFloat::from(0.0)
}

fn is_exact_zero(x: &TwoFloat) -> bool {
    x.hi() == 0.0 && x.lo() == 0.0
}

impl Laurent {
    /// Coefficients of `x^val, x^(val+1), ...`, all of them known.
    pub fn new(val: i32, coeffs: &[TwoFloat]) -> Self {
        let len = coeffs.len().min(CAPACITY);
        let mut c = [zero(); CAPACITY];
        c[..len].copy_from_slice(&coeffs[..len]);
        Laurent { val, len, c }.normalized()
    }

    /// An exact constant, known to every order.
    pub fn constant(v: TwoFloat) -> Self {
        let mut c = [zero(); CAPACITY];
        c[0] = v;
        Laurent {
            val: 0,
            len: CAPACITY,
            c,
        }
    }

    fn normalized(mut self) -> Self {
        let lead = self.c[..self.len].iter().take_while(|x| is_exact_zero(x)).count();
        if lead > 0 && lead < self.len {
            self.c.copy_within(lead..self.len, 0);
            for x in &mut self.c[self.len - lead..self.len] {
                *x = zero();
            }
            self.val += lead as i32;
            self.len -= lead;
        }
        self
    }

    pub fn valuation(&self) -> i32 {
        self.val
    }

    /// Highest power whose coefficient is known.
    pub fn top(&self) -> i32 {
        self.val + self.len as i32 - 1
    }

    /// Coefficient of `x^power`, or `None` past the truncation order.
    pub fn coeff(&self, power: i32) -> Option<TwoFloat> {
        if power < self.val {
            Some(zero())
        } else if power <= self.top() {
            Some(self.c[(power - self.val) as usize])
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c[..self.len].iter().all(is_exact_zero)
    }

    pub fn scale(&self, k: TwoFloat) -> Self {
        let mut out = *self;
        for x in out.c.iter_mut() {
            *x *= k;
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.c[0];
        if self.len == 0 || is_exact_zero(&c0) {
            return Err(Error::NotInvertible("leading Laurent coefficient vanishes"));
        }
        let inv0 = dd::recip(c0);
        let mut r = [zero(); CAPACITY];
        r[0] = inv0;
        for n in 1..self.len {
            let mut acc = zero();
            for k in 1..=n {
                acc += self.c[k] * r[n - k];
            }
            r[n] = -acc * inv0;
        }
        Ok(Laurent {
            val: -self.val,
            len: self.len,
            c: r,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inverse()?)
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut out = Self::constant(TwoFloat::from(1.0));
        for _ in 0..n {
            out = out * *self;
        }
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        // an exact zero must not drag the valuation down
        if self.is_zero() && self.len == CAPACITY {
            return rhs;
        }
        if rhs.is_zero() && rhs.len == CAPACITY {
            return self;
        }
        let v = self.val.min(rhs.val);
        let top = self.top().min(rhs.top()).min(v + CAPACITY as i32 - 1);
        let len = (top - v + 1).max(0) as usize;
        let mut c = [zero(); CAPACITY];
        for s in [&self, &rhs] {
            for (i, x) in s.c[..s.len].iter().enumerate() {
                let idx = (s.val - v) as usize + i;
                if idx < len {
                    c[idx] += *x;
                }
            }
        }
        Laurent { val: v, len, c }.normalized()
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(TwoFloat::from(-1.0))
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        let len = self.len.min(rhs.len);
        let mut c = [zero(); CAPACITY];
        for i in 0..len {
            for j in 0..len - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Laurent {
            val: self.val + rhs.val,
            len,
            c,
        }
        .normalized()
    }
}

impl Scalar for Laurent {
    fn from_i64(v: i64) -> Self {
        Laurent::constant(TwoFloat::from(v as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: f64) -> TwoFloat {
        TwoFloat::from(v)
    }

    /// `e^x` to `CAPACITY` terms
    fn exp_series() -> Laurent {
        let mut c = vec![t(1.0)];
        for k in 1..CAPACITY {
            let prev = c[k - 1];
            c.push(prev / k as f64);
        }
        Laurent::new(0, &c)
    }

    #[test]
    fn inverse_of_a_pole() {
        // 1/(e^x - 1) = 1/x - 1/2 + x/12 - x^3/720 + ...
        let e = exp_series() - Laurent::constant(t(1.0));
        assert_eq!(e.valuation(), 1);
        assert_eq!(e.top(), CAPACITY as i32 - 1);
        let inv = e.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        let want = [
            t(1.0),
            t(-0.5),
            dd::div(t(1.0), t(12.0)),
            t(0.0),
            dd::div(t(-1.0), t(720.0)),
            t(0.0),
            dd::div(t(1.0), t(30240.0)),
        ];
        for (k, w) in want.iter().enumerate() {
            let got = inv.coeff(k as i32 - 1).unwrap();
            assert!((got - *w).abs().hi() < 1e-30, "power {}", k as i32 - 1);
        }
    }

    #[test]
    fn known_range_is_tracked() {
        let x = Laurent::new(1, &[t(1.0)]);
        assert_eq!(x.top(), 1);
        let big = x.powu(3).inverse().unwrap();
        assert_eq!(big.valuation(), -3);
        assert_eq!(big.top(), -3);
        let e = exp_series();
        // exp is known to CAPACITY terms; the product with x^-3 keeps one
        assert_eq!((e * big).top(), -3);
        let sum = e + Laurent::constant(t(2.0));
        assert_eq!(sum.top(), e.top());
        assert_eq!(sum.coeff(0).unwrap(), t(3.0));
        assert!(sum.coeff(CAPACITY as i32).is_none());
        let prod = e * e.inverse().unwrap();
        assert_eq!(prod.top(), CAPACITY as i32 - 1);
        for p in 1..CAPACITY as i32 {
            assert!(prod.coeff(p).unwrap().abs().hi() < 1e-30);
        }
    }

    #[test]
    fn zero_is_neutral() {
        let x = Laurent::new(-2, &[t(3.0), t(1.0)]);
        let z = Laurent::from_i64(0);
        assert!(z.is_zero());
        assert_eq!((z + x).valuation(), -2);
        assert_eq!((z + x).top(), x.top());
        assert!(z.inverse().is_err());
    }
}
