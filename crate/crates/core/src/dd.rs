//! Double-double helpers on top of `twofloat`. Its `exp` and `ln` are good
//! to about 1e-18 and 1e-14 relative, and its TwoFloat/TwoFloat division
//! drops the low word (the residual `1 - b * (1/b)` is formed without fma),
//! so these three are redone here. Products, sums and division by `f64`
//! from the crate are exact to double-double precision and used as is.

use twofloat::TwoFloat;

/// `a / b` by long division with three quotient digits.
pub fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

pub fn recip(b: TwoFloat) -> TwoFloat {
    div(TwoFloat::from(1.0), b)
}

/// `e^z`: Taylor sum at `z / 2^k`, then `k` squarings.
pub fn exp(z: TwoFloat) -> TwoFloat {
    let mut k = 0;
    let mut y = z;
    while y.abs().hi() > 1.0 / 16.0 {
        y /= 2.0;
        k += 1;
    }
    let mut sum = TwoFloat::from(1.0);
    let mut t = TwoFloat::from(1.0);
    for j in 1..30 {
        t = t * y / j as f64;
        sum += t;
    }
    for _ in 0..k {
        sum = sum * sum;
    }
    sum
}

/// One Newton step on `e^y = x` from the double-precision log.
pub fn ln(x: TwoFloat) -> TwoFloat {
    let y = TwoFloat::from(x.hi().ln());
    y + x * exp(-y) - 1.0
}
