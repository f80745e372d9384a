use super::{parse_rational, rational_to_string, Coefficient, Rational};
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Polynomial in `z` with rational coefficients, stored without trailing
/// zeros (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZPolynomial {
    coeffs: Vec<Rational>,
}

impl ZPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero_value()) {
            coeffs.pop();
        }
        ZPolynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        ZPolynomial::new(vec![c])
    }

    /// `c z^k`
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        ZPolynomial::new(v)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl Coefficient for ZPolynomial {
    fn zero_value() -> Self {
        ZPolynomial::default()
    }

    fn from_rational(r: Rational) -> Self {
        ZPolynomial::constant(r)
    }

    fn is_zero_value(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPolynomial::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPolynomial::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return ZPolynomial::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPolynomial::new(out)
    }

    fn scale(&self, r: &Rational) -> Self {
        ZPolynomial::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    fn unit_inverse(&self) -> Option<Self> {
        match self.coeffs.as_slice() {
            [c] => Some(ZPolynomial::constant(c.recip())),
            _ => None,
        }
    }

    fn one_value() -> Self {
        ZPolynomial::constant(Rational::one())
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
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
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for ZPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&rational_to_string(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ZPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ZPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn trailing_zeros_are_dropped() {
        let p = ZPolynomial::new(vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(ZPolynomial::new(vec![rat(0, 1)]).degree(), None);
    }

    #[test]
    fn product_and_evaluation() {
        let a = ZPolynomial::new(vec![rat(1, 1), rat(1, 1)]);
        let b = ZPolynomial::new(vec![rat(-1, 1), rat(1, 1)]);
        let p = a.mul_ref(&b);
        assert_eq!(p, ZPolynomial::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]));
        assert_eq!(p.eval(&rat(3, 1)), rat(8, 1));
        assert_eq!(p.eval_f64(0.5), -0.75);
    }

    #[test]
    fn only_nonzero_constants_are_units() {
        assert!(ZPolynomial::monomial(1, rat(1, 1)).unit_inverse().is_none());
        assert_eq!(
            ZPolynomial::constant(rat(2, 3)).unit_inverse(),
            Some(ZPolynomial::constant(rat(3, 2)))
        );
    }
}
