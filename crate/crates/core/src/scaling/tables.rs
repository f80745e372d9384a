//! Integer coefficient tables of the polynomials W, U, P, Q in (sigma, A)
//! and of Pi, Omega, Lambda in q.

use crate::scalar::Scalar;
use crate::series::Rational;
use std::sync::OnceLock;

/// `sum_i c_i(sigma) (A (1 - sigma))^(d - i)` with integer polynomials `c_i`
/// listed from the highest power of `A (1 - sigma)` down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaAPolynomial {
    rows: Vec<Vec<i64>>,
}

impl SigmaAPolynomial {
    pub fn new(rows: &[&[i64]]) -> Self {
        SigmaAPolynomial {
            rows: rows.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [Vec<i64>] {
        &mut self.rows
    }

    /// Degree in `A`.
    pub fn degree_in_a(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficients in `sigma` (lowest first) at a fixed value of `A`.
    pub fn sigma_coefficients(&self, a: &Rational) -> Vec<Rational> {
        let d = self.degree_in_a();
        let r = |v: i64| Rational::from_i64(v);
        let y = [a.clone(), -a.clone()];
        let mut out: Vec<Rational> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut term: Vec<Rational> = row.iter().map(|&c| r(c)).collect();
            for _ in 0..(d - i) {
                term = poly_mul(&term, &y);
            }
            if out.len() < term.len() {
                out.resize(term.len(), r(0));
            }
            for (o, t) in out.iter_mut().zip(term) {
                *o += t;
            }
        }
        out
    }

    pub fn eval<T: Scalar>(&self, sigma: &T, a: &T) -> T {
        let y = a.clone() * (T::from_i64(1) - sigma.clone());
        let mut acc = T::from_i64(0);
        for row in &self.rows {
            acc = acc * y.clone() + horner(row, sigma);
        }
        acc
    }
}

/// Integer polynomial in one variable, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coeffs: &[i64]) -> Self {
        IntPolynomial {
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        horner(&self.coeffs, x)
    }
}

pub fn poly_mul(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::from_i64(0); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn horner<T: Scalar>(coeffs: &[i64], x: &T) -> T {
    let mut acc = T::from_i64(0);
    for &c in coeffs.iter().rev() {
        acc = acc * x.clone() + T::from_i64(c);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFamily {
    pub w: SigmaAPolynomial,
    pub u: SigmaAPolynomial,
    pub p: SigmaAPolynomial,
    pub q: SigmaAPolynomial,
    pub pi: IntPolynomial,
    pub omega: IntPolynomial,
    pub lambda: IntPolynomial,
}

const W_ROWS: &[&[i64]] = &[&[4], &[12, 12], &[11, 38, 11], &[3, 27, 27, 3]];

const U_ROWS: &[&[i64]] = &[&[2], &[5, 5], &[3, 9, 3]];

const P_ROWS: &[&[i64]] = &[
    &[8, 8],
    &[44, 80, 44],
    &[94, 266, 266, 94],
    &[97, 386, 594, 386, 97],
    &[48, 246, 606, 606, 246, 48],
    &[9, 54, 243, 288, 243, 54, 9],
];

const Q_ROWS: &[&[i64]] = &[
    &[64],
    &[128, 224],
    &[-240, 1040],
    &[-576, 144, 1872, -816],
    &[204, -3336, 4800, -1080, -780],
    &[5880, 8190, 2544, 8244, -5256, 654],
    &[35363, 88857, 75432, 45698, -1965, -2715, 1250],
    &[100336, 279172, 377163, 267688, 118786, -12360, 2611, 244],
    &[149802, 441334, 790134, 776274, 445894, 154122, -5790, 2710, -480],
    &[121977, 366840, 862191, 1052820, 854619, 378966, 113103, 2172, 618, -306],
    &[51057, 149355, 467334, 748620, 755370, 456102, 160830, 44946, 1395, 45, -54],
    &[8505, 22680, 93555, 258552, 175770, 266328, 85050, 27000, 7533, 0, 27],
];

const PI_COEFFS: &[i64] = &[5, 15, 18, 9];

const OMEGA_COEFFS: &[i64] = &[1925, 5775, 6930, 3465, 0, 0, 2700, 2754, 972];

const LAMBDA_COEFFS: &[i64] = &[
    14_000_000,
    110_394_375,
    394_807_500,
    841_185_000,
    1_180_872_000,
    1_137_241_620,
    754_502_040,
    334_611_972,
    89_532_864,
    3_093_876,
    -17_740_944,
    -17_688_456,
    -8_817_984,
    -1_889_568,
];

impl PolynomialFamily {
    pub fn build() -> Self {
        PolynomialFamily {
            w: SigmaAPolynomial::new(W_ROWS),
            u: SigmaAPolynomial::new(U_ROWS),
            p: SigmaAPolynomial::new(P_ROWS),
            q: SigmaAPolynomial::new(Q_ROWS),
            pi: IntPolynomial::new(PI_COEFFS),
            omega: IntPolynomial::new(OMEGA_COEFFS),
            lambda: IntPolynomial::new(LAMBDA_COEFFS),
        }
    }
}

/// `(sum, position-weighted sum)` of the flattened coefficients of `Q`.
pub const Q_CHECKSUMS: (i64, i64) = (11_684_464, 557_955_396);
pub const LAMBDA_CHECKSUM: i64 = 4_814_104_295;
pub const OMEGA_CHECKSUM: i64 = 24_521;

impl PolynomialFamily {
    pub fn q_checksums(&self) -> (i64, i64) {
        let flat = self.q.rows().iter().flatten();
        let sum = flat.clone().sum();
        let weighted = flat.enumerate().map(|(k, v)| (k as i64 + 1) * v).sum();
        (sum, weighted)
    }
}

pub fn standard() -> &'static PolynomialFamily {
    static TABLES: OnceLock<PolynomialFamily> = OnceLock::new();
    TABLES.get_or_init(PolynomialFamily::build)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(factor: i64, c: &[i64]) -> Vec<i64> {
        c.iter().map(|v| factor * v).collect()
    }

    #[test]
    fn q_rows_match_the_factored_forms() {
        let factored: [(i64, &[i64]); 12] = [
            (64, &[1]),
            (32, &[4, 7]),
            (80, &[-3, 13]),
            (48, &[-12, 3, 39, -17]),
            (12, &[17, -278, 400, -90, -65]),
            (6, &[980, 1365, 424, 1374, -876, 109]),
            (1, &[35363, 88857, 75432, 45698, -1965, -2715, 1250]),
            (1, &[100336, 279172, 377163, 267688, 118786, -12360, 2611, 244]),
            (2, &[74901, 220667, 395067, 388137, 222947, 77061, -2895, 1355, -240]),
            (3, &[40659, 122280, 287397, 350940, 284873, 126322, 37701, 724, 206, -102]),
            (9, &[5673, 16595, 51926, 83180, 83930, 50678, 17870, 4994, 155, 5, -6]),
            (27, &[315, 840, 3465, 9576, 6510, 9864, 3150, 1000, 279, 0, 1]),
        ];
        let q = &standard().q;
        for (i, (f, c)) in factored.iter().enumerate() {
            assert_eq!(q.rows()[i], expand(*f, c), "q_{i}");
            // total degree in sigma stays at most 11
            assert!(q.rows()[i].len() <= i + 1);
        }
    }

    #[test]
    fn spot_values() {
        let t = standard();
        let r = |v: i64| Rational::from_i64(v);
        assert_eq!(t.q.rows()[0], vec![64]);
        assert_eq!(t.q.rows()[1], vec![32 * 4, 32 * 7]);
        assert_eq!(t.q.eval(&r(0), &r(1)), r(472_500));
        assert_eq!(t.w.eval(&r(0), &r(1)), r(30));
        // W(1, A) = 3 * 2 * 10 for every A
        assert_eq!(t.w.eval(&r(1), &r(7)), r(60));
        assert_eq!(t.pi.eval(&r(0)), r(5));
        assert_eq!(t.lambda.eval(&r(0)), r(14_000_000));
    }

    #[test]
    fn checksums() {
        let t = standard();
        assert_eq!(t.q_checksums(), Q_CHECKSUMS);
        assert_eq!(t.lambda.coeffs().iter().sum::<i64>(), LAMBDA_CHECKSUM);
        assert_eq!(t.omega.coeffs().iter().sum::<i64>(), OMEGA_CHECKSUM);
        let r = |v: i64| Rational::from_i64(v);
        // P(1, A) = 9 * 100 for every A
        assert_eq!(t.p.eval(&r(1), &r(5)), r(900));
    }
}
