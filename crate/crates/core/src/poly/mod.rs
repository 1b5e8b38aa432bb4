//! Integer polynomials, certified root enclosures, Mahler measures and
//! factorization over Z.
//!
//! Coefficient vectors are written highest degree first: `(w0, ..., wd)`
//! stands for `w0 z^d + ... + wd`. Leading zeros are allowed, so a vector of
//! length `d + 1` describes a polynomial of degree at most `d`.

mod arith;
mod dyadic;
mod factor;
mod graeffe;
mod measure;
pub(crate) mod roots;
mod tie;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub use factor::{factor_over_z, is_irreducible, is_reducible, Factorization, FACTOR_DEGREE_CAP};
pub use measure::{
    compare_measure, mahler_measure, mahler_measure_real, measure_f64, root_set, root_set_real,
    MeasureCertificate, MeasureOracle, RootSet, PRECISION_LADDER,
};

pub(crate) use factor::is_reducible_i64;
pub(crate) use graeffe::Screen;
pub(crate) use roots::RootWorkspace;

/// Integer polynomial with arbitrary-precision coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from descending coefficients. An empty vector is
    /// read as the zero constant.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Length of the coefficient vector minus one.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Actual degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.coeffs.len() - 1 - i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// First nonzero coefficient.
    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        arith::content(&self.coeffs)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == BigInt::from(1)
    }

    /// Drops leading zeros so the vector length is `degree + 1`.
    pub fn trimmed(&self) -> IntPoly {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => IntPoly::new(self.coeffs[i..].to_vec()),
            None => IntPoly::new(vec![BigInt::zero()]),
        }
    }

    /// Coefficient vector read backwards, `z^n p(1/z)` for nominal degree `n`.
    pub fn reversed(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let prod = arith::mul(&self.ascending(), &other.ascending());
        IntPoly::from_ascending(prod)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut v = BigRational::zero();
        for c in &self.coeffs {
            v = v * x + BigRational::from_integer(c.clone());
        }
        v
    }

    pub fn sup_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Exact conversion to f64 when every coefficient is below 2^53.
    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.bits() <= 53 {
                    c.to_f64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Trimmed ascending coefficients (index = power of z).
    pub(crate) fn ascending(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        arith::trim(&mut v);
        v
    }

    pub(crate) fn from_ascending(mut asc: Vec<BigInt>) -> IntPoly {
        arith::trim(&mut asc);
        asc.reverse();
        IntPoly::new(asc)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len() - 1;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = n - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let one = mag == BigInt::from(1);
            match (p, one) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}z")?,
                (_, true) => write!(f, "z^{p}")?,
                (_, false) => write!(f, "{mag}z^{p}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Coefficient box `|w_i| <= C(d, i) * bound`, which contains every
/// polynomial of degree at most `d` with measure at most `bound`.
pub fn coefficient_box(d: usize, bound: &BigRational) -> Vec<BigInt> {
    (0..=d)
        .map(|i| {
            let c = BigRational::from_integer(num_integer::binomial(BigInt::from(d), BigInt::from(i)));
            (c * bound).floor().to_integer()
        })
        .collect()
}

/// Elementary two-sided bound from the sup norm:
/// `|w|_inf / C(d, floor(d/2)) <= mu <= sqrt(d + 1) |w|_inf`.
pub fn measure_bounds_from_sup(p: &IntPoly) -> (f64, f64) {
    let d = p.nominal_degree();
    let s = p.sup_norm().to_f64().unwrap_or(f64::INFINITY);
    let c = num_integer::binomial(d as u64, (d / 2) as u64) as f64;
    (s / c, ((d + 1) as f64).sqrt() * s)
}

/// Absolute multiplicative height of a root of an irreducible polynomial of
/// degree `d` with measure `mu`: `H = mu^(1/d)`.
pub fn height_from_measure(mu: f64, d: usize) -> f64 {
    mu.powf(1.0 / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_display() {
        let p = IntPoly::from_i64(&[0, 1, 0, -1, -1]);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.nominal_degree(), 4);
        assert_eq!(p.to_string(), "z^3 - z - 1");
        assert_eq!(IntPoly::from_i64(&[-2, 3]).to_string(), "-2z + 3");
        assert_eq!(IntPoly::from_i64(&[0, 0]).degree(), None);
    }

    #[test]
    fn multiplication_matches_known_factorization() {
        let a = IntPoly::from_i64(&[1, -2, 2]);
        let b = IntPoly::from_i64(&[1, 2, 2]);
        assert_eq!(a.mul(&b), IntPoly::from_i64(&[1, 0, 0, 0, 4]));
    }

    #[test]
    fn coefficient_box_floor() {
        let b = coefficient_box(3, &BigRational::new(5.into(), 2.into()));
        let v: Vec<i64> = b.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![2, 7, 7, 2]);
    }
}
