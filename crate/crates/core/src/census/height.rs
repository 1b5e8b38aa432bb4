//! Height arguments: decimals, fractions and `sqrt(n)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const APPROX_DIGITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Rational(BigRational),
    Sqrt(BigInt),
}

/// A height `H`, kept exact so that `T = H^d` is exact whenever possible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Height {
    text: String,
    kind: Kind,
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac).parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let x = BigRational::from_integer(digits);
    Some(if scale >= 0 {
        x * ten.pow(scale as u32)
    } else {
        x / ten.pow((-scale) as u32)
    })
}

impl FromStr for Height {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Invalid(format!("cannot parse height {s:?}"));
        let kind = if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let n: BigInt = inner.trim().parse().map_err(|_| bad())?;
            if n.is_negative() {
                return Err(bad());
            }
            let r = n.sqrt();
            if &r * &r == n {
                Kind::Rational(BigRational::from_integer(r))
            } else {
                Kind::Sqrt(n)
            }
        } else {
            Kind::Rational(parse_decimal(t).ok_or_else(bad)?)
        };
        if let Kind::Rational(q) = &kind {
            if q.is_negative() {
                return Err(Error::Invalid(format!("height {s} is negative")));
            }
        }
        Ok(Height {
            text: t.to_string(),
            kind,
        })
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Height {
    pub fn from_rational(h: BigRational) -> Self {
        Height {
            text: crate::constants::rational_string(&h),
            kind: Kind::Rational(h),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.kind {
            Kind::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Kind::Sqrt(n) => n.to_f64().unwrap_or(f64::NAN).sqrt(),
        }
    }

    /// `T = H^d` and whether it is exact. An irrational `T` is replaced by
    /// a 40-digit lower approximant, so ties at `T` cannot be certified.
    pub fn measure_bound(&self, d: usize) -> (BigRational, bool) {
        match &self.kind {
            Kind::Rational(q) => (num_traits::pow(q.clone(), d), true),
            Kind::Sqrt(n) if d % 2 == 0 => (BigRational::from_integer(n.pow(d as u32 / 2)), true),
            Kind::Sqrt(n) => {
                let scale = BigInt::from(10).pow(APPROX_DIGITS);
                let r = (n.pow(d as u32) * &scale * &scale).sqrt();
                (BigRational::new(r, scale), false)
            }
        }
    }

    pub fn at_least_one(&self) -> bool {
        match &self.kind {
            Kind::Rational(q) => *q >= BigRational::one(),
            Kind::Sqrt(n) => *n >= BigInt::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Height {
        s.parse().unwrap()
    }

    #[test]
    fn parses_forms() {
        assert_eq!(h("1.5").measure_bound(2).0, BigRational::new(9.into(), 4.into()));
        assert_eq!(h("3/2").measure_bound(1).0, BigRational::new(3.into(), 2.into()));
        assert_eq!(h("1e2").measure_bound(1).0, BigRational::from_integer(100.into()));
        assert_eq!(h("sqrt(3)").measure_bound(2), (BigRational::from_integer(3.into()), true));
        assert_eq!(h("sqrt(4)").measure_bound(3), (BigRational::from_integer(8.into()), true));
        let (t, exact) = h("sqrt(3)").measure_bound(3);
        assert!(!exact);
        assert!((t.to_f64().unwrap() - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decimal_is_exact() {
        let (t, exact) = h("1.7320508").measure_bound(2);
        assert!(exact);
        assert_eq!(t, BigRational::new(299999997378064i64.into(), 100000000000000i64.into()));
    }

    #[test]
    fn rejects_garbage() {
        assert!("abc".parse::<Height>().is_err());
        assert!("-1".parse::<Height>().is_err());
        assert!("sqrt(-2)".parse::<Height>().is_err());
        assert!("1/0".parse::<Height>().is_err());
    }
}
