//! Closed-form constants: star-body volumes, the monic-slice volume
//! polynomial, the combinatorial functions P, A, B, C_{m,n}, gamma and the
//! error constants built from them.
//!
//! Everything rational is returned exactly as a [`BigRational`]; constants
//! involving a d-th root are returned as f64.

mod appendix;
mod registry;

pub use appendix::{appendix_checks, volume_checks, AppendixCheck};
pub use registry::{explicit_rhs, BoundTag, RhsParams};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `c_0`, `c_1`, `c_2` from the bounds on C_{0,0}, C_{1,0} and C_{1,1}.
pub fn c0() -> BigRational {
    rat(3159, 1024)
}

pub fn c1() -> BigRational {
    rat(1053, 512)
}

pub fn c2() -> BigRational {
    rat(351, 256)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

fn binom(n: usize, k: usize) -> BigInt {
    binomial(BigInt::from(n), BigInt::from(k))
}

/// `s = floor((d - 1) / 2)`, taken as 0 for `d = 0`.
fn half_index(d: usize) -> usize {
    d.saturating_sub(1) / 2
}

/// Volume of the star body `{mu <= 1}` in degree `d`.
pub fn volume(d: usize) -> BigRational {
    let s = half_index(d);
    let mut v = pow(&int(2), d + 1) * pow(&int(d + 1), s);
    for j in 1..=s {
        v *= pow(&int(2 * j), d - 2 * j);
        v /= pow(&int(2 * j + 1), d + 1 - 2 * j);
    }
    v
}

/// Ascending coefficients of `p_d(T)`, the volume of the monic slice.
pub fn monic_volume_poly(d: usize) -> Result<Vec<BigRational>> {
    if d == 0 {
        return Err(Error::Invalid("the monic slice needs d >= 1".into()));
    }
    let s = half_index(d);
    let mut cd = pow(&int(2), d);
    for j in 1..=s {
        cd *= pow(&rat(2 * j as i64, 2 * j as i64 + 1), d - 2 * j);
    }
    let fact: BigInt = (1..=s).map(BigInt::from).product();
    let scale = cd / (pow(&int(2), s) * int(fact));
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for m in 0..=s {
        let term = &scale * pow(&int(d - 2 * m), s) * int(binom(s, m));
        coeffs[d - 2 * m] = if m % 2 == 1 { -term } else { term };
    }
    Ok(coeffs)
}

/// `p_d(T)` evaluated exactly.
pub fn monic_volume(d: usize, t: &BigRational) -> Result<BigRational> {
    let c = monic_volume_poly(d)?;
    Ok(c.iter().rev().fold(BigRational::zero(), |acc, ci| acc * t + ci))
}

/// `P(d) = prod_j C(d, j)`.
pub fn big_p(d: usize) -> BigInt {
    (0..=d).map(|j| binom(d, j)).product()
}

/// `A(d) = sum_k P(k) P(d - k)`.
pub fn big_a(d: usize) -> BigInt {
    (0..=d).map(|k| big_p(k) * big_p(d - k)).sum()
}

/// `gamma(k) = C(k, floor(k/2))`.
pub fn gamma(k: usize) -> BigInt {
    binom(k, k / 2)
}

/// `B(d) = sum_{k < d} P(k) P(d-k) gamma(k)^(d-k-1) gamma(d-k)^k`.
pub fn big_b(d: usize) -> BigInt {
    (0..d)
        .map(|k| {
            big_p(k)
                * big_p(d - k)
                * num_traits::pow(gamma(k), d - k - 1)
                * num_traits::pow(gamma(d - k), k)
        })
        .sum()
}

/// `C_{m,n}(d) = prod_{j=m}^{d-n} (2 C(d, j) + 1)`, the number of integer
/// points in the coefficient box with the first `m` and last `n` entries
/// dropped. An empty range (m + n = d + 1) gives 1.
pub fn c_mn(m: usize, n: usize, d: usize) -> Result<BigInt> {
    if m + n > d + 1 {
        return Err(Error::Invalid(format!(
            "C_{{m,n}}(d) needs m + n <= d, got m={m}, n={n}, d={d}"
        )));
    }
    Ok((m..=d.saturating_sub(n))
        .filter(|&j| j + n <= d)
        .map(|j| 2 * binom(d, j) + 1)
        .product())
}

/// Error constant for all polynomials of degree at most `d`.
pub fn kappa0(d: usize) -> BigRational {
    let k = BigInt::from(d) * binom(d, d / 2) + 1;
    int(num_traits::pow(BigInt::from(4), d + 1) * big_a(d) * num_traits::pow(k, d))
}

/// Error constant for monic polynomials of degree `d >= 2`.
pub fn kappa1(d: usize) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::regime("kappa1", "d ≥ 2"));
    }
    Ok(int(num_traits::pow(BigInt::from(4), d)
        * num_traits::pow(BigInt::from(d), d - 1)
        * big_b(d)))
}

/// Degree `d` with the first `m = lead.len()` and last `n = trail.len()`
/// coefficients fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceSpec {
    pub d: usize,
    pub lead: Vec<i64>,
    pub trail: Vec<i64>,
}

impl SliceSpec {
    pub fn new(d: usize, lead: Vec<i64>, trail: Vec<i64>) -> Result<Self> {
        if lead.len() + trail.len() > d + 1 {
            return Err(Error::Invalid(format!(
                "{} fixed coefficients do not fit degree {d}",
                lead.len() + trail.len()
            )));
        }
        Ok(SliceSpec { d, lead, trail })
    }

    /// No coefficients fixed.
    pub fn full(d: usize) -> Self {
        SliceSpec {
            d,
            lead: Vec::new(),
            trail: Vec::new(),
        }
    }

    /// Leading coefficient 1.
    pub fn monic(d: usize) -> Self {
        SliceSpec {
            d,
            lead: vec![1],
            trail: Vec::new(),
        }
    }

    pub fn m(&self) -> usize {
        self.lead.len()
    }

    pub fn n(&self) -> usize {
        self.trail.len()
    }

    /// Number of free coefficients minus one.
    pub fn g(&self) -> isize {
        self.d as isize - self.m() as isize - self.n() as isize
    }

    pub fn free_count(&self) -> usize {
        (self.g() + 1).max(0) as usize
    }

    /// `||(l, r)||_inf`.
    pub fn fixed_sup(&self) -> i64 {
        self.lead
            .iter()
            .chain(&self.trail)
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }

    /// Checks the hypotheses of the slice theorems: `0 < m + n <= d`.
    pub fn check_slice(&self) -> Result<()> {
        let mn = self.m() + self.n();
        if mn == 0 || mn > self.d {
            return Err(Error::regime("slice counting", "0 < m + n ≤ d"));
        }
        Ok(())
    }

    /// Hypotheses for counting minimal polynomials in the slice: `l_0 > 0`,
    /// gcd of the fixed entries equal to 1 and `r_d != 0` when `n > 0`.
    pub fn check_minimal(&self) -> Result<()> {
        self.check_slice()?;
        if self.lead.first().is_some_and(|&l| l <= 0) {
            return Err(Error::regime("minimal-polynomial slice", "ℓ_0 > 0"));
        }
        let g = self
            .lead
            .iter()
            .chain(&self.trail)
            .fold(0i64, |acc, &c| acc.gcd(&c));
        if g != 1 {
            return Err(Error::regime(
                "minimal-polynomial slice",
                "gcd(ℓ_0,…,ℓ_{m−1},r_{d−n+1},…,r_d) = 1",
            ));
        }
        if self.trail.last() == Some(&0) {
            return Err(Error::regime("minimal-polynomial slice", "r_d ≠ 0 if n > 0"));
        }
        Ok(())
    }
}

/// `k_1 = 2^(d^2) d^d (m + n) ||(l, r)||_inf`.
pub fn k1_donut(spec: &SliceSpec) -> Result<BigRational> {
    spec.check_slice()?;
    let d = spec.d;
    Ok(int(num_traits::pow(BigInt::from(2), d * d)
        * num_traits::pow(BigInt::from(d), d)
        * BigInt::from(spec.m() + spec.n())
        * BigInt::from(spec.fixed_sup())))
}

/// `delta_T = (k_1 / T)^(1/d)`.
pub fn delta_t(spec: &SliceSpec, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Invalid("delta_T needs T > 0".into()));
    }
    let k1 = to_f64(&k1_donut(spec)?);
    Ok((k1 / t).powf(1.0 / spec.d as f64))
}

/// Error constant of the explicit slice count, valid for `T >= k_1`.
pub fn kappa_slice(spec: &SliceSpec) -> Result<f64> {
    let k1 = to_f64(&k1_donut(spec)?);
    let g = spec.g() as usize;
    let root = k1.powf(1.0 / spec.d as f64);
    let vg = to_f64(&volume(g));
    let k0 = to_f64(&kappa0(g));
    let p2 = |e: usize| 2f64.powi(e as i32);
    Ok((g + 1) as f64 * p2(g + 1) * root * vg + (g as f64 * p2(g) * root + 1.0) * k0)
}

/// Constant of the explicit slice-volume estimate:
/// `c = 2^(d+1) d ((m + n) ||(l, r)||_inf)^(1/d) V_g`.
pub fn c_exvol(spec: &SliceSpec) -> Result<f64> {
    spec.check_slice()?;
    let d = spec.d;
    let g = spec.g() as usize;
    let inner = ((spec.m() + spec.n()) as f64 * spec.fixed_sup() as f64).powf(1.0 / d as f64);
    Ok(2f64.powi(d as i32 + 1) * d as f64 * inner * to_f64(&volume(g)))
}

/// Riemann zeta at an integer `s >= 2`, by summation with an Euler-Maclaurin
/// tail.
pub fn zeta_int(s: u32) -> Result<f64> {
    if s < 2 {
        return Err(Error::Invalid("zeta_int needs s >= 2".into()));
    }
    const N: u32 = 64;
    let s_f = s as f64;
    let mut sum = 0.0;
    for n in (1..N).rev() {
        sum += (n as f64).powf(-s_f);
    }
    let n = N as f64;
    // tail: N^{1-s}/(s-1) + N^{-s}/2 + B2/2! s N^{-s-1} + B4/4! s(s+1)(s+2) N^{-s-3}
    let tail = n.powf(1.0 - s_f) / (s_f - 1.0) + 0.5 * n.powf(-s_f) + s_f / 12.0 * n.powf(-s_f - 1.0)
        - s_f * (s_f + 1.0) * (s_f + 2.0) / 720.0 * n.powf(-s_f - 3.0);
    Ok(sum + tail)
}

/// Number of positive divisors of `r != 0`.
pub fn omega(r: i64) -> Result<u64> {
    if r == 0 {
        return Err(Error::Invalid("omega(0) is undefined".into()));
    }
    let r = r.unsigned_abs();
    let mut count = 0;
    let mut i = 1u64;
    while i * i <= r {
        if r % i == 0 {
            count += if i * i == r { 1 } else { 2 };
        }
        i += 1;
    }
    Ok(count)
}

/// Moebius function.
pub fn moebius(n: u64) -> i8 {
    assert!(n > 0, "moebius(0) is undefined");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Nearest f64 to a rational (exact for moderate sizes, saturating to
/// infinity beyond the f64 range).
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `p/q` in lowest terms (just `p` for integers).
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion truncated toward zero after `digits` fractional digits.
pub fn decimal_string(x: &BigRational, digits: usize) -> String {
    let neg = x.is_negative();
    let a = x.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let (ip, fp) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        let f = fp.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

/// Scientific notation with 6 significant digits, usable far outside the
/// f64 range.
pub fn sci_string(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let v = to_f64(x);
    if v.is_finite() && v.abs() >= 1e-4 && v.abs() < 1e15 {
        return if v.fract() == 0.0 {
            format!("{v:.0}")
        } else {
            format!("{v:.6}")
        };
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let l = log10_abs(x.numer()) - log10_abs(x.denom());
    let mut e = l.floor();
    let mut m = 10f64.powf(l - e);
    if m >= 9.999995 {
        m /= 10.0;
        e += 1.0;
    }
    format!("{sign}{m:.5}e{e}")
}

fn log10_abs(n: &BigInt) -> f64 {
    let a = n.abs();
    let shift = a.bits().saturating_sub(64);
    let top = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(volume(0), int(2));
        assert_eq!(volume(1), int(4));
        assert_eq!(volume(2), int(8));
        assert_eq!(
            volume(15),
            r("2658455991569831745807614120560689152/13904872587870848957579157123046875")
        );
    }

    #[test]
    fn monic_volume_polynomials() {
        let p2 = monic_volume_poly(2).unwrap();
        assert_eq!(p2, vec![int(0), int(0), int(4)]);
        let p3 = monic_volume_poly(3).unwrap();
        assert_eq!(p3, vec![int(0), rat(-8, 3), int(0), int(8)]);
        assert_eq!(monic_volume(2, &int(2)).unwrap(), int(16));
        assert_eq!(monic_volume(3, &int(2)).unwrap(), int(64) - rat(16, 3));
    }

    #[test]
    fn combinatorial_functions() {
        assert_eq!(big_p(3), BigInt::from(9));
        assert_eq!(big_a(3), BigInt::from(22));
        assert_eq!(big_b(2), BigInt::from(3));
        assert_eq!(big_b(3), BigInt::from(15));
        assert_eq!(gamma(4), BigInt::from(6));
        assert_eq!(c_mn(0, 0, 1).unwrap(), BigInt::from(9));
        assert_eq!(c_mn(2, 0, 1).unwrap(), BigInt::one());
        assert!(c_mn(2, 1, 1).is_err());
    }

    #[test]
    fn kappas() {
        assert_eq!(kappa0(0), int(4));
        assert_eq!(kappa0(1), int(64));
        assert_eq!(kappa0(2), int(8000));
        assert_eq!(kappa0(3), int(5_632_000));
        assert_eq!(kappa1(2).unwrap(), int(96));
        assert_eq!(kappa1(3).unwrap(), int(8640));
        assert!(kappa1(1).is_err());
    }

    #[test]
    fn slice_constants() {
        let s = SliceSpec::new(2, vec![1], vec![1]).unwrap();
        assert_eq!(k1_donut(&s).unwrap(), int(128));
        let s3 = SliceSpec::new(3, vec![1], vec![1]).unwrap();
        assert_eq!(k1_donut(&s3).unwrap(), int(27_648));
        assert!((delta_t(&s3, 27_648.0).unwrap() - 1.0).abs() < 1e-15);
        let k = kappa_slice(&s).unwrap();
        assert!((k - (32.0 * 2f64.sqrt() + 4.0)).abs() < 1e-12);
        let s2 = SliceSpec::new(2, vec![1], vec![2]).unwrap();
        assert!((kappa_slice(&s2).unwrap() - 68.0).abs() < 1e-12);
        assert!((c_exvol(&s).unwrap() - 32.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn minimal_slice_hypotheses() {
        assert!(SliceSpec::new(3, vec![1], vec![0]).unwrap().check_minimal().is_err());
        assert!(SliceSpec::new(3, vec![2], vec![4]).unwrap().check_minimal().is_err());
        assert!(SliceSpec::new(3, vec![1], vec![-1]).unwrap().check_minimal().is_ok());
        assert!(SliceSpec::full(3).check_slice().is_err());
    }

    #[test]
    fn zeta_and_arithmetic_functions() {
        let pi = std::f64::consts::PI;
        assert!((zeta_int(2).unwrap() - pi * pi / 6.0).abs() < 1e-14);
        assert!((zeta_int(4).unwrap() - pi.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta_int(3).unwrap() - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert_eq!(omega(12).unwrap(), 6);
        assert_eq!(omega(1).unwrap(), 1);
        assert_eq!(omega(-9).unwrap(), 3);
        let mu: Vec<i8> = (1..=10).map(moebius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn formatting() {
        assert_eq!(rational_string(&rat(-8, 3)), "-8/3");
        assert_eq!(decimal_string(&rat(-8, 3), 4), "-2.6666");
        assert_eq!(decimal_string(&int(5), 2), "5.00");
        assert_eq!(decimal_string(&rat(1, 200), 2), "0.00");
        assert_eq!(sci_string(&(int(num_traits::pow(BigInt::from(10), 400)) * int(3))), "3.00000e400");
        assert_eq!(sci_string(&int(-42)), "-42");
    }
}
