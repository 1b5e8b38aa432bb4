//! Exact checks of the combinatorial inequalities behind the error constants.
//!
//! Rational inequalities are compared exactly. The one inequality involving
//! pi and e is raised to the fourth power so that only integer powers of pi
//! and e remain, which are then replaced by rational bounds on the side that
//! makes the comparison harder to pass.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{big_a, big_b, big_p, c_mn, monic_volume_poly, sci_string, volume};

const PI_LO: &str = "31415926535897932384626433832795028841971/10000000000000000000000000000000000000000";
const PI_HI: &str = "31415926535897932384626433832795028841972/10000000000000000000000000000000000000000";
const E_LO: &str = "27182818284590452353602874713526624977572/10000000000000000000000000000000000000000";
const E_HI: &str = "27182818284590452353602874713526624977573/10000000000000000000000000000000000000000";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixCheck {
    pub name: String,
    pub d: usize,
    pub k: Option<usize>,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub pass: bool,
}

fn check(name: &str, d: usize, k: Option<usize>, lhs: &BigRational, rel: &str, rhs: &BigRational) -> AppendixCheck {
    let pass = match rel {
        "<=" => lhs <= rhs,
        "<" => lhs < rhs,
        "==" => lhs == rhs,
        _ => unreachable!("unknown relation {rel}"),
    };
    AppendixCheck {
        name: name.to_string(),
        d,
        k,
        lhs: sci_string(lhs),
        relation: rel.to_string(),
        rhs: sci_string(rhs),
        pass,
    }
}

fn q(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

fn r(s: &str) -> BigRational {
    s.parse().expect("valid rational literal")
}

fn powi(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.clone(), (-e) as usize).recip()
    }
}

fn two_pow(e: i64) -> BigRational {
    powi(&BigRational::from_integer(2.into()), e)
}

/// `A(d)^4 2^{2d} pi^{2d-3} d^{2d+1} <= 2 10^4 e^{2d^2+4d-12}`, the fourth
/// power of the A(d) bound. Done in integers: the digit strings of the pi
/// and e brackets share the denominator 10^40.
fn a_bound(d: usize) -> AppendixCheck {
    let di = d as i64;
    let pi_exp = 2 * di - 3;
    let pi = if pi_exp >= 0 { r(PI_HI) } else { r(PI_LO) };
    let e_exp = 2 * di * di + 4 * di - 12;
    let e = if e_exp >= 0 { r(E_LO) } else { r(E_HI) };
    let ipow = |x: &BigInt, k: i64| num_traits::pow(x.clone(), k.unsigned_abs() as usize);
    let a = big_a(d);
    let mut lhs_num = ipow(&a, 4) * ipow(&BigInt::from(2), 2 * di) * ipow(&BigInt::from(d), 2 * di + 1);
    let mut lhs_den = BigInt::one();
    let mut rhs_num = BigInt::from(20_000);
    let mut rhs_den = BigInt::one();
    let (pn, pd) = (ipow(pi.numer(), pi_exp), ipow(pi.denom(), pi_exp));
    if pi_exp >= 0 {
        lhs_num *= pn;
        lhs_den *= pd;
    } else {
        lhs_num *= pd;
        lhs_den *= pn;
    }
    let (en, ed) = (ipow(e.numer(), e_exp), ipow(e.denom(), e_exp));
    if e_exp >= 0 {
        rhs_num *= en;
        rhs_den *= ed;
    } else {
        rhs_num *= ed;
        rhs_den *= en;
    }
    let pass = &lhs_num * &rhs_den <= &rhs_num * &lhs_den;
    let ratio = |n: BigInt, d: BigInt| sci_string(&BigRational::new_raw(n, d));
    AppendixCheck {
        name: "A(d) bound".into(),
        d,
        k: None,
        lhs: ratio(lhs_num, lhs_den),
        relation: "<=".into(),
        rhs: ratio(rhs_num, rhs_den),
        pass,
    }
}

/// Bounds on A, B, C_{m,n} and P for every degree up to `d_max`.
pub fn appendix_checks(d_max: usize) -> Vec<AppendixCheck> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        out.push(a_bound(d));
    }
    for d in 0..=d_max {
        let rhs = q(num_traits::pow(BigInt::from(2), d * d));
        out.push(check("B(d) <= 2^(d^2)", d, None, &q(big_b(d)), "<=", &rhs));
    }
    let m_bounds: [(&str, usize, usize, usize, BigRational, i64); 5] = [
        ("C_{0,0}", 0, 0, 0, r("3159/1024"), 1),
        ("C_{1,0}", 1, 0, 0, r("1053/512"), 0),
        ("C_{1,1}", 1, 1, 1, r("351/256"), -1),
        ("C_{2,0}", 2, 0, 1, BigRational::one(), -1),
        ("C_{2,1}", 2, 1, 2, r("1/2"), -2),
    ];
    for (name, m, n, d_min, c, shift) in m_bounds {
        for d in d_min..=d_max {
            let lhs = q(c_mn(m, n, d).expect("range checked"));
            let rhs = &c * two_pow(d as i64 + shift) * q(big_p(d));
            out.push(check(name, d, None, &lhs, "<=", &rhs));
        }
    }
    for d in 2..=d_max {
        let pd1 = q(big_p(d - 1));
        for k in 1..d {
            let lhs = q(big_p(k) * big_p(d - k));
            let rel = if k == 1 || k == d - 1 { "==" } else { "<" };
            out.push(check("P(k)P(d-k) vs P(d-1)", d, Some(k), &lhs, rel, &pd1));
        }
    }
    out
}

/// The volume maximum over `0 <= d <= d_max` sits at `d = 15`, with strict
/// decrease afterwards, and the leading coefficient of `p_d` is `V_{d-1}`.
pub fn volume_checks(d_max: usize, monic_max: usize) -> Vec<AppendixCheck> {
    let mut out = Vec::new();
    let v15 = volume(15);
    for d in 0..=d_max {
        let v = volume(d);
        out.push(check("V(d) <= V(15)", d, None, &v, "<=", &v15));
        if d >= 15 && d < d_max {
            out.push(check("V(d+1) < V(d)", d, None, &volume(d + 1), "<", &v));
        }
    }
    for d in 1..=monic_max {
        let p = monic_volume_poly(d).expect("d >= 1");
        let lead = p.last().cloned().unwrap_or_else(BigRational::zero);
        out.push(check("lead p_d = V(d-1)", d, None, &lead, "==", &volume(d - 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_appendix_checks_pass_to_25() {
        let checks = appendix_checks(25);
        let failing: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert!(failing.is_empty(), "{failing:#?}");
        // 25 + 26 + (26 + 26 + 25 + 25 + 24) + sum_{d=2}^{25} (d-1)
        assert_eq!(checks.len(), 25 + 26 + 126 + 300);
    }

    #[test]
    fn volume_maximum_at_fifteen() {
        let checks = volume_checks(60, 20);
        assert!(checks.iter().all(|c| c.pass));
        assert!(volume(14) < volume(15) && volume(16) < volume(15));
    }

    #[test]
    fn pi_and_e_brackets() {
        assert!(r(PI_LO) < r(PI_HI) && r(E_LO) < r(E_HI));
        let pi: f64 = num_traits::ToPrimitive::to_f64(&r(PI_LO)).unwrap();
        assert_eq!(pi, std::f64::consts::PI);
        let e: f64 = num_traits::ToPrimitive::to_f64(&r(E_LO)).unwrap();
        assert_eq!(e, std::f64::consts::E);
    }

    /// Phi(d) = sqrt(e^{d^2+d} / ((2 pi)^d d!)) in f64, for d small enough.
    fn phi(d: usize) -> f64 {
        let df = d as f64;
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        ((df * df + df) - df * (2.0 * std::f64::consts::PI).ln() - fact.ln()).exp().sqrt()
    }

    #[test]
    fn a_over_phi_is_largest_at_two() {
        use num_traits::ToPrimitive;
        let ratio = |d: usize| big_a(d).to_f64().unwrap() / phi(d);
        let at2 = ratio(2);
        let closed = 10.0 * std::f64::consts::PI * 2f64.sqrt() * (-3f64).exp();
        assert!((at2 - closed).abs() < 1e-12);
        for d in 0..=8 {
            assert!(ratio(d) <= at2 + 1e-12, "d={d}");
        }
        for d in 9..=25 {
            assert!(ratio(d) < 2.2, "d={d}");
        }
    }
}
