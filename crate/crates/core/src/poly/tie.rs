//! Exact tie resolution for `mu(p) = T`.
//!
//! For a polynomial with leading coefficient `w0` and roots `a_1..a_n`,
//! `Q_k(x) = prod_{|S| = k} (x - w0 prod_{i in S} a_i)` is monic with integer
//! coefficients. If exactly `k` roots lie outside the unit circle then `mu(p)`
//! or `-mu(p)` is a root of `Q_k`, which bounds `|mu(p) - T|` away from zero
//! unless the two coincide. The coefficients are built exactly from power sums.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) struct TieOracle {
    /// Descending coefficients of the polynomial (nonzero lead and trail).
    w0: BigRational,
    e: Vec<BigRational>,
    power_sums: Vec<BigRational>,
    cache: HashMap<usize, Vec<BigRational>>,
}

/// Outcome of examining one candidate root count.
pub(crate) struct Separation {
    /// Lower bound on `|mu - T|` under the hypothesis `mu != T`; `None` when
    /// the hypothesis is impossible.
    pub sep: Option<BigRational>,
    /// Whether `T` or `-T` is a root of `Q_k`.
    pub tie: bool,
}

impl TieOracle {
    pub(crate) fn new(desc: &[BigInt]) -> Self {
        let w0 = BigRational::from_integer(desc[0].clone());
        let n = desc.len() - 1;
        let mut e = Vec::with_capacity(n + 1);
        e.push(BigRational::one());
        for (i, c) in desc.iter().enumerate().skip(1) {
            let v = BigRational::from_integer(c.clone()) / &w0;
            e.push(if i % 2 == 1 { -v } else { v });
        }
        TieOracle {
            w0,
            e,
            power_sums: vec![BigRational::from_integer(BigInt::from(n))],
            cache: HashMap::new(),
        }
    }

    fn degree(&self) -> usize {
        self.e.len() - 1
    }

    fn power_sum(&mut self, m: usize) -> BigRational {
        let n = self.degree();
        while self.power_sums.len() <= m {
            let j = self.power_sums.len();
            let mut acc = BigRational::zero();
            for i in 1..=j.min(n) {
                let term = if i == j {
                    &self.e[i] * BigRational::from_integer(BigInt::from(j))
                } else {
                    &self.e[i] * &self.power_sums[j - i]
                };
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            self.power_sums.push(acc);
        }
        self.power_sums[m].clone()
    }

    /// Ascending coefficients of `Q_k`.
    pub(crate) fn subset_poly(&mut self, k: usize) -> Vec<BigRational> {
        if let Some(q) = self.cache.get(&k) {
            return q.clone();
        }
        let n = self.degree();
        let big_n: usize = binomial(n, k);
        let mut sums = Vec::with_capacity(big_n);
        let mut w0_pow = BigRational::one();
        for j in 1..=big_n {
            w0_pow *= &self.w0;
            let q: Vec<BigRational> = (1..=k).map(|m| self.power_sum(m * j)).collect();
            sums.push(&w0_pow * elementary_from_power_sums(&q, k));
        }
        let f = elementary_all(&sums, big_n);
        let mut asc = vec![BigRational::zero(); big_n + 1];
        for (r, fr) in f.iter().enumerate() {
            asc[big_n - r] = if r % 2 == 1 { -fr.clone() } else { fr.clone() };
        }
        self.cache.insert(k, asc.clone());
        asc
    }

    /// Separation data for root count `k`, threshold `t > 0` and an upper
    /// bound `m` on `mu`.
    pub(crate) fn separation(&mut self, k: usize, t: &BigRational, m: &BigRational) -> Separation {
        let q = self.subset_poly(k);
        let reach = t + m;
        let mut sep: Option<BigRational> = None;
        let mut any_finite = false;
        let mut tie = false;
        for x in [t.clone(), -t.clone()] {
            let mut r = q.clone();
            let mut hit = false;
            loop {
                let (quot, rem) = synthetic_division(&r, &x);
                if rem.is_zero() && !quot.is_empty() {
                    r = quot;
                    hit = true;
                } else {
                    break;
                }
            }
            tie |= hit;
            let deg = r.len() - 1;
            if hit && deg == 0 {
                continue;
            }
            let val = eval(&r, &x).abs();
            let mut denom = BigRational::one();
            for _ in 1..deg {
                denom *= &reach;
            }
            let s = val / denom;
            any_finite = true;
            sep = Some(match sep {
                Some(prev) if prev < s => prev,
                _ => s,
            });
        }
        Separation {
            sep: if any_finite { sep } else { None },
            tie,
        }
    }
}

/// `e_k` of a multiset from its first `k` power sums (Newton's identities).
fn elementary_from_power_sums(p: &[BigRational], k: usize) -> BigRational {
    elementary_all(p, k)[k].clone()
}

fn elementary_all(p: &[BigRational], k: usize) -> Vec<BigRational> {
    let mut e = Vec::with_capacity(k + 1);
    e.push(BigRational::one());
    for r in 1..=k {
        let mut acc = BigRational::zero();
        for i in 1..=r {
            let term = &e[r - i] * &p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(r)));
    }
    e
}

fn eval(asc: &[BigRational], x: &BigRational) -> BigRational {
    let mut v = BigRational::zero();
    for c in asc.iter().rev() {
        v = v * x + c;
    }
    v
}

/// Divides by `(z - x)`; returns the quotient (ascending) and remainder.
fn synthetic_division(asc: &[BigRational], x: &BigRational) -> (Vec<BigRational>, BigRational) {
    let n = asc.len() - 1;
    if n == 0 {
        return (Vec::new(), asc[0].clone());
    }
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (0..=n).rev() {
        let v = &asc[i] + &carry * x;
        if i == 0 {
            return (q, v);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn as_i64(q: &[BigRational]) -> Vec<i64> {
        q.iter()
            .map(|c| {
                assert!(c.is_integer(), "non-integer coefficient {c}");
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn subset_polys_of_quadratic() {
        // 2z^2 - 3z + 1 = 2 (z - 1)(z - 1/2)
        let mut t = TieOracle::new(&ints(&[2, -3, 1]));
        assert_eq!(as_i64(&t.subset_poly(0)), vec![-2, 1]);
        // single-root products 2 and 1
        assert_eq!(as_i64(&t.subset_poly(1)), vec![2, -3, 1]);
        assert_eq!(as_i64(&t.subset_poly(2)), vec![-1, 1]);
    }

    #[test]
    fn subset_polys_are_integral() {
        let mut t = TieOracle::new(&ints(&[3, -1, 4, 1, -5]));
        for k in 0..=4 {
            let q = t.subset_poly(k);
            assert_eq!(q.len(), binomial(4usize, k) + 1);
            assert!(q.iter().all(|c| c.is_integer()));
            assert!(q.last().unwrap().is_one());
        }
    }

    #[test]
    fn separation_detects_exact_tie() {
        // z^2 - 2: mu = 2 with both roots outside; Q_2(x) = x + 2. The -T
        // branch is an exact hit, the +T branch leaves |Q_2(2)| = 4.
        let mut t = TieOracle::new(&ints(&[1, 0, -2]));
        let two = BigRational::from_integer(BigInt::from(2));
        let s = t.separation(2, &two, &BigRational::from_integer(BigInt::from(3)));
        assert!(s.tie);
        assert_eq!(s.sep, Some(BigRational::from_integer(BigInt::from(4))));
        let s = t.separation(2, &BigRational::new(5.into(), 2.into()), &two);
        assert!(!s.tie);
        assert!(s.sep.unwrap() > BigRational::zero());
    }
}
