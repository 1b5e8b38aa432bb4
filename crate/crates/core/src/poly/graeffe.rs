//! Root-free screening of `mu(p) <= T` by exact Graeffe iteration.
//!
//! The k-th Graeffe iterate `g` has roots `a_i^(2^k)` and measure
//! `mu^(2^k)`. Two elementary facts then decide most candidates without
//! locating a single root:
//! `|g_i| <= C(n, i) mu(g)` (so a large coefficient forces `mu > T`) and
//! `mu(g) <= |g|_2` (so a small coefficient vector forces `mu <= T`).
//! All arithmetic is exact in i128; an overflow just means no verdict.

use num_rational::BigRational;
use num_traits::ToPrimitive;

const ITERATIONS: usize = 3;
const MAX_DEGREE: usize = 16;

#[derive(Clone, Copy)]
struct Powers {
    /// `a^(2^k)` and `b^(2^k)` for `T = a / b`.
    a: Option<i128>,
    b: Option<i128>,
    /// Squares of the above.
    a2: Option<i128>,
    b2: Option<i128>,
}

/// Thresholds `T_0 < T_1 < ...` prepared for repeated screening.
pub(crate) struct Screen {
    powers: Vec<[Powers; ITERATIONS + 1]>,
    binom: [[i128; MAX_DEGREE + 1]; MAX_DEGREE + 1],
}

impl Screen {
    /// Thresholds must be positive and strictly increasing.
    pub(crate) fn new(thresholds: &[BigRational]) -> Self {
        let powers = thresholds
            .iter()
            .map(|t| {
                let a = t.numer().to_i128();
                let b = t.denom().to_i128();
                let mut out = [Powers {
                    a: None,
                    b: None,
                    a2: None,
                    b2: None,
                }; ITERATIONS + 1];
                let (mut pa, mut pb) = (a, b);
                for slot in out.iter_mut() {
                    let sq = |x: Option<i128>| x.and_then(|v| v.checked_mul(v));
                    *slot = Powers {
                        a: pa,
                        b: pb,
                        a2: sq(pa),
                        b2: sq(pb),
                    };
                    pa = sq(pa);
                    pb = sq(pb);
                }
                out
            })
            .collect();
        let mut binom = [[0i128; MAX_DEGREE + 1]; MAX_DEGREE + 1];
        for n in 0..=MAX_DEGREE {
            binom[n][0] = 1;
            for i in 1..=n {
                binom[n][i] = binom[n - 1][i - 1] + if i < n { binom[n - 1][i] } else { 0 };
            }
        }
        Screen { powers, binom }
    }

    pub(crate) fn len(&self) -> usize {
        self.powers.len()
    }

    /// Returns `(lo, hi)` with `mu > T_j` proved for `j < lo` and `mu <= T_j`
    /// proved for `j >= hi`. `w` must have nonzero first and last entries and
    /// degree at least one.
    pub(crate) fn bracket(&self, w: &[i64]) -> (usize, usize) {
        let k_len = self.powers.len();
        let n = w.len() - 1;
        if n == 0 || n > MAX_DEGREE {
            return (0, k_len);
        }
        let mut g: Vec<i128> = w.iter().map(|&c| c as i128).collect();
        let mut hi = k_len;
        let mut lo = 0;
        for k in 0..=ITERATIONS {
            if k > 0 {
                match graeffe_step(&g) {
                    Some(next) => g = next,
                    None => break,
                }
            }
            // lower bound: some |g_i| > C(n, i) T^(2^k)
            while lo < hi {
                let p = &self.powers[lo][k];
                let (Some(a), Some(b)) = (p.a, p.b) else { break };
                let exceeds = g.iter().enumerate().any(|(i, &c)| {
                    match (c.abs().checked_mul(b), self.binom[n][i].checked_mul(a)) {
                        (Some(l), Some(r)) => l > r,
                        _ => false,
                    }
                });
                if !exceeds {
                    break;
                }
                lo += 1;
            }
            // upper bound: sum g_i^2 <= T^(2^(k+1))
            let Some(norm2) = g
                .iter()
                .try_fold(0i128, |acc, &c| c.checked_mul(c).and_then(|s| acc.checked_add(s)))
            else {
                continue;
            };
            while hi > lo {
                let p = &self.powers[hi - 1][k];
                let (Some(a2), Some(b2)) = (p.a2, p.b2) else { break };
                match norm2.checked_mul(b2) {
                    Some(l) if l <= a2 => hi -= 1,
                    _ => break,
                }
            }
            if lo == hi {
                break;
            }
        }
        (lo, hi)
    }
}

/// One Graeffe step on descending coefficients, up to sign.
fn graeffe_step(c: &[i128]) -> Option<Vec<i128>> {
    let n = c.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    // Work on ascending indices: a_j = c[n - j].
    for m in 0..=n {
        let mut acc: i128 = 0;
        let lo = (2 * m).saturating_sub(n);
        let hi = (2 * m).min(n);
        for j in lo..=hi {
            let i = 2 * m - j;
            let term = c[n - i].checked_mul(c[n - j])?;
            acc = if j % 2 == 0 {
                acc.checked_add(term)?
            } else {
                acc.checked_sub(term)?
            };
        }
        out.push(acc);
    }
    out.reverse();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn graeffe_squares_roots() {
        // (z - 2)(z + 3) -> (w - 4)(w - 9) up to sign
        let g = graeffe_step(&[1, 1, -6]).unwrap();
        assert_eq!(g.iter().map(|c| c.abs()).collect::<Vec<_>>(), vec![1, 13, 36]);
    }

    #[test]
    fn brackets_are_consistent_with_true_measure() {
        // z^2 - 3z + 1: mu = phi^2 ~ 2.618
        let s = Screen::new(&[rat(1, 1), rat(2, 1), rat(5, 2), rat(27, 10), rat(4, 1), rat(10, 1)]);
        let (lo, hi) = s.bracket(&[1, -3, 1]);
        assert!(lo <= 3, "lo {lo}");
        assert!(hi >= 3, "hi {hi}");
        assert!(lo >= 1);
        assert!(hi <= 5);
    }

    #[test]
    fn cyclotomic_screens_as_small() {
        let s = Screen::new(&[rat(1, 1), rat(3, 2)]);
        // z^2 + z + 1 has mu = 1 but |w|_2 = sqrt 3; after iterating the
        // norm bound still exceeds 1, so only T = 3/2 might be certified.
        let (lo, hi) = s.bracket(&[1, 1, 1]);
        assert_eq!(lo, 0);
        assert!(hi >= 1);
    }
}
