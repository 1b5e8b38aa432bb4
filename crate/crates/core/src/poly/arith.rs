//! Dense integer polynomials in ascending order (index = power of z).
//!
//! The empty vector is the zero polynomial; every other value is kept
//! trimmed so the last entry is nonzero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Nonnegative gcd of the coefficients; zero for the zero polynomial.
pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content and makes the leading coefficient positive.
pub(crate) fn primitive(p: &[BigInt]) -> ZPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut c = content(p);
    if p.last().unwrap().is_negative() {
        c = -c;
    }
    p.iter().map(|x| x / &c).collect()
}

pub(crate) fn derivative(p: &[BigInt]) -> ZPoly {
    let mut d: ZPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut d);
    d
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient `a / b` when `b` divides `a` in Z[z], otherwise `None`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b).expect("division by the zero polynomial");
    let Some(da) = degree(a) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let lb = &b[db];
    let mut r: ZPoly = a.to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let top = &r[i + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: ZPoly = a.to_vec();
    trim(&mut r);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd with positive leading coefficient (primitive PRS).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    x
}

/// Squarefree decomposition `p = unit * prod f_i^{e_i}` with each `f_i`
/// primitive, squarefree, of positive degree and positive leading
/// coefficient. `unit` carries the content and sign of `p`.
pub(crate) fn squarefree(p: &[BigInt]) -> (BigInt, Vec<(ZPoly, u32)>) {
    if p.is_empty() {
        return (BigInt::zero(), Vec::new());
    }
    let mut unit = content(p);
    if p.last().unwrap().is_negative() {
        unit = -unit;
    }
    let f = primitive(p);
    let mut out = Vec::new();
    if f.len() == 1 {
        return (unit, out);
    }
    let mut g = gcd(&f, &derivative(&f));
    let mut s1 = div_exact(&f, &g).expect("gcd divides f");
    let mut k = 1u32;
    while s1.len() > 1 {
        let s2 = gcd(&s1, &g);
        let fk = div_exact(&s1, &s2).expect("gcd divides s1");
        if fk.len() > 1 {
            out.push((fk, k));
        }
        g = div_exact(&g, &s2).expect("gcd divides g");
        s1 = s2;
        k += 1;
    }
    (unit, out)
}

/// Positive divisors of `n` (n != 0), ascending.
pub(crate) fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            let j = &n / &i;
            if j != i {
                large.push(j);
            }
            small.push(i.clone());
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        let mut p: ZPoly = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn exact_division_and_remainders() {
        let a = mul(&z(&[-1, 1]), &z(&[2, 0, 1]));
        assert_eq!(div_exact(&a, &z(&[-1, 1])), Some(z(&[2, 0, 1])));
        assert_eq!(div_exact(&a, &z(&[1, 1])), None);
        assert_eq!(div_exact(&z(&[1, 2]), &z(&[0, 2])), None);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = z(&[-1, 1]);
        let a = mul(&f, &z(&[3, 0, 1]));
        let b = mul(&f, &z(&[5, 2]));
        assert_eq!(gcd(&a, &b), f);
        assert_eq!(gcd(&z(&[1, 1]), &z(&[1, -1])), z(&[1]));
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // -6 (z - 1)^2 (z + 2)
        let p = mul(&mul(&z(&[-1, 1]), &z(&[-1, 1])), &z(&[-12, -6]));
        let (unit, parts) = squarefree(&p);
        assert_eq!(unit, BigInt::from(-6));
        assert_eq!(parts, vec![(z(&[2, 1]), 1), (z(&[-1, 1]), 2)]);
    }

    #[test]
    fn divisors_are_sorted() {
        let d: Vec<i64> = positive_divisors(&BigInt::from(-12))
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
