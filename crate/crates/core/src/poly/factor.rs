//! Factorization over Z for small degrees.
//!
//! After removing the content, powers of z and repeated factors, a squarefree
//! part is split by trying subsets of certified root approximations: the
//! scaled elementary symmetric functions of a subset must round to integers,
//! and the candidate is accepted only if it divides exactly. Subsets are
//! tried by increasing size, so every factor found is irreducible; size one
//! is the rational-root test.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use super::arith::{self, ZPoly};
use super::dyadic::{self, ceil_sqrt};
use super::roots;
use super::IntPoly;
use crate::error::{Error, Result};

/// Largest degree accepted by [`factor_over_z`].
pub const FACTOR_DEGREE_CAP: usize = 12;

/// `p = unit * prod f_i^{e_i}` with irreducible primitive `f_i` of positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Signed content of `p`.
    pub unit: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> IntPoly {
        let mut acc: ZPoly = vec![self.unit.clone()];
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = arith::mul(&acc, &f.ascending());
            }
        }
        IntPoly::from_ascending(acc)
    }

    /// Factors repeated according to multiplicity.
    pub fn factor_list(&self) -> Vec<IntPoly> {
        self.factors
            .iter()
            .flat_map(|(f, e)| std::iter::repeat_n(f.clone(), *e as usize))
            .collect()
    }

    /// Number of irreducible factors counted with multiplicity.
    pub fn len_with_multiplicity(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

pub fn factor_over_z(p: &IntPoly) -> Result<Factorization> {
    let Some(deg) = p.degree() else {
        return Err(Error::Invalid("cannot factor the zero polynomial".into()));
    };
    if deg > FACTOR_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: deg,
            cap: FACTOR_DEGREE_CAP,
        });
    }
    let asc = p.ascending();
    let zpow = asc.iter().take_while(|c| c.is_zero()).count();
    let (unit, parts) = arith::squarefree(&asc[zpow..]);
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    if zpow > 0 {
        factors.push((IntPoly::from_i64(&[1, 0]), zpow as u32));
    }
    for (f, e) in parts {
        for g in split_squarefree(&f)? {
            factors.push((IntPoly::from_ascending(g), e));
        }
    }
    factors.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(Factorization { unit, factors })
}

/// Irreducible in Z[z]: primitive and without a factorization into two
/// polynomials of positive degree.
pub fn is_irreducible(p: &IntPoly) -> Result<bool> {
    match p.degree() {
        None | Some(0) => return Ok(false),
        Some(_) if !p.is_primitive() => return Ok(false),
        _ => {}
    }
    let f = factor_over_z(p)?;
    Ok(f.len_with_multiplicity() == 1)
}

/// Degree at least two and a product of two polynomials of positive degree
/// (reducibility over Q; the content plays no role).
pub fn is_reducible(p: &IntPoly) -> Result<bool> {
    match p.degree() {
        None | Some(0) | Some(1) => Ok(false),
        Some(_) => Ok(factor_over_z(p)?.len_with_multiplicity() >= 2),
    }
}

/// Fast path of [`is_reducible`] for small machine-integer coefficients.
pub(crate) fn is_reducible_i64(w: &[i64]) -> bool {
    let Some(first) = w.iter().position(|&c| c != 0) else {
        return false;
    };
    let p = &w[first..];
    let n = p.len() - 1;
    if n <= 1 {
        return false;
    }
    if p[n] == 0 {
        return true;
    }
    match n {
        2 => {
            let (a, b, c) = (p[0] as i128, p[1] as i128, p[2] as i128);
            let disc = b * b - 4 * a * c;
            disc >= 0 && is_square(disc)
        }
        3 => has_rational_root_cubic(p),
        _ => is_reducible(&IntPoly::from_i64(p)).expect("degree within the cap"),
    }
}

fn is_square(x: i128) -> bool {
    let r = x.sqrt();
    r * r == x
}

fn positive_divisors_i64(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(i as i64);
            if i * i != n {
                out.push((n / i) as i64);
            }
        }
        i += 1;
    }
    out
}

fn has_rational_root_cubic(p: &[i64]) -> bool {
    let (a, b, c, d) = (p[0] as i128, p[1] as i128, p[2] as i128, p[3] as i128);
    let qs = positive_divisors_i64(p[0]);
    for r in positive_divisors_i64(p[3]) {
        for &q in &qs {
            if r.gcd(&q) != 1 {
                continue;
            }
            let (q, r) = (q as i128, r as i128);
            for r in [r, -r] {
                if a * r * r * r + b * r * r * q + c * r * q * q + d * q * q * q == 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Root approximations `z_i / 2^s` with a bijection to the true roots such
/// that each root lies within `r_i / 2^s` of its center.
struct RootApprox {
    z: Vec<(BigInt, BigInt)>,
    r: Vec<BigInt>,
    s: u32,
}

fn approx_from_f64(desc: &[f64]) -> Option<RootApprox> {
    let n = desc.len() - 1;
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    roots::circle_start(desc, &mut z);
    roots::aberth(desc, &mut z);
    let mut r = vec![0.0; n];
    roots::inclusion_radii(desc, &z, &mut r);
    let comp = roots::disk_components(&z, &r);
    let s = 60u32;
    let scale = (1u64 << s) as f64;
    let mut zf = Vec::with_capacity(n);
    let mut rf = Vec::with_capacity(n);
    for i in 0..n {
        let mut far = r[i];
        for j in 0..n {
            if j != i && comp[j] == comp[i] {
                far = far.max((z[i] - z[j]).norm() + r[j]);
            }
        }
        if !far.is_finite() || far * scale > 1e36 {
            return None;
        }
        if (z[i].re * scale).abs() > 1e36 || (z[i].im * scale).abs() > 1e36 {
            return None;
        }
        let to_fixed = |x: f64| BigInt::from((x * scale).round() as i128);
        zf.push((to_fixed(z[i].re), to_fixed(z[i].im)));
        rf.push(BigInt::from((far * scale * (1.0 + 1e-9)).ceil() as i128 + 2));
    }
    Some(RootApprox { z: zf, r: rf, s })
}

fn approx_from_dyadic(asc: &[BigInt], bits: u32) -> Option<RootApprox> {
    let c = dyadic::certify_squarefree(asc, bits)?;
    let n = c.roots_fixed.len();
    // Enlarge radii to whole components, as in the f64 case.
    let mut r = c.radii_fixed.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (dx, dy) = (
                &c.roots_fixed[i].0 - &c.roots_fixed[j].0,
                &c.roots_fixed[i].1 - &c.roots_fixed[j].1,
            );
            let gap_sq = &dx * &dx + &dy * &dy;
            let reach = &c.radii_fixed[i] + &c.radii_fixed[j];
            if gap_sq <= &reach * &reach {
                let far = ceil_sqrt(&gap_sq) + &c.radii_fixed[j] + &c.radii_fixed[i];
                if far > r[i] {
                    r[i] = far;
                }
            }
        }
    }
    Some(RootApprox {
        z: c.roots_fixed,
        r,
        s: c.scale,
    })
}

enum Search {
    Found(ZPoly),
    None,
    NeedPrecision,
}

/// Splits a primitive squarefree polynomial into irreducible factors.
fn split_squarefree(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut k = 1;
    while 2 * k <= rest.len() - 1 {
        match find_factor(&rest, k)? {
            Some(g) => {
                rest = arith::div_exact(&rest, &g).expect("candidate divides");
                out.push(g);
            }
            None => k += 1,
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    Ok(out)
}

fn find_factor(f: &ZPoly, k: usize) -> Result<Option<ZPoly>> {
    let desc_f64: Option<Vec<f64>> = IntPoly::from_ascending(f.clone()).to_f64();
    if let Some(approx) = desc_f64.as_deref().and_then(approx_from_f64) {
        match search(f, k, &approx) {
            Search::Found(g) => return Ok(Some(g)),
            Search::None => return Ok(None),
            Search::NeedPrecision => {}
        }
    }
    for bits in [128u32, 256, 512, 1024, 2048] {
        if let Some(approx) = approx_from_dyadic(f, bits) {
            match search(f, k, &approx) {
                Search::Found(g) => return Ok(Some(g)),
                Search::None => return Ok(None),
                Search::NeedPrecision => {}
            }
        }
    }
    Err(Error::Undecided { bits: 2048 })
}

/// Tries every size-`k` subset of roots and every positive divisor of the
/// leading coefficient as the leading coefficient of a factor.
fn search(f: &ZPoly, k: usize, a: &RootApprox) -> Search {
    let n = a.z.len();
    let lead = f.last().unwrap();
    let divisors = arith::positive_divisors(lead);
    let moduli_hi: Vec<BigInt> = a
        .z
        .iter()
        .map(|(x, y)| ceil_sqrt(&(x * x + y * y)))
        .collect();
    let mut ambiguous = false;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        match try_subset(f, &idx, a, &moduli_hi, &divisors) {
            Search::Found(g) => return Search::Found(g),
            Search::NeedPrecision => ambiguous = true,
            Search::None => {}
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return if ambiguous {
                    Search::NeedPrecision
                } else {
                    Search::None
                };
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn try_subset(
    f: &ZPoly,
    idx: &[usize],
    a: &RootApprox,
    moduli_hi: &[BigInt],
    divisors: &[BigInt],
) -> Search {
    let k = idx.len();
    let s = a.s as usize;
    // After the loop every slot is scaled by 2^{s k}: e holds e_j(z_S), hi
    // and base hold e_j(|z| + r) and e_j(|z|) over the subset.
    let mut e_re = vec![BigInt::zero(); k + 1];
    let mut e_im = vec![BigInt::zero(); k + 1];
    let mut hi = vec![BigInt::zero(); k + 1];
    let mut base = vec![BigInt::zero(); k + 1];
    e_re[0] = BigInt::one();
    hi[0] = BigInt::one();
    base[0] = BigInt::one();
    for &i in idx {
        let (x, y) = &a.z[i];
        let u = &moduli_hi[i];
        let ur = u + &a.r[i];
        for j in (1..=k).rev() {
            let (pr, pi) = (&e_re[j - 1], &e_im[j - 1]);
            let re = (&e_re[j] << s) + pr * x - pi * y;
            let im = (&e_im[j] << s) + pr * y + pi * x;
            e_re[j] = re;
            e_im[j] = im;
            hi[j] = (&hi[j] << s) + &hi[j - 1] * &ur;
            base[j] = (&base[j] << s) + &base[j - 1] * u;
        }
        e_re[0] <<= s;
        hi[0] <<= s;
        base[0] <<= s;
    }
    let unit = BigInt::one() << (s * k);
    let mut need = false;
    'div: for g0 in divisors {
        let mut desc = vec![g0.clone()];
        for j in 1..=k {
            let err = g0 * (&hi[j] - &base[j]);
            if &err * 2 >= unit {
                need = true;
                continue 'div;
            }
            let re = g0 * &e_re[j];
            let im = g0 * &e_im[j];
            if im.abs() > err {
                continue 'div;
            }
            let (q, rem) = re.div_mod_floor(&unit);
            let near = if &rem * 2 >= unit { q + 1 } else { q };
            if (&re - &near * &unit).abs() > err {
                continue 'div;
            }
            desc.push(if j % 2 == 1 { -near } else { near });
        }
        let asc: ZPoly = desc.into_iter().rev().collect();
        if arith::div_exact(f, &asc).is_some() {
            return Search::Found(asc);
        }
    }
    if need {
        Search::NeedPrecision
    } else {
        Search::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> IntPoly {
        IntPoly::from_i64(v)
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        let f = factor_over_z(&poly(&[1, 0, 0, 0, 4])).unwrap();
        assert_eq!(f.unit, BigInt::one());
        assert_eq!(
            f.factors,
            vec![(poly(&[1, -2, 2]), 1), (poly(&[1, 2, 2]), 1)]
        );
        assert_eq!(f.expand(), poly(&[1, 0, 0, 0, 4]));
    }

    #[test]
    fn content_powers_of_z_and_repeats() {
        // -6 z^2 (z - 1)^2 (2z + 1)
        let p = poly(&[-1, 1])
            .mul(&poly(&[-1, 1]))
            .mul(&poly(&[2, 1]))
            .mul(&poly(&[-6, 0, 0]));
        let f = factor_over_z(&p).unwrap();
        assert_eq!(f.unit, BigInt::from(-6));
        assert_eq!(f.expand(), p);
        assert_eq!(f.len_with_multiplicity(), 5);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&poly(&[1, 0, -1, -1])).unwrap());
        assert!(!is_irreducible(&poly(&[2, 0, 2])).unwrap());
        assert!(is_reducible(&poly(&[1, 0, -1])).unwrap());
        assert!(!is_reducible(&poly(&[2, 0, 2])).unwrap());
        assert!(is_irreducible(&poly(&[1, -4, 0, 0, -1])).unwrap());
    }

    #[test]
    fn fast_path_agrees() {
        for w in [[1i64, 0, -4], [2, 3, 1], [1, 1, 1], [0, 1, 2]] {
            assert_eq!(is_reducible_i64(&w), is_reducible(&poly(&w)).unwrap(), "{w:?}");
        }
        for w in [[1i64, 0, 0, -2], [2, -3, -3, 2], [1, 0, -1, -1], [3, 0, 0, 0]] {
            assert_eq!(is_reducible_i64(&w), is_reducible(&poly(&w)).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn degree_cap() {
        let p = IntPoly::from_i64(&[1; 14]);
        assert!(matches!(factor_over_z(&p), Err(Error::DegreeCap { .. })));
    }
}
