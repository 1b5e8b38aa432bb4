//! Arbitrary-precision refinement on a fixed binary scale.
//!
//! Root approximations are Gaussian integers `Z = X + iY` standing for
//! `Z / 2^s`. Iterations truncate freely; the inclusion radii are then
//! computed from exact evaluations at those dyadic points and rounded
//! outward, so the resulting measure bounds are rigorous rationals.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::roots;

const MAX_ITER: usize = 120;

#[derive(Clone, Debug, PartialEq)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

impl Cx {
    fn zero() -> Self {
        Cx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// Exact product of Gaussian integers.
    fn mul_exact(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    /// Fixed-point product at scale `s`.
    fn mul(&self, o: &Cx, s: u32) -> Cx {
        let p = self.mul_exact(o);
        Cx {
            re: p.re >> s,
            im: p.im >> s,
        }
    }

    fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Fixed-point quotient at scale `s`; `None` when dividing by zero.
    fn div(&self, o: &Cx, s: u32) -> Option<Cx> {
        let den = o.norm_sqr();
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << s;
        let im = (&self.im * &o.re - &self.re * &o.im) << s;
        Some(Cx {
            re: re.div_floor(&den),
            im: im.div_floor(&den),
        })
    }

    fn from_f64(z: Complex64, s: u32) -> Cx {
        Cx {
            re: scale_f64(z.re, s),
            im: scale_f64(z.im, s),
        }
    }

    fn to_f64(&self, s: u32) -> Complex64 {
        Complex64::new(unscale(&self.re, s), unscale(&self.im, s))
    }
}

fn scale_f64(x: f64, s: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let r = BigRational::from_float(x).unwrap() * BigRational::from_integer(BigInt::one() << s);
    r.floor().to_integer()
}

fn unscale(x: &BigInt, s: u32) -> f64 {
    BigRational::new(x.clone(), BigInt::one() << s)
        .to_f64()
        .unwrap_or(f64::NAN)
}

pub(crate) fn ceil_sqrt(x: &BigInt) -> BigInt {
    let r = x.sqrt();
    if &r * &r < *x {
        r + 1
    } else {
        r
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

/// Certified data for one squarefree integer factor.
#[derive(Clone, Debug)]
pub(crate) struct FactorCert {
    pub lo: BigRational,
    pub hi: BigRational,
    pub k_out: usize,
    pub k_unc: usize,
    pub centers: Vec<Complex64>,
    /// Radius around each center that certainly contains a root.
    pub radii: Vec<f64>,
    pub roots_fixed: Vec<(BigInt, BigInt)>,
    pub scale: u32,
    pub radii_fixed: Vec<BigInt>,
}

/// Certifies the measure of a squarefree integer polynomial (ascending, degree
/// >= 1) at `bits` fractional bits, starting from f64 approximations.
pub(crate) fn certify_squarefree(f: &[BigInt], bits: u32) -> Option<FactorCert> {
    let n = f.len() - 1;
    let desc: Vec<BigInt> = f.iter().rev().cloned().collect();
    let s = bits;
    let start = initial_guess(&desc);
    let mut z: Vec<Cx> = start.iter().map(|&c| Cx::from_f64(c, s)).collect();
    refine(&desc, &mut z, s);
    radii_and_bounds(&desc, &z, s, n)
}

fn initial_guess(desc: &[BigInt]) -> Vec<Complex64> {
    let n = desc.len() - 1;
    // Scale coefficients into f64 range; roots are unaffected.
    let top = desc.iter().map(|c| c.bits()).max().unwrap_or(0);
    let shift = top.saturating_sub(900);
    let w: Vec<f64> = desc
        .iter()
        .map(|c| {
            let v: BigInt = c >> shift;
            v.to_f64().unwrap_or(0.0)
        })
        .collect();
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    if w[0] != 0.0 {
        roots::circle_start(&w, &mut z);
        roots::aberth(&w, &mut z);
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        for (k, c) in z.iter_mut().enumerate() {
            *c = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64 + 0.7);
        }
    }
    // Nudge exact coincidences so the Aberth correction is defined.
    for i in 0..n {
        for j in 0..i {
            if z[i] == z[j] {
                z[i] += Complex64::new(1e-9 * (i as f64 + 1.0), 1e-9);
            }
        }
    }
    z
}

fn horner_fixed(desc: &[BigInt], z: &Cx, s: u32) -> (Cx, Cx) {
    let mut p = Cx {
        re: &desc[0] << s,
        im: BigInt::zero(),
    };
    let mut dp = Cx::zero();
    for c in &desc[1..] {
        dp = dp.mul(z, s).add(&p);
        p = p.mul(z, s);
        p.re += c << s;
    }
    (p, dp)
}

fn refine(desc: &[BigInt], z: &mut [Cx], s: u32) {
    let n = z.len();
    let one = Cx {
        re: BigInt::one() << s,
        im: BigInt::zero(),
    };
    let tol = BigInt::one() << 16u32;
    for _ in 0..MAX_ITER {
        let mut max_step = BigInt::zero();
        for i in 0..n {
            let (p, dp) = horner_fixed(desc, &z[i], s);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let Some(ratio) = p.div(&dp, s) else {
                z[i].re += BigInt::one() << (s / 2);
                max_step = max_step.max(BigInt::one() << (s / 2));
                continue;
            };
            let mut sum = Cx::zero();
            for j in 0..n {
                if j != i {
                    if let Some(inv) = one.div(&z[i].sub(&z[j]), s) {
                        sum = sum.add(&inv);
                    }
                }
            }
            let denom = one.sub(&ratio.mul(&sum, s));
            let w = ratio.div(&denom, s).unwrap_or(ratio);
            let step = w.re.abs().max(w.im.abs());
            z[i] = z[i].sub(&w);
            if step > max_step {
                max_step = step;
            }
        }
        if max_step <= tol {
            break;
        }
    }
}

fn radii_and_bounds(desc: &[BigInt], z: &[Cx], s: u32, n: usize) -> Option<FactorCert> {
    let a0 = &desc[0];
    let a0_sq = a0 * a0;
    let n_sq = BigInt::from(n * n);
    // Coefficient a_k scaled by 2^{s k} for the exact evaluation.
    let shifted: Vec<BigInt> = desc
        .iter()
        .enumerate()
        .map(|(k, c)| c << (s as usize * k))
        .collect();
    let mut radius = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = Cx {
            re: desc[0].clone(),
            im: BigInt::zero(),
        };
        for c in &shifted[1..] {
            v = v.mul_exact(&z[i]);
            v.re += c;
        }
        let mut prod = Cx {
            re: BigInt::one(),
            im: BigInt::zero(),
        };
        for j in 0..n {
            if j != i {
                prod = prod.mul_exact(&z[i].sub(&z[j]));
            }
        }
        let den = &a0_sq * prod.norm_sqr();
        if den.is_zero() {
            return None;
        }
        let num = &n_sq * v.norm_sqr();
        radius.push(ceil_sqrt(&ceil_div(&num, &den)));
    }
    let mod_sq: Vec<BigInt> = z.iter().map(|c| c.norm_sqr()).collect();
    let mod_lo: Vec<BigInt> = mod_sq.iter().map(|m| m.sqrt()).collect();
    let mod_hi: Vec<BigInt> = mod_sq.iter().map(ceil_sqrt).collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = z[i].sub(&z[j]).norm_sqr();
            let reach = &radius[i] + &radius[j];
            if gap <= &reach * &reach {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let comp: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();

    let one = BigInt::one() << s;
    let mut lo_num = a0.abs();
    let mut hi_num = a0.abs();
    let (mut k_out, mut k_unc) = (0, 0);
    let mut centers = Vec::with_capacity(n);
    let mut radii = vec![0.0; n];
    for c in 0..n {
        if comp[c] != c {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == c).collect();
        let m = members.len();
        let clo = members
            .iter()
            .map(|&i| &mod_lo[i] - &radius[i])
            .min()
            .unwrap();
        let chi = members
            .iter()
            .map(|&i| &mod_hi[i] + &radius[i])
            .max()
            .unwrap();
        if clo > one {
            k_out += m;
        } else if chi >= one {
            k_unc += m;
        }
        let flo = if clo > one { clo } else { one.clone() };
        let fhi = if chi > one { chi } else { one.clone() };
        for _ in 0..m {
            lo_num *= &flo;
            hi_num *= &fhi;
        }
        // Every member's center is within this distance of all roots in
        // the component.
        for &i in &members {
            let mut far = BigInt::zero();
            for &j in &members {
                let d = ceil_sqrt(&z[i].sub(&z[j]).norm_sqr()) + &radius[j];
                if d > far {
                    far = d;
                }
            }
            radii[i] = unscale(&(far + 1), s) * (1.0 + 1e-12);
        }
    }
    for zi in z {
        centers.push(zi.to_f64(s));
    }
    let den = BigInt::one() << (s as usize * n);
    Some(FactorCert {
        lo: BigRational::new(lo_num, den.clone()),
        hi: BigRational::new(hi_num, den),
        k_out,
        k_unc,
        centers,
        radii,
        roots_fixed: z.iter().map(|c| (c.re.clone(), c.im.clone())).collect(),
        scale: s,
        radii_fixed: radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asc(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn golden_ratio_tight_at_256_bits() {
        let c = certify_squarefree(&asc(&[-1, -1, 1]), 256).unwrap();
        let width = (&c.hi - &c.lo).to_f64().unwrap();
        assert!(width < 1e-60, "width {width}");
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((c.lo.to_f64().unwrap() - phi).abs() < 1e-15);
        assert_eq!((c.k_out, c.k_unc), (1, 0));
    }

    #[test]
    fn cyclotomic_interval_contains_one() {
        let c = certify_squarefree(&asc(&[1, 1, 1]), 128).unwrap();
        assert!(c.lo <= BigRational::one() && BigRational::one() <= c.hi);
        assert_eq!(c.k_unc, 2);
    }

    #[test]
    fn huge_coefficients() {
        // (z - 10^30)(z - 1/... ) style: 10^30 z^2 - 1
        let big = BigInt::from(10).pow(30);
        let f = vec![BigInt::from(-1), BigInt::zero(), big.clone()];
        let c = certify_squarefree(&f, 128).unwrap();
        let mu = BigRational::from_integer(big);
        assert!(c.lo <= mu && mu <= c.hi);
    }
}
