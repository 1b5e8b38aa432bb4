//! Certified Mahler measures and exact threshold comparisons.
//!
//! A comparison first tries a double-precision enclosure, then refines on the
//! ladder 128, 256, 512 bits. Whenever the threshold sits inside the current
//! enclosure, the subset-product polynomials give a separation bound: once the
//! enclosure is narrower than it, the threshold must equal the measure.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{self, ZPoly};
use super::dyadic;
use super::roots::{self, F64Cert, RootWorkspace};
use super::tie::TieOracle;
use super::IntPoly;
use crate::error::{Error, Result};

/// Precisions tried in order; 53 stands for native double precision.
pub const PRECISION_LADDER: [u32; 4] = [53, 128, 256, 512];

/// Rigorous enclosure `lower <= mu(p) <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureCertificate {
    pub lower: BigRational,
    pub upper: BigRational,
    /// Highest precision that contributed to the enclosure.
    pub precision_bits: u32,
    /// `mu(p).cmp(T)` when a threshold was supplied.
    pub decision: Option<Ordering>,
}

impl MeasureCertificate {
    /// True when the supplied threshold equals the measure exactly.
    pub fn exact_hit(&self) -> bool {
        self.decision == Some(Ordering::Equal)
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64().unwrap_or(0.0)
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn midpoint(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

/// Root approximations with radii that each contain a true root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub radii: Vec<f64>,
    pub precision_bits: u32,
    /// False when the iteration stalled and the radii may be infinite.
    pub certified: bool,
}

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
    k_out: usize,
    k_unc: usize,
    bits: u32,
}

enum Shape {
    /// Measure known exactly (zero polynomial, constants, linear).
    Exact(BigInt),
    /// Descending coefficients, degree >= 2, nonzero lead and trail.
    General(Vec<BigInt>),
}

/// Cached state for repeated exact comparisons of one polynomial.
pub struct MeasureOracle {
    shape: Shape,
    f64_cert: Option<Option<F64Cert>>,
    squarefree: Option<(BigInt, Vec<(ZPoly, u32)>)>,
    best: Option<Interval>,
    tie: Option<TieOracle>,
}

/// Strips leading zeros and factors of z; returns `None` for the zero vector.
fn strip(coeffs: &[BigInt]) -> Option<&[BigInt]> {
    let first = coeffs.iter().position(|c| !c.is_zero())?;
    let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
    Some(&coeffs[first..=last])
}

fn linear_measure(a: &BigInt, b: &BigInt) -> BigInt {
    a.abs().max(b.abs())
}

fn rat(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

impl MeasureOracle {
    pub fn new(p: &IntPoly) -> Self {
        let shape = match strip(p.coeffs()) {
            None => Shape::Exact(BigInt::zero()),
            Some(s) if s.len() == 1 => Shape::Exact(s[0].abs()),
            Some(s) if s.len() == 2 => Shape::Exact(linear_measure(&s[0], &s[1])),
            Some(s) => Shape::General(s.to_vec()),
        };
        MeasureOracle {
            shape,
            f64_cert: None,
            squarefree: None,
            best: None,
            tie: None,
        }
    }

    /// Oracle primed with a double-precision certificate already computed for
    /// the same coefficients.
    pub(crate) fn with_f64_cert(w: &[i64], cert: F64Cert) -> Self {
        let mut o = Self::new(&IntPoly::from_i64(w));
        o.f64_cert = Some(Some(cert));
        o
    }

    /// The exact measure when the polynomial has degree at most one.
    pub fn exact_value(&self) -> Option<&BigInt> {
        match &self.shape {
            Shape::Exact(m) => Some(m),
            Shape::General(_) => None,
        }
    }

    fn desc(&self) -> &[BigInt] {
        match &self.shape {
            Shape::General(d) => d,
            Shape::Exact(_) => unreachable!("no roots to refine"),
        }
    }

    fn f64_interval(&mut self) -> Option<Interval> {
        if self.f64_cert.is_none() {
            let cert = IntPoly::new(self.desc().to_vec())
                .to_f64()
                .map(|w| RootWorkspace::new().certify(&w));
            self.f64_cert = Some(cert);
        }
        let c = self.f64_cert.unwrap()?;
        if !(c.hi.is_finite() && c.lo.is_finite()) {
            return None;
        }
        Some(Interval {
            lo: rat(c.lo.max(0.0))?,
            hi: rat(c.hi)?,
            k_out: c.k_out,
            k_unc: c.k_unc,
            bits: 53,
        })
    }

    fn exact_interval(&mut self, bits: u32) -> Option<Interval> {
        if self.squarefree.is_none() {
            let asc: ZPoly = self.desc().iter().rev().cloned().collect();
            self.squarefree = Some(arith::squarefree(&asc));
        }
        let (unit, parts) = self.squarefree.as_ref().unwrap();
        let mut lo = BigRational::from_integer(unit.abs());
        let mut hi = lo.clone();
        let (mut k_out, mut k_unc) = (0, 0);
        for (f, e) in parts {
            let e = *e as usize;
            let (flo, fhi, o, u) = if f.len() == 2 {
                let m = BigRational::from_integer(linear_measure(&f[1], &f[0]));
                let (a, b) = (f[1].abs(), f[0].abs());
                let (o, u) = match b.cmp(&a) {
                    Ordering::Greater => (1, 0),
                    Ordering::Equal => (0, 1),
                    Ordering::Less => (0, 0),
                };
                (m.clone(), m, o, u)
            } else {
                let c = dyadic::certify_squarefree(f, bits)?;
                (c.lo, c.hi, c.k_out, c.k_unc)
            };
            for _ in 0..e {
                lo *= &flo;
                hi *= &fhi;
            }
            k_out += e * o;
            k_unc += e * u;
        }
        Some(Interval {
            lo,
            hi,
            k_out,
            k_unc,
            bits,
        })
    }

    /// Tightens the running enclosure with the certificate at `bits`.
    fn advance(&mut self, bits: u32) -> Option<&Interval> {
        let fresh = if bits <= 53 {
            self.f64_interval()
        } else {
            self.exact_interval(bits)
        };
        if let Some(f) = fresh {
            self.best = Some(match self.best.take() {
                None => f,
                Some(old) => Interval {
                    lo: if old.lo > f.lo { old.lo } else { f.lo },
                    hi: if old.hi < f.hi { old.hi } else { f.hi },
                    k_out: f.k_out,
                    k_unc: f.k_unc,
                    bits: f.bits.max(old.bits),
                },
            });
        }
        self.best.as_ref()
    }

    /// Decides `T` inside the current enclosure via the separation bound.
    fn resolve(&mut self, t: &BigRational) -> Option<Ordering> {
        let iv = self.best.clone()?;
        let desc = self.desc().to_vec();
        let tie = self.tie.get_or_insert_with(|| TieOracle::new(&desc));
        let width = &iv.hi - &iv.lo;
        let mut sep_min: Option<BigRational> = None;
        let mut any_tie = false;
        for k in iv.k_out..=iv.k_out + iv.k_unc {
            let s = tie.separation(k, t, &iv.hi);
            any_tie |= s.tie;
            if let Some(v) = s.sep {
                sep_min = Some(match sep_min {
                    Some(m) if m < v => m,
                    _ => v,
                });
            }
        }
        let narrow = match &sep_min {
            None => true,
            Some(s) => width < *s,
        };
        (narrow && any_tie).then_some(Ordering::Equal)
    }

    fn locate(iv: &Interval, t: &BigRational) -> Option<Ordering> {
        if iv.hi < *t {
            Some(Ordering::Less)
        } else if iv.lo > *t {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// `mu(p).cmp(t)`, refining up to `cap_bits`.
    pub fn compare_capped(&mut self, t: &BigRational, cap_bits: u32) -> Result<Ordering> {
        if let Shape::Exact(m) = &self.shape {
            return Ok(BigRational::from_integer(m.clone()).cmp(t));
        }
        if !t.is_positive() {
            return Ok(Ordering::Greater);
        }
        if let Some(iv) = &self.best {
            if let Some(o) = Self::locate(iv, t) {
                return Ok(o);
            }
            if let Some(o) = self.resolve(t) {
                return Ok(o);
            }
        }
        let mut bits = 53;
        loop {
            if bits > cap_bits {
                return Err(Error::Undecided { bits: cap_bits });
            }
            let already = self.best.as_ref().is_some_and(|b| b.bits >= bits);
            if !already {
                if let Some(iv) = self.advance(bits) {
                    if let Some(o) = Self::locate(iv, t) {
                        return Ok(o);
                    }
                    if let Some(o) = self.resolve(t) {
                        return Ok(o);
                    }
                }
            }
            bits = if bits == 53 { 128 } else { bits * 2 };
        }
    }

    /// Exact comparison; never gives up because the separation bound is
    /// positive and the enclosures shrink with precision.
    pub fn compare(&mut self, t: &BigRational) -> Ordering {
        self.compare_capped(t, u32::MAX / 4)
            .expect("enclosures shrink below the separation bound")
    }

    /// Intersection of the enclosures on the ladder up to `bits`.
    pub fn certificate(&mut self, bits: u32) -> Result<MeasureCertificate> {
        if let Shape::Exact(m) = &self.shape {
            let v = BigRational::from_integer(m.clone());
            return Ok(MeasureCertificate {
                lower: v.clone(),
                upper: v,
                precision_bits: bits,
                decision: None,
            });
        }
        let mut steps: Vec<u32> = PRECISION_LADDER.iter().copied().filter(|&b| b <= bits).collect();
        if steps.last() != Some(&bits) {
            steps.push(bits);
        }
        for b in steps {
            if self.best.as_ref().is_some_and(|iv| iv.bits >= b) {
                continue;
            }
            self.advance(b);
        }
        let iv = self.best.as_ref().ok_or(Error::Undecided { bits })?;
        Ok(MeasureCertificate {
            lower: iv.lo.clone(),
            upper: iv.hi.clone(),
            precision_bits: iv.bits,
            decision: None,
        })
    }
}

/// Certified measure of `p`, optionally decided against `threshold`, using at
/// most `precision_bits` of working precision.
pub fn mahler_measure(
    p: &IntPoly,
    threshold: Option<&BigRational>,
    precision_bits: u32,
) -> Result<MeasureCertificate> {
    let mut o = MeasureOracle::new(p);
    let decision = match threshold {
        Some(t) => Some(o.compare_capped(t, precision_bits)?),
        None => None,
    };
    let mut cert = o.certificate(precision_bits)?;
    cert.decision = decision;
    Ok(cert)
}

/// Exact `mu(p).cmp(t)`.
pub fn compare_measure(p: &IntPoly, t: &BigRational) -> Ordering {
    MeasureOracle::new(p).compare(t)
}

/// Writes each finite f64 as an exact integer multiple of a common power of
/// two; returns the integer polynomial and the exponent.
fn integerize(w: &[f64]) -> Result<(IntPoly, i32)> {
    if w.iter().any(|c| !c.is_finite()) {
        return Err(Error::Invalid("non-finite coefficient".into()));
    }
    let mut emin = i32::MAX;
    let mut parts = Vec::with_capacity(w.len());
    for &c in w {
        if c == 0.0 {
            parts.push(None);
            continue;
        }
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(c);
        emin = emin.min(exp as i32);
        parts.push(Some((mant, exp as i32, sign)));
    }
    if emin == i32::MAX {
        return Ok((IntPoly::new(vec![BigInt::zero(); w.len()]), 0));
    }
    let coeffs = parts
        .into_iter()
        .map(|p| match p {
            None => BigInt::zero(),
            Some((m, e, s)) => (BigInt::from(m) << ((e - emin) as usize)) * BigInt::from(s),
        })
        .collect();
    Ok((IntPoly::new(coeffs), emin))
}

fn pow2(e: i32) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Certified measure of a real coefficient vector (each f64 taken exactly).
pub fn mahler_measure_real(w: &[f64], precision_bits: u32) -> Result<MeasureCertificate> {
    let (p, e) = integerize(w)?;
    let mut c = MeasureOracle::new(&p).certificate(precision_bits)?;
    let s = pow2(e);
    c.lower *= &s;
    c.upper *= &s;
    Ok(c)
}

/// Fast double-precision measure estimate (midpoint of the f64 enclosure).
pub fn measure_f64(w: &[f64]) -> f64 {
    let c = RootWorkspace::new().certify(w);
    if c.hi.is_finite() {
        0.5 * (c.lo + c.hi)
    } else {
        c.lo
    }
}

/// Roots of `p` with certified radii at the requested precision. Zero roots
/// from trailing zero coefficients are reported with radius 0.
pub fn root_set(p: &IntPoly, precision_bits: u32) -> Result<RootSet> {
    let t = p.trimmed();
    let Some(n) = t.degree() else {
        return Err(Error::Invalid("the zero polynomial has no root set".into()));
    };
    let desc = t.coeffs();
    let zeros = desc.iter().rev().take_while(|c| c.is_zero()).count();
    let core = &desc[..=n - zeros];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let mut radii = vec![0.0; zeros];
    let mut certified = true;
    if core.len() == 2 {
        let (a, b) = (core[0].to_f64(), core[1].to_f64());
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::Invalid("coefficients exceed double precision".into()));
        };
        let z = -b / a;
        roots.push(Complex64::new(z, 0.0));
        radii.push(z.abs() * f64::EPSILON);
    } else if core.len() > 2 {
        if precision_bits <= 53 {
            let w = IntPoly::new(core.to_vec())
                .to_f64()
                .ok_or_else(|| Error::Invalid("coefficients exceed double precision".into()))?;
            let m = w.len() - 1;
            let mut z = vec![Complex64::new(0.0, 0.0); m];
            roots::circle_start(&w, &mut z);
            certified &= roots::aberth(&w, &mut z);
            let mut r = vec![0.0; m];
            roots::inclusion_radii(&w, &z, &mut r);
            // Report a radius valid for clustered components too.
            let comp = roots::disk_components(&z, &r);
            for i in 0..m {
                let mut far = r[i];
                for j in 0..m {
                    if comp[j] == comp[i] && j != i {
                        far = far.max((z[i] - z[j]).norm() + r[j]);
                    }
                }
                roots.push(z[i]);
                radii.push(far * (1.0 + 1e-12));
            }
        } else {
            let asc: ZPoly = core.iter().rev().cloned().collect();
            let (_, parts) = arith::squarefree(&asc);
            for (f, e) in parts {
                let c = dyadic::certify_squarefree(&f, precision_bits)
                    .ok_or(Error::Undecided { bits: precision_bits })?;
                for _ in 0..e {
                    roots.extend_from_slice(&c.centers);
                    radii.extend_from_slice(&c.radii);
                }
            }
        }
    }
    certified &= radii.iter().all(|r| r.is_finite());
    Ok(RootSet {
        roots,
        radii,
        precision_bits,
        certified,
    })
}

/// Root set of a real coefficient vector (each f64 taken exactly).
pub fn root_set_real(w: &[f64], precision_bits: u32) -> Result<RootSet> {
    let (p, _) = integerize(w)?;
    root_set(&p, precision_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ties_are_detected_exactly() {
        let p = IntPoly::from_i64(&[1, 0, -2]);
        assert_eq!(compare_measure(&p, &r(2, 1)), Ordering::Equal);
        assert_eq!(compare_measure(&p, &r(199, 100)), Ordering::Greater);
        assert_eq!(compare_measure(&p, &r(201, 100)), Ordering::Less);
    }

    #[test]
    fn repeated_roots_and_cyclotomics() {
        assert_eq!(
            compare_measure(&IntPoly::from_i64(&[1, -4, 4]), &r(4, 1)),
            Ordering::Equal
        );
        let phi5 = IntPoly::from_i64(&[1, 1, 1, 1, 1]);
        assert_eq!(compare_measure(&phi5, &r(1, 1)), Ordering::Equal);
        // (z^2 + 1)^2 (z - 3)
        let p = IntPoly::from_i64(&[1, -3, 2, -6, 1, -3]);
        assert_eq!(compare_measure(&p, &r(3, 1)), Ordering::Equal);
    }

    #[test]
    fn linear_and_constant_are_exact() {
        assert_eq!(compare_measure(&IntPoly::from_i64(&[0, -5]), &r(5, 1)), Ordering::Equal);
        assert_eq!(compare_measure(&IntPoly::from_i64(&[2, -7]), &r(7, 1)), Ordering::Equal);
        assert_eq!(compare_measure(&IntPoly::from_i64(&[0, 0]), &r(0, 1)), Ordering::Equal);
    }

    #[test]
    fn certificate_reports_decision() {
        let c = mahler_measure(&IntPoly::from_i64(&[1, 0, -2]), Some(&r(2, 1)), 512).unwrap();
        assert!(c.exact_hit());
        assert!(c.lower <= r(2, 1) && r(2, 1) <= c.upper);
    }

    #[test]
    fn real_vector_scaling() {
        let c = mahler_measure_real(&[0.5, -0.5, -0.5], 128).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((c.midpoint() - 0.5 * phi).abs() < 1e-15);
    }

    #[test]
    fn rational_threshold_near_measure() {
        // mu(z^2 - z - 1) = golden ratio; 1.618034 is just above it
        let p = IntPoly::from_i64(&[1, -1, -1]);
        assert_eq!(compare_measure(&p, &r(1_618_034, 1_000_000)), Ordering::Less);
        assert_eq!(compare_measure(&p, &r(1_618_033, 1_000_000)), Ordering::Greater);
    }
}
