//! The counting functions: all polynomials, monic ones, slices, reducible
//! ones, and algebraic numbers of bounded height.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{count, count_multi, enumerate, EnumFilter, Height};
use crate::constants::{
    explicit_rhs, moebius, monic_volume, rational_string, to_f64, volume, zeta_int, BoundTag, RhsParams, SliceSpec,
};
use crate::error::{Error, Result};
use crate::poly::{measure_f64, root_set, IntPoly};

fn as_string<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// An exact count next to the main term and, where one applies, an explicit
/// error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub class: String,
    pub d: usize,
    pub params: String,
    pub height: Option<String>,
    /// Measure bound as an exact rational.
    pub t: String,
    #[serde(serialize_with = "as_string")]
    pub count: BigInt,
    pub main_term: f64,
    pub error_bound: Option<f64>,
    pub within_bound: Option<bool>,
    /// Registry tag of the bound, or `none`.
    pub theorem: String,
    /// Why no bound was applied, or other caveats.
    pub note: Option<String>,
    pub seconds: f64,
}

struct Draft {
    class: String,
    d: usize,
    params: String,
    height: Option<String>,
    t: BigRational,
    main_term: f64,
    bound: Option<(BoundTag, RhsParams)>,
    notes: Vec<String>,
}

impl Draft {
    fn new(class: &str, d: usize, t: &BigRational) -> Self {
        Draft {
            class: class.into(),
            d,
            params: String::new(),
            height: None,
            t: t.clone(),
            main_term: 0.0,
            bound: None,
            notes: Vec::new(),
        }
    }

    fn finish(mut self, count: BigInt, started: Instant) -> Result<CountReport> {
        let (theorem, error_bound) = match self.bound {
            None => ("none".to_string(), None),
            Some((tag, p)) => match explicit_rhs(tag, &p) {
                Ok(v) => (tag.name().to_string(), Some(v)),
                Err(e @ Error::Regime { .. }) => {
                    self.notes.push(e.to_string());
                    (tag.name().to_string(), None)
                }
                Err(e) => return Err(e),
            },
        };
        let c = count.to_f64().unwrap_or(f64::INFINITY);
        let within_bound = error_bound.map(|b| (c - self.main_term).abs() <= b);
        Ok(CountReport {
            class: self.class,
            d: self.d,
            params: self.params,
            height: self.height,
            t: rational_string(&self.t),
            count,
            main_term: self.main_term,
            error_bound,
            within_bound,
            theorem,
            note: (!self.notes.is_empty()).then(|| self.notes.join("; ")),
            seconds: started.elapsed().as_secs_f64(),
        })
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn slice_params(spec: &SliceSpec) -> String {
    format!("lead=({});trail=({})", join(&spec.lead), join(&spec.trail))
}

fn tf(t: &BigRational) -> f64 {
    to_f64(t)
}

/// `M(<= d, T)`: all integer polynomials of degree at most `d`, zero
/// included, against `V_d T^(d+1)` and `kappa_0(d) T^d`.
pub fn count_m_atmost(d: usize, t: &BigRational, cap: f64) -> Result<CountReport> {
    Ok(count_m_atmost_grid(d, std::slice::from_ref(t), cap)?.remove(0))
}

/// [`count_m_atmost`] at several thresholds from one enumeration.
pub fn count_m_atmost_grid(d: usize, ts: &[BigRational], cap: f64) -> Result<Vec<CountReport>> {
    let started = Instant::now();
    if d == 0 {
        return Err(Error::regime("count_m_atmost", "d ≥ 1"));
    }
    let counts = count_multi(&EnumFilter::at_most(d, BigRational::zero()).with_cap(cap), ts)?;
    ts.iter()
        .zip(counts)
        .map(|(t, n)| {
            let mut r = Draft::new("all", d, t);
            r.main_term = to_f64(&(volume(d) * num_traits::pow(t.clone(), d + 1)));
            r.bound = Some((BoundTag::Genpolycount, RhsParams::with_t(d, tf(t))));
            r.finish(n, started)
        })
        .collect()
}

/// `M_1(d, T)`: monic polynomials of degree `d`, against `p_d(T)` and
/// `kappa_1(d) T^(d-1)`.
pub fn count_m1(d: usize, t: &BigRational, cap: f64) -> Result<CountReport> {
    Ok(count_m1_grid(d, std::slice::from_ref(t), cap)?.remove(0))
}

/// [`count_m1`] at several thresholds from one enumeration.
pub fn count_m1_grid(d: usize, ts: &[BigRational], cap: f64) -> Result<Vec<CountReport>> {
    let started = Instant::now();
    if d == 0 {
        return Err(Error::regime("count_m1", "d ≥ 1"));
    }
    let filter = EnumFilter::exactly(d, BigRational::zero()).slice(vec![1], vec![])?.with_cap(cap);
    let counts = count_multi(&filter, ts)?;
    ts.iter()
        .zip(counts)
        .map(|(t, n)| {
            let mut r = Draft::new("monic", d, t);
            r.main_term = to_f64(&monic_volume(d, t)?);
            r.bound = Some((BoundTag::Moniccount, RhsParams::with_t(d, tf(t))));
            r.finish(n, started)
        })
        .collect()
}

/// Lattice points of the slice with measure at most `T`, against
/// `V_g T^(g+1)` and, for `T >= k_1`, the explicit slice bound.
pub fn count_slice(spec: &SliceSpec, t: &BigRational, cap: f64) -> Result<CountReport> {
    let started = Instant::now();
    let filter = EnumFilter::at_most(spec.d, t.clone())
        .slice(spec.lead.clone(), spec.trail.clone())?
        .with_cap(cap);
    let n = count(&filter)?;
    let mut r = Draft::new("slice", spec.d, t);
    r.params = slice_params(spec);
    let g = spec.g();
    if g >= 0 {
        r.main_term = to_f64(&(volume(g as usize) * num_traits::pow(t.clone(), g as usize + 1)));
    }
    let p = RhsParams {
        slice: Some(spec.clone()),
        ..RhsParams::with_t(spec.d, tf(t))
    };
    r.bound = Some((BoundTag::Slicecount, p));
    r.finish(n, started)
}

/// Families of reducible polynomials of degree exactly `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducibleClass {
    All,
    Monic,
    /// Monic with constant coefficient `r`.
    Norm(i64),
    /// Monic with second coefficient `t`.
    Trace(i64),
    /// Monic with second coefficient `trace` and constant coefficient `norm`.
    NormTrace { trace: i64, norm: i64 },
}

/// Exact count of reducible polynomials of the class, against the upper
/// bound that applies (the main term is zero).
pub fn count_reducible(class: ReducibleClass, d: usize, t: &BigRational, cap: f64) -> Result<CountReport> {
    Ok(count_reducible_grid(class, d, std::slice::from_ref(t), cap)?.remove(0))
}

/// [`count_reducible`] at several thresholds from one enumeration.
pub fn count_reducible_grid(class: ReducibleClass, d: usize, ts: &[BigRational], cap: f64) -> Result<Vec<CountReport>> {
    let started = Instant::now();
    let base = EnumFilter::exactly(d, BigRational::zero()).reducible().with_cap(cap);
    let (name, filter, params, tag) = match class {
        ReducibleClass::All => ("reducible", base, String::new(), Some(BoundTag::Allred)),
        ReducibleClass::Monic => ("reducible_monic", base.slice(vec![1], vec![])?, String::new(), Some(BoundTag::Monicred)),
        ReducibleClass::Norm(r) => {
            if r == 0 {
                return Err(Error::regime("reducible_norm", "r ≠ 0"));
            }
            ("reducible_norm", base.slice(vec![1], vec![r])?, format!("r={r}"), Some(BoundTag::Normsieve))
        }
        ReducibleClass::Trace(s) => (
            "reducible_trace",
            base.slice(vec![1, s], vec![])?,
            format!("t={s}"),
            Some(BoundTag::Tracesieve),
        ),
        ReducibleClass::NormTrace { trace, norm } => {
            if norm == 0 || d < 3 {
                return Err(Error::regime("reducible_norm_trace", "d ≥ 3 and r ≠ 0"));
            }
            let f = base.slice(vec![1, trace], vec![norm])?;
            ("reducible_norm_trace", f, format!("t={trace};r={norm}"), None)
        }
    };
    let counts = count_multi(&filter, ts)?;
    ts.iter()
        .zip(counts)
        .map(|(t, n)| {
            let mut r = Draft::new(name, d, t);
            r.params = params.clone();
            r.bound = tag.map(|tag| {
                let mut p = RhsParams::with_t(d, tf(t));
                match class {
                    ReducibleClass::Norm(v) => p.nu = Some(v),
                    ReducibleClass::Trace(v) => p.trace = Some(v),
                    _ => {}
                }
                (tag, p)
            });
            if r.bound.is_none() {
                r.notes.push("non-explicit: O(T^(d-3)) without a stated constant".into());
            }
            r.finish(n, started)
        })
        .collect()
}

/// Both sides of the Moebius identity relating all polynomials to the
/// primitive ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoebiusReport {
    pub d: usize,
    pub t: u64,
    /// `M(<= d, T) - 1`.
    #[serde(serialize_with = "as_string")]
    pub all_minus_zero: BigInt,
    /// `sum_{n <= T} M^1(<= d, T / n)`.
    #[serde(serialize_with = "as_string")]
    pub primitive_sum: BigInt,
    /// `M^1(<= d, T)`.
    #[serde(serialize_with = "as_string")]
    pub primitive: BigInt,
    /// `sum_{n <= T} moebius(n) (M(<= d, T / n) - 1)`.
    #[serde(serialize_with = "as_string")]
    pub inverted: BigInt,
    pub pass: bool,
}

pub fn moebius_check(d: usize, t: u64, cap: f64) -> Result<MoebiusReport> {
    if d == 0 || t == 0 {
        return Err(Error::regime("moebius_check", "d ≥ 1 and integer T ≥ 1"));
    }
    let ts: Vec<BigRational> = (1..=t)
        .map(|n| BigRational::new(BigInt::from(t), BigInt::from(n)))
        .collect();
    let base = EnumFilter::at_most(d, BigRational::zero()).with_cap(cap);
    let all = count_multi(&base, &ts)?;
    let prim = count_multi(&base.clone().primitive(), &ts)?;
    let all_minus_zero = &all[0] - 1;
    let primitive_sum: BigInt = prim.iter().sum();
    let inverted: BigInt = all
        .iter()
        .enumerate()
        .map(|(i, a)| BigInt::from(moebius(i as u64 + 1)) * (a - 1))
        .sum();
    Ok(MoebiusReport {
        d,
        t,
        pass: all_minus_zero == primitive_sum && inverted == prim[0],
        all_minus_zero,
        primitive_sum,
        primitive: prim[0].clone(),
        inverted,
    })
}

/// Sets of algebraic numbers of degree `d` counted by height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraicClass {
    Numbers,
    Integers,
    Units,
    Norm(i64),
    Trace(i64),
    NormTrace { norm: i64, trace: i64 },
}

impl AlgebraicClass {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraicClass::Numbers => "numbers",
            AlgebraicClass::Integers => "integers",
            AlgebraicClass::Units => "units",
            AlgebraicClass::Norm(_) => "norm",
            AlgebraicClass::Trace(_) => "trace",
            AlgebraicClass::NormTrace { .. } => "norm_trace",
        }
    }

    /// Slices whose irreducible members are the minimal polynomials of the
    /// class (`None` for all primitive polynomials with positive leading
    /// coefficient).
    fn slices(self, d: usize) -> Vec<Option<(Vec<i64>, Vec<i64>)>> {
        let sign = if d % 2 == 0 { 1 } else { -1 };
        match self {
            AlgebraicClass::Numbers => vec![None],
            AlgebraicClass::Integers => vec![Some((vec![1], vec![]))],
            AlgebraicClass::Units => vec![Some((vec![1], vec![-1])), Some((vec![1], vec![1]))],
            AlgebraicClass::Norm(nu) => vec![Some((vec![1], vec![sign * nu]))],
            AlgebraicClass::Trace(tau) => vec![Some((vec![1, -tau], vec![]))],
            AlgebraicClass::NormTrace { norm, trace } => vec![Some((vec![1, -trace], vec![sign * norm]))],
        }
    }

    fn min_degree(self) -> usize {
        match self {
            AlgebraicClass::Numbers | AlgebraicClass::Integers => 1,
            AlgebraicClass::NormTrace { .. } => 3,
            _ => 2,
        }
    }
}

fn class_filter(class: AlgebraicClass, d: usize, t: &BigRational, cap: f64) -> Result<Vec<EnumFilter>> {
    class
        .slices(d)
        .into_iter()
        .map(|s| {
            let f = EnumFilter::exactly(d, t.clone()).irreducible().with_cap(cap);
            match s {
                None => Ok(f.primitive().positive_leading()),
                Some((l, r)) => f.slice(l, r),
            }
        })
        .collect()
}

/// `N(class, d, H)`: algebraic numbers of degree `d` and height at most `H`,
/// computed as `d` times the number of minimal polynomials with
/// `mu <= H^d`.
pub fn count_algebraic(class: AlgebraicClass, d: usize, h: &Height, cap: f64) -> Result<CountReport> {
    let started = Instant::now();
    if d < class.min_degree() {
        return Err(Error::regime(
            &format!("count_algebraic({})", class.name()),
            &format!("d ≥ {}", class.min_degree()),
        ));
    }
    if !h.at_least_one() {
        return Err(Error::regime(&format!("count_algebraic({})", class.name()), "H ≥ 1"));
    }
    if let AlgebraicClass::Norm(0) | AlgebraicClass::NormTrace { norm: 0, .. } = class {
        return Err(Error::regime(&format!("count_algebraic({})", class.name()), "ν ≠ 0"));
    }
    let (t, exact) = h.measure_bound(d);
    let mut polys = BigInt::zero();
    for f in class_filter(class, d, &t, cap)? {
        polys += count(&f)?;
    }
    let mut r = Draft::new(class.name(), d, &t);
    r.height = Some(h.to_string());
    if !exact {
        r.notes.push("H^d is irrational; T is a 40-digit lower approximant and ties at T are not certified".into());
    }
    let df = d as f64;
    let hf = h.to_f64();
    let tfv = tf(&t);
    let vg = |g: usize| to_f64(&volume(g));
    let hp = RhsParams::with_h(d, hf);
    match class {
        AlgebraicClass::Numbers => {
            r.main_term = df * to_f64(&volume(d)) / (2.0 * zeta_int(d as u32 + 1)?) * tfv.powi(d as i32 + 1);
            r.bound = Some((BoundTag::ExsumI, hp));
        }
        AlgebraicClass::Integers => {
            r.main_term = df * to_f64(&monic_volume(d, &t)?);
            r.bound = Some((BoundTag::ExsumII, hp));
        }
        AlgebraicClass::Units => {
            r.main_term = 2.0 * df * vg(d - 2) * tfv.powi(d as i32 - 1);
            r.bound = Some((BoundTag::ExsumIII, hp));
        }
        AlgebraicClass::Norm(nu) => {
            r.params = format!("norm={nu}");
            r.main_term = df * vg(d - 2) * tfv.powi(d as i32 - 1);
            r.bound = Some((BoundTag::Exnorm, RhsParams { nu: Some(nu), ..hp }));
        }
        AlgebraicClass::Trace(tau) => {
            r.params = format!("trace={tau}");
            r.main_term = df * vg(d - 2) * tfv.powi(d as i32 - 1);
            r.notes.push("no explicit error bound for this class".into());
        }
        AlgebraicClass::NormTrace { norm, trace } => {
            r.params = format!("norm={norm};trace={trace}");
            r.main_term = df * vg(d - 3) * tfv.powi(d as i32 - 2);
            r.notes.push("no explicit error bound for this class".into());
        }
    }
    r.finish(polys * d, started)
}

/// One algebraic number: a root of a minimal polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusPoint {
    pub degree: usize,
    /// `mu^(1/d)`.
    pub height: f64,
    pub re: f64,
    pub im: f64,
    pub poly: IntPoly,
    pub measure: f64,
}

/// All algebraic numbers of degree `1..=d_max` and height at most `H`, grouped
/// by minimal polynomial in enumeration order, roots sorted by real then
/// imaginary part.
pub fn census(d_max: usize, h: &Height, cap: f64) -> Result<Vec<CensusPoint>> {
    if !h.at_least_one() {
        return Err(Error::regime("census", "H ≥ 1"));
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        let (t, _) = h.measure_bound(d);
        for f in class_filter(AlgebraicClass::Numbers, d, &t, cap)? {
            for p in enumerate(&f)? {
                let measure = measure_f64(&p.to_f64().expect("small coefficients"));
                let mut roots = root_set(&p, 53)?.roots;
                roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                for z in roots {
                    out.push(CensusPoint {
                        degree: d,
                        height: measure.powf(1.0 / d as f64),
                        re: z.re,
                        im: if z.im.abs() == 0.0 { 0.0 } else { z.im },
                        poly: p.clone(),
                        measure,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::DEFAULT_CAP;

    fn t(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_counts() {
        let r = count_m_atmost(1, &t(1), DEFAULT_CAP).unwrap();
        assert_eq!(r.count, BigInt::from(9));
        assert_eq!(r.main_term, 4.0);
        assert_eq!(r.error_bound, Some(64.0));
        assert_eq!(r.within_bound, Some(true));
        assert_eq!(count_m_atmost(1, &t(3), DEFAULT_CAP).unwrap().count, BigInt::from(49));
        assert_eq!(count_m1(2, &t(1), DEFAULT_CAP).unwrap().count, BigInt::from(9));
        assert_eq!(count_m1(2, &t(2), DEFAULT_CAP).unwrap().main_term, 16.0);
    }

    #[test]
    fn slice_report() {
        let spec = SliceSpec::new(2, vec![1], vec![1]).unwrap();
        let r = count_slice(&spec, &t(1), DEFAULT_CAP).unwrap();
        assert_eq!(r.count, BigInt::from(5));
        assert_eq!(r.main_term, 2.0);
        // T = 1 is far below k_1, so no bound is applied
        assert_eq!(r.error_bound, None);
        assert!(r.note.unwrap().contains("slicecount"));
    }

    #[test]
    fn units_at_sqrt3() {
        let h: Height = "sqrt(3)".parse().unwrap();
        let r = count_algebraic(AlgebraicClass::Units, 2, &h, DEFAULT_CAP).unwrap();
        assert_eq!(r.count, BigInt::from(18));
        let h: Height = "1.7320508".parse().unwrap();
        let r = count_algebraic(AlgebraicClass::Units, 2, &h, DEFAULT_CAP).unwrap();
        assert_eq!(r.count, BigInt::from(18));
    }

    #[test]
    fn rational_numbers() {
        let h: Height = "1.5".parse().unwrap();
        let r = count_algebraic(AlgebraicClass::Numbers, 1, &h, DEFAULT_CAP).unwrap();
        assert_eq!(r.count, BigInt::from(3));
        let pts = census(1, &h, DEFAULT_CAP).unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p.re).collect();
        // enumeration order: z - 1, z, z + 1
        assert_eq!(xs, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn moebius_small() {
        let r = moebius_check(1, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.all_minus_zero, BigInt::from(8));
        assert_eq!(r.primitive, BigInt::from(8));
        assert!(r.pass);
        assert!(moebius_check(2, 3, DEFAULT_CAP).unwrap().pass);
    }

    #[test]
    fn reducible_bounds() {
        let r = count_reducible(ReducibleClass::Norm(1), 2, &t(10), DEFAULT_CAP).unwrap();
        assert!(r.count <= BigInt::from(2));
        assert_eq!(r.within_bound, Some(true));
        let r = count_reducible(ReducibleClass::Trace(0), 2, &t(4), DEFAULT_CAP).unwrap();
        assert!(r.count <= BigInt::from(3));
        let r = count_reducible(ReducibleClass::NormTrace { trace: 0, norm: 1 }, 3, &t(4), DEFAULT_CAP).unwrap();
        assert_eq!(r.error_bound, None);
        assert!(r.note.unwrap().starts_with("non-explicit"));
    }

    #[test]
    fn regimes_are_reported() {
        let h: Height = "0.5".parse().unwrap();
        assert!(count_algebraic(AlgebraicClass::Units, 2, &h, DEFAULT_CAP).unwrap_err().is_precondition());
        let h: Height = "2".parse().unwrap();
        let e = count_algebraic(AlgebraicClass::NormTrace { norm: 1, trace: 0 }, 2, &h, DEFAULT_CAP).unwrap_err();
        assert!(e.to_string().contains("d ≥ 3"));
    }
}
