//! Exhaustive enumeration of integer polynomials of bounded Mahler measure,
//! the counting functions built on it and the census of algebraic numbers.

mod counts;
mod engine;
mod height;
mod report;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::constants::SliceSpec;
use crate::error::{Error, Result};
use crate::poly::{IntPoly, FACTOR_DEGREE_CAP};

pub use counts::{
    census, count_algebraic, count_m1, count_m1_grid, count_m_atmost, count_m_atmost_grid, count_reducible,
    count_reducible_grid, count_slice, moebius_check, AlgebraicClass, CensusPoint, CountReport, MoebiusReport, ReducibleClass,
};
pub use height::Height;
pub(crate) use report::fmt_f64;
pub use report::{write_census_csv, write_counts_csv, CENSUS_HEADER, COUNTS_HEADER};

/// Default refusal threshold for the number of candidate vectors.
pub const DEFAULT_CAP: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    /// `w_0 != 0`.
    Exactly,
    /// Any vector of length `d + 1`, including the zero polynomial.
    AtMost,
}

/// Which integer vectors of length `d + 1` to enumerate.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumFilter {
    pub d: usize,
    pub degree_mode: DegreeMode,
    pub slice: Option<SliceSpec>,
    pub bound: BigRational,
    pub irreducible_only: bool,
    pub primitive_only: bool,
    pub reducible_only: bool,
    /// First nonzero coefficient positive.
    pub positive_leading_only: bool,
    pub cap: f64,
}

impl EnumFilter {
    pub fn new(d: usize, mode: DegreeMode, bound: BigRational) -> Self {
        EnumFilter {
            d,
            degree_mode: mode,
            slice: None,
            bound,
            irreducible_only: false,
            primitive_only: false,
            reducible_only: false,
            positive_leading_only: false,
            cap: DEFAULT_CAP,
        }
    }

    pub fn exactly(d: usize, bound: BigRational) -> Self {
        Self::new(d, DegreeMode::Exactly, bound)
    }

    pub fn at_most(d: usize, bound: BigRational) -> Self {
        Self::new(d, DegreeMode::AtMost, bound)
    }

    pub fn slice(mut self, lead: Vec<i64>, trail: Vec<i64>) -> Result<Self> {
        self.slice = Some(SliceSpec::new(self.d, lead, trail)?);
        Ok(self)
    }

    pub fn irreducible(mut self) -> Self {
        self.irreducible_only = true;
        self
    }

    pub fn primitive(mut self) -> Self {
        self.primitive_only = true;
        self
    }

    pub fn reducible(mut self) -> Self {
        self.reducible_only = true;
        self
    }

    pub fn positive_leading(mut self) -> Self {
        self.positive_leading_only = true;
        self
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.irreducible_only && self.reducible_only {
            return Err(Error::Invalid("irreducible_only and reducible_only are exclusive".into()));
        }
        if self.bound.is_negative() {
            return Err(Error::Invalid("measure bound T must be nonnegative".into()));
        }
        if self.d > FACTOR_DEGREE_CAP && (self.irreducible_only || self.reducible_only) {
            return Err(Error::DegreeCap {
                degree: self.d,
                cap: FACTOR_DEGREE_CAP,
            });
        }
        if let Some(s) = &self.slice {
            if s.d != self.d {
                return Err(Error::Invalid(format!("slice degree {} differs from d = {}", s.d, self.d)));
            }
            if s.m() + s.n() > self.d + 1 {
                return Err(Error::Invalid("too many fixed coefficients".into()));
            }
        }
        Ok(())
    }

    /// Number of candidate vectors the scan would visit.
    pub fn search_size(&self) -> Result<f64> {
        Ok(engine::Plan::new(&self.clone().with_cap(f64::INFINITY), &[self.bound.clone()])?.size())
    }
}

/// Every vector satisfying the filter with `mu <= T`, in lexicographic order
/// of the free coefficients.
pub fn enumerate(filter: &EnumFilter) -> Result<Vec<IntPoly>> {
    let plan = engine::Plan::new(filter, &engine::normalize(&[filter.bound.clone()])?)?;
    let chunks = plan.run(None, Vec::new, |acc: &mut Vec<IntPoly>, w, _| acc.push(IntPoly::from_i64(w)));
    Ok(chunks.into_iter().flatten().collect())
}

pub fn count(filter: &EnumFilter) -> Result<BigInt> {
    Ok(count_multi(filter, &[filter.bound.clone()])?.remove(0))
}

/// Counts for several thresholds in one pass; `filter.bound` is ignored.
/// Results follow the order of `thresholds`.
pub fn count_multi(filter: &EnumFilter, thresholds: &[BigRational]) -> Result<Vec<BigInt>> {
    let sorted = engine::normalize(thresholds)?;
    if sorted.is_empty() {
        return Ok(Vec::new());
    }
    let plan = engine::Plan::new(filter, &sorted)?;
    let hist = plan.histogram(None);
    Ok(thresholds
        .iter()
        .map(|t| BigInt::from(hist[sorted.binary_search(t).expect("present")]))
        .collect())
}

/// Counts over `parts` contiguous pieces of the outermost free coefficient
/// range; their sum is [`count`].
pub fn count_in_parts(filter: &EnumFilter, parts: usize) -> Result<Vec<BigInt>> {
    let plan = engine::Plan::new(filter, &engine::normalize(&[filter.bound.clone()])?)?;
    Ok(plan
        .chunks(Some(parts))
        .into_iter()
        .map(|c| {
            let mut n = 0u64;
            plan.scan(c, &mut n, &|n: &mut u64, _, _| *n += 1);
            BigInt::from(n)
        })
        .collect())
}

/// Runs `f` on a dedicated pool with `threads` workers (the global pool when
/// `threads` is zero).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn t(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn degree_one_box() {
        let v = enumerate(&EnumFilter::at_most(1, t(1))).unwrap();
        assert_eq!(v.len(), 9);
        let f = EnumFilter::at_most(1, t(3));
        assert_eq!(count(&f).unwrap(), BigInt::from(49));
    }

    #[test]
    fn reciprocal_unit_slice() {
        let f = EnumFilter::exactly(2, t(1)).slice(vec![1], vec![1]).unwrap();
        let v = enumerate(&f).unwrap();
        let mids: Vec<i64> = v.iter().map(|p| p.to_i64().unwrap()[1]).collect();
        assert_eq!(mids, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn zero_bound() {
        assert_eq!(count(&EnumFilter::at_most(3, t(0))).unwrap(), BigInt::one());
        assert_eq!(count(&EnumFilter::exactly(3, t(0))).unwrap(), BigInt::zero());
    }

    #[test]
    fn multi_matches_single() {
        let f = EnumFilter::at_most(2, t(0));
        let ts: Vec<BigRational> = (1..=5).map(t).chain([BigRational::new(5.into(), 2.into())]).collect();
        let multi = count_multi(&f, &ts).unwrap();
        for (x, c) in ts.iter().zip(&multi) {
            let mut g = f.clone();
            g.bound = x.clone();
            assert_eq!(&count(&g).unwrap(), c);
        }
    }

    #[test]
    fn parts_sum_to_total() {
        let f = EnumFilter::exactly(3, t(3)).irreducible();
        let total = count(&f).unwrap();
        for k in [1, 2, 4, 8] {
            let s: BigInt = count_in_parts(&f, k).unwrap().into_iter().sum();
            assert_eq!(s, total);
        }
    }

    #[test]
    fn cap_refuses() {
        let f = EnumFilter::at_most(6, t(100)).with_cap(1e6);
        assert!(matches!(count(&f), Err(Error::SearchTooLarge { .. })));
    }

    #[test]
    fn exclusive_flags() {
        let f = EnumFilter::exactly(2, t(1)).irreducible().reducible();
        assert!(count(&f).is_err());
    }
}
