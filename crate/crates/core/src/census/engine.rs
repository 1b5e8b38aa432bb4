//! The scan over a coefficient box.
//!
//! Each candidate is classified against all thresholds at once: the index of
//! the smallest `T_j` with `mu <= T_j`. Cheap screens come first (coefficient
//! box, Graeffe bracket, double-precision disks) and only candidates whose
//! enclosure straddles a threshold reach the exact oracle.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{DegreeMode, EnumFilter};
use crate::error::{Error, Result};
use crate::poly::{is_reducible_i64, MeasureOracle, RootWorkspace, Screen};

pub(crate) struct Plan {
    template: Vec<i64>,
    free_start: usize,
    ranges: Vec<(i64, i64)>,
    empty: bool,
    thresholds: Vec<BigRational>,
    /// First threshold `>= 1`; nonzero integer polynomials have `mu >= 1`.
    first_pos: usize,
    screen: Screen,
    below: Vec<f64>,
    above: Vec<f64>,
    exactly: bool,
    positive_leading: bool,
    primitive: bool,
    irreducible: bool,
    reducible: bool,
}

/// Largest double `<= t` and smallest double `>= t`.
fn f64_bracket(t: &BigRational) -> (f64, f64) {
    let x = t.to_f64().unwrap_or(f64::INFINITY);
    if !x.is_finite() {
        return (f64::MAX, f64::INFINITY);
    }
    let exact = BigRational::from_float(x).expect("finite");
    match exact.cmp(t) {
        Ordering::Equal => (x, x),
        Ordering::Less => (x, x.next_up()),
        Ordering::Greater => (x.next_down(), x),
    }
}

impl Plan {
    /// `thresholds` must be sorted, distinct and nonnegative.
    pub(crate) fn new(filter: &EnumFilter, thresholds: &[BigRational]) -> Result<Plan> {
        filter.validate()?;
        let d = filter.d;
        let t_max = thresholds.last().cloned().unwrap_or_else(BigRational::zero);
        let (lead, trail) = match &filter.slice {
            Some(s) => (s.lead.clone(), s.trail.clone()),
            None => (Vec::new(), Vec::new()),
        };
        let m = lead.len();
        let n = trail.len();
        let mut bounds = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let c = BigRational::from_integer(num_integer::binomial(BigInt::from(d), BigInt::from(i)));
            let b = (c * &t_max).floor().to_integer();
            bounds.push(b);
        }
        let mut template = vec![0i64; d + 1];
        let mut empty = false;
        for (i, &v) in lead.iter().enumerate() {
            template[i] = v;
            empty |= BigInt::from(v.abs()) > bounds[i];
        }
        for (k, &v) in trail.iter().enumerate() {
            let i = d + 1 - n + k;
            template[i] = v;
            empty |= BigInt::from(v.abs()) > bounds[i];
        }
        let exactly = filter.degree_mode == DegreeMode::Exactly;
        if m > 0 {
            empty |= exactly && lead[0] == 0;
            empty |= filter.positive_leading_only && lead[0] < 0;
        }
        let mut ranges = Vec::new();
        let mut estimate = 1.0f64;
        for (i, b) in bounds.iter().enumerate().take(d + 1 - n).skip(m) {
            let b = b.to_i64().filter(|b| *b <= i64::MAX / 4).ok_or(Error::SearchTooLarge {
                estimate: f64::INFINITY,
                cap: filter.cap,
            })?;
            let mut lo = -b;
            if i == 0 && filter.positive_leading_only {
                lo = if exactly { 1 } else { 0 };
            }
            if lo > b {
                empty = true;
            }
            ranges.push((lo, b));
            estimate *= (b - lo + 1).max(0) as f64;
        }
        if estimate > filter.cap {
            return Err(Error::SearchTooLarge {
                estimate,
                cap: filter.cap,
            });
        }
        let first_pos = thresholds.partition_point(|t| *t < BigRational::one());
        let (below, above) = thresholds.iter().map(f64_bracket).unzip();
        Ok(Plan {
            template,
            free_start: m,
            ranges,
            empty,
            thresholds: thresholds.to_vec(),
            first_pos,
            screen: Screen::new(&thresholds[first_pos..]),
            below,
            above,
            exactly,
            positive_leading: filter.positive_leading_only,
            primitive: filter.primitive_only,
            irreducible: filter.irreducible_only,
            reducible: filter.reducible_only,
        })
    }

    /// Number of candidate vectors in the box.
    pub(crate) fn size(&self) -> f64 {
        if self.empty {
            return 0.0;
        }
        self.ranges.iter().map(|(lo, hi)| (hi - lo + 1) as f64).product()
    }

    /// Range of the outermost free coordinate, or `None` without free
    /// coordinates.
    pub(crate) fn outer(&self) -> Option<(i64, i64)> {
        self.ranges.first().copied()
    }

    fn first_int(&self, m: i64) -> Option<usize> {
        let m = BigRational::from_integer(m.abs().into());
        let j = self.thresholds.partition_point(|t| *t < m);
        (j < self.thresholds.len()).then_some(j)
    }

    /// Smallest `j` with `mu(w) <= T_j`.
    pub(crate) fn classify(&self, w: &[i64], ws: &mut RootWorkspace) -> Option<usize> {
        let Some(f) = w.iter().position(|&c| c != 0) else {
            return (!self.thresholds.is_empty()).then_some(0);
        };
        let l = w.iter().rposition(|&c| c != 0).unwrap();
        let core = &w[f..=l];
        match core.len() {
            1 => return self.first_int(core[0]),
            2 => return self.first_int(core[0].abs().max(core[1].abs())),
            _ => {}
        }
        let k = self.screen.len();
        let (lo, hi) = self.screen.bracket(core);
        if lo < hi {
            let cert = ws.certify_i64(core);
            let mut oracle = None;
            for j in lo..hi {
                let jj = self.first_pos + j;
                if cert.hi <= self.below[jj] {
                    return Some(jj);
                }
                if cert.lo > self.above[jj] {
                    continue;
                }
                let o = oracle.get_or_insert_with(|| MeasureOracle::with_f64_cert(core, cert));
                if o.compare(&self.thresholds[jj]) != Ordering::Greater {
                    return Some(jj);
                }
            }
        }
        (hi < k).then_some(self.first_pos + hi)
    }

    fn pre(&self, w: &[i64]) -> bool {
        if self.exactly && w[0] == 0 {
            return false;
        }
        if self.positive_leading && w.iter().find(|&&c| c != 0).is_none_or(|&c| c < 0) {
            return false;
        }
        if self.primitive && w.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1 {
            return false;
        }
        true
    }

    fn post(&self, w: &[i64]) -> bool {
        if self.irreducible {
            let deg = w.iter().position(|&c| c != 0).map(|f| w.len() - 1 - f);
            // irreducible implies primitive; check it here if pre did not
            if deg.is_none_or(|d| d == 0) || (!self.primitive && w.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1) {
                return false;
            }
            return !is_reducible_i64(w);
        }
        if self.reducible {
            return is_reducible_i64(w);
        }
        true
    }

    /// Visits every qualifying vector whose outermost free coordinate lies in
    /// `outer`, in lexicographic order.
    pub(crate) fn scan<A>(&self, outer: Option<(i64, i64)>, acc: &mut A, visit: &impl Fn(&mut A, &[i64], usize)) {
        if self.empty {
            return;
        }
        let mut ws = RootWorkspace::new();
        let mut w = self.template.clone();
        let mut ranges = self.ranges.clone();
        if let (Some(o), Some(r)) = (outer, ranges.first_mut()) {
            *r = o;
            if o.0 > o.1 {
                return;
            }
        }
        let s = self.free_start;
        for (k, r) in ranges.iter().enumerate() {
            w[s + k] = r.0;
        }
        loop {
            if self.pre(&w) {
                if let Some(j) = self.classify(&w, &mut ws) {
                    if self.post(&w) {
                        visit(acc, &w, j);
                    }
                }
            }
            // odometer, last free coordinate fastest
            let mut k = ranges.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if w[s + k] < ranges[k].1 {
                    w[s + k] += 1;
                    break;
                }
                w[s + k] = ranges[k].0;
            }
        }
    }

    /// Splits the outermost range into `parts` contiguous pieces (one piece
    /// per value when `parts` is `None`).
    pub(crate) fn chunks(&self, parts: Option<usize>) -> Vec<Option<(i64, i64)>> {
        let Some((lo, hi)) = self.outer() else {
            return vec![None];
        };
        let len = (hi - lo + 1).max(0) as usize;
        let parts = parts.unwrap_or(len).max(1);
        (0..parts)
            .map(|p| {
                let a = lo + (len * p / parts) as i64;
                let b = lo + (len * (p + 1) / parts) as i64 - 1;
                Some((a, b))
            })
            .collect()
    }

    /// Per-chunk accumulators, in chunk order.
    pub(crate) fn run<A: Send>(
        &self,
        parts: Option<usize>,
        init: impl Fn() -> A + Sync,
        visit: impl Fn(&mut A, &[i64], usize) + Sync,
    ) -> Vec<A> {
        self.chunks(parts)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                self.scan(c, &mut acc, &visit);
                acc
            })
            .collect()
    }

    pub(crate) fn histogram(&self, parts: Option<usize>) -> Vec<u64> {
        let k = self.thresholds.len();
        let per = self.run(parts, || vec![0u64; k], |h, _, j| h[j] += 1);
        let mut out = vec![0u64; k];
        for h in per {
            for (o, c) in out.iter_mut().zip(h) {
                *o += c;
            }
        }
        // cumulative: mu <= T_j for all j at or above the class
        for j in 1..k {
            out[j] += out[j - 1];
        }
        out
    }
}

/// Sorted, deduplicated thresholds, rejecting negative values.
pub(crate) fn normalize(thresholds: &[BigRational]) -> Result<Vec<BigRational>> {
    if thresholds.iter().any(|t| t.is_negative()) {
        return Err(Error::Invalid("measure bound T must be nonnegative".into()));
    }
    let mut v = thresholds.to_vec();
    v.sort();
    v.dedup();
    Ok(v)
}
