//! Brute-force scan of the full coefficient box that decides every candidate
//! with the exact comparison alone, no pruning.

use std::cmp::Ordering;

use mahler_census::census::{count_multi, enumerate, EnumFilter};
use mahler_census::poly::{coefficient_box, IntPoly, MeasureOracle};
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub const TMAX: i64 = 6;

pub fn t(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Counts for T = 1..=TMAX and the members at T = 2.
fn brute(d: usize, lead: &[i64], trail: &[i64]) -> (Vec<u64>, Vec<Vec<i64>>) {
    let b: Vec<i64> = coefficient_box(d, &t(TMAX)).iter().map(|x| x.to_i64().unwrap()).collect();
    let free: Vec<usize> = (lead.len()..d + 1 - trail.len()).collect();
    let mut w = vec![0i64; d + 1];
    w[..lead.len()].copy_from_slice(lead);
    w[d + 1 - trail.len()..].copy_from_slice(trail);
    for &i in &free {
        w[i] = -b[i];
    }
    let mut counts = vec![0u64; TMAX as usize];
    let mut at_two = Vec::new();
    loop {
        let mut o = MeasureOracle::new(&IntPoly::from_i64(&w));
        for tt in 1..=TMAX {
            if o.compare(&t(tt)) != Ordering::Greater {
                counts[tt as usize - 1] += 1;
                if tt == 2 {
                    at_two.push(w.clone());
                }
            }
        }
        // odometer, last free coordinate fastest
        let mut k = free.len();
        loop {
            if k == 0 {
                return (counts, at_two);
            }
            k -= 1;
            let i = free[k];
            if w[i] < b[i] {
                w[i] += 1;
                break;
            }
            w[i] = -b[i];
        }
    }
}

/// Compares pruned counts for T = 1..=TMAX and the member list at T = 2.
pub fn compare(d: usize, lead: &[i64], trail: &[i64]) -> Result<(), String> {
    let (expected, members) = brute(d, lead, trail);
    let f = EnumFilter::at_most(d, t(0))
        .slice(lead.to_vec(), trail.to_vec())
        .map_err(|e| e.to_string())?;
    let ts: Vec<BigRational> = (1..=TMAX).map(t).collect();
    let got: Vec<u64> = count_multi(&f, &ts)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.to_u64().unwrap())
        .collect();
    if got != expected {
        return Err(format!("d={d} lead={lead:?} trail={trail:?}: counts {got:?} != {expected:?}"));
    }
    let mut g = f;
    g.bound = t(2);
    let listed: Vec<Vec<i64>> = enumerate(&g)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| p.to_i64().unwrap())
        .collect();
    if listed != members {
        return Err(format!("d={d} lead={lead:?} trail={trail:?}: member lists differ at T=2"));
    }
    Ok(())
}

/// Every (d, lead, trail) with d <= 3, at most two fixed coefficients and
/// fixed values in [-2, 2].
pub fn slice_configs() -> Vec<(usize, Vec<i64>, Vec<i64>)> {
    let mut out = Vec::new();
    for d in 1..=3 {
        out.push((d, vec![], vec![]));
        for a in -2..=2 {
            out.push((d, vec![a], vec![]));
            out.push((d, vec![], vec![a]));
            for b in -2..=2 {
                out.push((d, vec![a, b], vec![]));
                out.push((d, vec![a], vec![b]));
                out.push((d, vec![], vec![a, b]));
            }
        }
    }
    out
}
