//! Geometry of the star body `U_d = { w : mu(w) <= 1 }`: membership, Monte
//! Carlo volumes, boundary patches, Lipschitz and donut checks, and the
//! axis-parallel line scan.
//!
//! Every random draw comes from a ChaCha stream keyed by `(seed, op, index)`,
//! so results do not depend on how work is split across threads.

mod line;
mod patch;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::SliceSpec;
use crate::error::{Error, Result};
use crate::poly::RootWorkspace;

pub use line::{line_components, scan_lines, LineScan, LineSpec};
pub use patch::{lipschitz_check, patch_map, sample_patch, LipschitzReport, PatchSample, PatchSpec};

const BLOCK: usize = 4096;
const TOL: f64 = 1e-12;

pub(crate) mod stream {
    pub const VOLUME: u64 = 1;
    pub const SLICE: u64 = 2;
    pub const PATCH: u64 = 3;
    pub const LIP: u64 = 4;
    pub const CVLIP: u64 = 5;
    pub const DONUT: u64 = 6;
    pub const LINES: u64 = 7;
}

/// Generator for item `index` of operation `op`.
pub(crate) fn rng_for(seed: u64, op: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((op << 48) ^ index);
    r
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    num_integer::binomial(n as u64, k as u64) as f64
}

pub(crate) fn measure_ws(ws: &mut RootWorkspace, w: &[f64]) -> f64 {
    let c = ws.certify(w);
    if c.hi.is_finite() {
        0.5 * (c.lo + c.hi)
    } else {
        c.lo
    }
}

fn member_ws(ws: &mut RootWorkspace, w: &[f64], t: f64) -> bool {
    let lim = t + TOL * t;
    let c = ws.certify(w);
    if c.hi <= lim {
        return true;
    }
    if c.lo > lim {
        return false;
    }
    0.5 * (c.lo + c.hi) <= lim
}

/// `mu(w) <= T` up to a relative slack of `1e-12`, from a double-precision
/// root enclosure. Meant for sampling; exact counting goes through
/// [`crate::poly::compare_measure`].
pub fn membership(w: &[f64], t: f64) -> bool {
    member_ws(&mut RootWorkspace::new(), w, t)
}

/// Monte Carlo estimate of a volume.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub box_volume: f64,
}

impl MCEstimate {
    fn new(hits: u64, samples: u64, seed: u64, box_volume: f64) -> Self {
        let p = hits as f64 / samples as f64;
        MCEstimate {
            mean: box_volume * p,
            stderr: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            hits,
            seed,
            box_volume,
        }
    }

    /// `|mean - exact| <= k * stderr`.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        (self.mean - exact).abs() <= k * self.stderr
    }
}

/// Counts hits of `template` with coordinates `free` drawn from
/// `[-half_i, half_i]`.
fn mc_hits(template: &[f64], free: &[(usize, f64)], t: f64, samples: u64, seed: u64, op: u64) -> u64 {
    let blocks = (samples as usize).div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, op, b as u64);
            let mut ws = RootWorkspace::new();
            let mut w = template.to_vec();
            let n = BLOCK.min(samples as usize - b * BLOCK);
            let mut hits = 0u64;
            for _ in 0..n {
                for &(i, h) in free {
                    w[i] = rng.gen_range(-h..=h);
                }
                hits += member_ws(&mut ws, &w, t) as u64;
            }
            hits
        })
        .sum()
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < 10_000 {
        return Err(Error::Invalid(format!("need at least 10^4 samples, got {samples}")));
    }
    Ok(())
}

/// Estimate of `vol(T U_d) = V_d T^(d+1)` from the box `|w_i| <= C(d, i) T`.
pub fn mc_volume(d: usize, t: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    check_samples(samples)?;
    if !(t > 0.0) {
        return Err(Error::Invalid("T must be positive".into()));
    }
    let free: Vec<(usize, f64)> = (0..=d).map(|i| (i, binom(d, i) * t)).collect();
    let box_volume = free.iter().map(|(_, h)| 2.0 * h).product();
    let hits = mc_hits(&vec![0.0; d + 1], &free, t, samples, seed, stream::VOLUME);
    Ok(MCEstimate::new(hits, samples, seed, box_volume))
}

/// Estimate of the `(g+1)`-volume of the slice `S(T)` of `T U_d`.
pub fn mc_slice_volume(spec: &SliceSpec, t: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    check_samples(samples)?;
    if !(t > 0.0) {
        return Err(Error::Invalid("T must be positive".into()));
    }
    let d = spec.d;
    if spec.m() + spec.n() > d {
        return Err(Error::Invalid("a slice needs at least one free coefficient".into()));
    }
    let mut template = vec![0.0; d + 1];
    for (i, &v) in spec.lead.iter().enumerate() {
        template[i] = v as f64;
    }
    for (k, &v) in spec.trail.iter().enumerate() {
        template[d + 1 - spec.n() + k] = v as f64;
    }
    let free: Vec<(usize, f64)> = (spec.m()..=d - spec.n()).map(|i| (i, binom(d, i) * t)).collect();
    let box_volume = free.iter().map(|(_, h)| 2.0 * h).product();
    let hits = mc_hits(&template, &free, t, samples, seed, stream::SLICE);
    Ok(MCEstimate::new(hits, samples, seed, box_volume))
}

/// Outcome of [`donut_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DonutReport {
    pub samples: u64,
    pub delta_t: f64,
    /// Samples in the symmetric difference of `B_0` and `B_{1/T}`.
    pub in_difference: u64,
    /// Largest `|mu(x) - 1|` over those samples.
    pub max_deviation: f64,
    /// Points of the difference outside the band (at most 8 kept).
    pub witnesses: Vec<Vec<f64>>,
    pub pass: bool,
}

/// Checks that every sampled point of `B_0 △ B_{1/T}` has
/// `1 - delta_T <= mu(x) <= 1 + delta_T`, where `B_0 = { mu(x) <= 1 }` and
/// `B_{1/T} = { mu(l/T, x, r/T) <= 1 }`.
///
/// Even samples are uniform in a box containing both sets. The difference is
/// a thin shell for large `T`, so odd samples are moved along their ray to
/// `mu(x) = 1 + u` with `|u|` log-uniform in `[2e-12 delta_T, 2 delta_T]`.
pub fn donut_check(spec: &SliceSpec, t: f64, samples: u64, seed: u64) -> Result<DonutReport> {
    let k1 = crate::constants::to_f64(&crate::constants::k1_donut(spec)?);
    if t < k1 {
        return Err(Error::regime("donut", "T ≥ k_1"));
    }
    let delta = crate::constants::delta_t(spec, t)?;
    let d = spec.d;
    let (m, n) = (spec.m(), spec.n());
    let g1 = d + 1 - m - n;
    let halves: Vec<f64> = (0..g1).map(|j| binom(d, m + j)).collect();
    let blocks = (samples as usize).div_ceil(BLOCK);
    let parts: Vec<(u64, f64, Vec<Vec<f64>>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_for(seed, stream::DONUT, b as u64);
            let mut ws = RootWorkspace::new();
            let mut xt = vec![0.0; d + 1];
            for (i, &v) in spec.lead.iter().enumerate() {
                xt[i] = v as f64 / t;
            }
            for (k, &v) in spec.trail.iter().enumerate() {
                xt[d + 1 - n + k] = v as f64 / t;
            }
            let mut x = vec![0.0; g1];
            let (mut count, mut dev, mut wit) = (0u64, 0.0f64, Vec::new());
            let mut shell = false;
            for _ in 0..BLOCK.min(samples as usize - b * BLOCK) {
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = rng.gen_range(-halves[j]..=halves[j]);
                }
                let mut mu0 = measure_ws(&mut ws, &x);
                if shell && mu0 > 0.0 {
                    // move along the ray to mu = 1 + u, |u| <= 2 delta
                    let mag = 2.0 * delta * 10f64.powf(-12.0 * rng.gen::<f64>());
                    let target = 1.0 + if rng.gen::<bool>() { mag } else { -mag };
                    let s = target / mu0;
                    x.iter_mut().for_each(|v| *v *= s);
                    mu0 = measure_ws(&mut ws, &x);
                }
                shell = !shell;
                for (j, xj) in x.iter().enumerate() {
                    xt[m + j] = *xj;
                }
                let mut_ = measure_ws(&mut ws, &xt);
                if (mu0 <= 1.0) != (mut_ <= 1.0) {
                    count += 1;
                    dev = dev.max((mu0 - 1.0).abs());
                    if !(1.0 - delta <= mu0 && mu0 <= 1.0 + delta) && wit.len() < 8 {
                        wit.push(x.clone());
                    }
                }
            }
            (count, dev, wit)
        })
        .collect();
    let mut rep = DonutReport {
        samples,
        delta_t: delta,
        in_difference: 0,
        max_deviation: 0.0,
        witnesses: Vec::new(),
        pass: true,
    };
    for (c, dv, w) in parts {
        rep.in_difference += c;
        rep.max_deviation = rep.max_deviation.max(dv);
        rep.witnesses.extend(w);
    }
    rep.witnesses.truncate(8);
    rep.pass = rep.witnesses.is_empty();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_basics() {
        assert!(membership(&[0.0, 0.0, 0.0], 1.0));
        assert!(membership(&[1.0, 0.0, -2.0], 2.0));
        assert!(!membership(&[1.0, 0.0, -2.0], 1.99));
        let w = [3.0, -1.0, 2.5];
        let s: Vec<f64> = w.iter().map(|c| c / 4.0).collect();
        assert_eq!(membership(&w, 4.0), membership(&s, 1.0));
    }

    #[test]
    fn degree_one_volume_is_the_square() {
        let e = mc_volume(1, 1.0, 10_000, 7).unwrap();
        assert_eq!(e.box_volume, 4.0);
        assert_eq!(e.hits, 10_000);
        assert_eq!(e.mean, 4.0);
    }

    #[test]
    fn quadratic_volume() {
        let e = mc_volume(2, 1.0, 200_000, 1).unwrap();
        assert!(e.within(8.0, 4.0), "{e:?}");
    }

    #[test]
    fn reproducible_and_thread_independent() {
        let a = mc_volume(3, 1.0, 20_000, 42).unwrap();
        let b = crate::census::with_threads(1, || mc_volume(3, 1.0, 20_000, 42).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_volume(2, 1.0, 100, 0).is_err());
    }

    #[test]
    fn donut_regime() {
        let s = SliceSpec::new(3, vec![1], vec![1]).unwrap();
        assert!(donut_check(&s, 10.0, 10_000, 0).unwrap_err().is_precondition());
        let k1 = crate::constants::to_f64(&crate::constants::k1_donut(&s).unwrap());
        let r = donut_check(&s, 10.0 * k1, 10_000, 0).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.in_difference > 0);
        assert!((r.delta_t - 10f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    }
}
