//! Boundary patches `b_{k,d}^eps(x, y) = (1, x) * (y, eps)`, their monic
//! counterparts `(1, x) * (1, y, eps T)`, and the Lipschitz checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{binom, measure_ws, rng_for, stream, TOL};
use crate::error::{Error, Result};
use crate::poly::RootWorkspace;

const MAX_ATTEMPTS: u64 = 2_000_000;

/// One boundary patch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatchSpec {
    pub d: usize,
    pub k: usize,
    pub epsilon: i8,
    /// Patch of the boundary of the monic slice at measure `t`.
    pub monic: bool,
    pub t: f64,
}

impl PatchSpec {
    pub fn new(d: usize, k: usize, epsilon: i8) -> Result<Self> {
        let s = PatchSpec {
            d,
            k,
            epsilon,
            monic: false,
            t: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn monic(d: usize, k: usize, epsilon: i8, t: f64) -> Result<Self> {
        let s = PatchSpec {
            d,
            k,
            epsilon,
            monic: true,
            t,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(Error::Invalid("epsilon must be ±1".into()));
        }
        let kmax = if self.monic { self.d.saturating_sub(1) } else { self.d };
        if self.k > kmax || (self.monic && self.d == 0) {
            return Err(Error::Invalid(format!("k = {} out of range for d = {}", self.k, self.d)));
        }
        if self.monic && !(self.t > 0.0) {
            return Err(Error::Invalid("monic patches need T > 0".into()));
        }
        Ok(())
    }

    /// Length of `y`.
    pub fn y_len(&self) -> usize {
        if self.monic {
            self.d - self.k - 1
        } else {
            self.d - self.k
        }
    }

    /// Value of `mu` on the patch.
    pub fn target(&self) -> f64 {
        if self.monic {
            self.t
        } else {
            1.0
        }
    }

    fn y_poly(&self, y: &[f64]) -> Vec<f64> {
        let eps = self.epsilon as f64;
        let mut v = Vec::with_capacity(y.len() + 2);
        if self.monic {
            v.push(1.0);
            v.extend_from_slice(y);
            v.push(eps * self.t);
        } else {
            v.extend_from_slice(y);
            v.push(eps);
        }
        v
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `(z^k + x_1 z^(k-1) + ... + x_k)` times the `y` factor.
pub fn patch_map(spec: &PatchSpec, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    spec.validate()?;
    if x.len() != spec.k || y.len() != spec.y_len() {
        return Err(Error::Invalid(format!(
            "expected |x| = {} and |y| = {}, got {} and {}",
            spec.k,
            spec.y_len(),
            x.len(),
            y.len()
        )));
    }
    let mut xp = Vec::with_capacity(x.len() + 1);
    xp.push(1.0);
    xp.extend_from_slice(x);
    Ok(convolve(&xp, &spec.y_poly(y)))
}

/// A sampled patch point and `|mu(image) - target| / target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatchSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub image: Vec<f64>,
    pub residual: f64,
}

struct Sampler<'a> {
    spec: &'a PatchSpec,
    ws: RootWorkspace,
    attempts: u64,
    buf: Vec<f64>,
}

impl Sampler<'_> {
    /// `x` with `mu(1, x) <= 1`: all roots in the closed unit disk.
    fn draw_x(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
        let k = self.spec.k;
        let mut x = vec![0.0; k];
        loop {
            if self.attempts >= MAX_ATTEMPTS {
                return None;
            }
            self.attempts += 1;
            for (l, xl) in x.iter_mut().enumerate() {
                let h = binom(k, l + 1);
                *xl = rng.gen_range(-h..=h);
            }
            self.buf.clear();
            self.buf.push(1.0);
            self.buf.extend_from_slice(&x);
            if measure_ws(&mut self.ws, &self.buf) <= 1.0 + TOL {
                return Some(x);
            }
        }
    }

    /// `y` with `mu(y, eps) <= 1` (plain) or `mu(1, y, eps T) <= T` (monic):
    /// all roots outside the open unit disk.
    fn draw_y(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
        let n = self.spec.d - self.spec.k;
        let target = self.spec.target();
        let mut y = vec![0.0; self.spec.y_len()];
        loop {
            if self.attempts >= MAX_ATTEMPTS {
                return None;
            }
            self.attempts += 1;
            for (j, yj) in y.iter_mut().enumerate() {
                // coordinate j of y is coefficient j (plain) or j + 1 (monic)
                let idx = if self.spec.monic { j + 1 } else { j };
                let h = binom(n, idx) * target;
                *yj = rng.gen_range(-h..=h);
            }
            let poly = self.spec.y_poly(&y);
            if measure_ws(&mut self.ws, &poly) <= target * (1.0 + TOL) {
                return Some(y);
            }
        }
    }

    fn draw(&mut self, rng: &mut ChaCha8Rng) -> Option<(Vec<f64>, Vec<f64>)> {
        let x = self.draw_x(rng)?;
        let y = self.draw_y(rng)?;
        Some((x, y))
    }
}

fn rejection_error(spec: &PatchSpec, accepted: u64, attempts: u64) -> Error {
    Error::Rejection {
        what: format!("patch d={} k={} eps={} monic={}", spec.d, spec.k, spec.epsilon, spec.monic),
        accepted,
        attempts,
    }
}

/// Rejection-samples points of `J_k x K^eps` (or the monic analogue) from
/// the coefficient box and measures the residual of each image.
pub fn sample_patch(spec: &PatchSpec, samples: u64, seed: u64) -> Result<Vec<PatchSample>> {
    spec.validate()?;
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let out: Vec<(Option<PatchSample>, u64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, stream::PATCH, i);
            let mut s = Sampler {
                spec,
                ws: RootWorkspace::new(),
                attempts: 0,
                buf: Vec::new(),
            };
            let Some((x, y)) = s.draw(&mut rng) else {
                return (None, s.attempts);
            };
            let image = patch_map(spec, &x, &y).expect("dimensions match");
            let mu = measure_ws(&mut s.ws, &image);
            let residual = (mu - spec.target()).abs() / spec.target();
            (Some(PatchSample { x, y, image, residual }), s.attempts)
        })
        .collect();
    let attempts: u64 = out.iter().map(|(_, a)| a).sum();
    let accepted = out.iter().filter(|(p, _)| p.is_some()).count() as u64;
    // two accepted draws (x and y) per sample
    if accepted < samples || (2 * accepted) as f64 / attempts as f64 <= 1e-4 {
        return Err(rejection_error(spec, 2 * accepted, attempts));
    }
    Ok(out.into_iter().map(|(p, _)| p.expect("checked")).collect())
}

/// Largest ratios observed by [`lipschitz_check`]; both must stay at most 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub pairs: u64,
    /// `max |T b(p1) - T b(p2)|_inf / (K T |p1 - p2|_inf)`, `K = d C(d, d/2)`.
    pub lip_max: f64,
    /// `max |mu(w1)^(1/d) - mu(w2)^(1/d)| / (2 |w1 - w2|_1^(1/d))`.
    pub cvlip_max: f64,
    pub pass: bool,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Checks the patch Lipschitz estimate on random parameter pairs and the
/// Chern–Vaaler inequality on random coefficient pairs. Half of the pairs are
/// independent, half are close together.
pub fn lipschitz_check(spec: &PatchSpec, t: f64, pairs: u64, seed: u64) -> Result<LipschitzReport> {
    spec.validate()?;
    if spec.monic {
        return Err(Error::Invalid("the Lipschitz check is stated for the plain patches".into()));
    }
    if pairs == 0 || !(t > 0.0) {
        return Err(Error::Invalid("need pairs >= 1 and T > 0".into()));
    }
    let d = spec.d;
    let kk = d as f64 * binom(d, d / 2);
    let lip: Vec<Result<f64>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, stream::LIP, i);
            let mut s = Sampler {
                spec,
                ws: RootWorkspace::new(),
                attempts: 0,
                buf: Vec::new(),
            };
            let fail = |s: &Sampler| rejection_error(spec, 0, s.attempts);
            let (x1, y1) = s.draw(&mut rng).ok_or_else(|| fail(&s))?;
            let (x2, y2) = if i % 2 == 0 {
                s.draw(&mut rng).ok_or_else(|| fail(&s))?
            } else {
                // nearby pair: perturb and keep it if it stays on the patch
                let scale = 10f64.powf(-rng.gen_range(1.0..6.0));
                let mut best = None;
                for _ in 0..32 {
                    let x: Vec<f64> = x1.iter().map(|v| v + scale * rng.gen_range(-1.0..=1.0)).collect();
                    let y: Vec<f64> = y1.iter().map(|v| v + scale * rng.gen_range(-1.0..=1.0)).collect();
                    let mut xp = vec![1.0];
                    xp.extend_from_slice(&x);
                    let inside_x = measure_ws(&mut s.ws, &xp) <= 1.0 + TOL;
                    let inside_y = measure_ws(&mut s.ws, &spec.y_poly(&y)) <= 1.0 + TOL;
                    if inside_x && inside_y {
                        best = Some((x, y));
                        break;
                    }
                }
                match best {
                    Some(p) => p,
                    None => s.draw(&mut rng).ok_or_else(|| fail(&s))?,
                }
            };
            let b1 = patch_map(spec, &x1, &y1)?;
            let b2 = patch_map(spec, &x2, &y2)?;
            let lhs = b1.iter().zip(&b2).map(|(a, b)| (t * a - t * b).abs()).fold(0.0, f64::max);
            let dp = x1
                .iter()
                .zip(&x2)
                .chain(y1.iter().zip(&y2))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(ratio(lhs, kk * t * dp))
        })
        .collect();
    let mut lip_max = 0.0f64;
    for r in lip {
        lip_max = lip_max.max(r?);
    }
    let inv_d = 1.0 / d.max(1) as f64;
    let cv_max = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, stream::CVLIP, i);
            let mut ws = RootWorkspace::new();
            let w1: Vec<f64> = (0..=d).map(|j| t * binom(d, j) * rng.gen_range(-1.0..=1.0)).collect();
            let w2: Vec<f64> = if i % 2 == 0 {
                (0..=d).map(|j| t * binom(d, j) * rng.gen_range(-1.0..=1.0)).collect()
            } else {
                let scale = t * 10f64.powf(-rng.gen_range(1.0..6.0));
                w1.iter().map(|v| v + scale * rng.gen_range(-1.0..=1.0)).collect()
            };
            let m1 = measure_ws(&mut ws, &w1).powf(inv_d);
            let m2 = measure_ws(&mut ws, &w2).powf(inv_d);
            let l1: f64 = w1.iter().zip(&w2).map(|(a, b)| (a - b).abs()).sum();
            ratio((m1 - m2).abs(), 2.0 * l1.powf(inv_d))
        })
        .reduce(|| 0.0, f64::max);
    Ok(LipschitzReport {
        pairs,
        lip_max,
        cvlip_max: cv_max,
        pass: lip_max <= 1.0 && cv_max <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_edge_cases() {
        let s = PatchSpec::new(3, 0, -1).unwrap();
        assert_eq!(patch_map(&s, &[], &[2.0, 3.0, 4.0]).unwrap(), vec![2.0, 3.0, 4.0, -1.0]);
        let s = PatchSpec::new(2, 2, 1).unwrap();
        assert_eq!(patch_map(&s, &[0.5, -0.25], &[]).unwrap(), vec![1.0, 0.5, -0.25]);
        // (z + x1)(y0 z + eps)
        let s = PatchSpec::new(2, 1, 1).unwrap();
        assert_eq!(patch_map(&s, &[3.0], &[2.0]).unwrap(), vec![2.0, 1.0 + 6.0, 3.0]);
        assert!(patch_map(&s, &[3.0, 1.0], &[2.0]).is_err());
    }

    #[test]
    fn monic_map() {
        let s = PatchSpec::monic(3, 1, -1, 2.0).unwrap();
        // (z + 0.5)(z^2 + y1 z - 2)
        assert_eq!(patch_map(&s, &[0.5], &[1.0]).unwrap(), vec![1.0, 1.5, -1.5, -1.0]);
    }

    #[test]
    fn residuals_small() {
        for k in 0..=3 {
            for eps in [-1, 1] {
                let s = PatchSpec::new(3, k, eps).unwrap();
                let v = sample_patch(&s, 200, 3).unwrap();
                assert!(v.iter().all(|p| p.residual <= 1e-9), "k={k} eps={eps}");
            }
        }
        let s = PatchSpec::monic(3, 1, 1, 2.0).unwrap();
        assert!(sample_patch(&s, 100, 1).unwrap().iter().all(|p| p.residual <= 1e-9));
    }

    #[test]
    fn lipschitz_small() {
        let r = lipschitz_check(&PatchSpec::new(2, 1, 1).unwrap(), 1.0, 2000, 5).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn ranges() {
        assert!(PatchSpec::new(2, 3, 1).is_err());
        assert!(PatchSpec::new(2, 1, 0).is_err());
        assert!(PatchSpec::monic(2, 2, 1, 1.0).is_err());
    }
}
