//! Connected components of `{ t : mu(a with t at position i) <= T }`.
//!
//! A coarse grid is refined by bisection. Each cell gets an enclosure of
//! `mu` over the whole cell; cells whose enclosure lies on one side of `T`
//! are settled, the rest are split down to `refine_depth`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{binom, member_ws, rng_for, stream, TOL};
use crate::error::{Error, Result};
use crate::poly::RootWorkspace;

/// The line through `anchor` parallel to coordinate axis `axis` of `R^(n+1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineSpec {
    pub n: usize,
    pub axis: usize,
    /// The `n` coordinates other than `axis`, in order.
    pub anchor: Vec<f64>,
}

impl LineSpec {
    pub fn new(n: usize, axis: usize, anchor: Vec<f64>) -> Result<Self> {
        if n == 0 || axis > n || anchor.len() != n || anchor.iter().any(|a| !a.is_finite()) {
            return Err(Error::Invalid(format!(
                "line needs N >= 1, axis <= N and {n} finite anchor coordinates"
            )));
        }
        Ok(LineSpec { n, axis, anchor })
    }

    /// Coefficient vector at parameter `t`.
    pub fn point(&self, t: f64) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.n + 1);
        w.extend_from_slice(&self.anchor[..self.axis]);
        w.push(t);
        w.extend_from_slice(&self.anchor[self.axis..]);
        w
    }

    /// `count` lines with a random axis and anchor drawn from the box
    /// `|a_j| <= C(N, j) * scale`.
    pub fn random(n: usize, count: u64, scale: f64, seed: u64) -> Result<Vec<LineSpec>> {
        (0..count)
            .map(|i| {
                let mut rng = rng_for(seed, stream::LINES, i);
                let axis = rng.gen_range(0..=n);
                let anchor = (0..=n)
                    .filter(|&j| j != axis)
                    .map(|j| {
                        let h = binom(n, j) * scale;
                        rng.gen_range(-h..=h)
                    })
                    .collect();
                LineSpec::new(n, axis, anchor)
            })
            .collect()
    }
}

/// Result of [`line_components`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineScan {
    pub components: u64,
    /// Set when a component may have been missed or merged.
    pub uncertain: bool,
    /// Smallest cells that straddled `T` without a sign change at their ends
    /// or midpoint.
    pub unresolved_cells: u64,
    pub evaluations: u64,
}

struct Scan<'a> {
    line: &'a LineSpec,
    t: f64,
    max_depth: u32,
    budget: u64,
    ws: RootWorkspace,
    buf: Vec<f64>,
    /// Index range of the coefficients that may be nonzero.
    core: (usize, usize),
    evaluations: u64,
    unresolved: u64,
    uncertain: bool,
}

impl Scan<'_> {
    fn inside(&mut self, x: f64) -> bool {
        self.evaluations += 1;
        let w = self.line.point(x);
        member_ws(&mut self.ws, &w, self.t)
    }

    /// Bounds for `mu` over the segment `[x0, x1]`.
    fn enclosure(&mut self, x0: f64, x1: f64) -> (f64, f64) {
        self.evaluations += 1;
        let (c, h) = (0.5 * (x0 + x1), 0.5 * (x1 - x0));
        let (s, e) = self.core;
        let mut axis = self.line.axis - s;
        let w = self.line.point(c);
        self.buf.clear();
        self.buf.extend_from_slice(&w[s..e]);
        if axis == 0 && self.buf.len() > 2 {
            // mu is invariant under reversal and the last coefficient is a
            // fixed nonzero number, so the leading one no longer moves
            self.buf.reverse();
            axis = self.buf.len() - 1;
        }
        let abs_range = |i: usize, v: f64| -> (f64, f64) {
            if i == axis {
                let lo = if x0 <= 0.0 && x1 >= 0.0 { 0.0 } else { x0.abs().min(x1.abs()) };
                (lo, x0.abs().max(x1.abs()))
            } else {
                (v.abs(), v.abs())
            }
        };
        match self.buf.len() {
            1 => abs_range(0, self.buf[0]),
            2 => {
                let (a, b) = (abs_range(0, self.buf[0]), abs_range(1, self.buf[1]));
                (a.0.max(b.0), a.1.max(b.1))
            }
            _ => {
                let (lead_lo, lead_hi) = abs_range(0, self.buf[0]);
                if lead_lo == 0.0 {
                    return (0.0, f64::INFINITY);
                }
                let buf = std::mem::take(&mut self.buf);
                let r = self.ws.family_enclosure(&buf, axis, h, lead_lo, lead_hi);
                self.buf = buf;
                r
            }
        }
    }

    /// Boundary crossings inside `[x0, x1]` given the states at both ends.
    fn cell(&mut self, x0: f64, x1: f64, s0: bool, s1: bool, depth: u32) -> u64 {
        let lim = self.t * (1.0 + TOL);
        let (lo, hi) = self.enclosure(x0, x1);
        if s0 == s1 && ((s0 && hi <= lim) || (!s0 && lo > lim)) {
            return 0;
        }
        let xm = 0.5 * (x0 + x1);
        let out_of_budget = self.evaluations >= self.budget;
        if depth >= self.max_depth || out_of_budget || xm <= x0 || xm >= x1 {
            if out_of_budget {
                self.uncertain = true;
            }
            if s0 != s1 {
                return 1;
            }
            if self.inside(xm) != s0 {
                self.uncertain = true;
                return 2;
            }
            self.unresolved += 1;
            return 0;
        }
        let sm = self.inside(xm);
        self.cell(x0, xm, s0, sm, depth + 1) + self.cell(xm, x1, sm, s1, depth + 1)
    }
}

/// Counts the maximal intervals of `{ t : mu(line(t)) <= T }`.
///
/// The scan covers `|t| <= C(N, i) T`, outside of which `mu > T`. Cells are
/// bisected at most `refine_depth` times; the scan also stops refining after
/// about `200 * resolution` evaluations and then reports `uncertain`.
pub fn line_components(line: &LineSpec, t: f64, resolution: usize, refine_depth: u32) -> Result<LineScan> {
    if resolution < 1000 {
        return Err(Error::Invalid(format!("resolution must be at least 1000, got {resolution}")));
    }
    if !(t > 0.0) {
        return Err(Error::Invalid("T must be positive".into()));
    }
    let line = LineSpec::new(line.n, line.axis, line.anchor.clone())?;
    let w = line.point(1.0);
    let mut s = 0;
    while s < line.axis && w[s] == 0.0 {
        s += 1;
    }
    let mut e = w.len();
    while e > line.axis + 1 && w[e - 1] == 0.0 {
        e -= 1;
    }
    let r = binom(line.n, line.axis) * t * (1.0 + 1e-9) + 1e-9;
    let mut scan = Scan {
        line: &line,
        t,
        max_depth: refine_depth,
        budget: 200 * resolution as u64,
        ws: RootWorkspace::new(),
        buf: Vec::new(),
        core: (s, e),
        evaluations: 0,
        unresolved: 0,
        uncertain: false,
    };
    let grid: Vec<f64> = (0..=resolution)
        .map(|k| -r + 2.0 * r * k as f64 / resolution as f64)
        .collect();
    let states: Vec<bool> = grid.iter().map(|&x| scan.inside(x)).collect();
    let mut transitions = 0;
    for k in 0..resolution {
        transitions += scan.cell(grid[k], grid[k + 1], states[k], states[k + 1], 0);
    }
    if transitions % 2 == 1 {
        scan.uncertain = true;
    }
    Ok(LineScan {
        components: transitions.div_ceil(2),
        uncertain: scan.uncertain,
        unresolved_cells: scan.unresolved,
        evaluations: scan.evaluations,
    })
}

/// Scans of every line in `lines`, in order.
pub fn scan_lines(lines: &[LineSpec], t: f64, resolution: usize, refine_depth: u32) -> Result<Vec<LineScan>> {
    lines
        .par_iter()
        .map(|l| line_components(l, t, resolution, refine_depth))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_closed_form() {
        let l = LineSpec::new(1, 0, vec![0.5]).unwrap();
        let s = line_components(&l, 1.0, 1000, 20).unwrap();
        assert_eq!(s.components, 1);
        assert!(!s.uncertain);
    }

    #[test]
    fn origin_lines() {
        for n in 1..=4 {
            for axis in 0..=n {
                let l = LineSpec::new(n, axis, vec![0.0; n]).unwrap();
                let s = line_components(&l, 1.0, 1000, 20).unwrap();
                assert_eq!(s.components, 1, "n={n} axis={axis} {s:?}");
                assert!(!s.uncertain);
            }
        }
    }

    #[test]
    fn empty_line() {
        // mu(z^2 + t z + 3) >= 3 for every t
        let l = LineSpec::new(2, 1, vec![1.0, 3.0]).unwrap();
        assert_eq!(line_components(&l, 1.0, 1000, 20).unwrap().components, 0);
    }

    #[test]
    fn two_components() {
        // found by the random suite; a 4e6-point grid gives the pieces
        // [-1, 0.0881] and [0.7396, 1]
        let l = LineSpec::new(3, 3, vec![0.2176919172761187, -0.18019302390345882, -0.9858119630324769]).unwrap();
        let s = line_components(&l, 1.0, 1000, 24).unwrap();
        assert_eq!(s.components, 2);
        assert!(!s.uncertain);
    }

    #[test]
    fn random_lines_bounded() {
        for n in 1..=3u32 {
            let bound = (n as u64 + 1) << (n - 1);
            let lines = LineSpec::random(n as usize, 30, 1.0, 9).unwrap();
            for s in scan_lines(&lines, 1.0, 1000, 16).unwrap() {
                assert!(s.components <= bound, "{s:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LineSpec::new(2, 3, vec![0.0, 0.0]).is_err());
        let l = LineSpec::new(1, 0, vec![0.0]).unwrap();
        assert!(line_components(&l, 1.0, 999, 4).is_err());
    }
}
