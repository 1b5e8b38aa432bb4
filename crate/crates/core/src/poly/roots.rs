//! Double-precision Aberth–Ehrlich iteration with a-posteriori inclusion disks.
//!
//! For pairwise distinct approximations `z_i` of the roots of a degree-`n`
//! polynomial with leading coefficient `a`, the disks of radius
//! `n |p(z_i)| / |a prod_{j != i} (z_i - z_j)|` around `z_i` cover every root,
//! and each connected component of their union holds as many roots as disks.
//! Rounding in the evaluation is absorbed by inflating the radii.

use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;
const MAX_ITER: usize = 200;
const START_ANGLE: f64 = 0.7;

/// Cauchy's root bound: the positive root of `|a_0| x^n - sum |a_i| x^{n-i}`.
pub(crate) fn cauchy_radius(coeffs: &[f64]) -> f64 {
    let a0 = coeffs[0].abs();
    let rest: Vec<f64> = coeffs[1..].iter().map(|c| c.abs() / a0).collect();
    if rest.iter().all(|&c| c == 0.0) {
        return 0.0;
    }
    let g = |x: f64| {
        let mut v = 1.0;
        for c in &rest {
            v = v * x - c;
        }
        v
    };
    let mut hi = 1.0 + rest.iter().cloned().fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub(crate) fn circle_start(coeffs: &[f64], z: &mut [Complex64]) {
    let n = z.len();
    let r = cauchy_radius(coeffs).max(f64::MIN_POSITIVE.sqrt());
    for (k, zk) in z.iter_mut().enumerate() {
        let theta = std::f64::consts::TAU * k as f64 / n as f64 + START_ANGLE;
        *zk = Complex64::from_polar(r, theta);
    }
}

/// Value, derivative and a rounding-error bound for `p(z)`.
#[inline]
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = Complex64::new(coeffs[0], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = coeffs[0].abs();
    for &c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * az + c.abs();
    }
    let n = (coeffs.len() - 1) as f64;
    (p, dp, 8.0 * (n + 1.0) * EPS * bound)
}

/// Runs Aberth iterations in place. `coeffs` is descending with a nonzero
/// leading entry and `z.len()` equals the degree. Returns whether every
/// approximation settled.
pub(crate) fn aberth(coeffs: &[f64], z: &mut [Complex64]) -> bool {
    let n = z.len();
    if n == 0 {
        return true;
    }
    let mut done = [false; 64];
    let mut done_vec;
    let done: &mut [bool] = if n <= 64 {
        &mut done[..n]
    } else {
        done_vec = vec![false; n];
        &mut done_vec
    };
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp, err) = horner(coeffs, zi);
            if p.norm() <= err {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (zi - zj).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            all = false;
            if !(w.re.is_finite() && w.im.is_finite()) {
                let nudge = (zi.norm() + 1.0) * 1e-7;
                z[i] = zi + Complex64::new(nudge, nudge * 0.5);
                continue;
            }
            let next = zi - w;
            z[i] = next;
            if w.norm() <= 4.0 * EPS * next.norm() {
                done[i] = true;
            }
        }
        if all {
            return true;
        }
    }
    done.iter().all(|&d| d)
}

/// Inclusion radii for the current approximations (`inf` where undefined).
pub(crate) fn inclusion_radii(coeffs: &[f64], z: &[Complex64], radii: &mut [f64]) {
    let n = z.len();
    let a0 = coeffs[0].abs();
    let slack = 1.0 + 16.0 * (n as f64 + 2.0) * EPS;
    for i in 0..n {
        let (p, _, err) = horner(coeffs, z[i]);
        let mut den = a0;
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                den *= (z[i] - zj).norm();
            }
        }
        radii[i] = if den > 0.0 && den.is_finite() {
            (n as f64) * (p.norm() + err) / den * slack
        } else {
            f64::INFINITY
        };
    }
}

/// Connected components of the union of disks, as a component id per disk.
pub(crate) fn disk_components(z: &[Complex64], radii: &[f64]) -> Vec<usize> {
    let n = z.len();
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
            let gap = (z[i] - z[j]).norm();
            if gap <= (radii[i] + radii[j]) * (1.0 + 4.0 * EPS) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Interval enclosure of the Mahler measure built from f64 disks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct F64Cert {
    pub lo: f64,
    pub hi: f64,
    /// Roots certainly outside the closed unit disk.
    pub k_out: usize,
    /// Roots whose component meets the unit circle.
    pub k_unc: usize,
}

impl F64Cert {
    pub(crate) fn exact(mu: f64) -> Self {
        F64Cert {
            lo: mu,
            hi: mu,
            k_out: 0,
            k_unc: 0,
        }
    }
}

pub(crate) fn cert_from_disks(lead: f64, z: &[Complex64], radii: &[f64]) -> F64Cert {
    let n = z.len();
    let comp = disk_components(z, radii);
    let mut lo = lead.abs();
    let mut hi = lead.abs();
    let (mut k_out, mut k_unc) = (0, 0);
    let mut seen = [false; 64];
    let mut seen_vec;
    let seen: &mut [bool] = if n <= 64 {
        &mut seen[..n]
    } else {
        seen_vec = vec![false; n];
        &mut seen_vec
    };
    for c in 0..n {
        if seen[comp[c]] {
            continue;
        }
        seen[comp[c]] = true;
        let mut m = 0;
        let mut clo = f64::INFINITY;
        let mut chi = 0.0f64;
        for i in 0..n {
            if comp[i] == comp[c] {
                m += 1;
                let a = z[i].norm();
                clo = clo.min(a - radii[i]);
                chi = chi.max(a + radii[i]);
            }
        }
        if clo > 1.0 {
            k_out += m;
        } else if chi >= 1.0 {
            k_unc += m;
        }
        lo *= clo.max(1.0).powi(m as i32);
        hi *= chi.max(1.0).powi(m as i32);
    }
    let slack = 16.0 * (n as f64 + 2.0) * EPS;
    F64Cert {
        lo: lo * (1.0 - slack),
        hi: if hi.is_finite() {
            hi * (1.0 + slack)
        } else {
            f64::INFINITY
        },
        k_out,
        k_unc,
    }
}

/// Reusable buffers so the enumeration hot loop can warm-start from the
/// previous candidate's roots.
#[derive(Default)]
pub(crate) struct RootWorkspace {
    coeffs: Vec<f64>,
    z: Vec<Complex64>,
    radii: Vec<f64>,
    warm: bool,
}

impl RootWorkspace {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Certificate for a real coefficient vector (descending, any leading or
    /// trailing zeros).
    pub(crate) fn certify(&mut self, w: &[f64]) -> F64Cert {
        let Some(first) = w.iter().position(|&c| c != 0.0) else {
            return F64Cert::exact(0.0);
        };
        let last = w.iter().rposition(|&c| c != 0.0).unwrap();
        let p = &w[first..=last];
        match p.len() {
            1 => return F64Cert::exact(p[0].abs()),
            2 => return F64Cert::exact(p[0].abs().max(p[1].abs())),
            _ => {}
        }
        let n = p.len() - 1;
        self.coeffs.clear();
        self.coeffs.extend_from_slice(p);
        if self.z.len() != n || !self.warm {
            self.z.resize(n, Complex64::new(0.0, 0.0));
            circle_start(&self.coeffs, &mut self.z);
        }
        let mut ok = aberth(&self.coeffs, &mut self.z);
        if !ok && self.warm {
            circle_start(&self.coeffs, &mut self.z);
            ok = aberth(&self.coeffs, &mut self.z);
        }
        self.warm = ok && self.z.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        self.radii.resize(n, 0.0);
        inclusion_radii(&self.coeffs, &self.z, &mut self.radii);
        cert_from_disks(p[0], &self.z, &self.radii)
    }

    pub(crate) fn certify_i64(&mut self, w: &[i64]) -> F64Cert {
        let mut buf = [0.0f64; 32];
        if w.len() <= 32 {
            for (b, &c) in buf.iter_mut().zip(w) {
                *b = c as f64;
            }
            self.certify(&buf[..w.len()])
        } else {
            let v: Vec<f64> = w.iter().map(|&c| c as f64).collect();
            self.certify(&v)
        }
    }

    /// Measure enclosure valid for every member of the family
    /// `w + s e_axis`, `|s| <= h`, where `w` has nonzero first and last
    /// entries and `lead_lo <= |w_0 + s e_axis| <= lead_hi` over the family.
    /// Each Weierstrass correction is bounded over the family, so every
    /// member has its roots in the enlarged disks.
    pub(crate) fn family_enclosure(&mut self, w: &[f64], axis: usize, h: f64, lead_lo: f64, lead_hi: f64) -> (f64, f64) {
        let n = w.len() - 1;
        self.coeffs.clear();
        self.coeffs.extend_from_slice(w);
        if self.z.len() != n || !self.warm {
            self.z.resize(n, Complex64::new(0.0, 0.0));
            circle_start(&self.coeffs, &mut self.z);
        }
        let mut ok = aberth(&self.coeffs, &mut self.z);
        if !ok && self.warm {
            circle_start(&self.coeffs, &mut self.z);
            ok = aberth(&self.coeffs, &mut self.z);
        }
        self.warm = ok && self.z.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        self.radii.resize(n, 0.0);
        let slack = 1.0 + 16.0 * (n as f64 + 2.0) * EPS;
        for i in 0..n {
            let (p, _, err) = horner(&self.coeffs, self.z[i]);
            let extra = h * self.z[i].norm().powi((n - axis) as i32);
            let mut den = lead_lo;
            for (j, zj) in self.z.iter().enumerate() {
                if j != i {
                    den *= (self.z[i] - zj).norm();
                }
            }
            self.radii[i] = if den > 0.0 && den.is_finite() {
                (n as f64) * (p.norm() + err + extra) / den * slack
            } else {
                f64::INFINITY
            };
        }
        let lo = cert_from_disks(lead_lo, &self.z, &self.radii).lo;
        let hi = cert_from_disks(lead_hi, &self.z, &self.radii).hi;
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_of(w: &[f64]) -> Vec<Complex64> {
        let mut z = vec![Complex64::new(0.0, 0.0); w.len() - 1];
        circle_start(w, &mut z);
        assert!(aberth(w, &mut z));
        z
    }

    #[test]
    fn cubic_real_root() {
        let z = roots_of(&[1.0, 0.0, -1.0, -1.0]);
        let real: Vec<f64> = z.iter().filter(|c| c.im.abs() < 1e-12).map(|c| c.re).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0] - 1.324_717_957_244_746).abs() < 1e-13);
    }

    #[test]
    fn radii_cover_true_roots() {
        let w = [2.0, -3.0, -11.0, 6.0];
        let z = roots_of(&w);
        let mut r = vec![0.0; 3];
        inclusion_radii(&w, &z, &mut r);
        for truth in [3.0, -2.0, 0.5] {
            assert!(z
                .iter()
                .zip(&r)
                .any(|(c, rad)| (c - Complex64::new(truth, 0.0)).norm() <= *rad));
        }
    }

    #[test]
    fn golden_ratio_measure() {
        let mut ws = RootWorkspace::new();
        let c = ws.certify(&[1.0, -1.0, -1.0]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(c.lo <= phi && phi <= c.hi);
        assert!(c.hi - c.lo < 1e-12);
        assert_eq!((c.k_out, c.k_unc), (1, 0));
    }

    #[test]
    fn double_root_still_enclosed() {
        let mut ws = RootWorkspace::new();
        let c = ws.certify(&[1.0, -4.0, 4.0]);
        assert!(c.lo <= 4.0 && 4.0 <= c.hi);
        // A double root is only resolved to about sqrt(eps).
        assert!(c.hi - c.lo < 1e-4);
    }

    #[test]
    fn unit_circle_roots_are_uncertain() {
        let mut ws = RootWorkspace::new();
        let c = ws.certify(&[1.0, 0.0, 1.0]);
        assert!(c.lo <= 1.0 && 1.0 <= c.hi);
        assert_eq!(c.k_unc, 2);
    }
}
