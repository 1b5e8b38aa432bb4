//! The verify suites. Each runs a fixed parameter grid and records one check
//! per grid point: a computed left side, an explicit right side and the
//! relation between them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::census::{
    count_algebraic, count_m1_grid, count_m_atmost_grid, count_reducible_grid, moebius_check, AlgebraicClass,
    CountReport, Height, ReducibleClass,
};
use crate::census::fmt_f64;
use crate::constants::{
    appendix_checks, k1_donut, kappa0, kappa1, monic_volume, rational_string, to_f64, volume, volume_checks, SliceSpec,
};
use crate::error::{Error, Result};
use crate::geom::{
    donut_check, lipschitz_check, mc_slice_volume, mc_volume, sample_patch, scan_lines, LineSpec, MCEstimate,
    PatchSpec,
};

pub const SCHEMA: &str = "v1";

/// `V_15` as a reduced fraction.
pub const V15: &str = "2658455991569831745807614120560689152/13904872587870848957579157123046875";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bounds,
    Sieves,
    Appendix,
    Geometry,
    Moebius,
    Davenport,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bounds,
        Suite::Sieves,
        Suite::Appendix,
        Suite::Geometry,
        Suite::Moebius,
        Suite::Davenport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Sieves => "sieves",
            Suite::Appendix => "appendix",
            Suite::Geometry => "geometry",
            Suite::Moebius => "moebius",
            Suite::Davenport => "davenport",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

/// A grid point that could not be checked, and why.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skip {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub suite: Suite,
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skip>,
    pub summary: Summary,
    /// Every check passed.
    pub pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Sample sizes and seed for the randomized suites.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cap: f64,
    /// Monte Carlo volume samples.
    pub samples: u64,
    pub patch_samples: u64,
    pub pairs: u64,
    pub donut_samples: u64,
    pub lines: u64,
    pub resolution: usize,
    pub refine_depth: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            cap: crate::census::DEFAULT_CAP,
            samples: 1_000_000,
            patch_samples: 1000,
            pairs: 10_000,
            donut_samples: 10_000,
            lines: 1000,
            resolution: 1000,
            refine_depth: 24,
        }
    }
}

#[derive(Default)]
struct Acc {
    checks: Vec<Check>,
    skipped: Vec<Skip>,
}

impl Acc {
    fn push(&mut self, name: String, lhs: String, relation: &str, rhs: String, pass: bool, witnesses: Vec<String>) {
        self.checks.push(Check {
            name,
            lhs,
            relation: relation.into(),
            rhs,
            pass,
            witnesses,
        });
    }

    fn skip(&mut self, name: String, reason: String) {
        self.skipped.push(Skip { name, reason });
    }

    fn le(&mut self, name: String, lhs: f64, rhs: f64) {
        self.push(name, fmt_f64(lhs), "<=", fmt_f64(rhs), lhs <= rhs, Vec::new());
    }

    fn eq<T: PartialEq + ToString>(&mut self, name: String, lhs: T, rhs: T) {
        let pass = lhs == rhs;
        self.push(name, lhs.to_string(), "==", rhs.to_string(), pass, Vec::new());
    }

    /// `|count - main term| <= bound` (just `count <= bound` for the
    /// reducible classes, whose main term is zero).
    fn count(&mut self, name: String, r: &CountReport) {
        match (r.error_bound, r.within_bound) {
            (Some(b), Some(pass)) => {
                let lhs = if r.main_term == 0.0 {
                    r.count.to_string()
                } else {
                    fmt_f64((r.count.to_f64().unwrap_or(f64::INFINITY) - r.main_term).abs())
                };
                let w = if pass {
                    Vec::new()
                } else {
                    vec![format!("count={} main_term={}", r.count, fmt_f64(r.main_term))]
                };
                self.push(name, lhs, "<=", fmt_f64(b), pass, w);
            }
            _ => self.skip(name, r.note.clone().unwrap_or_else(|| "no explicit bound".into())),
        }
    }

    fn mc(&mut self, name: String, e: &MCEstimate, exact: f64) {
        let pass = e.within(exact, 4.0);
        let w = if pass {
            Vec::new()
        } else {
            vec![format!("mean={} stderr={} exact={}", fmt_f64(e.mean), fmt_f64(e.stderr), fmt_f64(exact))]
        };
        self.push(
            name,
            fmt_f64((e.mean - exact).abs()),
            "<=",
            format!("4*{}", fmt_f64(e.stderr)),
            pass,
            w,
        );
    }

    /// Records a failed check for errors that mean the criterion did not hold,
    /// a skip for violated preconditions, and propagates the rest.
    fn fallible<T>(&mut self, name: String, r: Result<T>, f: impl FnOnce(&mut Acc, String, T)) -> Result<()> {
        match r {
            Ok(v) => f(self, name, v),
            Err(e) if e.is_precondition() => self.skip(name, e.to_string()),
            Err(e @ Error::Rejection { .. }) => self.push(name, "error".into(), "==", "ok".into(), false, vec![e.to_string()]),
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn finish(self, suite: Suite, config: &VerifyConfig) -> VerifyReport {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            checks: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
            skipped: self.skipped.len(),
        };
        VerifyReport {
            schema: SCHEMA,
            suite,
            config: config.clone(),
            pass: summary.failed == 0 && summary.checks > 0,
            checks: self.checks,
            skipped: self.skipped,
            summary,
        }
    }
}

fn ints(range: std::ops::RangeInclusive<i64>) -> Vec<BigRational> {
    range.map(|t| BigRational::from_integer(t.into())).collect()
}

fn bounds(acc: &mut Acc, cfg: &VerifyConfig) -> Result<()> {
    for d in 1..=3 {
        for r in count_m_atmost_grid(d, &ints(1..=10), cfg.cap)? {
            acc.count(format!("genpolycount d={d} T={}", r.t), &r);
        }
    }
    for d in 2..=4 {
        for r in count_m1_grid(d, &ints(1..=10), cfg.cap)? {
            acc.count(format!("moniccount d={d} T={}", r.t), &r);
        }
    }
    let h: Height = "sqrt(3)".parse()?;
    let r = count_algebraic(AlgebraicClass::Units, 2, &h, cfg.cap)?;
    acc.eq("units d=2 H=sqrt(3)".into(), r.count, BigInt::from(18));
    let h: Height = "100".parse()?;
    let r = count_algebraic(AlgebraicClass::Units, 2, &h, cfg.cap)?;
    let ratio = r.count.to_f64().unwrap_or(f64::NAN) / (8.0 * 100.0 * 100.0);
    acc.push(
        "units d=2 H=100 count/(8H^2)".into(),
        fmt_f64(ratio),
        "in",
        "[0.9, 1.1]".into(),
        (0.9..=1.1).contains(&ratio),
        Vec::new(),
    );
    Ok(())
}

fn sieves(acc: &mut Acc, cfg: &VerifyConfig) -> Result<()> {
    let grids: [(usize, std::ops::RangeInclusive<i64>); 2] = [(2, 2..=20), (3, 1..=8)];
    for (class, tag) in [(ReducibleClass::All, "allred"), (ReducibleClass::Monic, "monicred")] {
        for (d, range) in grids.clone() {
            for r in count_reducible_grid(class, d, &ints(range), cfg.cap)? {
                acc.count(format!("{tag} d={d} T={}", r.t), &r);
            }
        }
    }
    for d in 2..=3 {
        for nu in [-2, -1, 1, 2] {
            for r in count_reducible_grid(ReducibleClass::Norm(nu), d, &ints(1..=10), cfg.cap)? {
                acc.count(format!("normsieve d={d} r={nu} T={}", r.t), &r);
            }
        }
    }
    for tr in [-3, -1, 0, 1, 3] {
        for r in count_reducible_grid(ReducibleClass::Trace(tr), 2, &ints(1..=10), cfg.cap)? {
            acc.count(format!("tracesieve d=2 t={tr} T={}", r.t), &r);
        }
    }
    Ok(())
}

fn appendix(acc: &mut Acc) -> Result<()> {
    let v15: BigRational = V15.parse().expect("valid literal");
    acc.eq("V(15)".into(), rational_string(&volume(15)), rational_string(&v15));
    let int = |n: i64| rational_string(&BigRational::from_integer(n.into()));
    acc.eq("V(0)".into(), rational_string(&volume(0)), int(2));
    acc.eq("V(2)".into(), rational_string(&volume(2)), int(8));
    acc.eq("kappa0(0)".into(), rational_string(&kappa0(0)), int(4));
    acc.eq("kappa0(2)".into(), rational_string(&kappa0(2)), int(8000));
    acc.eq("kappa1(2)".into(), rational_string(&kappa1(2)?), int(96));
    for c in appendix_checks(25).into_iter().chain(volume_checks(60, 25)) {
        let name = match c.k {
            Some(k) => format!("{} d={} k={k}", c.name, c.d),
            None => format!("{} d={}", c.name, c.d),
        };
        acc.push(name, c.lhs, &c.relation, c.rhs, c.pass, Vec::new());
    }
    Ok(())
}

fn moebius(acc: &mut Acc, cfg: &VerifyConfig) -> Result<()> {
    for (d, tmax) in [(1, 20), (2, 20), (3, 8)] {
        for t in 1..=tmax {
            let r = moebius_check(d, t, cfg.cap)?;
            acc.eq(
                format!("M(<={d},{t}) - 1 = sum_n M1(<={d},{t}/n)"),
                r.all_minus_zero,
                r.primitive_sum,
            );
            acc.eq(
                format!("sum_n mu(n)(M(<={d},{t}/n) - 1) = M1(<={d},{t})"),
                r.inverted,
                r.primitive,
            );
        }
    }
    Ok(())
}

fn geometry(acc: &mut Acc, cfg: &VerifyConfig) -> Result<()> {
    let seed = cfg.seed;
    for d in 1..=4 {
        let e = mc_volume(d, 1.0, cfg.samples, seed)?;
        acc.mc(format!("mc_volume d={d} T=1"), &e, to_f64(&volume(d)));
    }
    for d in 2..=3 {
        for t in [1i64, 2, 4] {
            let e = mc_slice_volume(&SliceSpec::monic(d), t as f64, cfg.samples, seed)?;
            let p = to_f64(&monic_volume(d, &BigRational::from_integer(t.into()))?);
            acc.mc(format!("mc_slice_volume monic d={d} T={t}"), &e, p);
        }
    }
    let mut specs = Vec::new();
    for d in 1..=4 {
        for eps in [-1i8, 1] {
            for k in 0..=d {
                specs.push(PatchSpec::new(d, k, eps)?);
            }
            if d >= 2 {
                for k in 0..d {
                    specs.push(PatchSpec::monic(d, k, eps, 2.0)?);
                }
            }
        }
    }
    for s in &specs {
        let name = format!(
            "patch residual d={} k={} eps={}{}",
            s.d,
            s.k,
            s.epsilon,
            if s.monic { " monic T=2" } else { "" }
        );
        acc.fallible(name, sample_patch(s, cfg.patch_samples, seed), |acc, name, v| {
            let worst = v.iter().map(|p| p.residual).fold(0.0, f64::max);
            acc.le(name, worst, 1e-9);
        })?;
    }
    for s in specs.iter().filter(|s| !s.monic && s.d >= 2) {
        let tag = format!("d={} k={} eps={}", s.d, s.k, s.epsilon);
        acc.fallible(tag, lipschitz_check(s, 1.0, cfg.pairs, seed), |acc, tag, r| {
            acc.le(format!("lip ratio {tag}"), r.lip_max, 1.0);
            acc.le(format!("cvlip ratio {tag}"), r.cvlip_max, 1.0);
        })?;
    }
    let spec = SliceSpec::new(3, vec![1], vec![1])?;
    let t = 10.0 * to_f64(&k1_donut(&spec)?);
    let r = donut_check(&spec, t, cfg.donut_samples, seed)?;
    let w = r.witnesses.iter().map(|x| format!("{x:?}")).collect();
    acc.push(
        format!("donut d=3 l=(1) r=(1) T=10k1 ({} of {} in difference)", r.in_difference, r.samples),
        fmt_f64(r.max_deviation),
        "<=",
        fmt_f64(r.delta_t),
        r.pass,
        w,
    );
    Ok(())
}

fn davenport(acc: &mut Acc, cfg: &VerifyConfig) -> Result<()> {
    for n in 1..=4usize {
        let bound = (n as u64 + 1) << (n - 1);
        let lines = LineSpec::random(n, cfg.lines, 1.0, cfg.seed)?;
        let scans = scan_lines(&lines, 1.0, cfg.resolution, cfg.refine_depth)?;
        let max = scans.iter().map(|s| s.components).max().unwrap_or(0);
        let over: Vec<String> = lines
            .iter()
            .zip(&scans)
            .filter(|(_, s)| s.components > bound)
            .map(|(l, s)| format!("{l:?} -> {}", s.components))
            .collect();
        acc.push(
            format!("davenport N={n} max components over {} random lines", cfg.lines),
            max.to_string(),
            "<=",
            bound.to_string(),
            over.is_empty(),
            over,
        );
        let unsure: Vec<String> = lines
            .iter()
            .zip(&scans)
            .filter(|(_, s)| s.uncertain)
            .map(|(l, s)| format!("{l:?} -> {s:?}"))
            .collect();
        acc.push(
            format!("davenport N={n} uncertain scans"),
            unsure.len().to_string(),
            "==",
            "0".into(),
            unsure.is_empty(),
            unsure,
        );
        let origin: Vec<LineSpec> = (0..=n).map(|axis| LineSpec::new(n, axis, vec![0.0; n])).collect::<Result<_>>()?;
        let counts: Vec<u64> = scan_lines(&origin, 1.0, cfg.resolution, cfg.refine_depth)?
            .iter()
            .map(|s| if s.uncertain { u64::MAX } else { s.components })
            .collect();
        let bad: Vec<String> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 1)
            .map(|(axis, c)| format!("axis {axis} -> {c}"))
            .collect();
        acc.push(
            format!("davenport N={n} origin lines"),
            format!("{counts:?}"),
            "==",
            format!("{:?}", vec![1; n + 1]),
            bad.is_empty(),
            bad,
        );
    }
    Ok(())
}

/// Runs one suite. Deterministic given `config`, whatever the thread count.
pub fn verify_suite(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    let mut acc = Acc::default();
    match suite {
        Suite::Bounds => bounds(&mut acc, config)?,
        Suite::Sieves => sieves(&mut acc, config)?,
        Suite::Appendix => appendix(&mut acc)?,
        Suite::Geometry => geometry(&mut acc, config)?,
        Suite::Moebius => moebius(&mut acc, config)?,
        Suite::Davenport => davenport(&mut acc, config)?,
    }
    Ok(acc.finish(suite, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appendix_suite_passes() {
        let r = verify_suite(Suite::Appendix, &VerifyConfig::default()).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.schema, "v1");
        assert!(r.skipped.is_empty());
    }

    #[test]
    fn report_json_shape() {
        let r = verify_suite(Suite::Appendix, &VerifyConfig::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], "v1");
        assert_eq!(v["suite"], "appendix");
        let c = &v["checks"][0];
        for key in ["name", "lhs", "relation", "rhs", "pass", "witnesses"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert_eq!(v["summary"]["failed"], 0);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
