//! One PASS/FAIL line per acceptance criterion, at the stated scale.

mod common;

use std::time::Instant;

use mahler_census::census::with_threads;
use mahler_census::cli::{verify_suite, Suite, VerifyConfig, VerifyReport};

struct Tally {
    failed: Vec<String>,
}

impl Tally {
    fn line(&mut self, name: &str, pass: bool, detail: String, start: Instant) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {name}: {detail} ({:.1}s)", start.elapsed().as_secs_f64());
        if !pass {
            self.failed.push(name.to_string());
        }
    }

    /// Criterion backed by the checks of `report` whose names satisfy `keep`.
    fn from_report(&mut self, name: &str, report: &VerifyReport, keep: impl Fn(&str) -> bool, start: Instant) {
        let checks: Vec<_> = report.checks.iter().filter(|c| keep(&c.name)).collect();
        let bad: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let pass = !checks.is_empty() && bad.is_empty() && report.skipped.is_empty();
        let mut detail = format!("{}/{} checks", checks.len() - bad.len(), checks.len());
        if !bad.is_empty() {
            detail += &format!(", failing: {}", bad.join(" | "));
        }
        if !report.skipped.is_empty() {
            detail += &format!(", {} skipped", report.skipped.len());
        }
        self.line(name, pass, detail, start);
    }
}

fn suite(s: Suite, cfg: &VerifyConfig) -> VerifyReport {
    verify_suite(s, cfg).unwrap_or_else(|e| panic!("{s} suite: {e}"))
}

fn small() -> VerifyConfig {
    VerifyConfig {
        samples: 10_000,
        patch_samples: 100,
        pairs: 500,
        donut_samples: 1000,
        lines: 30,
        ..VerifyConfig::default()
    }
}

fn main() {
    let cfg = VerifyConfig::default();
    let mut tally = Tally { failed: Vec::new() };

    let start = Instant::now();
    let appendix = suite(Suite::Appendix, &cfg);
    let exact = |n: &str| ["V(15)", "V(0)", "V(2)", "kappa0(0)", "kappa0(2)", "kappa1(2)"].contains(&n);
    tally.from_report("exact constants", &appendix, exact, start);
    tally.from_report("appendix inequalities d<=25", &appendix, |n| !exact(n), start);

    let start = Instant::now();
    let bounds = suite(Suite::Bounds, &cfg);
    tally.from_report("general counting bound", &bounds, |n| n.starts_with("genpolycount"), start);
    tally.from_report("monic counting bound", &bounds, |n| n.starts_with("moniccount"), start);
    tally.from_report("units", &bounds, |n| n.starts_with("units"), start);

    let start = Instant::now();
    let r = suite(Suite::Moebius, &cfg);
    tally.from_report("moebius identity", &r, |_| true, start);

    let start = Instant::now();
    let r = suite(Suite::Sieves, &cfg);
    tally.from_report("sieve bounds", &r, |_| true, start);

    let start = Instant::now();
    let configs = common::slice_configs();
    let failures: Vec<String> = configs
        .iter()
        .filter_map(|(d, l, r)| common::compare(*d, l, r).err())
        .collect();
    tally.line(
        "oracle equivalence",
        failures.is_empty(),
        format!("{} slices, {} discrepancies {failures:?}", configs.len(), failures.len()),
        start,
    );

    let start = Instant::now();
    let geometry = suite(Suite::Geometry, &cfg);
    tally.from_report("mc volumes", &geometry, |n| n.starts_with("mc_"), start);
    tally.from_report("geometry properties", &geometry, |n| !n.starts_with("mc_"), start);

    let start = Instant::now();
    let r = suite(Suite::Davenport, &cfg);
    tally.from_report("davenport scan", &r, |_| true, start);

    let start = Instant::now();
    let cfg = small();
    let mut mismatched = Vec::new();
    for s in Suite::ALL {
        let json = |threads| {
            with_threads(threads, || serde_json::to_string(&suite(s, &cfg)).unwrap()).unwrap()
        };
        let one = json(1);
        if one != json(8) || one != json(1) {
            mismatched.push(s.name());
        }
    }
    tally.line(
        "determinism",
        mismatched.is_empty(),
        format!("every suite at threads 1, 8 and a rerun; mismatched {mismatched:?}"),
        start,
    );

    if !tally.failed.is_empty() {
        eprintln!("failed criteria: {:?}", tally.failed);
        std::process::exit(1);
    }
}
