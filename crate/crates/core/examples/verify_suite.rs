//! Runs a verification suite from code and prints its failures.
//!
//! `cargo run --release --example verify_suite -- sieves`

use mahler_census::cli::{verify_suite, Suite, VerifyConfig};

fn main() {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("appendix").parse().unwrap();
    let report = verify_suite(suite, &VerifyConfig::default()).unwrap();
    for c in report.failures() {
        println!("FAIL {}: {} {} {}", c.name, c.lhs, c.relation, c.rhs);
    }
    for s in &report.skipped {
        println!("skipped {}: {}", s.name, s.reason);
    }
    println!("{}: {:?}", suite, report.summary);
}
