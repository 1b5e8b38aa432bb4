//! Command-line front end: argument parsing, dispatch and report writing.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or
//! a computation errors, 2 for violated preconditions, 3 when the search
//! space exceeds `--cap`.

mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::census::{
    self, count_algebraic, count_m1, count_m_atmost, count_reducible, count_slice, write_census_csv,
    write_counts_csv, AlgebraicClass, CountReport, Height, ReducibleClass,
};
use crate::constants::{
    decimal_string, k1_donut, kappa0, kappa1, monic_volume, monic_volume_poly, rational_string, to_f64, volume,
    SliceSpec,
};
use crate::error::{Error, Result};
use crate::geom::{self, LineSpec, PatchSpec};

pub use verify::{verify_suite, Check, Skip, Suite, Summary, VerifyConfig, VerifyReport, SCHEMA, V15};

#[derive(Debug, Parser)]
#[command(name = "mahler-census", version, about = "Counts, census and geometry of integer polynomials by Mahler measure")]
pub struct Cli {
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact counts against main terms and explicit error bounds.
    Count(CountArgs),
    /// Algebraic numbers of bounded degree and height, one CSV row per root.
    Census(CensusArgs),
    /// Monte Carlo volume of the star body or of a slice.
    Volume(VolumeArgs),
    /// Boundary patches, Lipschitz checks, the donut check and line scans.
    Geometry(GeometryArgs),
    /// Exact values of the volume and error constants.
    Constants(ConstantsArgs),
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountClass {
    /// All polynomials of degree at most d.
    All,
    Monic,
    /// Fixed leading (--lead) and trailing (--trail) coefficients.
    Slice,
    Reducible,
    ReducibleMonic,
    ReducibleNorm,
    ReducibleTrace,
    ReducibleNormTrace,
    /// Algebraic numbers of degree d.
    Numbers,
    Integers,
    Units,
    Norm,
    Trace,
    NormTrace,
}

impl CountClass {
    fn algebraic(self, norm: Option<i64>, trace: Option<i64>) -> Result<Option<AlgebraicClass>> {
        let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| Error::Invalid(format!("this class needs --{flag}")));
        Ok(Some(match self {
            CountClass::Numbers => AlgebraicClass::Numbers,
            CountClass::Integers => AlgebraicClass::Integers,
            CountClass::Units => AlgebraicClass::Units,
            CountClass::Norm => AlgebraicClass::Norm(need(norm, "norm")?),
            CountClass::Trace => AlgebraicClass::Trace(need(trace, "trace")?),
            CountClass::NormTrace => AlgebraicClass::NormTrace {
                norm: need(norm, "norm")?,
                trace: need(trace, "trace")?,
            },
            _ => return Ok(None),
        }))
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    pub class: CountClass,
    #[arg(long)]
    pub d: usize,
    /// Heights H (comma separated); T = H^d.
    #[arg(long, value_delimiter = ',', conflicts_with = "measure_bound")]
    pub height: Vec<String>,
    /// Measure bounds T (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub measure_bound: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lead: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub trail: Vec<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub norm: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub trace: Option<i64>,
    #[arg(long, default_value_t = census::DEFAULT_CAP)]
    pub cap: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Include wall-clock seconds (makes the output nondeterministic).
    #[arg(long)]
    pub timing: bool,
    /// Exit with code 2 when a bound's hypotheses fail instead of omitting it.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// Largest degree.
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub height: String,
    #[arg(long, default_value_t = census::DEFAULT_CAP)]
    pub cap: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "1")]
    pub measure_bound: String,
    /// Fixed leading coefficients of a slice.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lead: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub trail: Vec<i64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryOp {
    Patch,
    Lipschitz,
    Donut,
    Lines,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum)]
    pub op: GeometryOp,
    /// Degree (ambient dimension minus one for `lines`).
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub epsilon: i8,
    /// Use the monic patch at measure `--measure-bound`.
    #[arg(long)]
    pub monic: bool,
    #[arg(long, default_value_t = 1.0)]
    pub measure_bound: f64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lead: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub trail: Vec<i64>,
    /// Samples, pairs or lines, depending on the operation.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub resolution: usize,
    #[arg(long, default_value_t = 24)]
    pub depth: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// V_d, the volume of the star body.
    #[arg(long = "v")]
    pub v: Vec<usize>,
    #[arg(long)]
    pub kappa0: Vec<usize>,
    #[arg(long)]
    pub kappa1: Vec<usize>,
    /// Coefficients of p_d, the monic slice volume, lowest degree first.
    #[arg(long)]
    pub monic_poly: Vec<usize>,
    /// Every constant at this degree.
    #[arg(long)]
    pub d: Vec<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, required = true)]
    pub suite: Vec<Suite>,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    pub seed: u64,
    /// Monte Carlo volume samples.
    #[arg(long, default_value_t = VerifyConfig::default().samples)]
    pub samples: u64,
    #[arg(long, default_value_t = census::DEFAULT_CAP)]
    pub cap: f64,
    #[command(flatten)]
    pub output: Output,
}

fn sink(out: &Output) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &Output, v: &impl Serialize) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Parses a measure bound given as a decimal, fraction or `sqrt(n)`.
fn parse_t(s: &str) -> Result<(BigRational, bool)> {
    Ok(s.parse::<Height>()?.measure_bound(1))
}

fn count_rows(a: &CountArgs) -> Result<Vec<CountReport>> {
    if a.height.is_empty() == a.measure_bound.is_empty() {
        return Err(Error::Invalid("give exactly one of --height and --measure-bound".into()));
    }
    if let Some(class) = a.class.algebraic(a.norm, a.trace)? {
        if a.height.is_empty() {
            return Err(Error::Invalid("algebraic-number classes take --height".into()));
        }
        return a
            .height
            .iter()
            .map(|h| count_algebraic(class, a.d, &h.parse()?, a.cap))
            .collect();
    }
    let ts: Vec<(BigRational, bool)> = if a.height.is_empty() {
        a.measure_bound.iter().map(|s| parse_t(s)).collect::<Result<_>>()?
    } else {
        a.height
            .iter()
            .map(|h| Ok(h.parse::<Height>()?.measure_bound(a.d)))
            .collect::<Result<_>>()?
    };
    let need = |v: Option<i64>, flag: &str| v.ok_or_else(|| Error::Invalid(format!("this class needs --{flag}")));
    let mut rows = Vec::new();
    for (t, exact) in ts {
        let mut r = match a.class {
            CountClass::All => count_m_atmost(a.d, &t, a.cap)?,
            CountClass::Monic => count_m1(a.d, &t, a.cap)?,
            CountClass::Slice => count_slice(&SliceSpec::new(a.d, a.lead.clone(), a.trail.clone())?, &t, a.cap)?,
            CountClass::Reducible => count_reducible(ReducibleClass::All, a.d, &t, a.cap)?,
            CountClass::ReducibleMonic => count_reducible(ReducibleClass::Monic, a.d, &t, a.cap)?,
            CountClass::ReducibleNorm => count_reducible(ReducibleClass::Norm(need(a.norm, "norm")?), a.d, &t, a.cap)?,
            CountClass::ReducibleTrace => {
                count_reducible(ReducibleClass::Trace(need(a.trace, "trace")?), a.d, &t, a.cap)?
            }
            CountClass::ReducibleNormTrace => count_reducible(
                ReducibleClass::NormTrace {
                    trace: need(a.trace, "trace")?,
                    norm: need(a.norm, "norm")?,
                },
                a.d,
                &t,
                a.cap,
            )?,
            _ => unreachable!("algebraic classes handled above"),
        };
        if !exact {
            let msg = "T is a 40-digit lower approximant of an irrational bound; ties at T are not certified";
            r.note = Some(match r.note.take() {
                Some(n) => format!("{n}; {msg}"),
                None => msg.to_string(),
            });
        }
        rows.push(r);
    }
    Ok(rows)
}

fn run_count(a: &CountArgs) -> Result<i32> {
    let rows = count_rows(a)?;
    for r in &rows {
        if let Some(n) = &r.note {
            eprintln!("warning: {} d={} T={}: {n}", r.class, r.d, r.t);
        }
        if a.strict && r.theorem != "none" && r.error_bound.is_none() {
            let prefix = format!("{}: requires ", r.theorem);
            let cond = r.note.as_deref().map_or("its stated hypotheses", |n| {
                n.split("; ").find_map(|p| p.strip_prefix(prefix.as_str())).unwrap_or(n)
            });
            return Err(Error::regime(&r.theorem, cond));
        }
    }
    match a.format {
        Format::Csv => {
            let mut w = sink(&a.output)?;
            write_counts_csv(&mut w, &rows, a.timing)?;
            w.flush()?;
        }
        Format::Json => {
            let mut v = serde_json::to_value(&rows).map_err(|e| Error::Io(e.to_string()))?;
            if !a.timing {
                for row in v.as_array_mut().into_iter().flatten() {
                    row.as_object_mut().map(|o| o.remove("seconds"));
                }
            }
            write_json(&a.output, &v)?;
        }
    }
    Ok(if rows.iter().any(|r| r.within_bound == Some(false)) { 1 } else { 0 })
}

fn run_census(a: &CensusArgs) -> Result<i32> {
    let points = census::census(a.d, &a.height.parse()?, a.cap)?;
    let mut w = sink(&a.output)?;
    write_census_csv(&mut w, &points)?;
    w.flush()?;
    Ok(0)
}

/// The JSON record shared by `volume` and `geometry`.
fn geo_record(op: &str, params: Value, estimate: f64, stderr: Option<f64>, samples: u64, seed: u64, pass: Option<bool>, detail: Value) -> Value {
    json!({
        "op": op,
        "params": params,
        "estimate": estimate,
        "stderr": stderr,
        "samples": samples,
        "seed": seed,
        "pass": pass,
        "detail": detail,
    })
}

fn code(pass: Option<bool>) -> i32 {
    if pass == Some(false) {
        1
    } else {
        0
    }
}

fn run_volume(a: &VolumeArgs) -> Result<i32> {
    let (t, _) = parse_t(&a.measure_bound)?;
    let tf = to_f64(&t);
    let (op, e, exact) = if a.lead.is_empty() && a.trail.is_empty() {
        let exact = volume(a.d) * num_traits::pow(t.clone(), a.d + 1);
        ("volume", geom::mc_volume(a.d, tf, a.samples, a.seed)?, Some(exact))
    } else {
        let spec = SliceSpec::new(a.d, a.lead.clone(), a.trail.clone())?;
        let exact = if spec == SliceSpec::monic(a.d) {
            Some(monic_volume(a.d, &t)?)
        } else {
            None
        };
        ("slice_volume", geom::mc_slice_volume(&spec, tf, a.samples, a.seed)?, exact)
    };
    let pass = exact.as_ref().map(|x| e.within(to_f64(x), 4.0));
    let rec = geo_record(
        op,
        json!({"d": a.d, "T": rational_string(&t), "lead": a.lead, "trail": a.trail}),
        e.mean,
        Some(e.stderr),
        e.samples,
        e.seed,
        pass,
        json!({
            "hits": e.hits,
            "box_volume": e.box_volume,
            "exact": exact.as_ref().map(rational_string),
            "exact_decimal": exact.as_ref().map(to_f64),
        }),
    );
    write_json(&a.output, &rec)?;
    Ok(code(pass))
}

fn run_geometry(a: &GeometryArgs) -> Result<i32> {
    let patch = || {
        if a.monic {
            PatchSpec::monic(a.d, a.k, a.epsilon, a.measure_bound)
        } else {
            PatchSpec::new(a.d, a.k, a.epsilon)
        }
    };
    let params = json!({
        "d": a.d, "k": a.k, "epsilon": a.epsilon, "monic": a.monic, "T": a.measure_bound,
        "lead": a.lead, "trail": a.trail, "resolution": a.resolution, "depth": a.depth,
    });
    let rec = match a.op {
        GeometryOp::Patch => {
            let v = geom::sample_patch(&patch()?, a.samples, a.seed)?;
            let worst = v.iter().map(|p| p.residual).fold(0.0, f64::max);
            geo_record("patch", params, worst, None, a.samples, a.seed, Some(worst <= 1e-9), json!({"tolerance": 1e-9}))
        }
        GeometryOp::Lipschitz => {
            let r = geom::lipschitz_check(&patch()?, a.measure_bound, a.samples, a.seed)?;
            let worst = r.lip_max.max(r.cvlip_max);
            geo_record("lipschitz", params, worst, None, a.samples, a.seed, Some(r.pass), json!(r))
        }
        GeometryOp::Donut => {
            let spec = SliceSpec::new(a.d, a.lead.clone(), a.trail.clone())?;
            let r = geom::donut_check(&spec, a.measure_bound, a.samples, a.seed)?;
            let k1 = to_f64(&k1_donut(&spec)?);
            let detail = json!({"report": r, "k1": k1});
            geo_record("donut", params, r.max_deviation, None, a.samples, a.seed, Some(r.pass), detail)
        }
        GeometryOp::Lines => {
            let n = a.d;
            if n == 0 {
                return Err(Error::Invalid("line scans need --d ≥ 1".into()));
            }
            let bound = (n as u64 + 1) << (n - 1);
            let lines = LineSpec::random(n, a.samples, 1.0, a.seed)?;
            let scans = geom::scan_lines(&lines, a.measure_bound, a.resolution, a.depth)?;
            let max = scans.iter().map(|s| s.components).max().unwrap_or(0);
            let mut hist = vec![0u64; max as usize + 1];
            for s in &scans {
                hist[s.components as usize] += 1;
            }
            let uncertain = scans.iter().filter(|s| s.uncertain).count();
            let pass = max <= bound && uncertain == 0;
            let detail = json!({"bound": bound, "histogram": hist, "uncertain": uncertain});
            geo_record("lines", params, max as f64, None, a.samples, a.seed, Some(pass), detail)
        }
    };
    let pass = rec["pass"].as_bool();
    write_json(&a.output, &rec)?;
    Ok(code(pass))
}

#[derive(Serialize)]
struct ConstantRow {
    name: &'static str,
    d: usize,
    exact: String,
    decimal: String,
}

fn constant_rows(a: &ConstantsArgs) -> Result<Vec<ConstantRow>> {
    let row = |name, d, x: &BigRational| ConstantRow {
        name,
        d,
        exact: rational_string(x),
        decimal: decimal_string(x, 20),
    };
    let mut rows = Vec::new();
    let (mut v, mut k0, mut k1, mut mp) = (a.v.clone(), a.kappa0.clone(), a.kappa1.clone(), a.monic_poly.clone());
    for &d in &a.d {
        v.push(d);
        k0.push(d);
        if d >= 2 {
            k1.push(d);
        }
        if d >= 1 {
            mp.push(d);
        }
    }
    if v.is_empty() && k0.is_empty() && k1.is_empty() && mp.is_empty() {
        v.extend(0..=15);
    }
    for d in v {
        rows.push(row("V", d, &volume(d)));
    }
    for d in k0 {
        rows.push(row("kappa0", d, &kappa0(d)));
    }
    for d in k1 {
        rows.push(row("kappa1", d, &kappa1(d)?));
    }
    for d in mp {
        for (i, c) in monic_volume_poly(d)?.iter().enumerate() {
            rows.push(ConstantRow {
                name: "p_coeff",
                d,
                exact: format!("{i}:{}", rational_string(c)),
                decimal: decimal_string(c, 20),
            });
        }
    }
    Ok(rows)
}

fn run_constants(a: &ConstantsArgs) -> Result<i32> {
    write_json(&a.output, &json!({ "constants": constant_rows(a)? }))?;
    Ok(0)
}

fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = VerifyConfig {
        seed: a.seed,
        samples: a.samples,
        cap: a.cap,
        ..VerifyConfig::default()
    };
    let reports: Vec<VerifyReport> = a.suite.iter().map(|&s| verify_suite(s, &cfg)).collect::<Result<_>>()?;
    for r in &reports {
        for c in r.failures() {
            eprintln!("FAIL {}: {}: {} {} {}", r.suite, c.name, c.lhs, c.relation, c.rhs);
        }
        for s in &r.skipped {
            eprintln!("skipped {}: {}: {}", r.suite, s.name, s.reason);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    if reports.len() == 1 {
        write_json(&a.output, &reports[0])?;
    } else {
        write_json(&a.output, &reports)?;
    }
    Ok(if pass { 0 } else { 1 })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_precondition() => 2,
        Error::SearchTooLarge { .. } => 3,
        _ => 1,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let threads = cli.threads;
    let result = census::with_threads(threads, move || match &cli.command {
        Command::Count(a) => run_count(a),
        Command::Census(a) => run_census(a),
        Command::Volume(a) => run_volume(a),
        Command::Geometry(a) => run_geometry(a),
        Command::Constants(a) => run_constants(a),
        Command::Verify(a) => run_verify(a),
    })
    .and_then(|r| r);
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("mahler-census").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn units_row() {
        let Command::Count(a) = parse(&["count", "--class", "units", "--d", "2", "--height", "1.7320508"]).command else {
            panic!()
        };
        let rows = count_rows(&a).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].count, 18.into());
    }

    #[test]
    fn negative_lists() {
        let Command::Count(a) = parse(&["count", "--class", "slice", "--d", "3", "--lead", "1", "--trail", "-1", "--measure-bound", "2,3"])
            .command
        else {
            panic!()
        };
        assert_eq!(a.trail, vec![-1]);
        assert_eq!(count_rows(&a).unwrap().len(), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::regime("x", "y")), 2);
        assert_eq!(exit_code(&Error::SearchTooLarge { estimate: 1e12, cap: 1e10 }), 3);
        let cli = parse(&["count", "--class", "all", "--d", "9", "--measure-bound", "50", "--cap", "1e6"]);
        assert_eq!(run(cli), 3);
        let cli = parse(&["count", "--class", "units", "--d", "1", "--height", "2"]);
        assert_eq!(run(cli), 2);
    }

    #[test]
    fn constants_v15() {
        let Command::Constants(a) = parse(&["constants", "--v", "15"]).command else {
            panic!()
        };
        let rows = constant_rows(&a).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].exact, V15);
    }

    #[test]
    fn requires_one_bound() {
        let Command::Count(a) = parse(&["count", "--class", "all", "--d", "2"]).command else {
            panic!()
        };
        assert!(count_rows(&a).unwrap_err().is_precondition());
    }
}
