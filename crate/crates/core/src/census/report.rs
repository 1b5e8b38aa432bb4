//! CSV output for counts and census points.

use std::io::Write;

use super::{CensusPoint, CountReport};
use crate::error::{Error, Result};

pub const COUNTS_HEADER: [&str; 10] = [
    "class",
    "d",
    "params",
    "H",
    "T",
    "count",
    "main_term",
    "error_bound",
    "within_bound",
    "seconds",
];

pub const CENSUS_HEADER: [&str; 6] = ["degree", "height", "re", "im", "coeffs", "measure"];

/// Shortest round-trip decimal, switching to exponent form for very large or
/// small magnitudes.
pub(crate) fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes the counts table. The `seconds` column stays empty unless
/// `timing` is set, so that repeated runs give identical files.
pub fn write_counts_csv<W: Write>(out: W, reports: &[CountReport], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COUNTS_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record([
            r.class.clone(),
            r.d.to_string(),
            r.params.clone(),
            r.height.clone().unwrap_or_default(),
            r.t.clone(),
            r.count.to_string(),
            fmt_f64(r.main_term),
            r.error_bound.map(fmt_f64).unwrap_or_default(),
            r.within_bound.map(|b| b.to_string()).unwrap_or_default(),
            if timing { format!("{:.6}", r.seconds) } else { String::new() },
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one row per census point; coefficients are `;`-joined with the
/// leading coefficient first.
pub fn write_census_csv<W: Write>(out: W, points: &[CensusPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CENSUS_HEADER).map_err(csv_err)?;
    for p in points {
        let coeffs = p.poly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
        w.write_record([
            p.degree.to_string(),
            fmt_f64(p.height),
            fmt_f64(p.re),
            fmt_f64(p.im),
            coeffs,
            fmt_f64(p.measure),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census, count_m_atmost, Height, DEFAULT_CAP};
    use num_rational::BigRational;

    #[test]
    fn counts_schema() {
        let r = count_m_atmost(1, &BigRational::from_integer(1.into()), DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        write_counts_csv(&mut buf, &[r], false).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "class,d,params,H,T,count,main_term,error_bound,within_bound,seconds\nall,1,,,1,9,4,64,true,\n"
        );
    }

    #[test]
    fn census_schema() {
        let h: Height = "1".parse().unwrap();
        let pts = census(1, &h, DEFAULT_CAP).unwrap();
        let mut buf = Vec::new();
        write_census_csv(&mut buf, &pts).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "degree,height,re,im,coeffs,measure");
        assert_eq!(lines.len(), 4);
        assert!(lines.contains(&"1,1,0,0,1;0,1"));
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(8.0), "8");
        assert_eq!(fmt_f64(1e20), "1e20");
        assert_eq!(fmt_f64(-0.5), "-0.5");
    }
}
