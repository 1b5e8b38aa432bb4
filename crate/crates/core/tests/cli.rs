use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler-census"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn quadratic_units_csv() {
    let o = run(&["count", "--class", "units", "--d", "2", "--height", "1.7320508"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "class,d,params,H,T,count,main_term,error_bound,within_bound,seconds");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "units");
    assert_eq!(row[5], "18");
    // the bound's hypothesis fails at this height, so it is left out
    assert_eq!(row[7], "");
    assert!(String::from_utf8_lossy(&o.stderr).contains("requires H"));
}

#[test]
fn strict_regime_exit_code() {
    let o = run(&["count", "--class", "units", "--d", "2", "--height", "1.7320508", "--strict"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.matches("requires").count(), 2, "{err}");
}

#[test]
fn count_json_and_lists() {
    let o = run(&["count", "--class", "all", "--d", "3", "--measure-bound", "1,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["count"], "65");
    assert_eq!(rows[1]["count"], "465");
    for r in rows {
        assert_eq!(r["within_bound"], true);
        assert!(r["main_term"].is_number() && r["error_bound"].is_number());
    }
}

#[test]
fn slice_with_negative_values() {
    let o = run(&["count", "--class", "slice", "--d", "2", "--lead", "1", "--trail", "-1", "--measure-bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn search_too_large() {
    let o = run(&["count", "--class", "all", "--d", "30", "--measure-bound", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_input() {
    let o = run(&["volume", "--d", "2", "--measure-bound", "1", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["count", "--class", "norm", "--d", "2", "--height", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_v15() {
    let o = run(&["constants", "--v", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let c = &v["constants"][0];
    assert_eq!(c["name"], "V");
    assert_eq!(c["d"], 15);
    assert_eq!(c["exact"], "2658455991569831745807614120560689152/13904872587870848957579157123046875");
    assert!(c["decimal"].as_str().unwrap().starts_with("191.1888062813887"));
}

#[test]
fn volume_record() {
    let args = ["volume", "--d", "2", "--measure-bound", "1", "--samples", "20000", "--seed", "5"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for k in ["op", "params", "estimate", "stderr", "samples", "seed", "pass", "detail"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["pass"], true);
    let est = v["estimate"].as_f64().unwrap();
    assert!((est - 8.0).abs() < 4.0 * v["stderr"].as_f64().unwrap().max(1e-9));
    assert_eq!(o.stdout, run(&args).stdout);
}

#[test]
fn census_rows() {
    let o = run(&["census", "--d", "2", "--height", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("degree,height,re,im,coeffs,measure\n"));
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 6));
}

#[test]
fn reruns_are_byte_identical() {
    let a = ["count", "--class", "monic", "--d", "3", "--measure-bound", "1,2,3"];
    let one = run(&[&["--threads", "1"], &a[..]].concat());
    let many = run(&[&["--threads", "8"], &a[..]].concat());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, run(&a).stdout);

    let v = ["verify", "--suite", "appendix"];
    let one = run(&[&["--threads", "1"], &v[..]].concat());
    let many = run(&[&["--threads", "8"], &v[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(json(&one)["pass"], true);
}

#[test]
fn geometry_lines() {
    let o = run(&["geometry", "--op", "lines", "--d", "2", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["op"], "lines");
    assert_eq!(v["pass"], true);
}
