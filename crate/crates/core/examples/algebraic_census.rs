//! Counting algebraic numbers by height, and the census of all of them up to
//! a given degree and height as CSV.
//!
//! Run with an output path to write the census, e.g.
//! `cargo run --release --example algebraic_census -- census.csv`.

use mahler_census::census::{census, count_algebraic, write_census_csv, AlgebraicClass, Height};

fn main() {
    for (class, d, h) in [
        (AlgebraicClass::Units, 2, "sqrt(3)"),
        (AlgebraicClass::Units, 2, "100"),
        (AlgebraicClass::Integers, 3, "2"),
        (AlgebraicClass::Numbers, 2, "3/2"),
        (AlgebraicClass::Norm(2), 2, "4"),
    ] {
        let h: Height = h.parse().unwrap();
        let r = count_algebraic(class, d, &h, 1e9).unwrap();
        println!("{:<9} d={d} H={:<8} count={:<6} main={:.1}", r.class, h, r.count, r.main_term);
    }

    let h: Height = "1.5".parse().unwrap();
    let points = census(3, &h, 1e9).unwrap();
    println!("{} algebraic numbers of degree <= 3 and height <= 1.5", points.len());
    if let Some(path) = std::env::args().nth(1) {
        let f = std::fs::File::create(&path).unwrap();
        write_census_csv(f, &points).unwrap();
        println!("wrote {path}");
    }
}
