//! Certified Mahler measures and exact comparisons against a threshold.

use std::cmp::Ordering;

use mahler_census::poly::{compare_measure, factor_over_z, mahler_measure, measure_f64, IntPoly};
use num_rational::BigRational;

fn main() {
    // Lehmer's polynomial, the smallest known measure above 1
    let lehmer = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let cert = mahler_measure(&lehmer, None, 256).expect("certified");
    println!("mu({lehmer})");
    println!("  in [{:.17}, {:.17}] at {} bits", cert.lower_f64(), cert.upper_f64(), cert.precision_bits);

    // a tie: mu(2z^2 - 3z + 1) = 2 exactly, decided without rounding
    let p = IntPoly::from_i64(&[2, -3, 1]);
    let two = BigRational::from_integer(2.into());
    assert_eq!(compare_measure(&p, &two), Ordering::Equal);
    println!("mu({p}) == 2: {:?}", compare_measure(&p, &two));

    // measure is multiplicative
    let f = IntPoly::from_i64(&[1, 0, -2]);
    let g = IntPoly::from_i64(&[3, 1, 1]);
    let fg = f.mul(&g);
    let (mf, mg, mfg) = (
        measure_f64(&f.to_f64().unwrap()),
        measure_f64(&g.to_f64().unwrap()),
        measure_f64(&fg.to_f64().unwrap()),
    );
    println!("mu(f) mu(g) = {:.12}, mu(fg) = {:.12}", mf * mg, mfg);

    let fac = factor_over_z(&fg).expect("degree below the cap");
    let parts: Vec<String> = fac.factors.iter().map(|(h, e)| format!("({h})^{e}")).collect();
    println!("{fg} = {} * {}", fac.unit, parts.join(" * "));
}
