//! Exact star-body volumes, the monic volume polynomial and the error
//! constants, plus the combinatorial inequalities behind them.

use mahler_census::constants::{
    appendix_checks, decimal_string, kappa0, kappa1, monic_volume_poly, rational_string, volume,
};

fn main() {
    for d in [0, 1, 2, 3, 15, 16] {
        let v = volume(d);
        println!("V({d:>2}) = {:<40} ~ {}", rational_string(&v), decimal_string(&v, 6));
    }
    println!("kappa0(2) = {}", rational_string(&kappa0(2)));
    println!("kappa1(2) = {}", rational_string(&kappa1(2).unwrap()));
    let p3: Vec<String> = monic_volume_poly(3).unwrap().iter().map(rational_string).collect();
    println!("p_3 coefficients, constant term first: {p3:?}");

    let checks = appendix_checks(25);
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} appendix inequalities checked exactly, {failed} failed", checks.len());
}
