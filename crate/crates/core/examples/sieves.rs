//! Reducible polynomials against their sieve bounds, and the Moebius identity
//! linking all polynomials to the primitive ones.

use mahler_census::census::{count_reducible_grid, moebius_check, ReducibleClass};
use num_rational::BigRational;

fn main() {
    let ts: Vec<BigRational> = (2..=8).map(|t| BigRational::from_integer(t.into())).collect();
    for class in [ReducibleClass::All, ReducibleClass::Monic, ReducibleClass::Norm(2), ReducibleClass::Trace(1)] {
        for r in count_reducible_grid(class, 2, &ts, 1e9).unwrap() {
            println!(
                "{:<16} {:<5} T={:<2} count={:<6} bound={:.1}",
                r.class,
                r.params,
                r.t,
                r.count,
                r.error_bound.unwrap_or(f64::NAN)
            );
        }
    }
    for t in [5, 10, 20] {
        let m = moebius_check(2, t, 1e9).unwrap();
        println!(
            "d=2 T={t}: M-1={} sum M1(T/n)={} primitive={} inverted={} ok={}",
            m.all_minus_zero, m.primitive_sum, m.primitive, m.inverted, m.pass
        );
    }
}
