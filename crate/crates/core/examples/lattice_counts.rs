//! Exact counts of integer polynomials of bounded measure next to their main
//! terms and explicit error bounds.

use mahler_census::census::{count_m1_grid, count_m_atmost_grid, count_slice, write_counts_csv};
use mahler_census::constants::SliceSpec;
use num_rational::BigRational;

fn main() {
    let ts: Vec<BigRational> = (1..=6).map(|t| BigRational::from_integer(t.into())).collect();
    let cap = 1e9;
    let mut rows = count_m_atmost_grid(2, &ts, cap).unwrap();
    rows.extend(count_m1_grid(3, &ts, cap).unwrap());
    // cubic polynomials z^3 + a z^2 + b z + 1
    let spec = SliceSpec::new(3, vec![1], vec![1]).unwrap();
    rows.push(count_slice(&spec, &BigRational::from_integer(20.into()), cap).unwrap());
    write_counts_csv(std::io::stdout().lock(), &rows, false).unwrap();
}
