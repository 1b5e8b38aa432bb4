mod common;

use common::{compare, slice_configs, t};
use mahler_census::census::{count_multi, EnumFilter};
use num_bigint::BigInt;

#[test]
fn full_boxes() {
    for d in 1..=3 {
        compare(d, &[], &[]).unwrap();
    }
}

#[test]
fn every_slice() {
    let failures: Vec<String> = slice_configs()
        .into_iter()
        .filter_map(|(d, l, r)| compare(d, &l, &r).err())
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn exact_degree_matches_nonzero_leading() {
    for d in 1..=3 {
        let all: BigInt = count_multi(&EnumFilter::at_most(d, t(0)), &[t(4)]).unwrap().remove(0);
        let lower: BigInt = count_multi(&EnumFilter::at_most(d - 1, t(0)), &[t(4)]).unwrap().remove(0);
        let exact: BigInt = count_multi(&EnumFilter::exactly(d, t(0)), &[t(4)]).unwrap().remove(0);
        assert_eq!(exact, all - lower, "d={d}");
    }
}
