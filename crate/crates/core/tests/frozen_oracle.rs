//! Counts frozen from an independent enumeration: 50-digit mpmath roots over
//! the plain coefficient box, sympy for irreducibility, ties within 1e-30.

use mahler_census::census::{
    count, count_algebraic, count_m1, count_m_atmost, count_reducible, AlgebraicClass, EnumFilter, Height,
    ReducibleClass,
};
use mahler_census::poly::{mahler_measure, root_set, IntPoly};
use num_bigint::BigInt;
use num_rational::BigRational;

fn t(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

const CAP: f64 = 1e9;

#[test]
fn all_polynomials() {
    let expected = [
        (1, 1, 9),
        (1, 2, 25),
        (1, 3, 49),
        (1, 4, 81),
        (1, 5, 121),
        (2, 1, 27),
        (2, 2, 121),
        (2, 3, 327),
        (2, 4, 697),
        (3, 1, 65),
        (3, 2, 465),
    ];
    for (d, tt, n) in expected {
        assert_eq!(count_m_atmost(d, &t(tt), CAP).unwrap().count, BigInt::from(n), "d={d} T={tt}");
    }
}

#[test]
fn monic_polynomials() {
    let expected = [
        (2, 1, 9),
        (2, 2, 23),
        (2, 3, 45),
        (2, 4, 75),
        (2, 5, 113),
        (2, 6, 159),
        (3, 1, 19),
        (3, 2, 91),
        (3, 3, 267),
        (3, 4, 595),
        (4, 1, 43),
        (4, 2, 325),
    ];
    for (d, tt, n) in expected {
        assert_eq!(count_m1(d, &t(tt), CAP).unwrap().count, BigInt::from(n), "d={d} T={tt}");
    }
}

#[test]
fn reducible_monic() {
    for (d, tt, n) in [(2, 1, 6), (2, 2, 12), (2, 3, 18), (2, 5, 33), (3, 1, 19), (3, 2, 61), (3, 3, 127)] {
        let r = count_reducible(ReducibleClass::Monic, d, &t(tt), CAP).unwrap();
        assert_eq!(r.count, BigInt::from(n), "d={d} T={tt}");
    }
}

#[test]
fn quadratic_units() {
    for (h, n) in [("sqrt(3)", 18), ("1.7320508", 18), ("sqrt(5)", 34), ("sqrt(10)", 74)] {
        let h: Height = h.parse().unwrap();
        let r = count_algebraic(AlgebraicClass::Units, 2, &h, CAP).unwrap();
        assert_eq!(r.count, BigInt::from(n), "H={h}");
    }
}

#[test]
fn cubic_units_by_measure() {
    for (tt, n) in [(2, 48), (4, 288)] {
        let mut polys = BigInt::from(0);
        for s in [-1, 1] {
            let f = EnumFilter::exactly(3, t(tt)).slice(vec![1], vec![s]).unwrap().irreducible();
            polys += count(&f).unwrap();
        }
        assert_eq!(polys * 3, BigInt::from(n), "T={tt}");
    }
}

#[test]
fn quadratic_numbers_by_measure() {
    for (tt, n) in [(1, 6), (2, 42), (3, 158)] {
        let f = EnumFilter::exactly(2, t(tt)).irreducible().primitive().positive_leading();
        assert_eq!(count(&f).unwrap() * 2, BigInt::from(n), "T={tt}");
    }
    let h: Height = "3/2".parse().unwrap();
    let r = count_algebraic(AlgebraicClass::Numbers, 2, &h, CAP).unwrap();
    assert_eq!(r.count, BigInt::from(42));
}

#[test]
fn rationals_of_small_height() {
    for h in ["1", "1.5"] {
        let h: Height = h.parse().unwrap();
        let r = count_algebraic(AlgebraicClass::Numbers, 1, &h, CAP).unwrap();
        assert_eq!(r.count, BigInt::from(3));
    }
}

#[test]
fn named_measures() {
    let lehmer = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let c = mahler_measure(&lehmer, None, 256).unwrap();
    let oracle: BigRational = "117628081825991750654407033847/100000000000000000000000000000".parse().unwrap();
    let eps: BigRational = "1/100000000000000000000000000000".parse().unwrap();
    assert!(c.lower <= &oracle + &eps && &oracle - &eps <= c.upper);
    assert!(c.upper_f64() - c.lower_f64() < 1e-15);

    let plastic = 1.324_717_957_244_746;
    let rs = root_set(&IntPoly::from_i64(&[1, 0, -1, -1]), 128).unwrap();
    let real: Vec<_> = rs.roots.iter().filter(|z| z.im.abs() < 1e-12).collect();
    assert_eq!(real.len(), 1);
    assert!((real[0].re - plastic).abs() < 1e-10);
}
