//! Monte Carlo volumes of the star body and of its monic slice, compared with
//! the exact values.

use mahler_census::constants::{monic_volume, to_f64, volume, SliceSpec};
use mahler_census::geom::{mc_slice_volume, mc_volume};
use num_rational::BigRational;

fn main() {
    let samples = 200_000;
    for d in 1..=4 {
        let e = mc_volume(d, 1.0, samples, 7).unwrap();
        let exact = to_f64(&volume(d));
        println!("V_{d}: {:.4} +- {:.4} (exact {exact:.4})", e.mean, e.stderr);
    }
    for t in [1, 2, 4] {
        let e = mc_slice_volume(&SliceSpec::monic(3), t as f64, samples, 7).unwrap();
        let exact = to_f64(&monic_volume(3, &BigRational::from_integer(t.into())).unwrap());
        println!("p_3({t}): {:.3} +- {:.3} (exact {exact:.3})", e.mean, e.stderr);
    }
    // units-type slice z^3 + a z^2 + b z + 1: volume / T^2 tends to V_1 = 4
    let spec = SliceSpec::new(3, vec![1], vec![1]).unwrap();
    for t in [10.0, 100.0, 1000.0] {
        let e = mc_slice_volume(&spec, t, samples, 7).unwrap();
        println!("slice (1|1) T={t}: vol/T^2 = {:.4} +- {:.4}", e.mean / (t * t), e.stderr / (t * t));
    }
}
