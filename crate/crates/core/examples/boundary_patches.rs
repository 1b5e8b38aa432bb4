//! Points on the boundary of the star body from the product parametrization,
//! the Lipschitz estimates, and the donut check for a slice.

use mahler_census::constants::{k1_donut, to_f64, SliceSpec};
use mahler_census::geom::{donut_check, lipschitz_check, patch_map, sample_patch, PatchSpec};

fn main() {
    let spec = PatchSpec::new(3, 1, -1).unwrap();
    // (z + 0.5)(2 z^2 + z - 1)
    println!("{:?}", patch_map(&spec, &[0.5], &[2.0, 1.0]).unwrap());

    for d in 2..=4 {
        for k in 0..=d {
            let s = PatchSpec::new(d, k, 1).unwrap();
            let v = sample_patch(&s, 500, 3).unwrap();
            let worst = v.iter().map(|p| p.residual).fold(0.0, f64::max);
            println!("patch d={d} k={k}: max |mu - 1| = {worst:.2e}");
        }
    }
    let r = lipschitz_check(&PatchSpec::new(3, 1, 1).unwrap(), 1.0, 2000, 3).unwrap();
    println!("lipschitz: {r:?}");

    let slice = SliceSpec::new(3, vec![1], vec![1]).unwrap();
    let t = 10.0 * to_f64(&k1_donut(&slice).unwrap());
    let r = donut_check(&slice, t, 10_000, 3).unwrap();
    println!(
        "donut T={t:.1}: {} of {} samples in the difference, max |mu - 1| = {:.3} <= {:.3}: {}",
        r.in_difference, r.samples, r.max_deviation, r.delta_t, r.pass
    );
}
