//! Connected components of the star body along axis-parallel lines.

use mahler_census::geom::{line_components, scan_lines, LineSpec};

fn main() {
    let l = LineSpec::new(3, 3, vec![0.2176919172761187, -0.18019302390345882, -0.9858119630324769]).unwrap();
    println!("{:?}", line_components(&l, 1.0, 1000, 24).unwrap());

    for n in 1..=4usize {
        let bound = (n as u64 + 1) << (n - 1);
        let lines = LineSpec::random(n, 300, 1.0, 11).unwrap();
        let scans = scan_lines(&lines, 1.0, 1000, 20).unwrap();
        let mut hist = [0u32; 8];
        for s in &scans {
            hist[s.components as usize] += 1;
        }
        let uncertain = scans.iter().filter(|s| s.uncertain).count();
        println!("N={n}: components histogram {:?}, bound {bound}, uncertain {uncertain}", &hist[..=bound.min(7) as usize]);
    }
}
