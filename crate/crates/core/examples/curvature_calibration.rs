//! ∫|H| on shapes with known totals: the unit sphere (4π) and capsules,
//! whose ratio ∫|H|/d tends to π as they get longer.

use std::f64::consts::PI;

use plateau_bound::curvature::total_mean_curvature;
use plateau_bound::generators::{capped_cylinder, icosphere};

fn main() {
    for depth in 2..=5 {
        let m = icosphere(depth);
        let h = total_mean_curvature(&m);
        println!("icosphere({depth}) vertices {:6} int|H| {h:.6} rel.err {:+.2e}", m.vertex_count(), h / (4.0 * PI) - 1.0);
    }
    println!();
    println!("{:>8} {:>12} {:>12} {:>10} {:>10}", "length", "int|H|", "pi(L+4r)", "ratio", "ratio/pi");
    for length in [2.0, 5.0, 20.0, 80.0] {
        let m = capped_cylinder(1.0, length, 48);
        let h = total_mean_curvature(&m);
        let d = m.extrinsic_diameter();
        println!("{length:8} {h:12.5} {:12.5} {:10.5} {:10.5}", PI * (length + 4.0), h / d, h / d / PI);
    }
}
