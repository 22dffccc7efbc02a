//! Total absolute curvature of the teardrop curves approaches π.

use std::f64::consts::PI;

use plateau_bound::teardrop::{build_teardrop, build_teardrop_with, resolved_density, Profile};

fn main() {
    println!("{:>6} {:>9} {:>14} {:>12} {:>10}", "k", "samples", "int|kappa|", "excess", "max|g|");
    for k in [1, 3, 10, 30, 100, 300, 1000] {
        let c = build_teardrop(k, 100).expect("teardrop");
        let t = c.total_abs_curvature();
        println!("{k:6} {:9} {t:14.10} {:12.3e} {:10.6}", c.len(), t - PI, c.max_norm());
    }

    println!("\nbump profile");
    for k in [10, 100, 1000] {
        let c = build_teardrop_with(k, resolved_density(k, 100), Profile::Bump).expect("teardrop");
        println!("{k:6} excess {:.3e}", c.total_abs_curvature() - PI);
    }
}
