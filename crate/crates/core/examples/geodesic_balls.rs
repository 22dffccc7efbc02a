//! Intrinsic balls on the unit sphere: V(p,r) against the cap area
//! 2π(1 − cos r), and edge-graph against fast-marching distances.

use std::f64::consts::PI;

use plateau_bound::generators::icosphere;
use plateau_bound::mesh::{fast_marching_distances, geodesic_distances, BallField};

fn main() {
    let m = icosphere(5);
    let ball = BallField::new(&m, 0).expect("distances");
    println!("{:>6} {:>12} {:>12} {:>10}", "r", "V(p,r)", "cap area", "V/r^2");
    for r in [0.05, 0.1, 0.5, 1.0, 2.0, 3.0] {
        let v = ball.volume(r);
        println!("{r:6} {v:12.6} {:12.6} {:10.5}", 2.0 * PI * (1.0 - f64::cos(r)), v / (r * r));
    }
    let graph = geodesic_distances(&m, 0).expect("dijkstra");
    let fm = fast_marching_distances(&m, 0).expect("fast marching");
    let far = |d: &[f64]| d.iter().copied().fold(0.0, f64::max);
    println!("eccentricity: edge graph {:.5}, fast marching {:.5}, exact {:.5}", far(&graph), far(&fm), PI);
}
