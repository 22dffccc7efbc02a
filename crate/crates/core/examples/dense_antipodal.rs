//! Circles of radius 1e-8 around the vertices of a fine icosphere: the set
//! is antipodally symmetric and dense, so every cone through it sees points
//! on both sides, while the contour is short enough for d > 8ℓ and the
//! circles are far apart compared with ℓ/π.

use plateau_bound::contour::P3;
use plateau_bound::criteria::{analyze, AnalyzeOptions, Family};
use plateau_bound::generators::{covering_radius_estimate, icosphere, sphere_circles, SphericalPointSet};

fn main() {
    let depth: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let pts: Vec<P3> = icosphere(depth).vertices().iter().map(|v| P3::new(v.x, v.y, v.z).normalize()).collect();
    let x = SphericalPointSet::new(pts).expect("points");
    println!(
        "icosphere({depth}): {} points, packing {:.5}, covering about {:.5}",
        x.len(),
        x.packing_radius(),
        covering_radius_estimate(&x, 200_000)
    );
    let c = sphere_circles(&x, 1e-8, 16).expect("circles");
    let opts = AnalyzeOptions { cone_budget: 300, family: Some(Family::AntipodalCircles), ..Default::default() };
    let report = analyze(&c, &opts).expect("analysis");
    print!("{}", report.table());
}
