//! The best split for White's test from the minimum spanning tree, checked
//! against exhaustive enumeration of all splits.

use plateau_bound::contour::{Contour, P3};
use plateau_bound::criteria::white::white_optimum;
use plateau_bound::criteria::white_bruteforce_oracle;
use plateau_bound::generators::circle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut agree = 0;
    let trials = 50;
    for t in 0..trials {
        let n = rng.gen_range(2..=12);
        let comps: Vec<Vec<P3>> = (0..n)
            .map(|i| {
                let center = P3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), 2.5 * i as f64);
                let normal = P3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0);
                circle(&center, &normal, rng.gen_range(0.2..1.0), 20)
            })
            .collect();
        let c = Contour::new(comps).expect("disjoint circles");
        let mst = white_optimum(&c).expect("optimum");
        let brute = white_bruteforce_oracle(&c).expect("oracle");
        if mst.distance == brute {
            agree += 1;
        }
        if t < 5 {
            println!("N={n:2} mst {:.9} brute {:.9} split {:?} | {:?}", mst.distance, brute, mst.first, mst.second);
        }
    }
    println!("exact agreement on {agree}/{trials} contours");
}
