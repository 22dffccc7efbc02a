//! Tiny circles around the points of a spherical ε-net. The total length
//! shrinks like ε^(1/2), so d > 8ℓ eventually holds, while the best split
//! distance over ℓ also decays like ε^(1/2) and White's test never fires.

use plateau_bound::contour::contour_length;
use plateau_bound::criteria::{diameter_length_check, white_check, Mode};
use plateau_bound::generators::{fibonacci_net, sphere_circles};

fn main() {
    let mut pts = Vec::new();
    println!("{:>6} {:>6} {:>10} {:>10} {:>12} {:>8} {:>8}", "eps", "N", "covering", "packing", "l", "dist/l", "d>8l");
    for eps in [0.2, 0.1, 0.05, 0.025] {
        let net = fibonacci_net(eps).expect("net");
        let c = sphere_circles(&net.set, eps.powf(2.5), 16).expect("circles");
        let w = white_check(&c).expect("white");
        let ratio = w.get("ratio").unwrap();
        let dl = diameter_length_check(&c, Mode::Proven);
        println!(
            "{eps:6} {:6} {:10.5} {:10.5} {:12.6} {ratio:8.5} {:>8}",
            net.set.len(),
            net.covering_estimate,
            net.set.packing_radius(),
            contour_length(&c),
            dl.verdict.as_str()
        );
        pts.push((eps.ln(), ratio.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    println!("log-log slope of dist/l against eps: {slope:.3}");
}
