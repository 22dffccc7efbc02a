//! Search for a cone x² + y² < z² sinh²τ, cosh τ = τ sinh τ, with one
//! circle in each nappe, for coaxial circles at decreasing separation.

use plateau_bound::criteria::{cone_check, tau_root, Certificate};
use plateau_bound::generators::coaxial_circles;

fn main() {
    let root = tau_root();
    println!("tau {:.10} sinh^2 tau {:.8} residual {:.1e}", root.tau, root.sinh2, root.residual);
    for half_gap in [2.0, 1.0, 0.7, 0.5, 0.3, 0.1] {
        let c = coaxial_circles(1.0, half_gap, 64).expect("circles");
        let e = cone_check(&c, 600).expect("search");
        match &e.certificate {
            Some(Certificate::Cone(s)) => println!(
                "z = ±{half_gap}: separated, apex {:.4?} axis {:.4?} margin {:.6} reverified {}",
                s.apex.as_slice(),
                s.axis.as_slice(),
                s.margin,
                s.verify(&c)
            ),
            _ => println!("z = ±{half_gap}: no certificate (best angular slack {:.4})", e.get("best_angular_slack").unwrap()),
        }
    }
}
