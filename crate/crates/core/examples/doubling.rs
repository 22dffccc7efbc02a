//! Double a surface with boundary into a closed one. ∫|H| approaches
//! ∫_M|H| twice plus (π/2)·ℓ(∂M) and the diameter stays within a few ε.

use plateau_bound::doubling::{build_double, convergence_table, table_csv};
use plateau_bound::generators::{flat_disk, hemisphere, open_cylinder};

fn main() {
    for (name, mesh) in [
        ("disk", flat_disk(1.0, 16)),
        ("hemisphere", hemisphere(16)),
        ("open cylinder", open_cylinder(1.0, 2.0, 48, 16)),
    ] {
        println!("{name}");
        let rows = convergence_table(&mesh, &[10, 25, 50]).expect("doubling");
        print!("{}", table_csv(&rows));
        let d = build_double(&mesh, 25, None).expect("doubling");
        let r = d.sigma.report();
        println!(
            "k=25: closed {} connected {} euler {} (M: {})\n",
            r.closed,
            r.connected,
            d.sigma.euler_characteristic(),
            mesh.euler_characteristic()
        );
    }
}
