//! d(M) ≤ (16/π)(2∫|H| + (π/2)ℓ(∂M)) on library surfaces with boundary,
//! and ∫|H|/d ≥ π/16 on closed ones, with the conjectural constant π alongside.

use plateau_bound::audit::{boundary_library, closed_library, diameter_bound};
use plateau_bound::curvature::mean_curvature_field;

fn main() {
    println!("{:<16} {:>10} {:>10} {:>10} {:>12} {:>12}", "shape", "d", "int|H|", "length", "proven rhs", "conj. rhs");
    for (name, mesh) in boundary_library().into_iter().chain(closed_library()) {
        let field = mean_curvature_field(&mesh);
        let p = diameter_bound(&mesh, &field, false).expect("bound");
        let c = diameter_bound(&mesh, &field, true).expect("bound");
        println!(
            "{name:<16} {:10.5} {:10.5} {:10.5} {:12.4} {:12.4}{}",
            p.d,
            p.total_h,
            p.boundary_length,
            p.rhs,
            c.rhs,
            if c.holds { "" } else { "  (conjectural form fails)" }
        );
    }
}
