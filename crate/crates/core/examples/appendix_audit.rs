//! Michael–Simon inequality, the m/κ dichotomy, the comparison identity and
//! the covering bound on the closed shape library.

use plateau_bound::audit::{run_audit, AuditOptions};

fn main() {
    let report = run_audit(&AuditOptions::default()).expect("audit");
    for s in &report.closed {
        let worst_ms = s.michael_simon.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let worst_dich = s.dichotomy.iter().map(|d| d.dichotomy_margin()).fold(f64::INFINITY, f64::min);
        println!(
            "{:<12} max LHS/RHS {:.4}  min max(m,kappa)-pi/4 {:.4}  d_int {:.4} <= {:.2}  int|H|/d {:.4}",
            s.shape, worst_ms, worst_dich, s.covering.d_int, s.covering.bound, s.ratio
        );
    }
    println!("identity coefficient {:.2e}", report.identity.coefficient);
    println!("all hold: {}", report.all_hold());
}
