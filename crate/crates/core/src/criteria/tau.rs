//! The cone opening: the positive root of cosh τ = τ sinh τ.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TauRoot {
    pub tau: f64,
    pub sinh2: f64,
    pub residual: f64,
    pub iterations: usize,
}

pub fn tau_residual(t: f64) -> f64 {
    t.cosh() - t * t.sinh()
}

/// Newton's method from τ₀ = 1.2. Panics if 50 iterations do not bring
/// the residual to 1e-12.
pub fn tau_root() -> TauRoot {
    let mut t: f64 = 1.2;
    for i in 0..50 {
        let g = tau_residual(t);
        if g.abs() <= 1e-12 {
            return TauRoot {
                tau: t,
                sinh2: t.sinh().powi(2),
                residual: g,
                iterations: i,
            };
        }
        t -= g / (-t * t.cosh());
    }
    panic!("Newton iteration for tau did not converge");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            if tau_residual(lo) * tau_residual(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn newton_matches_bisection() {
        let oracle = bisect(1.0, 1.5);
        let r = tau_root();
        assert!((r.tau - oracle).abs() < 1e-6);
        assert!((r.tau - 1.1997).abs() < 1e-3);
        assert!(r.residual.abs() <= 1e-12);
        assert!((r.sinh2 - oracle.sinh().powi(2)).abs() < 1e-8);
    }
}
