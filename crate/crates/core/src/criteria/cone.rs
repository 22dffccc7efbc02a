//! Separation of the contour by a double cone of half-opening atan(sinh τ):
//! one group of components inside the upper nappe, the rest inside the
//! lower one.

use nalgebra::{Matrix3, SymmetricEigen};
use rayon::prelude::*;

use super::{tau_root, Certificate, Entry, Verdict, STRICT_MARGIN};
use crate::contour::{Contour, P3};
use crate::error::ContourError;
use crate::generators::icosphere;
use crate::optim::nelder_mead;

/// Above this many points the optimiser works on covering balls.
pub const MAX_ATOMS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeSeparator {
    pub apex: P3,
    pub axis: P3,
    pub tau: f64,
    pub upper: Vec<usize>,
    pub lower: Vec<usize>,
    pub margin: f64,
}

/// Minimum over all contour points of sinh τ·cos ψ − sin ψ, where ψ is the
/// angle between p − apex and the axis of the point's nappe. Positive iff
/// every point lies strictly inside its nappe.
pub fn cone_membership_margin(c: &Contour, apex: &P3, axis: &P3, tau: f64, upper: &[usize], lower: &[usize]) -> f64 {
    let s = tau.sinh();
    let a = axis.normalize();
    let side = |idx: &[usize], sign: f64| {
        idx.iter()
            .flat_map(|&k| c.components()[k].iter())
            .map(|p| {
                let w = p - apex;
                let z = sign * w.dot(&a);
                let rho = (w.norm_squared() - z * z).max(0.0).sqrt();
                let r = w.norm();
                if r == 0.0 { f64::NEG_INFINITY } else { (s * z - rho) / r }
            })
            .fold(f64::INFINITY, f64::min)
    };
    side(upper, 1.0).min(side(lower, -1.0))
}

impl ConeSeparator {
    pub fn verify(&self, c: &Contour) -> bool {
        let mut all: Vec<usize> = self.upper.iter().chain(&self.lower).copied().collect();
        all.sort_unstable();
        all.dedup();
        !self.upper.is_empty()
            && !self.lower.is_empty()
            && all.len() == self.upper.len() + self.lower.len()
            && all == (0..c.len()).collect::<Vec<_>>()
            && cone_membership_margin(c, &self.apex, &self.axis, self.tau, &self.upper, &self.lower) > STRICT_MARGIN
    }
}

struct Atom {
    center: P3,
    radius: f64,
    component: usize,
}

/// Normalised copy: centroid at the origin, unit bounding-box diagonal.
struct Frame {
    origin: P3,
    scale: f64,
    atoms: Vec<Atom>,
    centroids: Vec<P3>,
}

fn build_frame(c: &Contour) -> Frame {
    let n = c.point_count() as f64;
    let origin = c.points().sum::<P3>() / n;
    let (lo, hi) = c.points().fold((P3::repeat(f64::INFINITY), P3::repeat(f64::NEG_INFINITY)), |(lo, hi), p| {
        (lo.inf(p), hi.sup(p))
    });
    let scale = (hi - lo).norm().max(f64::MIN_POSITIVE);
    let stride = c.point_count().div_ceil(MAX_ATOMS).max(1);
    let mut atoms = Vec::new();
    for (k, comp) in c.components().iter().enumerate() {
        let pts: Vec<P3> = comp.iter().map(|p| (p - origin) / scale).collect();
        for start in (0..pts.len()).step_by(stride) {
            let center = pts[start];
            let radius = (start..(start + stride).min(pts.len()))
                .map(|i| (pts[i] - center).norm())
                .fold(0.0, f64::max);
            atoms.push(Atom { center, radius, component: k });
        }
    }
    let centroids = c
        .components()
        .iter()
        .map(|comp| (comp.iter().sum::<P3>() / comp.len() as f64 - origin) / scale)
        .collect();
    Frame { origin, scale, atoms, centroids }
}

fn tangent_basis(b: &P3) -> (P3, P3) {
    let helper = if b.x.abs() < 0.9 { P3::x() } else { P3::y() };
    let t1 = b.cross(&helper).normalize();
    (t1, b.cross(&t1))
}

struct Start {
    base: P3,
    t1: P3,
    t2: P3,
}

impl Start {
    fn new(base: P3) -> Self {
        let base = base.normalize();
        let (t1, t2) = tangent_basis(&base);
        Start { base, t1, t2 }
    }

    fn decode(&self, x: &[f64]) -> (P3, P3) {
        let apex = P3::new(x[0], x[1], x[2]);
        let axis = (self.base + self.t1 * x[3] + self.t2 * x[4]).normalize();
        (apex, axis)
    }
}

fn sides(frame: &Frame, apex: &P3, axis: &P3) -> Vec<bool> {
    frame.centroids.iter().map(|g| (g - apex).dot(axis) > 0.0).collect()
}

/// Worst angular slack α − ψ − asin(r/|w|) over the atoms, evaluated
/// through the cosine of the angle sum.
fn worst_slack(frame: &Frame, apex: &P3, axis: &P3, up: &[bool], alpha: f64) -> f64 {
    let mut lowest = 1.0f64;
    for a in &frame.atoms {
        let w = a.center - apex;
        let d2 = w.norm_squared();
        let r2 = a.radius * a.radius;
        if d2 <= r2 {
            return alpha - std::f64::consts::PI;
        }
        let along = if up[a.component] { w.dot(axis) } else { -w.dot(axis) };
        let cos_psi = along / d2.sqrt();
        let sin_psi = (1.0 - cos_psi * cos_psi).max(0.0).sqrt();
        let cos_beta = (1.0 - r2 / d2).sqrt();
        let c = if cos_psi < -cos_beta {
            -1.0
        } else {
            cos_psi * cos_beta - sin_psi * (r2 / d2).sqrt()
        };
        lowest = lowest.min(c);
    }
    alpha - lowest.clamp(-1.0, 1.0).acos()
}

fn objective(frame: &Frame, start: &Start, x: &[f64], alpha: f64) -> f64 {
    let (apex, axis) = start.decode(x);
    let up = sides(frame, &apex, &axis);
    let penalty = if up.iter().all(|&u| u) || up.iter().all(|&u| !u) { 1.0 } else { 0.0 };
    -worst_slack(frame, &apex, &axis, &up, alpha) + penalty
}

fn start_axes(c: &Contour, frame: &Frame) -> Vec<P3> {
    let mut axes: Vec<P3> = icosphere(1).vertices().iter().map(|v| P3::new(v.x, v.y, v.z)).collect();
    let mut cov = Matrix3::zeros();
    for p in c.points() {
        let q = (p - frame.origin) / frame.scale;
        cov += q * q.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    for i in order {
        axes.push(eig.eigenvectors.column(i).into_owned());
    }
    axes
}

struct Candidate {
    value: f64,
    apex: P3,
    axis: P3,
    evaluations: usize,
}

/// Multistart simplex search for a separating cone, `budget` objective
/// evaluations per start. A found separator is a certificate; failure to
/// find one proves nothing.
pub fn cone_check(c: &Contour, budget: usize) -> Result<Entry, ContourError> {
    if budget == 0 {
        return Err(ContourError::BadBudget);
    }
    let mut e = Entry::new("cone", true);
    if c.len() < 2 {
        e.note("single component: no decomposition exists");
        return Ok(e);
    }
    let root = tau_root();
    let alpha = root.tau.sinh().atan();
    let frame = build_frame(c);
    let starts: Vec<Start> = start_axes(c, &frame).into_iter().map(Start::new).collect();
    let candidates: Vec<Candidate> = starts
        .par_iter()
        .map(|st| {
            let m = nelder_mead(
                |x| objective(&frame, st, x, alpha),
                &[0.0; 5],
                &[0.1, 0.1, 0.1, 0.3, 0.3],
                budget,
                1e-12,
            );
            let (apex, axis) = st.decode(&m.x);
            Candidate { value: m.value, apex, axis, evaluations: m.evaluations }
        })
        .collect();
    let evaluations: usize = candidates.iter().map(|c| c.evaluations).sum();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| candidates[i].value.total_cmp(&candidates[j].value).then(i.cmp(&j)));
    let best = &candidates[order[0]];
    e.measure("tau", root.tau);
    e.measure("sinh2_tau", root.sinh2);
    e.measure("best_angular_slack", -best.value);
    e.measure("starts", candidates.len() as f64);
    e.measure("evaluations", evaluations as f64);
    let mut best_margin = f64::NEG_INFINITY;
    for &i in &order {
        let cand = &candidates[i];
        if cand.value >= 0.0 {
            break;
        }
        let apex = frame.origin + cand.apex * frame.scale;
        let up = sides(&frame, &cand.apex, &cand.axis);
        let upper: Vec<usize> = (0..c.len()).filter(|&k| up[k]).collect();
        let lower: Vec<usize> = (0..c.len()).filter(|&k| !up[k]).collect();
        let margin = cone_membership_margin(c, &apex, &cand.axis, root.tau, &upper, &lower);
        best_margin = best_margin.max(margin);
        let sep = ConeSeparator { apex, axis: cand.axis, tau: root.tau, upper, lower, margin };
        if sep.verify(c) {
            e.verdict = Verdict::Certified;
            e.margin = Some(margin);
            e.measure("cone_margin", margin);
            e.certificate = Some(Certificate::Cone(sep));
            e.note("components kept whole in the decomposition");
            return Ok(e);
        }
    }
    e.verdict = Verdict::NoCertificateFound;
    if best_margin.is_finite() {
        e.margin = Some(best_margin);
        e.measure("cone_margin", best_margin);
    }
    e.note("no separating cone found; this does not prove none exists");
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{circle, coaxial_circles};

    fn certificate(e: &Entry) -> &ConeSeparator {
        match e.certificate.as_ref() {
            Some(Certificate::Cone(s)) => s,
            _ => panic!("expected a cone certificate"),
        }
    }

    #[test]
    fn closed_form_membership_at_symmetric_apex() {
        let tau = tau_root().tau;
        let far = coaxial_circles(1.0, 2.0, 64).unwrap();
        let m = cone_membership_margin(&far, &P3::zeros(), &P3::z(), tau, &[0], &[1]);
        let expect = (tau.sinh() * 2.0 - 1.0) / 5f64.sqrt();
        assert!((m - expect).abs() < 1e-12);
        let near = coaxial_circles(1.0, 0.1, 64).unwrap();
        assert!(cone_membership_margin(&near, &P3::zeros(), &P3::z(), tau, &[0], &[1]) < 0.0);
    }

    #[test]
    fn far_circles_separate() {
        let c = coaxial_circles(1.0, 2.0, 64).unwrap();
        let e = cone_check(&c, 400).unwrap();
        assert_eq!(e.verdict, Verdict::Certified);
        let s = certificate(&e);
        assert!(s.verify(&c));
        assert!(s.margin > STRICT_MARGIN);
    }

    #[test]
    fn near_circles_do_not() {
        let c = coaxial_circles(1.0, 0.1, 64).unwrap();
        let e = cone_check(&c, 400).unwrap();
        assert_eq!(e.verdict, Verdict::NoCertificateFound);
        assert!(e.certificate.is_none());
    }

    #[test]
    fn certificate_moves_with_the_contour() {
        let c = coaxial_circles(1.0, 2.0, 48).unwrap();
        let shift = P3::new(3.0, -1.0, 0.5);
        let moved = c.map_points(|p| p * 2.0 + shift).unwrap();
        let e = cone_check(&moved, 400).unwrap();
        assert!(certificate(&e).verify(&moved));
    }

    #[test]
    fn tampered_certificate_fails() {
        let c = coaxial_circles(1.0, 2.0, 48).unwrap();
        let e = cone_check(&c, 400).unwrap();
        let mut s = certificate(&e).clone();
        std::mem::swap(&mut s.upper, &mut s.lower);
        assert!(!s.verify(&c));
        let single = Contour::new(vec![circle(&P3::zeros(), &P3::z(), 1.0, 16)]).unwrap();
        assert_eq!(cone_check(&single, 10).unwrap().verdict, Verdict::Inapplicable);
        assert!(matches!(cone_check(&c, 0), Err(ContourError::BadBudget)));
    }
}
