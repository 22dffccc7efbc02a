//! Boundary contours: finite unions of disjoint closed polylines in R³.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diameter;
use crate::error::{ContourError, IoError};
use crate::spatial::KdTree;

pub type P3 = Vector3<f64>;

/// Minimum separation below which two components count as touching.
pub const DISJOINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    components: Vec<Vec<P3>>,
}

/// Bounding sphere of one component.
#[derive(Debug, Clone, Copy)]
pub struct Bound {
    pub center: P3,
    pub radius: f64,
}

impl Contour {
    pub fn new(components: Vec<Vec<P3>>) -> Result<Self, ContourError> {
        if components.is_empty() {
            return Err(ContourError::Empty);
        }
        for (ci, c) in components.iter().enumerate() {
            if c.len() < 3 {
                return Err(ContourError::TooFewPoints(ci));
            }
            for i in 0..c.len() {
                if c[i] == c[(i + 1) % c.len()] {
                    return Err(ContourError::DuplicatePoint {
                        component: ci,
                        index: i,
                    });
                }
            }
        }
        let contour = Contour { components };
        if let Some((i, j)) = contour.first_touching_pair() {
            return Err(ContourError::NotDisjoint(i, j));
        }
        Ok(contour)
    }

    pub fn components(&self) -> &[Vec<P3>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &P3> {
        self.components.iter().flatten()
    }

    pub fn point_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn bounds(&self) -> Vec<Bound> {
        self.components.iter().map(|c| bound_of(c)).collect()
    }

    /// Apply a map to every point, re-validating.
    pub fn map_points(&self, f: impl Fn(&P3) -> P3) -> Result<Self, ContourError> {
        Contour::new(
            self.components
                .iter()
                .map(|c| c.iter().map(&f).collect())
                .collect(),
        )
    }

    /// Union with another contour's components.
    pub fn with_components(&self, extra: Vec<Vec<P3>>) -> Result<Self, ContourError> {
        let mut all = self.components.clone();
        all.extend(extra);
        Contour::new(all)
    }

    fn first_touching_pair(&self) -> Option<(usize, usize)> {
        let pairs = candidate_pairs(&self.bounds(), DISJOINT_TOL);
        pairs
            .into_par_iter()
            .filter(|&(i, j)| {
                polyline_distance(&self.components[i], &self.components[j], DISJOINT_TOL)
                    <= DISJOINT_TOL
            })
            .min()
    }
}

fn bound_of(c: &[P3]) -> Bound {
    let center = c.iter().sum::<P3>() / c.len() as f64;
    let radius = c.iter().map(|p| (p - center).norm()).fold(0.0, f64::max);
    Bound { center, radius }
}

/// Pairs (i < j) whose bounding spheres come within `slack` of each other.
pub fn candidate_pairs(bounds: &[Bound], slack: f64) -> Vec<(usize, usize)> {
    let rmax = bounds.iter().map(|b| b.radius).fold(0.0, f64::max);
    let tree = KdTree::new(bounds.iter().map(|b| b.center).collect());
    let mut out: Vec<(usize, usize)> = (0..bounds.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let b = bounds[i];
            tree.within(&b.center, b.radius + rmax + slack)
                .into_iter()
                .filter(move |&j| {
                    j > i && (bounds[j].center - b.center).norm() <= b.radius + bounds[j].radius + slack
                })
                .map(move |j| (i, j))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Exact distance between segments [p0,p1] and [q0,q1].
pub fn segment_distance(p0: &P3, p1: &P3, q0: &P3, q1: &P3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return r.norm();
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    (p0 + d1 * s - (q0 + d2 * t)).norm()
}

/// Minimum distance between two closed polylines. Returns early once a
/// value at or below `stop_below` is found.
pub fn polyline_distance(a: &[P3], b: &[P3], stop_below: f64) -> f64 {
    let seg = |c: &[P3], i: usize| {
        let p = c[i];
        let q = c[(i + 1) % c.len()];
        ((p + q) * 0.5, (q - p).norm() * 0.5)
    };
    let sb: Vec<(P3, f64)> = (0..b.len()).map(|j| seg(b, j)).collect();
    let mut best = f64::INFINITY;
    for i in 0..a.len() {
        let (ma, ha) = seg(a, i);
        for (j, &(mb, hb)) in sb.iter().enumerate() {
            if (ma - mb).norm() - ha - hb >= best {
                continue;
            }
            let d = segment_distance(&a[i], &a[(i + 1) % a.len()], &b[j], &b[(j + 1) % b.len()]);
            if d < best {
                best = d;
                if best <= stop_below {
                    return best;
                }
            }
        }
    }
    best
}

/// Sum of closed polyline lengths.
pub fn contour_length(c: &Contour) -> f64 {
    c.components()
        .iter()
        .map(|comp| {
            (0..comp.len())
                .map(|i| (comp[(i + 1) % comp.len()] - comp[i]).norm())
                .sum::<f64>()
        })
        .sum()
}

/// Largest distance between any two contour points.
pub fn contour_diameter(c: &Contour) -> f64 {
    let pts: Vec<P3> = c.points().copied().collect();
    diameter::diameter(&pts)
}

/// Exact pairwise component distances; the diagonal is zero.
pub fn component_distance_matrix(c: &Contour) -> Result<Vec<Vec<f64>>, ContourError> {
    let n = c.len();
    if n < 2 {
        return Err(ContourError::SingleComponent);
    }
    let comps = c.components();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| polyline_distance(&comps[i], &comps[j], 0.0))
                .collect()
        })
        .collect();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for (k, &d) in upper[i].iter().enumerate() {
            let j = i + 1 + k;
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub vertices: Vec<[f64; 3]>,
}

/// `.contour.json` layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContourDocument {
    pub dimension: usize,
    pub components: Vec<ComponentDocument>,
}

impl ContourDocument {
    pub fn from_contour(c: &Contour) -> Self {
        ContourDocument {
            dimension: 3,
            components: c
                .components()
                .iter()
                .map(|comp| ComponentDocument {
                    vertices: comp.iter().map(|p| [p.x, p.y, p.z]).collect(),
                })
                .collect(),
        }
    }

    pub fn into_contour(self) -> Result<Contour, ContourError> {
        if self.dimension != 3 {
            return Err(ContourError::BadDimension(self.dimension));
        }
        Contour::new(
            self.components
                .into_iter()
                .map(|c| c.vertices.into_iter().map(P3::from).collect())
                .collect(),
        )
    }
}

pub fn load_contour(path: &Path) -> Result<Contour, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc: ContourDocument = serde_json::from_str(&text)?;
    Ok(doc.into_contour()?)
}

pub fn save_contour(c: &Contour, path: &Path) -> Result<(), IoError> {
    let text = serde_json::to_string(&ContourDocument::from_contour(c))?;
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{circle, coaxial_circles, sphere_circles, stadium, SphericalPointSet};
    use std::f64::consts::{PI, TAU};

    fn unit_circle() -> Vec<P3> {
        circle(&P3::zeros(), &P3::z(), 1.0, 360)
    }

    #[test]
    fn circle_length_and_diameter() {
        let c = Contour::new(vec![unit_circle()]).unwrap();
        assert!((contour_length(&c) - TAU).abs() < 1e-4);
        assert!((contour_diameter(&c) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_circles_add_lengths() {
        let c = coaxial_circles(1.0, 1.0, 360).unwrap();
        assert!((contour_length(&c) - 2.0 * TAU).abs() < 2e-4);
        let m = component_distance_matrix(&c).unwrap();
        assert!((m[0][1] - 2.0).abs() < 1e-6);
        assert_eq!(m[0][1], m[1][0]);
    }

    #[test]
    fn concentric_circles_gap() {
        // Aligned n-gons: the closest pair is two chord midpoints, 2cos(pi/n) apart.
        for n in [360usize, 4096] {
            let inner = circle(&P3::zeros(), &P3::z(), 1.0, n);
            let c = Contour::new(vec![inner, circle(&P3::zeros(), &P3::z(), 3.0, n)]).unwrap();
            let d = component_distance_matrix(&c).unwrap()[0][1];
            assert!((d - 2.0 * (PI / n as f64).cos()).abs() < 1e-12);
            if n == 4096 {
                assert!((d - 2.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn stadium_measures() {
        let c = stadium(10.0, 1.0, 128).unwrap();
        assert!((contour_length(&c) - (20.0 + TAU)).abs() < 1e-3);
        assert!((contour_diameter(&c) - 12.0).abs() < 1e-9);
    }

    #[test]
    fn antipodal_caps() {
        let x = SphericalPointSet::new(vec![P3::z(), -P3::z()]).unwrap();
        let c = sphere_circles(&x, 0.1, 256).unwrap();
        // Farthest points are the two great-circle diameters: exactly 2.
        assert!((contour_diameter(&c) - 2.0).abs() < 1e-9);
        let m = component_distance_matrix(&c).unwrap();
        assert!((m[0][1] - 2.0 * 0.1f64.cos()).abs() < 1e-4);
        assert!((contour_length(&c) - 2.0 * TAU * 0.1f64.sin()).abs() < 1e-4);
    }

    #[test]
    fn segment_distance_cases() {
        let o = P3::zeros();
        let x = P3::x();
        // Crossing skew segments.
        let d = segment_distance(&(-x), &x, &P3::new(0.0, -1.0, 2.0), &P3::new(0.0, 1.0, 2.0));
        assert!((d - 2.0).abs() < 1e-15);
        // Parallel, offset along the axis.
        let d = segment_distance(&o, &x, &P3::new(3.0, 1.0, 0.0), &P3::new(4.0, 1.0, 0.0));
        assert!((d - 5f64.sqrt()).abs() < 1e-15);
        // Degenerate point segment.
        let d = segment_distance(&o, &o, &P3::new(0.5, 1.0, 0.0), &P3::new(0.5, 2.0, 0.0));
        assert!((d - 1.25f64.sqrt()).abs() < 1e-15);
        let _ = PI;
    }

    #[test]
    fn touching_components_are_rejected() {
        let a = unit_circle();
        let b = circle(&P3::new(2.0, 0.0, 0.0), &P3::z(), 1.0, 360);
        assert!(matches!(Contour::new(vec![a, b]), Err(ContourError::NotDisjoint(0, 1))));
    }

    #[test]
    fn json_round_trip() {
        let c = coaxial_circles(1.0, 0.5, 32).unwrap();
        let back = ContourDocument::from_contour(&c).into_contour().unwrap();
        assert_eq!(back, c);
    }
}
