//! Discrete mean curvature (cotangent Laplacian, mixed Voronoi areas) and
//! turning-angle curvature of polylines.
//!
//! The mean curvature vector is the averaged trace, so `|H| = 1` on the
//! unit sphere: `H_v = (1 / 4A_v) Σ (cot α + cot β)(x_v − x_w)`.

use nalgebra::Vector3;

use crate::error::BuildError;
use crate::mesh::{Point, SurfaceMesh};

/// Cotangents are clamped to this magnitude; clamped vertices are flagged.
pub const COT_CLAMP: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct MeanCurvatureField {
    /// Mean curvature vector per vertex.
    pub h: Vec<Point>,
    /// Mixed Voronoi area per vertex.
    pub area: Vec<f64>,
    /// Share of each triangle's area assigned to its three corners.
    pub corner_area: Vec<[f64; 3]>,
    pub boundary: Vec<bool>,
    /// Vertices whose one-ring needed cotangent clamping.
    pub clamped: Vec<bool>,
}

impl MeanCurvatureField {
    pub fn magnitude(&self, v: usize) -> f64 {
        self.h[v].norm()
    }

    /// |H| mass per triangle corner; boundary corners carry nothing.
    pub fn corner_masses(&self, mesh: &SurfaceMesh) -> Vec<[f64; 3]> {
        mesh.triangles()
            .iter()
            .zip(&self.corner_area)
            .map(|(tri, ca)| {
                let mut w = [0.0; 3];
                for k in 0..3 {
                    let v = tri[k];
                    if !self.boundary[v] {
                        w[k] = self.h[v].norm() * ca[k];
                    }
                }
                w
            })
            .collect()
    }

    /// Σ over interior vertices of |H_v| A_v, optionally weighted per vertex.
    pub fn integral_weighted(&self, weight: impl Fn(usize) -> f64) -> f64 {
        let mut s = 0.0;
        for v in 0..self.h.len() {
            if !self.boundary[v] {
                s += self.h[v].norm() * self.area[v] * weight(v);
            }
        }
        s
    }
}

fn cot(u: &Point, v: &Point) -> (f64, bool) {
    let dot = u.dot(v);
    let cross2 = u.norm_squared() * v.norm_squared() - dot * dot;
    let cross = cross2.max(0.0).sqrt();
    let raw = if cross > 0.0 { dot / cross } else { f64::INFINITY.copysign(dot) };
    if raw.abs() > COT_CLAMP || raw.is_nan() {
        (COT_CLAMP.copysign(if raw.is_nan() { 1.0 } else { raw }), true)
    } else {
        (raw, false)
    }
}

pub fn mean_curvature_field(mesh: &SurfaceMesh) -> MeanCurvatureField {
    let n = mesh.vertex_count();
    let x = mesh.vertices();
    let mut lap = vec![Point::zeros(); n];
    let mut area = vec![0.0; n];
    let mut clamped = vec![false; n];
    let mut corner_area = Vec::with_capacity(mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let tri_area = mesh.triangle_area(t);
        let mut cots = [0.0; 3];
        let mut obtuse = None;
        for k in 0..3 {
            let (i, j, l) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let u = x[j] - x[i];
            let v = x[l] - x[i];
            let (c, hit) = cot(&u, &v);
            cots[k] = c;
            if hit {
                for &w in tri {
                    clamped[w] = true;
                }
            }
            if u.dot(&v) < 0.0 {
                obtuse = Some(k);
            }
        }
        // cots[k] is the angle at corner k, opposite edge (k+1, k+2).
        for k in 0..3 {
            let (j, l) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let d = x[j] - x[l];
            lap[j] += d * cots[k];
            lap[l] -= d * cots[k];
        }
        let mut ca = [0.0; 3];
        match obtuse {
            None => {
                for k in 0..3 {
                    let (i, j, l) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    let cot_j = cots[(k + 1) % 3];
                    let cot_l = cots[(k + 2) % 3];
                    ca[k] = ((x[i] - x[j]).norm_squared() * cot_l
                        + (x[i] - x[l]).norm_squared() * cot_j)
                        / 8.0;
                }
            }
            Some(o) => {
                for (k, slot) in ca.iter_mut().enumerate() {
                    *slot = if k == o { tri_area / 2.0 } else { tri_area / 4.0 };
                }
            }
        }
        for k in 0..3 {
            area[tri[k]] += ca[k];
        }
        corner_area.push(ca);
    }
    let boundary = mesh.boundary_mask();
    let h = lap
        .iter()
        .zip(&area)
        .map(|(l, &a)| l / (4.0 * a))
        .collect();
    MeanCurvatureField {
        h,
        area,
        corner_area,
        boundary,
        clamped,
    }
}

/// ∫_M |H| ≈ Σ over interior vertices of |H_v| A_v.
pub fn total_mean_curvature(mesh: &SurfaceMesh) -> f64 {
    mean_curvature_field(mesh).integral_weighted(|_| 1.0)
}

/// Sum of unsigned turning angles of a polyline. For closed curves the
/// closing vertex and the wrap-around vertex are included.
pub fn total_abs_curvature(points: &[Vector3<f64>], closed: bool) -> Result<f64, BuildError> {
    let n = points.len();
    if n < 3 {
        return Err(BuildError::TooFewSamples);
    }
    let seg_count = if closed { n } else { n - 1 };
    let mut segs = Vec::with_capacity(seg_count);
    for i in 0..seg_count {
        let d = points[(i + 1) % n] - points[i];
        if d.norm_squared() == 0.0 {
            return Err(BuildError::DuplicateSample(i));
        }
        segs.push(d);
    }
    let turns = if closed { seg_count } else { seg_count - 1 };
    let mut total = 0.0;
    for i in 0..turns {
        let (a, b) = (&segs[i], &segs[(i + 1) % seg_count]);
        total += a.cross(b).norm().atan2(a.dot(b));
    }
    Ok(total)
}
