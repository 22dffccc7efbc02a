//! Closing a surface with boundary: two coincident copies of M joined along
//! every boundary loop by a thin tube swept by a teardrop curve.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::total_mean_curvature;
use crate::error::{BuildError, MeshError};
use crate::format::sig;
use crate::mesh::{triangle_area_of, Point, SurfaceMesh};
use crate::teardrop::{build_teardrop, TeardropCurve};

/// Upper cap on the regularity threshold for straight boundaries.
pub const EPSILON_CAP: f64 = 0.5;
/// Minimum tube cell area.
pub const MIN_CELL_AREA: f64 = 1e-14;
const RESEED_NORM: f64 = 1e-6;

/// Orthonormal frame sampled at the vertices of one boundary loop.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    pub dimension: usize,
    pub loop_index: usize,
    pub vertex_indices: Vec<usize>,
    /// Arclength at each sample; the loop closes at `length`.
    pub sigma: Vec<f64>,
    pub length: f64,
    pub c: Vec<Point>,
    pub e1: Vec<Point>,
    pub e2: Vec<Point>,
    pub e3: Vec<Point>,
    /// Rotation of the transported e3 after one loop (zero in R³).
    pub holonomy: f64,
    /// Distance between the closed-up e3 and its starting value.
    pub periodicity_error: f64,
    /// Samples where transport collapsed and e3 was re-seeded.
    pub reseeded: Vec<usize>,
    /// Centroid of the interior neighbours of each sample.
    pub inner_reference: Vec<Point>,
}

/// Vector completing (a, b, c) to a positively oriented orthonormal basis of R⁴.
pub fn cross4(a: &Point, b: &Point, c: &Point) -> Point {
    let mut out = Point::zeros();
    for i in 0..4 {
        let mut unit = Vector4::zeros();
        unit[i] = 1.0;
        let m = Matrix4::from_rows(&[a.transpose(), b.transpose(), c.transpose(), unit.transpose()]);
        out[i] = m.determinant();
    }
    out
}

fn cross3(a: &Point, b: &Point) -> Point {
    Point::new(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x, 0.0)
}

fn project_out(v: &Point, basis: &[&Point]) -> Point {
    let mut w = *v;
    for b in basis {
        w -= *b * b.dot(&w);
    }
    w
}

fn seed(e1: &Point, e2: &Point, dim: usize) -> Point {
    let mut best = (Point::zeros(), -1.0);
    for i in 0..dim {
        let mut u = Point::zeros();
        u[i] = 1.0;
        let w = project_out(&u, &[e1, e2]);
        let n = w.norm();
        if n > best.1 + 1e-12 {
            best = (w / n, n);
        }
    }
    best.0
}

pub fn build_boundary_frames(mesh: &SurfaceMesh) -> Result<Vec<BoundaryFrame>, BuildError> {
    if mesh.boundary_loops().is_empty() {
        return Err(MeshError::NoBoundary.into());
    }
    let x = mesh.vertices();
    let mut third: HashMap<(usize, usize), usize> = HashMap::new();
    for t in mesh.triangles() {
        for k in 0..3 {
            third.insert((t[k], t[(k + 1) % 3]), t[(k + 2) % 3]);
        }
    }
    let neighbors = mesh.vertex_neighbors();
    let on_boundary = mesh.boundary_mask();
    let dim = mesh.dimension();
    let mut frames = Vec::new();
    for (li, lp) in mesh.boundary_loops().iter().enumerate() {
        let idx = lp.vertex_indices.clone();
        let n = idx.len();
        let c: Vec<Point> = idx.iter().map(|&v| x[v]).collect();
        let mut sigma = Vec::with_capacity(n);
        let mut acc = 0.0;
        for j in 0..n {
            sigma.push(acc);
            let step = (c[(j + 1) % n] - c[j]).norm();
            if step == 0.0 {
                return Err(BuildError::DegenerateTangent { loop_index: li, sample: j });
            }
            acc += step;
        }
        let length = acc;
        // Outward conormal of each boundary edge j → j+1.
        let conormal: Vec<Point> = (0..n)
            .map(|j| {
                let (a, b) = (idx[j], idx[(j + 1) % n]);
                let q = third[&(a, b)];
                let t = (x[b] - x[a]).normalize();
                let w = x[q] - x[a];
                -(w - t * t.dot(&w)).normalize()
            })
            .collect();
        let mut e1 = Vec::with_capacity(n);
        let mut e2 = Vec::with_capacity(n);
        let mut inner_reference = Vec::with_capacity(n);
        for j in 0..n {
            let t = (c[(j + 1) % n] - c[(j + n - 1) % n]).normalize();
            let nrm = conormal[(j + n - 1) % n] + conormal[j];
            let e = (nrm - t * t.dot(&nrm)).normalize();
            e1.push(t);
            e2.push(e);
            let inner: Vec<usize> = neighbors[idx[j]].iter().copied().filter(|&w| !on_boundary[w]).collect();
            let refs: Vec<usize> = if inner.is_empty() {
                vec![third[&(idx[(j + n - 1) % n], idx[j])], third[&(idx[j], idx[(j + 1) % n])]]
            } else {
                inner
            };
            inner_reference.push(refs.iter().map(|&w| x[w]).sum::<Point>() / refs.len() as f64);
        }
        let mut e3 = Vec::with_capacity(n);
        let mut reseeded = Vec::new();
        let (holonomy, periodicity_error);
        if dim == 3 {
            for j in 0..n {
                e3.push(cross3(&e1[j], &e2[j]));
            }
            holonomy = 0.0;
            periodicity_error = (cross3(&e1[0], &e2[0]) - e3[0]).norm();
        } else {
            e3.push(seed(&e1[0], &e2[0], dim));
            for j in 1..n {
                let w = project_out(&e3[j - 1], &[&e1[j], &e2[j]]);
                if w.norm() < RESEED_NORM {
                    reseeded.push(j);
                    e3.push(seed(&e1[j], &e2[j], dim));
                } else {
                    e3.push(w.normalize());
                }
            }
            let v = project_out(&e3[n - 1], &[&e1[0], &e2[0]]).normalize();
            let e4 = cross4(&e1[0], &e2[0], &e3[0]);
            let theta = v.dot(&e4).atan2(v.dot(&e3[0]));
            for j in 0..n {
                let a = -theta * sigma[j] / length;
                let f4 = cross4(&e1[j], &e2[j], &e3[j]);
                e3[j] = e3[j] * a.cos() + f4 * a.sin();
            }
            let vf4 = cross4(&e1[0], &e2[0], &v);
            let closed = v * (-theta).cos() + vf4 * (-theta).sin();
            holonomy = theta;
            periodicity_error = (closed - e3[0]).norm();
        }
        frames.push(BoundaryFrame {
            dimension: dim,
            loop_index: li,
            vertex_indices: idx,
            sigma,
            length,
            c,
            e1,
            e2,
            e3,
            holonomy,
            periodicity_error,
            reseeded,
            inner_reference,
        });
    }
    Ok(frames)
}

impl BoundaryFrame {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Largest |e_a · e_b| (a ≠ b) or ||e_a| − 1| over all samples.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.len() {
            let e = [&self.e1[j], &self.e2[j], &self.e3[j]];
            for a in 0..3 {
                worst = worst.max((e[a].norm() - 1.0).abs());
                for b in (a + 1)..3 {
                    worst = worst.max(e[a].dot(e[b]).abs());
                }
            }
        }
        worst
    }

    /// Smallest e2 · (c − b) over samples, b the interior reference point.
    pub fn min_outwardness(&self) -> f64 {
        (0..self.len())
            .map(|j| self.e2[j].dot(&(self.c[j] - self.inner_reference[j])))
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest finite-difference rates |ė2| and |ė3| per unit arclength.
    pub fn derivative_magnitudes(&self) -> (f64, f64) {
        let n = self.len();
        let mut d2: f64 = 0.0;
        let mut d3: f64 = 0.0;
        for j in 0..n {
            let k = (j + 1) % n;
            let ds = (self.c[k] - self.c[j]).norm();
            d2 = d2.max((self.e2[k] - self.e2[j]).norm() / ds);
            d3 = d3.max((self.e3[k] - self.e3[j]).norm() / ds);
        }
        (d2, d3)
    }
}

/// Conservative ε̄ = 0.5 / (2 max(|ė2|, |ė3|)), capped at 0.5.
pub fn regularity_threshold(frame: &BoundaryFrame, _teardrop: &TeardropCurve) -> f64 {
    let (d2, d3) = frame.derivative_magnitudes();
    let rate = d2.max(d3);
    if rate * EPSILON_CAP * 2.0 <= 0.5 {
        EPSILON_CAP
    } else {
        0.5 / (2.0 * rate)
    }
}

fn tube_point(frame: &BoundaryFrame, j: usize, x: f64, y: f64, eps: f64) -> Point {
    frame.c[j] + frame.e2[j] * (eps * x) + frame.e3[j] * (eps * y)
}

/// Tube vertex grid with given end rings; returns (vertices added, triangles).
fn tube_cells(
    frame: &BoundaryFrame,
    curve: &TeardropCurve,
    eps: f64,
    start_ring: &[usize],
    end_ring: &[usize],
    first_new: usize,
) -> Result<(Vec<Point>, Vec<[usize; 3]>), BuildError> {
    let n = frame.len();
    let m = curve.samples.len() - 1;
    if start_ring.len() != n || end_ring.len() != n {
        return Err(BuildError::GluingMismatch {
            loop_len: n,
            ring_len: start_ring.len().min(end_ring.len()),
        });
    }
    let mut verts = Vec::with_capacity(n * (m - 1));
    for s in &curve.samples[1..m] {
        for j in 0..n {
            verts.push(tube_point(frame, j, s.x, s.y, eps));
        }
    }
    let id = |j: usize, r: usize| -> usize {
        let j = j % n;
        if r == 0 {
            start_ring[j]
        } else if r == m {
            end_ring[j]
        } else {
            first_new + (r - 1) * n + j
        }
    };
    let pos = |j: usize, r: usize| -> Point {
        let s = curve.samples[r];
        tube_point(frame, j % n, s.x, s.y, eps)
    };
    let mut tris = Vec::with_capacity(2 * n * m);
    for r in 0..m {
        for j in 0..n {
            let (a, b, c, d) = (id(j, r), id(j + 1, r), id(j + 1, r + 1), id(j, r + 1));
            let area = triangle_area_of(&pos(j + 1, r), &pos(j, r), &pos(j, r + 1))
                .min(triangle_area_of(&pos(j + 1, r), &pos(j, r + 1), &pos(j + 1, r + 1)));
            if area < MIN_CELL_AREA {
                return Err(BuildError::DegenerateCell(j, r));
            }
            tris.push([b, a, d]);
            tris.push([b, d, c]);
        }
    }
    Ok((verts, tris))
}

fn check_epsilon(eps: f64, threshold: f64) -> Result<(), BuildError> {
    if eps > 0.0 && eps < threshold {
        Ok(())
    } else {
        Err(BuildError::EpsilonTooLarge { epsilon: eps, threshold })
    }
}

/// The tube S(σ, s) = c + ε x(s) e2 + ε y(s) e3 as a standalone annulus.
pub fn build_tube(frame: &BoundaryFrame, curve: &TeardropCurve, eps: f64) -> Result<SurfaceMesh, BuildError> {
    check_epsilon(eps, regularity_threshold(frame, curve))?;
    let n = frame.len();
    let m = curve.samples.len() - 1;
    let mut verts: Vec<Point> = frame.c.clone();
    let start: Vec<usize> = (0..n).collect();
    let end: Vec<usize> = (n..2 * n).collect();
    verts.extend(frame.c.iter().copied());
    let (inner, tris) = tube_cells(frame, curve, eps, &start, &end, 2 * n)?;
    verts.extend(inner);
    debug_assert_eq!(verts.len(), n * (m + 1));
    Ok(SurfaceMesh::new(frame.dimension, verts, tris)?)
}

/// Which part of Σ a triangle came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Piece {
    Copy1,
    Copy2,
    Tube(usize),
}

#[derive(Debug, Clone)]
pub struct DoubledSurface {
    pub sigma: SurfaceMesh,
    pub epsilon: f64,
    pub k: u32,
    pub provenance: Vec<Piece>,
    /// ε̄ over all loops.
    pub threshold: f64,
}

impl DoubledSurface {
    /// Sidecar text: one `first last piece` range per line.
    pub fn provenance_text(&self) -> String {
        let mut out = String::from("# first_triangle last_triangle piece\n");
        let mut start = 0;
        for i in 1..=self.provenance.len() {
            if i == self.provenance.len() || self.provenance[i] != self.provenance[start] {
                let name = match self.provenance[start] {
                    Piece::Copy1 => "copy-1".to_string(),
                    Piece::Copy2 => "copy-2".to_string(),
                    Piece::Tube(l) => format!("tube-{l}"),
                };
                let _ = writeln!(out, "{} {} {}", start, i - 1, name);
                start = i;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DoublingOptions {
    /// Teardrop samples per unit length before the k-dependent raise.
    pub samples_per_unit: usize,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        Self { samples_per_unit: 100 }
    }
}

/// Σ = M ∪ M′ ∪ tubes with the default options; `epsilon = None` picks
/// ε_k = min(ε̄/2, 1/(2k)).
pub fn build_double(mesh: &SurfaceMesh, k: u32, epsilon: Option<f64>) -> Result<DoubledSurface, BuildError> {
    build_double_with(mesh, k, epsilon, DoublingOptions::default())
}

pub fn build_double_with(
    mesh: &SurfaceMesh,
    k: u32,
    epsilon: Option<f64>,
    opts: DoublingOptions,
) -> Result<DoubledSurface, BuildError> {
    let frames = build_boundary_frames(mesh)?;
    let curve = build_teardrop(k, opts.samples_per_unit)?;
    let threshold = frames
        .iter()
        .map(|f| regularity_threshold(f, &curve))
        .fold(f64::INFINITY, f64::min);
    let eps = epsilon.unwrap_or_else(|| (threshold / 2.0).min(0.5 / k as f64));
    check_epsilon(eps, threshold)?;

    let nv = mesh.vertex_count();
    let mut verts: Vec<Point> = mesh.vertices().to_vec();
    verts.extend_from_slice(mesh.vertices());
    let mut tris: Vec<[usize; 3]> = mesh.triangles().to_vec();
    let mut provenance = vec![Piece::Copy1; tris.len()];
    for t in mesh.triangles() {
        tris.push([t[0] + nv, t[2] + nv, t[1] + nv]);
        provenance.push(Piece::Copy2);
    }
    for f in &frames {
        let start = f.vertex_indices.clone();
        let end: Vec<usize> = start.iter().map(|v| v + nv).collect();
        let (inner, tube) = tube_cells(f, &curve, eps, &start, &end, verts.len())?;
        verts.extend(inner);
        provenance.extend(std::iter::repeat(Piece::Tube(f.loop_index)).take(tube.len()));
        tris.extend(tube);
    }
    let sigma = SurfaceMesh::new(mesh.dimension(), verts, tris)?;
    if !sigma.is_closed() || !sigma.report().connected {
        return Err(MeshError::NotClosed.into());
    }
    Ok(DoubledSurface {
        sigma,
        epsilon: eps,
        k,
        provenance,
        threshold,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub k: u32,
    pub epsilon: f64,
    pub curvature: f64,
    pub diameter: f64,
    pub target_curvature: f64,
    pub target_diameter: f64,
}

impl ConvergenceRow {
    pub fn curvature_error(&self) -> f64 {
        (self.curvature - self.target_curvature).abs() / self.target_curvature.abs().max(f64::MIN_POSITIVE)
    }

    pub fn diameter_error(&self) -> f64 {
        (self.diameter - self.target_diameter).abs()
    }
}

/// 2∫_M|H| + (π/2)ℓ(∂M), the limit of ∫_Σ|H|.
pub fn target_curvature(mesh: &SurfaceMesh) -> f64 {
    2.0 * total_mean_curvature(mesh) + PI / 2.0 * mesh.boundary_length()
}

/// One row per k; rows are built concurrently and returned in input order.
pub fn convergence_table(mesh: &SurfaceMesh, k_list: &[u32]) -> Result<Vec<ConvergenceRow>, BuildError> {
    let target_c = target_curvature(mesh);
    let target_d = mesh.extrinsic_diameter();
    k_list
        .par_iter()
        .map(|&k| {
            let d = build_double(mesh, k, None)?;
            Ok(ConvergenceRow {
                k,
                epsilon: d.epsilon,
                curvature: total_mean_curvature(&d.sigma),
                diameter: d.sigma.extrinsic_diameter(),
                target_curvature: target_c,
                target_diameter: target_d,
            })
        })
        .collect()
}

pub fn table_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(
        "k,epsilon,curvature,diameter,target_curvature,target_diameter,curvature_rel_error,diameter_abs_error\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.k,
            sig(r.epsilon),
            sig(r.curvature),
            sig(r.diameter),
            sig(r.target_curvature),
            sig(r.target_diameter),
            sig(r.curvature_error()),
            sig(r.diameter_error())
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{flat_disk, flat_disk_r4, hemisphere};

    fn twisted_disk() -> SurfaceMesh {
        // Graph of (xy, x² − y²)/2 over the unit disk, in R⁴.
        let d = flat_disk_r4(1.0, 6);
        d.map_vertices(|p| Point::new(p.x, p.y, 0.5 * p.x * p.y, 0.25 * (p.x * p.x - p.y * p.y)))
            .unwrap()
    }

    #[test]
    fn planar_disk_frame() {
        let m = flat_disk(1.0, 8);
        let f = &build_boundary_frames(&m).unwrap()[0];
        for e in &f.e3 {
            assert!((e.z.abs() - 1.0).abs() < 1e-8 && e.x.abs() < 1e-8 && e.y.abs() < 1e-8);
        }
        assert!(f.orthonormality_error() <= 1e-8);
        assert!(f.min_outwardness() >= 0.0);
    }

    #[test]
    fn flat_disk_in_r4_has_no_holonomy() {
        let m = flat_disk_r4(1.0, 6);
        let f = &build_boundary_frames(&m).unwrap()[0];
        assert!(f.holonomy.abs() <= 1e-6);
        assert!(f.periodicity_error <= 1e-6);
        assert!(f.orthonormality_error() <= 1e-8);
    }

    #[test]
    fn twisted_disk_frame_closes() {
        let m = twisted_disk();
        let f = &build_boundary_frames(&m).unwrap()[0];
        assert!(f.orthonormality_error() <= 1e-8);
        assert!(f.periodicity_error <= 1e-6);
        assert!(f.min_outwardness() >= 0.0);
        assert!(f.reseeded.is_empty());
    }

    #[test]
    fn cross4_is_orthogonal() {
        let a = Point::new(1.0, 0.0, 0.0, 0.0);
        let b = Point::new(0.0, 1.0, 0.0, 0.0);
        let c = Point::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(cross4(&a, &b, &c), Point::new(0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn disk_threshold_is_quarter() {
        let m = flat_disk(1.0, 8);
        let f = &build_boundary_frames(&m).unwrap()[0];
        let c = build_teardrop(10, 100).unwrap();
        assert!((regularity_threshold(f, &c) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn straight_frame_hits_cap() {
        // A synthetic frame along a straight segment closed far away: zero rates.
        let n = 10;
        let c: Vec<Point> = (0..n).map(|j| Point::new(j as f64, 0.0, 0.0, 0.0)).collect();
        let f = BoundaryFrame {
            dimension: 3,
            loop_index: 0,
            vertex_indices: (0..n).collect(),
            sigma: (0..n).map(|j| j as f64).collect(),
            length: n as f64,
            c,
            e1: vec![Point::new(1.0, 0.0, 0.0, 0.0); n],
            e2: vec![Point::new(0.0, 1.0, 0.0, 0.0); n],
            e3: vec![Point::new(0.0, 0.0, 1.0, 0.0); n],
            holonomy: 0.0,
            periodicity_error: 0.0,
            reseeded: vec![],
            inner_reference: vec![Point::zeros(); n],
        };
        let curve = build_teardrop(5, 100).unwrap();
        assert_eq!(regularity_threshold(&f, &curve), EPSILON_CAP);
    }

    #[test]
    fn tube_ends_match_boundary() {
        let m = flat_disk(1.0, 8);
        let f = &build_boundary_frames(&m).unwrap()[0];
        let curve = build_teardrop(50, 100).unwrap();
        let tube = build_tube(f, &curve, 0.01).unwrap();
        let n = f.len();
        for j in 0..n {
            assert!((tube.vertices()[j] - f.c[j]).norm() <= 1e-9);
            assert!((tube.vertices()[n + j] - f.c[j]).norm() <= 1e-9);
        }
        assert_eq!(tube.boundary_loops().len(), 2);
        assert_eq!(tube.euler_characteristic(), 0);
        // Every tube vertex lies within 2ε of the boundary.
        for v in tube.vertices() {
            let d = f.c.iter().map(|c| (v - c).norm()).fold(f64::INFINITY, f64::min);
            assert!(d <= 0.02);
        }
    }

    #[test]
    fn tube_at_half_threshold_validates() {
        for m in [flat_disk(1.0, 6), hemisphere(6), twisted_disk()] {
            let f = &build_boundary_frames(&m).unwrap()[0];
            let curve = build_teardrop(4, 100).unwrap();
            let eps = regularity_threshold(f, &curve) / 2.0;
            assert!(build_tube(f, &curve, eps).is_ok());
        }
    }

    #[test]
    fn tube_rejects_large_epsilon() {
        let m = flat_disk(1.0, 6);
        let f = &build_boundary_frames(&m).unwrap()[0];
        let curve = build_teardrop(4, 100).unwrap();
        assert!(matches!(build_tube(f, &curve, 0.3), Err(BuildError::EpsilonTooLarge { .. })));
    }

    #[test]
    fn double_is_closed_with_doubled_euler_characteristic() {
        for m in [flat_disk(1.0, 6), hemisphere(6), twisted_disk()] {
            let d = build_double(&m, 5, None).unwrap();
            let r = d.sigma.report();
            assert!(r.closed && r.connected);
            assert_eq!(d.sigma.euler_characteristic(), 2 * m.euler_characteristic());
            assert!(d.epsilon <= 0.1);
            assert_eq!(d.provenance.len(), d.sigma.triangles().len());
        }
    }

    #[test]
    fn double_stays_near_m() {
        let m = flat_disk(1.0, 8);
        let d = build_double(&m, 10, None).unwrap();
        for v in d.sigma.vertices() {
            let near = m.vertices().iter().map(|w| (v - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(near <= 2.0 * d.epsilon);
        }
        assert!((d.sigma.extrinsic_diameter() - 2.0).abs() <= 4.0 * d.epsilon);
    }

    #[test]
    fn provenance_ranges() {
        let m = flat_disk(1.0, 3);
        let d = build_double(&m, 3, None).unwrap();
        let text = d.provenance_text();
        assert_eq!(text.lines().count(), 4);
        assert!(text.contains("tube-0"));
    }
}
