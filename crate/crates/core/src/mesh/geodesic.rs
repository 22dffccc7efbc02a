//! Intrinsic distances, balls and ball integrals.
//!
//! [`geodesic_distances`] is plain Dijkstra on the edge graph and carries
//! the usual upward bias (up to 2/√3 along lattice medians). Ball measures
//! instead use [`fast_marching_distances`], a Dijkstra-ordered sweep with
//! unfolded point-source triangle updates that is exact on flat convex
//! patches, and evaluate each triangle's share of a ball against a fitted
//! local point source.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::Vector2;
use rayon::prelude::*;

use super::{Point, SurfaceMesh};
use crate::error::MeshError;

#[derive(Copy, Clone, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance, ties broken by vertex index.
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn adjacency(mesh: &SurfaceMesh) -> Vec<Vec<(usize, f64)>> {
    let v = mesh.vertices();
    mesh.vertex_neighbors()
        .into_iter()
        .enumerate()
        .map(|(i, list)| list.into_iter().map(|j| (j, (v[i] - v[j]).norm())).collect())
        .collect()
}

fn dijkstra_with(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(w, len) in &adj[u] {
            let nd = d + len;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Entry(nd, w));
            }
        }
    }
    dist
}

/// Edge-graph shortest-path distances from `source`. Unreachable vertices
/// are `f64::INFINITY`.
pub fn geodesic_distances(mesh: &SurfaceMesh, source: usize) -> Result<Vec<f64>, MeshError> {
    if source >= mesh.vertex_count() {
        return Err(MeshError::VertexOutOfRange(source));
    }
    Ok(dijkstra_with(&adjacency(mesh), source))
}

/// Express triangle (a, b, c) in a 2D frame with a at the origin and b on
/// the positive x axis.
fn local_frame(a: &Point, b: &Point, c: &Point) -> (f64, Vector2<f64>) {
    let e = b - a;
    let len = e.norm();
    let ex = e / len;
    let w = c - a;
    let x = w.dot(&ex);
    let y = (w - ex * x).norm();
    (len, Vector2::new(x, y))
}

/// Distance at `c` from a virtual point source consistent with known
/// distances `ta` at `a` and `tb` at `b`, if its ray crosses edge ab.
fn point_source_update(a: &Point, b: &Point, c: &Point, ta: f64, tb: f64) -> Option<f64> {
    let (len, v) = local_frame(a, b, c);
    let sx = (ta * ta - tb * tb + len * len) / (2.0 * len);
    let h2 = ta * ta - sx * sx;
    if h2 < 0.0 {
        return None;
    }
    let s = Vector2::new(sx, -h2.sqrt());
    let denom = v.y - s.y;
    if denom <= 0.0 {
        return None;
    }
    let t = -s.y / denom;
    let cross_x = s.x + t * (v.x - s.x);
    if cross_x < -1e-12 * len || cross_x > len * (1.0 + 1e-12) {
        return None;
    }
    Some((v - s).norm())
}

/// Fast-marching style distances: Dijkstra order, triangle point-source
/// updates with edge updates as fallback.
pub fn fast_marching_distances(mesh: &SurfaceMesh, source: usize) -> Result<Vec<f64>, MeshError> {
    let n = mesh.vertex_count();
    if source >= n {
        return Err(MeshError::VertexOutOfRange(source));
    }
    let verts = mesh.vertices();
    let tris = mesh.triangles();
    let adj = adjacency(mesh);
    let inc = mesh.vertex_triangles();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry(0.0, source));
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] || d > dist[u] {
            continue;
        }
        done[u] = true;
        for &(w, len) in &adj[u] {
            if !done[w] && d + len < dist[w] {
                dist[w] = d + len;
                heap.push(Entry(dist[w], w));
            }
        }
        for &t in &inc[u] {
            let tri = tris[t];
            let k = tri.iter().position(|&x| x == u).expect("incident");
            let (p, q) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            for (known, target) in [(p, q), (q, p)] {
                if done[known] && !done[target] {
                    if let Some(nd) = point_source_update(
                        &verts[u],
                        &verts[known],
                        &verts[target],
                        dist[u],
                        dist[known],
                    ) {
                        if nd < dist[target] {
                            dist[target] = nd;
                            heap.push(Entry(nd, target));
                        }
                    }
                }
            }
        }
    }
    Ok(dist)
}

/// Intrinsic diameter estimate: max Dijkstra eccentricity over all
/// vertices when there are at most 5000, else over an evenly strided
/// sample of 5000 sources.
pub fn intrinsic_diameter(mesh: &SurfaceMesh) -> Result<f64, MeshError> {
    const EXACT_LIMIT: usize = 5000;
    let n = mesh.vertex_count();
    let adj = adjacency(mesh);
    let sources: Vec<usize> = if n <= EXACT_LIMIT {
        (0..n).collect()
    } else {
        (0..EXACT_LIMIT).map(|i| i * n / EXACT_LIMIT).collect()
    };
    let ecc: Vec<f64> = sources
        .par_iter()
        .map(|&s| dijkstra_with(&adj, s).into_iter().fold(0.0, f64::max))
        .collect();
    let d = ecc.into_iter().fold(0.0, f64::max);
    if d.is_infinite() {
        let comps = mesh.report().components;
        return Err(MeshError::Disconnected(comps));
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Balls

#[derive(Debug, Clone)]
enum TriModel {
    /// d(x) = |x - source| + offset in the triangle's own 2D frame.
    PointSource {
        corners: [Vector2<f64>; 3],
        source: Vector2<f64>,
        offset: f64,
    },
    /// Linear interpolation of the vertex distances.
    Linear,
}

/// A distance field from one vertex, prepared for ball queries.
#[derive(Debug, Clone)]
pub struct BallField {
    dist: Vec<f64>,
    tri_dist: Vec<[f64; 3]>,
    tri_area: Vec<f64>,
    models: Vec<TriModel>,
}

fn fit_point_source(c: &[Vector2<f64>; 3], d: [f64; 3]) -> Option<(Vector2<f64>, f64)> {
    // Subtracting |S - P_i|² = d_i² pairwise gives a 2x2 linear system.
    let (p1, p2) = (c[1], c[2]);
    let rhs1 = p1.norm_squared() - d[1] * d[1] + d[0] * d[0];
    let rhs2 = p2.norm_squared() - d[2] * d[2] + d[0] * d[0];
    if p1.x.abs() < 1e-300 || p2.y.abs() < 1e-300 {
        return None;
    }
    let sx = rhs1 / (2.0 * p1.x);
    let sy = (rhs2 - 2.0 * p2.x * sx) / (2.0 * p2.y);
    let s = Vector2::new(sx, sy);
    let scale = p1.norm().max(p2.norm());
    if !(s.norm() < 1e6 * scale) {
        return None;
    }
    let offset = (0..3).map(|i| d[i] - (c[i] - s).norm()).sum::<f64>() / 3.0;
    let worst = (0..3)
        .map(|i| (d[i] - (c[i] - s).norm() - offset).abs())
        .fold(0.0, f64::max);
    if worst > 0.1 * scale {
        return None;
    }
    Some((s, offset))
}

/// Signed area of disk(0, r) ∩ triangle(0, a, b).
fn sector_triangle_area(a: Vector2<f64>, b: Vector2<f64>, r: f64) -> f64 {
    let d = b - a;
    let qa = d.norm_squared();
    let qb = 2.0 * a.dot(&d);
    let qc = a.norm_squared() - r * r;
    let mut cuts = vec![0.0];
    if qa > 0.0 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let sq = disc.sqrt();
            for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if t > 0.0 && t < 1.0 {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.push(1.0);
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let p = a + d * w[0];
        let q = a + d * w[1];
        let mid = a + d * (0.5 * (w[0] + w[1]));
        let cross = p.x * q.y - p.y * q.x;
        if mid.norm_squared() <= r * r {
            area += 0.5 * cross;
        } else {
            let ang = cross.atan2(p.dot(&q));
            area += 0.5 * r * r * ang;
        }
    }
    area
}

fn disk_triangle_area(c: &[Vector2<f64>; 3], center: Vector2<f64>, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..3 {
        s += sector_triangle_area(c[i] - center, c[(i + 1) % 3] - center, r);
    }
    s.abs()
}

fn linear_fraction(d: [f64; 3], r: f64) -> f64 {
    let mut s = d;
    s.sort_by(f64::total_cmp);
    let [a, b, c] = s;
    if r <= a {
        0.0
    } else if r >= c {
        1.0
    } else if r <= b {
        (r - a) * (r - a) / ((b - a) * (c - a))
    } else {
        1.0 - (c - r) * (c - r) / ((c - a) * (c - b))
    }
}

impl BallField {
    /// Prepare ball queries around `source` using fast-marching distances.
    pub fn new(mesh: &SurfaceMesh, source: usize) -> Result<Self, MeshError> {
        let dist = fast_marching_distances(mesh, source)?;
        Ok(Self::from_distances(mesh, dist))
    }

    pub fn from_distances(mesh: &SurfaceMesh, dist: Vec<f64>) -> Self {
        let verts = mesh.vertices();
        let mut tri_dist = Vec::with_capacity(mesh.triangles().len());
        let mut tri_area = Vec::with_capacity(mesh.triangles().len());
        let mut models = Vec::with_capacity(mesh.triangles().len());
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let d = [dist[tri[0]], dist[tri[1]], dist[tri[2]]];
            tri_dist.push(d);
            tri_area.push(mesh.triangle_area(t));
            let (len, c2) = local_frame(&verts[tri[0]], &verts[tri[1]], &verts[tri[2]]);
            let corners = [Vector2::zeros(), Vector2::new(len, 0.0), c2];
            let model = if d.iter().all(|x| x.is_finite()) {
                match fit_point_source(&corners, d) {
                    Some((source, offset)) => TriModel::PointSource {
                        corners,
                        source,
                        offset,
                    },
                    None => TriModel::Linear,
                }
            } else {
                TriModel::Linear
            };
            models.push(model);
        }
        Self {
            dist,
            tri_dist,
            tri_area,
            models,
        }
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    /// Fraction of triangle `t` inside the ball of radius `r`.
    pub fn triangle_fraction(&self, t: usize, r: f64) -> f64 {
        let d = self.tri_dist[t];
        let (lo, hi) = d
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        if r >= hi {
            return 1.0;
        }
        if !lo.is_finite() {
            return 0.0;
        }
        match &self.models[t] {
            TriModel::PointSource {
                corners,
                source,
                offset,
            } => {
                let full = 0.5
                    * ((corners[1].x * corners[2].y) - (corners[1].y * corners[2].x)).abs();
                (disk_triangle_area(corners, *source, r - offset) / full).clamp(0.0, 1.0)
            }
            TriModel::Linear => {
                if !hi.is_finite() {
                    return 0.0;
                }
                linear_fraction(d, r)
            }
        }
    }

    /// V(p, r): area of the intrinsic ball.
    pub fn volume(&self, r: f64) -> f64 {
        (0..self.tri_area.len())
            .map(|t| self.tri_area[t] * self.triangle_fraction(t, r))
            .sum()
    }

    /// ∫ over the ball of a density given per triangle corner, where
    /// `corner_weights[t][k]` is the mass of corner k carried by triangle t.
    pub fn integral(&self, r: f64, corner_weights: &[[f64; 3]]) -> f64 {
        (0..self.tri_area.len())
            .map(|t| {
                let w = corner_weights[t];
                let m = w[0] + w[1] + w[2];
                if m == 0.0 {
                    0.0
                } else {
                    m * self.triangle_fraction(t, r)
                }
            })
            .sum()
    }
}

/// V(p, r) on `mesh` around vertex `p`.
pub fn intrinsic_ball_volume(mesh: &SurfaceMesh, p: usize, r: f64) -> Result<f64, MeshError> {
    if !(r > 0.0) {
        return Err(MeshError::InvalidArgument(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    Ok(BallField::new(mesh, p)?.volume(r))
}

/// ∫_{B(p, r)} |H| using per-corner curvature masses.
pub fn ball_integral(
    mesh: &SurfaceMesh,
    p: usize,
    r: f64,
    corner_weights: &[[f64; 3]],
) -> Result<f64, MeshError> {
    if !(r > 0.0) {
        return Err(MeshError::InvalidArgument(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    Ok(BallField::new(mesh, p)?.integral(r, corner_weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::mesh::p3;
    use std::f64::consts::PI;

    #[test]
    fn source_distance_is_zero() {
        let m = generators::icosphere(2);
        assert_eq!(geodesic_distances(&m, 5).unwrap()[5], 0.0);
    }

    #[test]
    fn single_edge_distance() {
        let m = SurfaceMesh::new(
            3,
            vec![p3(0.0, 0.0, 0.0), p3(1.5, 0.0, 0.0), p3(0.0, 2.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(geodesic_distances(&m, 0).unwrap()[1], 1.5);
        assert_eq!(fast_marching_distances(&m, 0).unwrap()[1], 1.5);
    }

    #[test]
    fn disconnected_vertices_are_infinite() {
        let m = SurfaceMesh::new(
            3,
            vec![
                p3(0.0, 0.0, 0.0),
                p3(1.0, 0.0, 0.0),
                p3(0.0, 1.0, 0.0),
                p3(5.0, 0.0, 0.0),
                p3(6.0, 0.0, 0.0),
                p3(5.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [3, 4, 5]],
        )
        .unwrap();
        let d = geodesic_distances(&m, 0).unwrap();
        assert!(d[3].is_infinite() && d[4].is_infinite());
        assert!(matches!(intrinsic_diameter(&m), Err(MeshError::Disconnected(2))));
    }

    #[test]
    fn fast_marching_is_exact_on_flat_patch() {
        let m = generators::flat_square(1.0, 40);
        let c = generators::nearest_vertex(&m, &p3(0.0, 0.0, 0.0));
        let d = fast_marching_distances(&m, c).unwrap();
        let o = m.vertices()[c];
        let worst = m
            .vertices()
            .iter()
            .zip(&d)
            .map(|(v, &dv)| (dv - (v - o).norm()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "worst {worst}");
    }

    #[test]
    fn circle_triangle_area_limits() {
        let c = [Vector2::new(0.0, 0.0), Vector2::new(2.0, 0.0), Vector2::new(0.0, 2.0)];
        assert!((disk_triangle_area(&c, Vector2::new(0.0, 0.0), 1.0) - PI / 4.0).abs() < 1e-12);
        assert!((disk_triangle_area(&c, Vector2::new(0.5, 0.5), 10.0) - 2.0).abs() < 1e-12);
        assert!((disk_triangle_area(&c, Vector2::new(0.5, 0.5), 0.2) - PI * 0.04).abs() < 1e-12);
    }

    #[test]
    fn linear_fraction_is_monotone() {
        let d = [0.3, 0.9, 0.5];
        let mut last = 0.0;
        for i in 0..=100 {
            let f = linear_fraction(d, i as f64 / 100.0);
            assert!(f >= last - 1e-15);
            last = f;
        }
        assert_eq!(last, 1.0);
    }
}
