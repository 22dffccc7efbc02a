//! Oriented triangle meshes in R³ or R⁴.
//!
//! Vertices are stored as 4-vectors; a 3D mesh keeps the last coordinate
//! at zero, so every metric quantity is computed the same way in both
//! dimensions.

mod geodesic;
pub mod io;

use std::collections::HashMap;

use nalgebra::Vector4;
use serde::Serialize;

use crate::diameter;
use crate::error::MeshError;

pub use geodesic::{
    ball_integral, fast_marching_distances, geodesic_distances, intrinsic_ball_volume,
    intrinsic_diameter, BallField,
};

pub type Point = Vector4<f64>;

/// Triangles with area at or below this are rejected.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Lift a 3D coordinate triple into the common storage type.
pub fn p3(x: f64, y: f64, z: f64) -> Point {
    Point::new(x, y, z, 0.0)
}

/// One closed boundary component, ordered along the induced orientation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryLoop {
    pub vertex_indices: Vec<usize>,
    pub length: f64,
}

/// Summary of a successful validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub dimension: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub closed: bool,
    pub components: usize,
    pub connected: bool,
    pub boundary_loop_count: usize,
    pub euler_characteristic: i64,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    dimension: usize,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_loops: Vec<BoundaryLoop>,
    report: ValidationReport,
}

pub(crate) fn triangle_area_of(a: &Point, b: &Point, c: &Point) -> f64 {
    let u = b - a;
    let v = c - a;
    let uu = u.norm_squared();
    let vv = v.norm_squared();
    let uv = u.dot(&v);
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Check manifoldness, orientation, degeneracy and boundary structure.
pub fn validate(
    dimension: usize,
    vertices: &[Point],
    triangles: &[[usize; 3]],
) -> Result<(ValidationReport, Vec<BoundaryLoop>), MeshError> {
    if dimension != 3 && dimension != 4 {
        return Err(MeshError::BadDimension(dimension));
    }
    if triangles.is_empty() {
        return Err(MeshError::Empty);
    }
    if dimension == 3 {
        if let Some(i) = vertices.iter().position(|p| p[3] != 0.0) {
            return Err(MeshError::BadVertex {
                vertex: i,
                found: 4,
                expected: 3,
            });
        }
    }
    // Directed edge -> owning triangle count, keyed on the undirected pair.
    let mut edges: HashMap<(usize, usize), (u32, u32)> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for &v in tri {
            if v >= vertices.len() {
                return Err(MeshError::IndexOutOfRange {
                    triangle: t,
                    vertex: v,
                });
            }
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(MeshError::RepeatedIndex(t));
        }
        let area = triangle_area_of(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
        if !(area > DEGENERATE_AREA) {
            return Err(MeshError::DegenerateTriangle { index: t, area });
        }
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let entry = edges.entry((a.min(b), a.max(b))).or_insert((0, 0));
            if a < b {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
    }

    let mut boundary_next: HashMap<usize, usize> = HashMap::new();
    let mut sorted_edges: Vec<_> = edges.iter().collect();
    sorted_edges.sort_by_key(|(k, _)| **k);
    for (&(a, b), &(fwd, bwd)) in sorted_edges {
        if fwd + bwd > 2 {
            return Err(MeshError::NonManifoldEdge(a, b));
        }
        if fwd > 1 || bwd > 1 {
            return Err(MeshError::InconsistentOrientation(a, b));
        }
        if fwd + bwd == 1 {
            let (from, to) = if fwd == 1 { (a, b) } else { (b, a) };
            if boundary_next.insert(from, to).is_some() {
                return Err(MeshError::NonSimpleBoundary(from));
            }
        }
    }

    let mut loops = Vec::new();
    let mut starts: Vec<usize> = boundary_next.keys().copied().collect();
    starts.sort_unstable();
    let mut seen = vec![false; vertices.len()];
    for start in starts {
        if seen[start] {
            continue;
        }
        let mut idx = Vec::new();
        let mut v = start;
        loop {
            if seen[v] {
                return Err(MeshError::NonSimpleBoundary(v));
            }
            seen[v] = true;
            idx.push(v);
            v = *boundary_next
                .get(&v)
                .ok_or(MeshError::NonSimpleBoundary(v))?;
            if v == start {
                break;
            }
        }
        let length = loop_length(vertices, &idx);
        loops.push(BoundaryLoop {
            vertex_indices: idx,
            length,
        });
    }

    let mut uf = UnionFind::new(vertices.len());
    for tri in triangles {
        uf.union(tri[0], tri[1]);
        uf.union(tri[1], tri[2]);
    }
    let mut roots: Vec<usize> = (0..vertices.len()).map(|v| uf.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len();

    let euler = vertices.len() as i64 - edges.len() as i64 + triangles.len() as i64;
    let report = ValidationReport {
        dimension,
        vertex_count: vertices.len(),
        edge_count: edges.len(),
        triangle_count: triangles.len(),
        closed: loops.is_empty(),
        components,
        connected: components == 1,
        boundary_loop_count: loops.len(),
        euler_characteristic: euler,
    };
    Ok((report, loops))
}

fn loop_length(vertices: &[Point], idx: &[usize]) -> f64 {
    let n = idx.len();
    (0..n)
        .map(|i| (vertices[idx[(i + 1) % n]] - vertices[idx[i]]).norm())
        .sum()
}

impl SurfaceMesh {
    /// Build and validate a mesh.
    pub fn new(
        dimension: usize,
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        let (report, boundary_loops) = validate(dimension, &vertices, &triangles)?;
        Ok(Self {
            dimension,
            vertices,
            triangles,
            boundary_loops,
            report,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_loops(&self) -> &[BoundaryLoop] {
        &self.boundary_loops
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_closed(&self) -> bool {
        self.report.closed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.report.euler_characteristic
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        triangle_area_of(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// ℓ(∂M): total length of all boundary loops; zero for closed meshes.
    pub fn boundary_length(&self) -> f64 {
        self.boundary_loops.iter().map(|l| l.length).fold(0.0, |a, b| a + b)
    }

    /// d(M) over the vertex set. For piecewise-linear surfaces the maximum
    /// is attained at vertices, so this is exact.
    pub fn extrinsic_diameter(&self) -> f64 {
        diameter::diameter(&self.vertices)
    }

    /// Per-vertex flag: true on boundary loops.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for l in &self.boundary_loops {
            for &v in &l.vertex_indices {
                mask[v] = true;
            }
        }
        mask
    }

    /// Sorted, deduplicated one-ring neighbour lists.
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Triangles incident to each vertex, in index order.
    pub fn vertex_triangles(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                inc[v].push(t);
            }
        }
        inc
    }

    /// Apply `f` to every vertex and revalidate.
    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Result<Self, MeshError> {
        Self::new(
            self.dimension,
            self.vertices.iter().map(f).collect(),
            self.triangles.clone(),
        )
    }

    /// Same surface with every triangle's winding reversed.
    pub fn reversed(&self) -> Self {
        let triangles: Vec<[usize; 3]> = self.triangles.iter().map(|t| [t[0], t[2], t[1]]).collect();
        let boundary_loops = self
            .boundary_loops
            .iter()
            .map(|l| {
                let mut idx = l.vertex_indices.clone();
                idx.reverse();
                BoundaryLoop {
                    vertex_indices: idx,
                    length: l.length,
                }
            })
            .collect();
        Self {
            dimension: self.dimension,
            vertices: self.vertices.clone(),
            triangles,
            boundary_loops,
            report: self.report.clone(),
        }
    }
}
