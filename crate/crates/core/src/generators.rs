//! Reference meshes, contours and spherical point sets.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::contour::{Contour, P3};
use crate::error::{ContourError, GenError};
use crate::mesh::{p3, Point, SurfaceMesh};
use crate::spatial::KdTree;

fn build(dim: usize, verts: Vec<Point>, tris: Vec<[usize; 3]>) -> SurfaceMesh {
    SurfaceMesh::new(dim, verts, tris).expect("generator produced an invalid mesh")
}

/// Triangulate the strip between two rows. `p` is the row on the left of
/// the traversal direction, `q` the other; parameters increase along both.
/// For closed rows the parameters must span one period and wrap.
fn zipper(p: &[usize], pp: &[f64], q: &[usize], qp: &[f64], closed: bool, tris: &mut Vec<[usize; 3]>) {
    let (np, nq) = (p.len(), q.len());
    let (ep, eq) = if closed { (np, nq) } else { (np - 1, nq - 1) };
    let par = |v: &[f64], n: usize, i: usize| if i < n { v[i] } else { v[i - n] + TAU };
    let (mut i, mut j) = (0, 0);
    while i < ep || j < eq {
        let adv_p = if i == ep {
            false
        } else if j == eq {
            true
        } else {
            par(pp, np, i + 1) <= par(qp, nq, j + 1)
        };
        if adv_p {
            tris.push([p[i % np], p[(i + 1) % np], q[j % nq]]);
            i += 1;
        } else {
            tris.push([p[i % np], q[(j + 1) % nq], q[j % nq]]);
            j += 1;
        }
    }
}

/// Surface of revolution about the z axis. `profile` lists (ρ, z) rings in
/// order; optional poles close the first and last ring. Ring sizes follow
/// `count(ρ)`.
fn revolve(
    profile: &[(f64, f64)],
    count: impl Fn(f64) -> usize,
    north: Option<f64>,
    south: Option<f64>,
) -> SurfaceMesh {
    let mut verts = Vec::new();
    let mut tris = Vec::new();
    let north_idx = north.map(|z| {
        verts.push(p3(0.0, 0.0, z));
        0
    });
    let mut rings: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    for (r, &(rho, z)) in profile.iter().enumerate() {
        let n = count(rho).max(3);
        let off = if r % 2 == 1 { PI / n as f64 } else { 0.0 };
        let mut idx = Vec::with_capacity(n);
        let mut par = Vec::with_capacity(n);
        for k in 0..n {
            let t = off + TAU * k as f64 / n as f64;
            idx.push(verts.len());
            par.push(t);
            verts.push(p3(rho * t.cos(), rho * t.sin(), z));
        }
        rings.push((idx, par));
    }
    if let Some(c) = north_idx {
        let (ring, _) = &rings[0];
        for k in 0..ring.len() {
            tris.push([c, ring[k], ring[(k + 1) % ring.len()]]);
        }
    }
    for w in rings.windows(2) {
        let (q, qp) = &w[0];
        let (p, pp) = &w[1];
        zipper(p, pp, q, qp, true, &mut tris);
    }
    if let Some(z) = south {
        let s = verts.len();
        verts.push(p3(0.0, 0.0, z));
        let (ring, _) = rings.last().unwrap();
        for k in 0..ring.len() {
            tris.push([ring[k], s, ring[(k + 1) % ring.len()]]);
        }
    }
    build(3, verts, tris)
}

fn ring_count(h: f64) -> impl Fn(f64) -> usize {
    move |rho| ((TAU * rho / h).round() as usize).max(6)
}

/// Flat disk of the given radius in the x-y plane, built from concentric rings.
pub fn flat_disk(radius: f64, rings: usize) -> SurfaceMesh {
    let h = radius / rings as f64;
    let profile: Vec<_> = (1..=rings).map(|r| (r as f64 * h, 0.0)).collect();
    revolve(&profile, ring_count(h), Some(0.0), None)
}

/// The same disk embedded in the x-y plane of R⁴.
pub fn flat_disk_r4(radius: f64, rings: usize) -> SurfaceMesh {
    let d = flat_disk(radius, rings);
    build(4, d.vertices().to_vec(), d.triangles().to_vec())
}

/// Upper unit hemisphere z ≥ 0, boundary on the equator.
pub fn hemisphere(rings: usize) -> SurfaceMesh {
    let h = PI / 2.0 / rings as f64;
    let profile: Vec<_> = (1..=rings)
        .map(|r| {
            let t = r as f64 * h;
            (t.sin(), t.cos())
        })
        .collect();
    revolve(&profile, ring_count(h), Some(1.0), None)
}

/// Closed capsule: cylinder of radius `r` and length `length` along z with
/// hemispherical caps; `around` vertices per cylinder ring.
pub fn capped_cylinder(r: f64, length: f64, around: usize) -> SurfaceMesh {
    let h = TAU * r / around as f64;
    let cap_rings = ((PI / 2.0 * r / h).round() as usize).max(2);
    let dt = PI / 2.0 / cap_rings as f64;
    let body = ((length / h).round() as usize).max(1);
    let top = length / 2.0;
    let mut profile = Vec::new();
    for i in 1..=cap_rings {
        let t = i as f64 * dt;
        profile.push((r * t.sin(), top + r * t.cos()));
    }
    for j in 1..body {
        profile.push((r, top - length * j as f64 / body as f64));
    }
    for i in (1..=cap_rings).rev() {
        let t = i as f64 * dt;
        profile.push((r * t.sin(), -top - r * t.cos()));
    }
    let count = move |rho: f64| {
        if (rho - r).abs() < 1e-12 {
            around
        } else {
            ((TAU * rho / h).round() as usize).max(6)
        }
    };
    revolve(&profile, count, Some(top + r), Some(-top - r))
}

/// Open cylinder (two boundary circles), `around` × (`along` + 1) vertices.
pub fn open_cylinder(r: f64, length: f64, around: usize, along: usize) -> SurfaceMesh {
    let profile: Vec<_> = (0..=along)
        .map(|j| (r, length / 2.0 - length * j as f64 / along as f64))
        .collect();
    revolve(&profile, |_| around, None, None)
}

/// Geodesic icosphere: icosahedron subdivided `depth` times, on the unit sphere.
pub fn icosphere(depth: usize) -> SurfaceMesh {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        (-1.0, g, 0.0),
        (1.0, g, 0.0),
        (-1.0, -g, 0.0),
        (1.0, -g, 0.0),
        (0.0, -1.0, g),
        (0.0, 1.0, g),
        (0.0, -1.0, -g),
        (0.0, 1.0, -g),
        (g, 0.0, -1.0),
        (g, 0.0, 1.0),
        (-g, 0.0, -1.0),
        (-g, 0.0, 1.0),
    ];
    let mut verts: Vec<Vector3<f64>> = base
        .iter()
        .map(|&(x, y, z)| Vector3::new(x, y, z).normalize())
        .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..depth {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    build(3, verts.iter().map(|v| p3(v.x, v.y, v.z)).collect(), tris)
}

/// Square [−half, half]² tiled by a near-equilateral lattice with `n`
/// cells per side.
pub fn flat_square(half: f64, n: usize) -> SurfaceMesh {
    let h = 2.0 * half / n as f64;
    let rows = ((2.0 * half / (h * 3f64.sqrt() / 2.0)).round() as usize).max(1);
    let mut verts = Vec::new();
    let mut row_idx: Vec<(Vec<usize>, Vec<f64>)> = Vec::new();
    for j in 0..=rows {
        let y = -half + 2.0 * half * j as f64 / rows as f64;
        let mut xs = Vec::new();
        if j % 2 == 0 {
            xs.extend((0..=n).map(|i| -half + i as f64 * h));
        } else {
            xs.push(-half);
            xs.extend((0..n).map(|i| -half + (i as f64 + 0.5) * h));
            xs.push(half);
        }
        let idx: Vec<usize> = xs
            .iter()
            .map(|&x| {
                verts.push(p3(x, y, 0.0));
                verts.len() - 1
            })
            .collect();
        row_idx.push((idx, xs));
    }
    let mut tris = Vec::new();
    for w in row_idx.windows(2) {
        zipper(&w[0].0, &w[0].1, &w[1].0, &w[1].1, false, &mut tris);
    }
    build(3, verts, tris)
}

/// Index of the vertex closest to `p` (lowest index on ties).
pub fn nearest_vertex(mesh: &SurfaceMesh, p: &Point) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in mesh.vertices().iter().enumerate() {
        let d = (v - p).norm_squared();
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// Regular `n`-gon inscribed in the circle with given centre, normal and radius.
pub fn circle(center: &P3, normal: &P3, radius: f64, n: usize) -> Vec<P3> {
    let (u, w) = orthonormal_pair(normal);
    (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            center + (u * t.cos() + w * t.sin()) * radius
        })
        .collect()
}

fn orthonormal_pair(normal: &P3) -> (P3, P3) {
    let nrm = normal.normalize();
    let helper = if nrm.x.abs() < 0.9 { P3::x() } else { P3::y() };
    let u = (helper - nrm * helper.dot(&nrm)).normalize();
    (u, nrm.cross(&u))
}

/// Two straight segments of length `a` joined by semicircles of radius `r`;
/// `cap_segments` chords per semicircle, straights sampled at similar spacing.
pub fn stadium(a: f64, r: f64, cap_segments: usize) -> Result<Contour, ContourError> {
    if a <= 0.0 || r <= 0.0 || cap_segments < 2 {
        return Err(ContourError::InvalidArgument("stadium needs a, r > 0".into()));
    }
    let step = PI * r / cap_segments as f64;
    let straight = ((a / step).ceil() as usize).max(1);
    let mut pts = Vec::new();
    for i in 0..straight {
        pts.push(P3::new(-a / 2.0 + a * i as f64 / straight as f64, -r, 0.0));
    }
    for i in 0..cap_segments {
        let t = -PI / 2.0 + PI * i as f64 / cap_segments as f64;
        pts.push(P3::new(a / 2.0 + r * t.cos(), r * t.sin(), 0.0));
    }
    for i in 0..straight {
        pts.push(P3::new(a / 2.0 - a * i as f64 / straight as f64, r, 0.0));
    }
    for i in 0..cap_segments {
        let t = PI / 2.0 + PI * i as f64 / cap_segments as f64;
        pts.push(P3::new(-a / 2.0 + r * t.cos(), r * t.sin(), 0.0));
    }
    Contour::new(vec![pts])
}

/// Two coaxial circles of the given radius in the planes z = ±half_gap.
pub fn coaxial_circles(radius: f64, half_gap: f64, segments: usize) -> Result<Contour, ContourError> {
    if radius <= 0.0 || half_gap <= 0.0 || segments < 3 {
        return Err(ContourError::InvalidArgument("coaxial circles need positive sizes".into()));
    }
    Contour::new(vec![
        circle(&P3::new(0.0, 0.0, half_gap), &P3::z(), radius, segments),
        circle(&P3::new(0.0, 0.0, -half_gap), &P3::z(), radius, segments),
    ])
}

/// Geodesic distance between two unit vectors.
pub fn sphere_distance(a: &P3, b: &P3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Finite point set on the unit sphere with its exact packing radius.
#[derive(Debug, Clone)]
pub struct SphericalPointSet {
    points: Vec<P3>,
    packing_radius: f64,
}

impl SphericalPointSet {
    pub fn new(points: Vec<P3>) -> Result<Self, ContourError> {
        if points.is_empty() {
            return Err(ContourError::Empty);
        }
        for p in &points {
            if (p.norm() - 1.0).abs() > 1e-12 {
                return Err(ContourError::InvalidArgument(format!("point {p:?} is not unit")));
            }
        }
        let packing_radius = if points.len() < 2 {
            PI
        } else {
            let tree = KdTree::new(points.clone());
            let min_chord2 = (0..points.len())
                .into_par_iter()
                .map(|i| tree.nearest(&points[i], Some(i)).unwrap().1)
                .collect::<Vec<_>>()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if min_chord2 == 0.0 {
                return Err(ContourError::InvalidArgument("repeated point".into()));
            }
            (min_chord2.sqrt() / 2.0).min(1.0).asin()
        };
        Ok(Self {
            points,
            packing_radius,
        })
    }

    pub fn points(&self) -> &[P3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Half the minimum pairwise geodesic distance.
    pub fn packing_radius(&self) -> f64 {
        self.packing_radius
    }
}

/// Geodesic circles of the given radius about every point of `x`.
pub fn sphere_circles(x: &SphericalPointSet, radius: f64, segments: usize) -> Result<Contour, ContourError> {
    if segments < 16 {
        return Err(ContourError::InvalidArgument("need at least 16 segments".into()));
    }
    if radius <= 0.0 || radius >= x.packing_radius() {
        return Err(ContourError::RadiusTooLarge {
            radius,
            packing: x.packing_radius(),
        });
    }
    let comps = x
        .points()
        .iter()
        .map(|c| circle(&(c * radius.cos()), c, radius.sin(), segments))
        .collect();
    Contour::new(comps)
}

/// Fibonacci spiral of `n` points on the unit sphere.
pub fn fibonacci_points(n: usize) -> Vec<P3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let t = golden * i as f64;
            P3::new(rho * t.cos(), rho * t.sin(), z).normalize()
        })
        .collect()
}

/// Largest geodesic distance from a Fibonacci sample of `resolution`
/// points to the nearest point of `x`. The true covering radius lies
/// between this value and this value plus the sample's own covering radius.
pub fn covering_radius_estimate(x: &SphericalPointSet, resolution: usize) -> f64 {
    let tree = KdTree::new(x.points().to_vec());
    let chords: Vec<f64> = fibonacci_points(resolution)
        .par_iter()
        .map(|s| tree.nearest(s, None).unwrap().1)
        .collect();
    let worst = chords.into_iter().fold(0.0, f64::max);
    2.0 * (worst.sqrt() / 2.0).min(1.0).asin()
}

/// Covering radius of the `resolution`-point Fibonacci sample itself,
/// estimated with a four times denser probe.
pub fn sample_covering_radius(resolution: usize) -> f64 {
    let s = SphericalPointSet::new(fibonacci_points(resolution)).expect("fibonacci points are distinct");
    covering_radius_estimate(&s, 4 * resolution)
}

/// An ε-net found by Fibonacci point-count search.
#[derive(Debug, Clone)]
pub struct NetResult {
    pub set: SphericalPointSet,
    pub covering_estimate: f64,
    pub resolution: usize,
}

pub const NET_CAP: usize = 1_000_000;

fn net_resolution(n: usize) -> usize {
    (16 * n).max(100_000)
}

/// Smallest Fibonacci spiral (by doubling then bisection on the count)
/// whose measured covering radius is at most `eps` and packing radius at
/// least `eps / 4`.
pub fn fibonacci_net(eps: f64) -> Result<NetResult, GenError> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(GenError::InvalidParam(format!("net epsilon {eps} outside (0, 0.5]")));
    }
    let check = |n: usize| -> Option<NetResult> {
        let set = SphericalPointSet::new(fibonacci_points(n)).ok()?;
        let res = net_resolution(n);
        let cov = covering_radius_estimate(&set, res);
        (cov <= eps && set.packing_radius() >= eps / 4.0).then_some(NetResult {
            set,
            covering_estimate: cov,
            resolution: res,
        })
    };
    let mut lo = ((2.0 / (eps * eps)).floor() as usize).max(2);
    let mut hi = lo;
    let mut found = loop {
        if hi > NET_CAP {
            return Err(GenError::NetInfeasible(eps));
        }
        if let Some(r) = check(hi) {
            break r;
        }
        lo = hi;
        hi *= 2;
    };
    if lo == hi {
        return Ok(found);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        match check(mid) {
            Some(r) => {
                hi = mid;
                found = r;
            }
            None => lo = mid,
        }
    }
    Ok(found)
}

/// A generated shape.
#[derive(Debug, Clone)]
pub enum Shape {
    Mesh(SurfaceMesh),
    Contour(Contour),
}

pub const SHAPE_NAMES: &[&str] = &[
    "disk",
    "disk-r4",
    "hemisphere",
    "icosphere",
    "capped-cylinder",
    "open-cylinder",
    "square",
    "stadium",
    "coaxial-circles",
    "antipodal-circles",
    "net-circles",
];

/// Named generators with `key → value` parameters; missing keys take defaults.
pub fn shape_library(name: &str, params: &BTreeMap<String, f64>) -> Result<Shape, GenError> {
    let get = |k: &str, default: f64| -> Result<f64, GenError> {
        let v = params.get(k).copied().unwrap_or(default);
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(GenError::InvalidParam(format!("{k} = {v}")))
        }
    };
    let count = |k: &str, default: f64, min: usize| -> Result<usize, GenError> {
        let v = get(k, default)?;
        if v.fract() != 0.0 || (v as usize) < min {
            return Err(GenError::InvalidParam(format!("{k} = {v} (integer >= {min})")));
        }
        Ok(v as usize)
    };
    Ok(match name {
        "disk" => Shape::Mesh(flat_disk(get("radius", 1.0)?, count("rings", 16.0, 1)?)),
        "disk-r4" => Shape::Mesh(flat_disk_r4(get("radius", 1.0)?, count("rings", 16.0, 1)?)),
        "hemisphere" => Shape::Mesh(hemisphere(count("rings", 16.0, 2)?)),
        "icosphere" => {
            let depth = params.get("subdivisions").copied().unwrap_or(4.0);
            if depth < 0.0 || depth > 8.0 || depth.fract() != 0.0 {
                return Err(GenError::InvalidParam(format!("subdivisions = {depth}")));
            }
            Shape::Mesh(icosphere(depth as usize))
        }
        "capped-cylinder" => Shape::Mesh(capped_cylinder(
            get("r", 1.0)?,
            get("length", 20.0)?,
            count("around", 64.0, 6)?,
        )),
        "open-cylinder" => Shape::Mesh(open_cylinder(
            get("r", 1.0)?,
            get("length", 4.0)?,
            count("around", 64.0, 3)?,
            count("along", 32.0, 1)?,
        )),
        "square" => Shape::Mesh(flat_square(get("half", 0.5)?, count("cells", 20.0, 1)?)),
        "stadium" => Shape::Contour(stadium(get("a", 10.0)?, get("r", 1.0)?, count("segments", 128.0, 2)?)?),
        "coaxial-circles" => Shape::Contour(coaxial_circles(
            get("radius", 1.0)?,
            get("half-gap", 0.5)?,
            count("segments", 128.0, 3)?,
        )?),
        "antipodal-circles" => {
            let x = SphericalPointSet::new(vec![P3::z(), -P3::z()])?;
            Shape::Contour(sphere_circles(&x, get("epsilon", 0.01)?, count("segments", 128.0, 16)?)?)
        }
        "net-circles" => {
            let eps = get("epsilon", 0.1)?;
            let net = fibonacci_net(eps)?;
            let radius = params.get("radius").copied().unwrap_or(eps.powf(2.5));
            Shape::Contour(sphere_circles(&net.set, radius, count("segments", 32.0, 16)?)?)
        }
        other => return Err(GenError::UnknownShape(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{contour_diameter, contour_length};
    use crate::curvature::total_mean_curvature;

    #[test]
    fn every_mesh_generator_validates() {
        for m in [
            flat_disk(1.0, 5),
            flat_disk_r4(1.0, 3),
            hemisphere(6),
            capped_cylinder(1.0, 3.0, 16),
            open_cylinder(1.0, 2.0, 12, 4),
            icosphere(2),
            flat_square(0.5, 6),
        ] {
            assert!(m.report().connected);
        }
    }

    #[test]
    fn topology_counts() {
        assert_eq!(flat_disk(1.0, 5).euler_characteristic(), 1);
        assert_eq!(hemisphere(6).euler_characteristic(), 1);
        assert_eq!(capped_cylinder(1.0, 3.0, 16).euler_characteristic(), 2);
        assert_eq!(open_cylinder(1.0, 2.0, 12, 4).euler_characteristic(), 0);
        assert_eq!(icosphere(3).vertex_count(), 642);
        assert_eq!(flat_square(0.5, 6).euler_characteristic(), 1);
    }

    #[test]
    fn disk_boundary_is_regular_polygon() {
        let m = flat_disk(1.0, 10);
        let n = m.boundary_loops()[0].vertex_indices.len() as f64;
        let exact = 2.0 * n * (PI / n).sin();
        assert!((m.boundary_length() - exact).abs() < 1e-12);
    }

    #[test]
    fn hemisphere_boundary_on_equator() {
        let m = hemisphere(8);
        for &v in &m.boundary_loops()[0].vertex_indices {
            assert!(m.vertices()[v].z.abs() < 1e-15);
        }
    }

    #[test]
    fn stadium_ratio_decreases_toward_two() {
        let mut last = f64::INFINITY;
        for a in [10.0, 40.0, 160.0] {
            let c = stadium(a, 1.0, 64).unwrap();
            let ratio = contour_length(&c) / contour_diameter(&c);
            assert!(ratio > 2.0 && ratio < last);
            last = ratio;
        }
        let c = stadium(10.0, 1.0, 128).unwrap();
        let ratio = contour_length(&c) / contour_diameter(&c);
        assert!((ratio - (20.0 + TAU) / 12.0).abs() < 1e-3);
    }

    #[test]
    fn capped_cylinder_curvature_ratio() {
        let m = capped_cylinder(1.0, 20.0, 64);
        let ratio = total_mean_curvature(&m) / m.extrinsic_diameter();
        assert!((ratio / (PI * 24.0 / 22.0) - 1.0).abs() < 0.03, "{ratio}");
    }

    #[test]
    fn icosphere_curvature_ratio() {
        let m = icosphere(4);
        let ratio = total_mean_curvature(&m) / m.extrinsic_diameter();
        assert!((ratio / TAU - 1.0).abs() < 0.02, "{ratio}");
    }

    #[test]
    fn polar_circles_have_cap_radius() {
        let x = SphericalPointSet::new(vec![P3::z(), -P3::z()]).unwrap();
        let c = sphere_circles(&x, 0.1, 64).unwrap();
        assert_eq!(c.len(), 2);
        for comp in c.components() {
            let centre = comp.iter().sum::<P3>() / comp.len() as f64;
            for p in comp {
                assert!(((p - centre).norm() - 0.1f64.sin()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn circle_length_matches_cap_formula() {
        let x = SphericalPointSet::new(fibonacci_points(50)).unwrap();
        let eps = 0.5 * x.packing_radius();
        let c = sphere_circles(&x, eps, 256).unwrap();
        let exact = 50.0 * TAU * eps.sin();
        assert!((contour_length(&c) / exact - 1.0).abs() < 1e-4);
    }

    #[test]
    fn shrinking_circles_approach_point_set() {
        let x = SphericalPointSet::new(fibonacci_points(20)).unwrap();
        let dx = crate::diameter::diameter(x.points());
        let mut last_len = f64::INFINITY;
        for eps in [0.1, 0.01, 0.001] {
            let c = sphere_circles(&x, eps, 32).unwrap();
            let l = contour_length(&c);
            assert!(l < last_len);
            last_len = l;
            assert!((contour_diameter(&c) - dx).abs() <= 2.0 * eps);
        }
    }

    #[test]
    fn radius_must_stay_below_packing() {
        let x = SphericalPointSet::new(vec![P3::z(), P3::x()]).unwrap();
        assert!(matches!(
            sphere_circles(&x, 1.0, 32),
            Err(ContourError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn covering_of_simple_sets() {
        let res = 20_000;
        let delta = sample_covering_radius(res);
        assert!(delta < 0.03, "{delta}");
        let one = SphericalPointSet::new(vec![P3::z()]).unwrap();
        let c = covering_radius_estimate(&one, res);
        assert!(c <= PI && c >= PI - delta);
        let two = SphericalPointSet::new(vec![P3::z(), -P3::z()]).unwrap();
        let c = covering_radius_estimate(&two, res);
        assert!(c <= PI / 2.0 + 1e-12 && c >= PI / 2.0 - delta);
        let octa = SphericalPointSet::new(vec![P3::x(), -P3::x(), P3::y(), -P3::y(), P3::z(), -P3::z()]).unwrap();
        let c = covering_radius_estimate(&octa, res);
        let exact = (1.0 / 3f64.sqrt()).acos();
        assert!(c <= exact + 1e-12 && c >= exact - delta, "{c}");
    }

    #[test]
    fn packing_radius_is_exact() {
        let pts = fibonacci_points(200);
        let x = SphericalPointSet::new(pts.clone()).unwrap();
        let mut min = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                min = min.min(sphere_distance(&pts[i], &pts[j]));
            }
        }
        assert!((x.packing_radius() - min / 2.0).abs() < 1e-12);
        assert!(x.packing_radius() < covering_radius_estimate(&x, 20_000));
    }

    #[test]
    fn net_meets_its_targets() {
        let net = fibonacci_net(0.2).unwrap();
        assert!(net.covering_estimate <= 0.2);
        assert!(net.set.packing_radius() >= 0.05);
        let small = fibonacci_net(0.1).unwrap();
        let smaller = fibonacci_net(0.05).unwrap();
        let ratio = smaller.set.len() as f64 / small.set.len() as f64;
        assert!((3.0..=5.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn library_rejects_unknown_names() {
        let p = BTreeMap::new();
        assert!(matches!(shape_library("torus", &p), Err(GenError::UnknownShape(_))));
        let mut bad = BTreeMap::new();
        bad.insert("rings".to_string(), 2.5);
        assert!(matches!(shape_library("disk", &bad), Err(GenError::InvalidParam(_))));
        assert!(matches!(shape_library("stadium", &p), Ok(Shape::Contour(_))));
    }
}
