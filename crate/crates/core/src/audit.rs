//! Numerical audit of the inequalities behind the closed-surface bound:
//! the sharp Michael–Simon inequality, the m/κ dichotomy, the comparison
//! identity, the covering bound d_int ≤ (4/δ)∫|H|, and the diameter bound
//! for surfaces with boundary.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{mean_curvature_field, MeanCurvatureField};
use crate::error::MeshError;
use crate::format::sig;
use crate::generators::{capped_cylinder, flat_disk, flat_disk_r4, flat_square, hemisphere, icosphere, open_cylinder};
use crate::mesh::{fast_marching_distances, intrinsic_diameter, BallField, SurfaceMesh};

/// Michael–Simon constant 2√π.
pub fn sigma() -> f64 {
    2.0 * PI.sqrt()
}

/// Dichotomy threshold π/4.
pub fn delta() -> f64 {
    PI / 4.0
}

/// Relative slack allowed in discrete Michael–Simon checks.
pub const MS_TOLERANCE: f64 = 0.05;

/// Proven lower bound for inf ∫|H|/d over closed surfaces in Rⁿ, or the
/// conjectured value π.
pub fn ct_constants(n: usize, conjectural: bool) -> Result<f64, MeshError> {
    if n < 3 {
        return Err(MeshError::InvalidArgument(format!("ambient dimension {n} < 3")));
    }
    Ok(if conjectural {
        PI
    } else if n <= 4 {
        PI / 16.0
    } else {
        PI / 32.0
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TestFunction {
    Constant(f64),
    /// 1 inside the intrinsic ball B(p, r), 0 outside B(p, r + μ), linear
    /// in the distance between.
    AnnularCutoff { center: usize, r: f64, mu: f64 },
    /// Sum of Gaussian bumps in ambient distance around random vertices.
    Bumps { seed: u64, count: usize },
}

impl TestFunction {
    pub fn describe(&self) -> String {
        match self {
            TestFunction::Constant(c) => format!("constant {}", sig(*c)),
            TestFunction::AnnularCutoff { center, r, mu } => {
                format!("cutoff p={center} r={} mu={}", sig(*r), sig(*mu))
            }
            TestFunction::Bumps { seed, count } => format!("bumps n={count} seed={seed}"),
        }
    }

    pub fn evaluate(&self, mesh: &SurfaceMesh) -> Result<Vec<f64>, MeshError> {
        let n = mesh.vertex_count();
        Ok(match *self {
            TestFunction::Constant(c) => vec![c; n],
            TestFunction::AnnularCutoff { center, r, mu } => {
                if !(mu > 0.0) || !(r >= 0.0) {
                    return Err(MeshError::InvalidArgument(format!("cutoff r={r} mu={mu}")));
                }
                fast_marching_distances(mesh, center)?
                    .into_iter()
                    .map(|d| (1.0 - (d - r) / mu).clamp(0.0, 1.0))
                    .collect()
            }
            TestFunction::Bumps { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let scale = mesh.extrinsic_diameter();
                let bumps: Vec<(usize, f64, f64)> = (0..count)
                    .map(|_| (rng.gen_range(0..n), rng.gen_range(0.5..1.0), scale * rng.gen_range(0.05..0.4)))
                    .collect();
                let v = mesh.vertices();
                (0..n)
                    .map(|i| {
                        bumps
                            .iter()
                            .map(|&(c, a, w)| a * (-(v[i] - v[c]).norm_squared() / (2.0 * w * w)).exp())
                            .sum()
                    })
                    .collect()
            }
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MichaelSimonRecord {
    pub function: String,
    pub l2: f64,
    pub grad_l1: f64,
    pub hf_l1: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub margin: f64,
    pub holds: bool,
}

/// L¹ norm of the gradient of the piecewise linear interpolant of `f`.
pub fn gradient_l1(mesh: &SurfaceMesh, f: &[f64]) -> f64 {
    let v = mesh.vertices();
    mesh.triangles()
        .iter()
        .map(|&[a, b, c]| {
            let e1 = v[b] - v[a];
            let e2 = v[c] - v[a];
            let (g11, g12, g22) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
            let det = g11 * g22 - g12 * g12;
            if det <= 0.0 {
                return 0.0;
            }
            let (d1, d2) = (f[b] - f[a], f[c] - f[a]);
            let grad2 = (g22 * d1 * d1 - 2.0 * g12 * d1 * d2 + g11 * d2 * d2) / det;
            grad2.max(0.0).sqrt() * 0.5 * det.sqrt()
        })
        .sum()
}

/// σ‖f‖₂ ≤ ‖∇f‖₁ + 2‖Hf‖₁ on a closed mesh, with vertex-lumped L² and
/// L¹(|H| f) and per-triangle gradients.
pub fn michael_simon_check(
    mesh: &SurfaceMesh,
    field: &MeanCurvatureField,
    f: &[f64],
    function: &str,
) -> Result<MichaelSimonRecord, MeshError> {
    if !mesh.is_closed() {
        return Err(MeshError::NotClosed);
    }
    if f.len() != mesh.vertex_count() {
        return Err(MeshError::InvalidArgument(format!(
            "field has {} values for {} vertices",
            f.len(),
            mesh.vertex_count()
        )));
    }
    if let Some(i) = f.iter().position(|&x| !(x >= 0.0)) {
        return Err(MeshError::InvalidArgument(format!("f[{i}] = {} is negative", f[i])));
    }
    let l2 = f.iter().zip(&field.area).map(|(x, a)| x * x * a).sum::<f64>().sqrt();
    let grad_l1 = gradient_l1(mesh, f);
    let hf_l1 = field.integral_weighted(|v| f[v]);
    let lhs = sigma() * l2;
    let rhs = grad_l1 + 2.0 * hf_l1;
    let margin = rhs * (1.0 + MS_TOLERANCE) - lhs;
    Ok(MichaelSimonRecord {
        function: function.to_string(),
        l2,
        grad_l1,
        hf_l1,
        lhs,
        rhs,
        ratio: lhs / rhs,
        margin,
        holds: margin >= 0.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MKappa {
    pub p: usize,
    pub radius: f64,
    pub m: f64,
    pub kappa: f64,
    /// V(p, r)/r² at the smallest sampled radius.
    pub small_ratio: f64,
    /// The ball covers the whole mesh before `radius`.
    pub saturated: bool,
}

impl MKappa {
    pub fn dichotomy_margin(&self) -> f64 {
        self.m.max(self.kappa) - delta()
    }
}

/// m(p,R) = sup (1/r)∫_{B(p,r)}|H| and κ(p,R) = inf V(p,r)/r² over the
/// grid r = R·j/r_samples, j = 1..=r_samples.
pub fn m_kappa(
    mesh: &SurfaceMesh,
    field: &MeanCurvatureField,
    p: usize,
    radius: f64,
    r_samples: usize,
) -> Result<MKappa, MeshError> {
    if !(radius > 0.0) {
        return Err(MeshError::InvalidArgument(format!("radius {radius}")));
    }
    if r_samples < 50 {
        return Err(MeshError::InvalidArgument(format!("{r_samples} radii < 50")));
    }
    if p >= mesh.vertex_count() {
        return Err(MeshError::VertexOutOfRange(p));
    }
    let ball = BallField::new(mesh, p)?;
    let masses = field.corner_masses(mesh);
    let mut m = 0.0f64;
    let mut kappa = f64::INFINITY;
    let mut small_ratio = 0.0;
    for j in 1..=r_samples {
        let r = radius * j as f64 / r_samples as f64;
        m = m.max(ball.integral(r, &masses) / r);
        let ratio = ball.volume(r) / (r * r);
        if j == 1 {
            small_ratio = ratio;
        }
        kappa = kappa.min(ratio);
    }
    let reach = ball.distances().iter().copied().fold(0.0, f64::max);
    Ok(MKappa { p, radius, m, kappa, small_ratio, saturated: radius > reach })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRecord {
    pub delta: f64,
    pub coefficient: f64,
    pub max_grid_residual: f64,
}

/// v′ + 2δr − σ√v for v = δr² on r ∈ (0, 10], and its coefficient 4δ − σ√δ.
pub fn comparison_identity_check_at(delta: f64) -> IdentityRecord {
    let s = sigma();
    let coefficient = 4.0 * delta - s * delta.sqrt();
    let max_grid_residual = (1..=1000)
        .map(|j| {
            let r = j as f64 * 0.01;
            let v = delta * r * r;
            (2.0 * delta * r + 2.0 * delta * r - s * v.sqrt()).abs()
        })
        .fold(0.0, f64::max);
    IdentityRecord { delta, coefficient, max_grid_residual }
}

pub fn comparison_identity_check() -> IdentityRecord {
    comparison_identity_check_at(delta())
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringRecord {
    pub d_int: f64,
    pub total_h: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

/// d_int ≤ (4/δ)∫|H| on a closed connected mesh.
pub fn covering_bound_check(mesh: &SurfaceMesh, field: &MeanCurvatureField) -> Result<CoveringRecord, MeshError> {
    if !mesh.is_closed() {
        return Err(MeshError::NotClosed);
    }
    let d_int = intrinsic_diameter(mesh)?;
    let total_h = field.integral_weighted(|_| 1.0);
    let bound = 4.0 / delta() * total_h;
    Ok(CoveringRecord { d_int, total_h, bound, margin: bound - d_int, holds: d_int <= bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiameterBound {
    pub conjectural: bool,
    pub constant: f64,
    pub d: f64,
    pub total_h: f64,
    pub boundary_length: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

/// d ≤ (1/C)(2∫|H| + (π/2)ℓ(∂M)), with C the proven constant for the
/// ambient dimension or π in conjectural mode. On closed meshes ℓ = 0 and
/// the factor 2 is dropped: d ≤ ∫|H|/C.
pub fn diameter_bound(mesh: &SurfaceMesh, field: &MeanCurvatureField, conjectural: bool) -> Result<DiameterBound, MeshError> {
    let constant = ct_constants(mesh.dimension().max(3), conjectural)?;
    let d = mesh.extrinsic_diameter();
    let total_h = field.integral_weighted(|_| 1.0);
    let boundary_length = mesh.boundary_length();
    let rhs = if mesh.is_closed() {
        total_h / constant
    } else {
        (2.0 * total_h + PI / 2.0 * boundary_length) / constant
    };
    Ok(DiameterBound {
        conjectural,
        constant,
        d,
        total_h,
        boundary_length,
        rhs,
        margin: rhs - d,
        holds: d <= rhs,
    })
}

pub fn closed_library() -> Vec<(&'static str, SurfaceMesh)> {
    vec![
        ("icosphere", icosphere(3)),
        ("capsule-4", capped_cylinder(1.0, 4.0, 32)),
        ("capsule-20", capped_cylinder(1.0, 20.0, 24)),
    ]
}

pub fn boundary_library() -> Vec<(&'static str, SurfaceMesh)> {
    vec![
        ("disk", flat_disk(1.0, 16)),
        ("disk-r4", flat_disk_r4(1.0, 8)),
        ("hemisphere", hemisphere(16)),
        ("open-cylinder", open_cylinder(1.0, 4.0, 48, 24)),
        ("square", flat_square(0.5, 20)),
    ]
}

#[derive(Debug, Clone)]
pub struct AuditOptions {
    pub seed: u64,
    pub probes: usize,
    pub r_samples: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { seed: 7, probes: 20, r_samples: 64 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeAudit {
    pub shape: String,
    pub michael_simon: Vec<MichaelSimonRecord>,
    pub dichotomy: Vec<MKappa>,
    /// Largest change of m or κ when the radius grid is doubled.
    pub refinement_change: f64,
    pub covering: CoveringRecord,
    pub ratio: f64,
    pub closed_bound: DiameterBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub identity: IdentityRecord,
    pub closed: Vec<ShapeAudit>,
    pub with_boundary: Vec<(String, DiameterBound)>,
}

impl AuditReport {
    pub fn all_hold(&self) -> bool {
        self.identity.max_grid_residual <= 1e-12
            && self.closed.iter().all(|s| {
                s.michael_simon.iter().all(|r| r.holds)
                    && s.dichotomy.iter().all(|d| d.dichotomy_margin() > 0.0)
                    && s.covering.holds
                    && s.closed_bound.holds
            })
            && self.with_boundary.iter().all(|(_, b)| b.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "identity delta={} coefficient={} max_residual={}\n",
            sig(self.identity.delta),
            sig(self.identity.coefficient),
            sig(self.identity.max_grid_residual)
        ));
        out.push_str("shape,check,detail,lhs,rhs,margin,holds\n");
        for s in &self.closed {
            for r in &s.michael_simon {
                out.push_str(&format!(
                    "{},michael-simon,{},{},{},{},{}\n",
                    s.shape, r.function, sig(r.lhs), sig(r.rhs), sig(r.margin), r.holds
                ));
            }
            for d in &s.dichotomy {
                out.push_str(&format!(
                    "{},dichotomy,p={} R={} m={} kappa={},{},{},{},{}\n",
                    s.shape,
                    d.p,
                    sig(d.radius),
                    sig(d.m),
                    sig(d.kappa),
                    sig(d.m.max(d.kappa)),
                    sig(delta()),
                    sig(d.dichotomy_margin()),
                    d.dichotomy_margin() > 0.0
                ));
            }
            out.push_str(&format!(
                "{},radius-grid-refinement,change,{},,,\n",
                s.shape,
                sig(s.refinement_change)
            ));
            out.push_str(&format!(
                "{},covering,d_int <= (4/delta) int|H|,{},{},{},{}\n",
                s.shape, sig(s.covering.d_int), sig(s.covering.bound), sig(s.covering.margin), s.covering.holds
            ));
            out.push_str(&format!(
                "{},closed-ratio,int|H|/d vs C_T={},{},{},{},{}\n",
                s.shape,
                sig(s.closed_bound.constant),
                sig(s.ratio),
                sig(s.closed_bound.constant),
                sig(s.ratio - s.closed_bound.constant),
                s.closed_bound.holds
            ));
        }
        for (name, b) in &self.with_boundary {
            out.push_str(&format!(
                "{name},diameter-bound,C={},{},{},{},{}\n",
                sig(b.constant),
                sig(b.d),
                sig(b.rhs),
                sig(b.margin),
                b.holds
            ));
        }
        out
    }
}

fn audit_shape(name: &str, mesh: &SurfaceMesh, options: &AuditOptions, index: u64) -> Result<ShapeAudit, MeshError> {
    let field = mean_curvature_field(mesh);
    let n = mesh.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(index));
    let scale = mesh.extrinsic_diameter();
    let probes: Vec<(usize, f64)> = (0..options.probes)
        .map(|_| (rng.gen_range(0..n), scale * rng.gen_range(0.05..1.0)))
        .collect();
    let mut functions = vec![TestFunction::Constant(1.0)];
    for &(p, _) in probes.iter().take(3) {
        functions.push(TestFunction::AnnularCutoff { center: p, r: 1.0, mu: 0.3 });
        functions.push(TestFunction::AnnularCutoff { center: p, r: 0.3, mu: 0.1 });
    }
    for b in 0..3 {
        functions.push(TestFunction::Bumps { seed: options.seed.wrapping_mul(31).wrapping_add(b), count: 4 });
    }
    let michael_simon = functions
        .par_iter()
        .map(|tf| michael_simon_check(mesh, &field, &tf.evaluate(mesh)?, &tf.describe()))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs = probes
        .par_iter()
        .map(|&(p, radius)| {
            let coarse = m_kappa(mesh, &field, p, radius, options.r_samples)?;
            let fine = m_kappa(mesh, &field, p, radius, 2 * options.r_samples)?;
            Ok((coarse, fine))
        })
        .collect::<Result<Vec<_>, MeshError>>()?;
    let refinement_change = pairs
        .iter()
        .map(|(c, f)| (c.m - f.m).abs().max((c.kappa - f.kappa).abs()))
        .fold(0.0, f64::max);
    let dichotomy = pairs.into_iter().map(|(c, _)| c).collect();
    let covering = covering_bound_check(mesh, &field)?;
    let closed_bound = diameter_bound(mesh, &field, false)?;
    Ok(ShapeAudit {
        shape: name.to_string(),
        michael_simon,
        dichotomy,
        refinement_change,
        ratio: closed_bound.total_h / closed_bound.d,
        covering,
        closed_bound,
    })
}

/// Run every check on the shape libraries.
pub fn run_audit(options: &AuditOptions) -> Result<AuditReport, MeshError> {
    let closed_lib = closed_library();
    let mut closed = Vec::new();
    for (i, (name, mesh)) in closed_lib.iter().enumerate() {
        closed.push(audit_shape(name, mesh, options, i as u64)?);
    }
    let with_boundary = boundary_library()
        .par_iter()
        .map(|(name, mesh)| {
            let field = mean_curvature_field(mesh);
            Ok((name.to_string(), diameter_bound(mesh, &field, false)?))
        })
        .collect::<Result<Vec<_>, MeshError>>()?;
    Ok(AuditReport { identity: comparison_identity_check(), closed, with_boundary })
}
