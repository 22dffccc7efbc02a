//! Teardrop curves: a graph leaving the origin, a half circle of radius 1/k
//! around (1, 0), and the mirrored graph back to the origin, sampled at
//! uniform arclength.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::Vector3;
use serde::Serialize;

use crate::curvature::total_abs_curvature;
use crate::error::BuildError;
use crate::format::sig;

/// Minimum number of samples strictly inside the half circle.
pub const MIN_ARC_SAMPLES: usize = 32;

fn bump_e(t: f64) -> f64 {
    if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() }
}

/// Smooth step φ(t) = E(t) / (E(t) + E(1 − t)), E(t) = exp(−1/t).
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = bump_e(t);
        a / (a + bump_e(1.0 - t))
    }
}

/// φ′(t), evaluated with a shared exponent shift to avoid underflow.
pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let a = -1.0 / t;
    let b = -1.0 / (1.0 - t);
    let m = a.max(b);
    let (ea, eb) = ((a - m).exp(), (b - m).exp());
    ea * eb * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / ((ea + eb) * (ea + eb))
}

/// The step f: 0 on [0, 0.1], 1 on [0.9, 1], φ((x − 0.1)/0.8) between.
pub fn transition_function(x: f64) -> Result<f64, BuildError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(BuildError::OutOfDomain(x));
    }
    Ok(smooth_step((x - 0.1) / 0.8))
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
    h * GL_NODES.iter().zip(&GL_WEIGHTS).map(|(x, w)| w * f(c + h * x)).sum::<f64>()
}

fn gauss_panels(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| gauss(f, a + i as f64 * h, a + (i + 1) as f64 * h)).sum()
}

/// Height profile of the graph part, f(0) = 0 and f(1) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Profile {
    /// Slope built as a plateau of smooth steps: flat on [0, 0.02] and
    /// [0.98, 1], ramps of width 0.06, maximum slope 1/0.9.
    Plateau,
    /// The step `transition_function` itself (maximum slope 2.5).
    Bump,
}

const P_FLAT: f64 = 0.02;
const P_RAMP: f64 = 0.06;

impl Profile {
    /// End of the flat zone near x = 1.
    pub fn flat_start(self) -> f64 {
        match self {
            Profile::Plateau => 1.0 - P_FLAT,
            Profile::Bump => 0.9,
        }
    }

    fn plateau_slope_scale() -> f64 {
        1.0 / (1.0 - 2.0 * P_FLAT - P_RAMP)
    }

    /// ∫₀ᵗ φ.
    fn step_integral(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            0.5 + (t - 1.0)
        } else {
            gauss_panels(&smooth_step, 0.0, t, 32)
        }
    }

    pub fn value(self, x: f64) -> f64 {
        match self {
            Profile::Bump => smooth_step((x - 0.1) / 0.8),
            Profile::Plateau => {
                let c = Self::plateau_slope_scale();
                if x <= 0.5 {
                    c * P_RAMP * Self::step_integral((x - P_FLAT) / P_RAMP)
                } else {
                    1.0 - c * P_RAMP * Self::step_integral((1.0 - P_FLAT - x) / P_RAMP)
                }
            }
        }
    }

    pub fn slope(self, x: f64) -> f64 {
        match self {
            Profile::Bump => smooth_step_derivative((x - 0.1) / 0.8) / 0.8,
            Profile::Plateau => {
                let c = Self::plateau_slope_scale();
                let t = if x <= 0.5 { (x - P_FLAT) / P_RAMP } else { (1.0 - P_FLAT - x) / P_RAMP };
                c * smooth_step(t)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeardropSample {
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeardropCurve {
    pub k: u32,
    pub profile: Profile,
    pub samples: Vec<TeardropSample>,
    pub total_length: f64,
    /// Arclength of one graph part.
    pub graph_length: f64,
}

/// Arclength of the graph y = f(x)/k, tabulated on fixed panels and
/// inverted by Newton's method.
struct GraphArclength {
    profile: Profile,
    k: f64,
    cumulative: Vec<f64>,
}

const ARC_PANELS: usize = 400;

impl GraphArclength {
    fn new(profile: Profile, k: f64) -> Self {
        let speed = |x: f64| (1.0 + (profile.slope(x) / k).powi(2)).sqrt();
        let h = 1.0 / ARC_PANELS as f64;
        let mut cumulative = vec![0.0];
        for i in 0..ARC_PANELS {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + gauss(&speed, i as f64 * h, (i + 1) as f64 * h));
        }
        Self { profile, k, cumulative }
    }

    fn speed(&self, x: f64) -> f64 {
        (1.0 + (self.profile.slope(x) / self.k).powi(2)).sqrt()
    }

    fn total(&self) -> f64 {
        self.cumulative[ARC_PANELS]
    }

    fn length_to(&self, x: f64) -> f64 {
        let h = 1.0 / ARC_PANELS as f64;
        let i = ((x / h).floor() as usize).min(ARC_PANELS - 1);
        let a = i as f64 * h;
        self.cumulative[i] + gauss(&|t| self.speed(t), a, x)
    }

    fn invert(&self, s: f64) -> f64 {
        let i = self.cumulative.partition_point(|&c| c <= s).clamp(1, ARC_PANELS) - 1;
        let h = 1.0 / ARC_PANELS as f64;
        let (lo, hi) = (i as f64 * h, (i + 1) as f64 * h);
        let span = self.cumulative[i + 1] - self.cumulative[i];
        let mut x = lo + h * ((s - self.cumulative[i]) / span).clamp(0.0, 1.0);
        for _ in 0..20 {
            let step = (self.length_to(x) - s) / self.speed(x);
            x = (x - step).clamp(lo, hi);
            if step.abs() < 1e-15 {
                break;
            }
        }
        x
    }
}

/// Teardrop with the default profile; the sampling density is raised with
/// k so the half circle always carries at least 32 samples.
pub fn build_teardrop(k: u32, samples_per_unit: usize) -> Result<TeardropCurve, BuildError> {
    build_teardrop_with(k, resolved_density(k, samples_per_unit), Profile::Plateau)
}

/// `samples_per_unit`, raised if needed to resolve the half circle at k.
pub fn resolved_density(k: u32, samples_per_unit: usize) -> usize {
    let needed = ((MIN_ARC_SAMPLES as f64 + 2.0) * k as f64 / PI).ceil() as usize;
    samples_per_unit.max(needed)
}

/// Teardrop at exactly `samples_per_unit`; fails if the half circle is
/// under-resolved.
pub fn build_teardrop_with(k: u32, samples_per_unit: usize, profile: Profile) -> Result<TeardropCurve, BuildError> {
    if k == 0 || samples_per_unit < 100 {
        return Err(BuildError::BadTeardropParams);
    }
    let kf = k as f64;
    let graph = GraphArclength::new(profile, kf);
    let sg = graph.total();
    let arc = PI / kf;
    let total = 2.0 * sg + arc;
    let n = (total * samples_per_unit as f64).ceil() as usize;
    let ds = total / n as f64;
    let point = |s: f64| -> (f64, f64) {
        if s <= sg {
            let x = graph.invert(s);
            (x, profile.value(x) / kf)
        } else {
            let a = ((s - sg) * kf).min(PI);
            (1.0 + a.sin() / kf, a.cos() / kf)
        }
    };
    let mut samples = vec![TeardropSample { s: 0.0, x: 0.0, y: 0.0 }; n + 1];
    for i in 0..=n / 2 {
        let s = i as f64 * ds;
        let (x, y) = point(s);
        samples[i] = TeardropSample { s, x, y };
    }
    for i in (n / 2 + 1)..=n {
        let m = samples[n - i];
        samples[i] = TeardropSample {
            s: i as f64 * ds,
            x: m.x,
            y: -m.y,
        };
    }
    let curve = TeardropCurve {
        k,
        profile,
        samples,
        total_length: total,
        graph_length: sg,
    };
    let on_arc = curve.arc_range().len();
    if on_arc < MIN_ARC_SAMPLES {
        return Err(BuildError::UnderResolved(on_arc));
    }
    Ok(curve)
}

impl TeardropCurve {
    pub fn points(&self) -> Vec<Vector3<f64>> {
        self.samples.iter().map(|p| Vector3::new(p.x, p.y, 0.0)).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample indices strictly inside the half circle.
    pub fn arc_range(&self) -> std::ops::Range<usize> {
        let a = self.graph_length;
        let b = self.total_length - self.graph_length;
        let start = self.samples.partition_point(|p| p.s <= a);
        let end = self.samples.partition_point(|p| p.s < b);
        start..end.max(start)
    }

    pub fn total_abs_curvature(&self) -> f64 {
        total_abs_curvature(&self.points(), false).expect("teardrop samples are distinct")
    }

    /// Turning of the half circle alone: the arc samples together with the
    /// neighbouring samples in the flat zones, where chords are horizontal.
    pub fn arc_turning(&self) -> f64 {
        let r = self.arc_range();
        let flat = self.profile.flat_start();
        let mut start = r.start;
        while start > 0 && self.samples[start - 1].x >= flat {
            start -= 1;
        }
        let end = self.samples.len() - start;
        total_abs_curvature(&self.points()[start..end], false).expect("teardrop samples are distinct")
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|p| p.x.hypot(p.y)).fold(0.0, f64::max)
    }

    /// Unit tangents of the first and last chords.
    pub fn end_tangents(&self) -> ([f64; 2], [f64; 2]) {
        let n = self.samples.len();
        let dir = |a: &TeardropSample, b: &TeardropSample| {
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l = dx.hypot(dy);
            [dx / l, dy / l]
        };
        (dir(&self.samples[0], &self.samples[1]), dir(&self.samples[n - 2], &self.samples[n - 1]))
    }

    /// Angle between the analytic tangents on either side of the
    /// graph/half-circle join.
    pub fn join_tangent_gap(&self) -> f64 {
        let kf = self.k as f64;
        let graph_end = (self.profile.slope(1.0) / kf).atan();
        graph_end.abs()
    }

    /// `s x y` rows.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# s x y\n");
        for p in &self.samples {
            let _ = writeln!(out, "{} {} {}", sig(p.s), sig(p.x), sig(p.y));
        }
        out
    }
}
