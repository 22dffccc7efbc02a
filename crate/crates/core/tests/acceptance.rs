//! Acceptance criteria. Each test prints one PASS/FAIL line to stderr,
//! bypassing output capture, and then asserts.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use plateau_bound::audit::{boundary_library, closed_library, comparison_identity_check, diameter_bound, run_audit, AuditOptions};
use plateau_bound::cli;
use plateau_bound::contour::{Contour, P3};
use plateau_bound::criteria::white::white_optimum;
use plateau_bound::criteria::{
    analyze, cone_check, tau_root, white_bruteforce_oracle, AnalyzeOptions, Certificate, Verdict,
};
use plateau_bound::curvature::{mean_curvature_field, total_mean_curvature};
use plateau_bound::doubling::build_double;
use plateau_bound::generators::{
    capped_cylinder, circle, coaxial_circles, fibonacci_net, flat_disk, hemisphere, icosphere, shape_library,
    sphere_circles, Shape, SphericalPointSet,
};
use plateau_bound::teardrop::build_teardrop;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Serialises the criteria so each runtime is measured alone.
static SERIAL: Mutex<()> = Mutex::new(());

fn verdict(n: usize, name: &str, pass: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "{} criterion {n:2} {name}: {detail} [{:.3}s]\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {n} failed: {detail}");
}

fn lock() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

#[test]
fn criterion_01_teardrop_convergence() {
    let _g = lock();
    let t = Instant::now();
    let mut excess = Vec::new();
    let mut max_norm: f64 = 0.0;
    for k in [10, 100, 1000] {
        let c = build_teardrop(k, 100).unwrap();
        excess.push((c.total_abs_curvature() - PI).abs());
        max_norm = max_norm.max(c.max_norm());
    }
    for k in [1, 2, 3, 5] {
        max_norm = max_norm.max(build_teardrop(k, 100).unwrap().max_norm());
    }
    let el = t.elapsed();
    let pass = excess[1] <= 0.05 && excess[0] > excess[1] && excess[1] > excess[2] && max_norm <= 2.0 && el.as_secs_f64() < 1.0;
    verdict(1, "teardrop convergence", pass, el, &format!("excess {:.4} {:.4} {:.4}, max |g| {max_norm:.6}", excess[0], excess[1], excess[2]));
}

#[test]
fn criterion_02_doubling_curvature() {
    let _g = lock();
    let t = Instant::now();
    let disk = build_double(&flat_disk(1.0, 16), 50, None).unwrap();
    let disk_err = (total_mean_curvature(&disk.sigma) - PI * PI).abs() / (PI * PI);
    let hemi = build_double(&hemisphere(16), 50, None).unwrap();
    let target = 2.0 * 2.0 * PI + PI * PI;
    let hemi_err = (total_mean_curvature(&hemi.sigma) - target).abs() / target;
    let el = t.elapsed();
    let pass = disk_err <= 0.05 && hemi_err <= 0.08 && el.as_secs_f64() < 30.0;
    verdict(
        2,
        "doubling curvature",
        pass,
        el,
        &format!("disk rel.err {disk_err:.4} (eps {}), hemisphere rel.err {hemi_err:.4}", disk.epsilon),
    );
}

#[test]
fn criterion_03_doubling_diameter() {
    let _g = lock();
    let t = Instant::now();
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut topology = true;
    for mesh in [flat_disk(1.0, 16), hemisphere(16)] {
        let d_m = mesh.extrinsic_diameter();
        for k in [10, 25, 50] {
            let d = build_double(&mesh, k, None).unwrap();
            worst = worst.max((d.sigma.extrinsic_diameter() - d_m).abs() / d.epsilon);
            let r = d.sigma.report();
            topology &= r.closed && r.connected && d.sigma.euler_characteristic() == 2 * mesh.euler_characteristic();
        }
    }
    let el = t.elapsed();
    let pass = worst <= 4.0 && topology && el.as_secs_f64() < 30.0;
    verdict(3, "doubling diameter", pass, el, &format!("max |d(S)-d(M)|/eps {worst:.4}, topology ok {topology}"));
}

#[test]
fn criterion_04_curvature_calibration() {
    let _g = lock();
    let t = Instant::now();
    let sphere = total_mean_curvature(&icosphere(4));
    let sphere_err = (sphere - 4.0 * PI).abs() / (4.0 * PI);
    let cyl = capped_cylinder(1.0, 20.0, 64);
    let h = total_mean_curvature(&cyl);
    let h_err = (h - 24.0 * PI).abs() / (24.0 * PI);
    let ratio = h / cyl.extrinsic_diameter();
    let ratio_err = (ratio - 24.0 * PI / 22.0).abs() / (24.0 * PI / 22.0);
    let el = t.elapsed();
    let pass = sphere_err <= 0.02 && h_err <= 0.03 && ratio_err <= 0.03 && el.as_secs_f64() < 10.0;
    verdict(
        4,
        "curvature calibration",
        pass,
        el,
        &format!("sphere {sphere_err:.2e}, capsule {h_err:.2e}, capsule ratio {ratio_err:.2e}"),
    );
}

#[test]
fn criterion_05_diameter_bound_suite() {
    let _g = lock();
    let t = Instant::now();
    let mut meshes = boundary_library();
    meshes.extend(closed_library());
    for name in ["disk", "disk-r4", "hemisphere", "icosphere", "capped-cylinder", "open-cylinder", "square"] {
        if let Shape::Mesh(m) = shape_library(name, &BTreeMap::new()).unwrap() {
            meshes.push((name, m));
        }
    }
    let mut min_margin = f64::INFINITY;
    let mut min_closed_ratio = f64::INFINITY;
    let mut all = true;
    for (_, m) in &meshes {
        let field = mean_curvature_field(m);
        let b = diameter_bound(m, &field, false).unwrap();
        if m.is_closed() {
            let r = b.total_h / b.d;
            min_closed_ratio = min_closed_ratio.min(r);
            all &= r >= PI / 16.0;
        } else {
            min_margin = min_margin.min(b.margin);
            all &= b.margin > 0.0;
        }
    }
    let el = t.elapsed();
    let pass = all && el.as_secs_f64() < 20.0;
    verdict(
        5,
        "diameter bound suite",
        pass,
        el,
        &format!("{} meshes, min margin {min_margin:.4}, min closed int|H|/d {min_closed_ratio:.4}", meshes.len()),
    );
}

#[test]
fn criterion_06_tau_root() {
    let _g = lock();
    let t = Instant::now();
    let root = tau_root();
    let el = t.elapsed();
    let (mut lo, mut hi) = (1.0f64, 1.5f64);
    let g = |x: f64| x.cosh() - x * x.sinh();
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if g(lo) * g(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let gap = (root.sinh2 - 2.27).abs();
    let pass = gap <= 0.005 && (root.tau - oracle).abs() <= 1e-6 && el.as_secs_f64() < 1e-3;
    verdict(
        6,
        "tau root",
        pass,
        el,
        &format!(
            "tau {:.10}, bisection {:.10}, sinh^2 tau {:.6}, |sinh^2 tau - 2.27| = {gap:.5} (limit 0.005)",
            root.tau, oracle, root.sinh2
        ),
    );
}

fn random_contour(rng: &mut ChaCha8Rng, n: usize) -> Contour {
    loop {
        let comps: Vec<Vec<P3>> = (0..n)
            .map(|_| {
                let center = P3::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
                let normal = P3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let normal = if normal.norm() < 1e-3 { P3::z() } else { normal };
                circle(&center, &normal, rng.gen_range(0.1..1.5), rng.gen_range(3..24))
            })
            .collect();
        if let Ok(c) = Contour::new(comps) {
            return c;
        }
    }
}

#[test]
fn criterion_07_white_mst_equals_bruteforce() {
    let _g = lock();
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let c = random_contour(&mut rng, n);
        if white_optimum(&c).unwrap().distance != white_bruteforce_oracle(&c).unwrap() {
            mismatches += 1;
        }
    }
    let el = t.elapsed();
    let pass = mismatches == 0 && el.as_secs_f64() < 10.0;
    verdict(7, "white MST = brute force", pass, el, &format!("{mismatches} mismatches over 200 contours"));
}

fn fired(r: &plateau_bound::criteria::CriterionReport, name: &str) -> bool {
    r.entry(name).map(|e| e.verdict == Verdict::Certified).unwrap_or(false)
}

#[test]
fn criterion_08_narrative() {
    let _g = lock();
    let t = Instant::now();
    let opts = AnalyzeOptions::default();

    let pair = SphericalPointSet::new(vec![P3::z(), -P3::z()]).unwrap();
    let a = analyze(&sphere_circles(&pair, 0.01, 64).unwrap(), &opts).unwrap();
    let (a_dl, a_w, a_cone) = (fired(&a, "diameter-length"), fired(&a, "white"), fired(&a, "cone"));
    let antipodal_ok = a_dl && a_w && !a_cone;

    let mut ratios = Vec::new();
    let mut net05 = None;
    for eps in [0.2f64, 0.1, 0.05] {
        let net = fibonacci_net(eps).unwrap();
        let c = sphere_circles(&net.set, eps.powf(2.5), 16).unwrap();
        let r = analyze(&c, &AnalyzeOptions { cone_budget: 200, ..Default::default() }).unwrap();
        ratios.push((eps, r.entry("white").unwrap().get("ratio").unwrap()));
        if eps == 0.05 {
            net05 = Some((fired(&r, "diameter-length"), fired(&r, "white"), r.entry("diameter-length").unwrap().get("l").unwrap()));
        }
    }
    let (n_dl, n_w, n_l) = net05.unwrap();
    let n = ratios.len() as f64;
    let mx = ratios.iter().map(|r| r.0.ln()).sum::<f64>() / n;
    let my = ratios.iter().map(|r| r.1.ln()).sum::<f64>() / n;
    let slope = ratios.iter().map(|r| (r.0.ln() - mx) * (r.1.ln() - my)).sum::<f64>()
        / ratios.iter().map(|r| (r.0.ln() - mx).powi(2)).sum::<f64>();
    let net_ok = n_dl && !n_w && (slope - 0.5).abs() <= 0.15;

    let Shape::Contour(stadium) = shape_library("stadium", &BTreeMap::new()).unwrap() else { unreachable!() };
    let s = analyze(&stadium, &opts).unwrap();
    let stadium_ok = s.entries.iter().all(|e| e.verdict != Verdict::Certified);

    let el = t.elapsed();
    let pass = antipodal_ok && net_ok && stadium_ok && el.as_secs_f64() < 60.0;
    verdict(
        8,
        "narrative reproduction",
        pass,
        el,
        &format!(
            "antipodal eps=0.01: dl {a_dl} white {a_w} cone {a_cone} (want true/true/false); \
             net eps=0.05: dl {n_dl} (l = {n_l:.3}, needs l < 0.25) white {n_w} (want true/false); \
             dist/l slope {slope:.3} (want 0.5 +- 0.15); stadium silent {stadium_ok}"
        ),
    );
}

#[test]
fn criterion_09_cone_separation() {
    let _g = lock();
    let t = Instant::now();
    let far = coaxial_circles(1.0, 2.0, 64).unwrap();
    let e = cone_check(&far, 1000).unwrap();
    let reverified = match &e.certificate {
        Some(Certificate::Cone(s)) => s.verify(&far),
        _ => false,
    };
    let near = coaxial_circles(1.0, 0.1, 64).unwrap();
    let n = cone_check(&near, 1000).unwrap();
    let el = t.elapsed();
    let pass = e.verdict == Verdict::Certified && reverified && n.verdict == Verdict::NoCertificateFound && n.certificate.is_none() && el.as_secs_f64() < 10.0;
    verdict(
        9,
        "cone separation",
        pass,
        el,
        &format!("z=+-2: {} (reverified {reverified}); z=+-0.1: {}", e.verdict.as_str(), n.verdict.as_str()),
    );
}

#[test]
fn criterion_10_inequality_audit() {
    let _g = lock();
    let t = Instant::now();
    let report = run_audit(&AuditOptions::default()).unwrap();
    let identity = comparison_identity_check();
    let ms = report.closed.iter().flat_map(|s| &s.michael_simon).all(|r| r.holds);
    let probes: usize = report.closed.iter().map(|s| s.dichotomy.len()).sum();
    let dich = report.closed.iter().flat_map(|s| &s.dichotomy).all(|d| d.dichotomy_margin() > 0.0);
    let cover = report.closed.iter().all(|s| s.covering.holds);
    let ident = identity.coefficient.abs() <= 1e-12 && identity.max_grid_residual <= 1e-12;
    let el = t.elapsed();
    let pass = ms && dich && cover && ident && probes == 20 * report.closed.len() && el.as_secs_f64() < 60.0;
    verdict(
        10,
        "inequality audit",
        pass,
        el,
        &format!(
            "michael-simon {ms}, dichotomy {dich} at {probes} probes, covering {cover}, identity residual {:.1e}",
            identity.max_grid_residual.max(identity.coefficient.abs())
        ),
    );
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("plateau").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

#[test]
fn criterion_11_determinism() {
    let _g = lock();
    let t = Instant::now();
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let disk = format!("{data}/disk.obj");
    let antipodal = format!("{data}/antipodal_eps0.01.contour.json");
    let stadium = format!("{data}/stadium.contour.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify-bound", &disk],
        vec!["double", &disk, "--k", "10,25"],
        vec!["teardrop", "--k", "10,100,1000"],
        vec!["check-contour", &antipodal, "--json"],
        vec!["check-contour", &stadium],
        vec!["gen", "net-circles", "-p", "epsilon=0.1"],
        vec!["audit", "--probes", "5"],
    ];
    let mut differing = Vec::new();
    for cmd in &commands {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            let mut args = vec!["--threads", threads, "--seed", "11"];
            args.extend(cmd.iter().copied());
            outputs.push(run_cli(&args));
        }
        if outputs[0] != outputs[1] || outputs[0].1.is_empty() {
            differing.push(cmd[0]);
        }
    }
    let el = t.elapsed();
    verdict(
        11,
        "determinism",
        differing.is_empty(),
        el,
        &format!("{} commands, differing: {differing:?}", commands.len()),
    );
}
