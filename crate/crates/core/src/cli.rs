//! The `plateau` command line.

use std::collections::BTreeMap;
use std::error::Error;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::audit::{diameter_bound, run_audit, AuditOptions};
use crate::contour::{contour_diameter, contour_length, load_contour, save_contour};
use crate::criteria::{analyze, AnalyzeOptions, Family};
use crate::curvature::{mean_curvature_field, total_mean_curvature};
use crate::doubling::{build_double, table_csv, target_curvature, ConvergenceRow};
use crate::format::sig;
use crate::generators::{shape_library, Shape};
use crate::mesh::io::{load_mesh, save_mesh, to_obj};
use crate::teardrop::{build_teardrop_with, resolved_density, Profile};

type CliResult = Result<i32, Box<dyn Error + Send + Sync>>;

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "PLATEAU_THREADS";

#[derive(Debug, Parser)]
#[command(name = "plateau", version, about = "Diameter bounds, surface doubling and contour nonexistence criteria")]
pub struct Cli {
    /// Worker threads (default: PLATEAU_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomised probes.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the diameter bound on a mesh in proven and conjectural form.
    VerifyBound { mesh: PathBuf },
    /// Double a mesh with boundary into a closed surface for each k.
    Double(DoubleArgs),
    /// Build teardrop curves and tabulate their total curvature.
    Teardrop(TeardropArgs),
    /// Run the nonexistence criteria on a contour (exit 2 if one certifies).
    CheckContour(CheckArgs),
    /// Generate a library mesh or contour.
    Gen(GenArgs),
    /// Run the inequality audit on the shape library.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct DoubleArgs {
    pub mesh: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "10,25,50")]
    pub k: Vec<u32>,
    /// Fixed tube radius instead of the automatic choice.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Write each doubled mesh and its piece map here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProfileArg {
    Plateau,
    Bump,
}

#[derive(Debug, Args)]
pub struct TeardropArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub k: Vec<u32>,
    /// Minimum sampling density; raised with k to resolve the half circle.
    #[arg(long, default_value_t = 100)]
    pub samples_per_unit: usize,
    #[arg(long, value_enum, default_value = "plateau")]
    pub profile: ProfileArg,
    /// Write each curve as `teardrop_k<k>.txt` here.
    #[arg(long)]
    pub curve_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub contour: PathBuf,
    /// Objective evaluations per cone search start.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    /// Compare verdicts against a known family: antipodal-circles, net-circles, stadium.
    #[arg(long)]
    pub family: Option<String>,
    /// Skip the non-rigorous conjectural diameter-length test.
    #[arg(long)]
    pub no_conjectural: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// disk, disk-r4, hemisphere, icosphere, capped-cylinder, open-cylinder,
    /// square, stadium, coaxial-circles, antipodal-circles, net-circles
    pub shape: String,
    /// Parameter as key=value; repeatable.
    #[arg(short, long = "param")]
    pub params: Vec<String>,
    /// Output file (.obj, .mesh.json, .contour.json); stdout if absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 20)]
    pub probes: usize,
    #[arg(long, default_value_t = 64)]
    pub r_samples: usize,
    #[arg(long)]
    pub json: bool,
}

/// Parse `args` (including the program name), run, and return the exit
/// code: 0 success, 1 error, 2 nonexistence certified.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn threads(cli: &Cli) -> Result<usize, Box<dyn Error + Send + Sync>> {
    let n = match cli.threads {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| format!("{THREADS_ENV}={v} is not a thread count"))?,
            Err(_) => 0,
        },
    };
    Ok(n)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads(cli)?).build()?;
    let (code, text) = pool.install(|| -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
        match &cli.command {
            Command::VerifyBound { mesh } => verify_bound(mesh),
            Command::Double(a) => double(a),
            Command::Teardrop(a) => teardrop(a),
            Command::CheckContour(a) => check_contour(a),
            Command::Gen(a) => generate(a),
            Command::Audit(a) => audit(a, cli.seed),
        }
    })?;
    out.write_all(text.as_bytes())?;
    Ok(code)
}

fn positive(name: &str, v: f64) -> Result<f64, String> {
    if v.is_finite() && v > 0.0 { Ok(v) } else { Err(format!("{name} must be positive, got {v}")) }
}

fn verify_bound(path: &Path) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    let mesh = load_mesh(path)?;
    let field = mean_curvature_field(&mesh);
    let mut s = String::new();
    writeln!(s, "mesh {}", path.display())?;
    writeln!(
        s,
        "vertices {} triangles {} dimension {} closed {}",
        mesh.vertex_count(),
        mesh.triangles().len(),
        mesh.dimension(),
        mesh.is_closed()
    )?;
    writeln!(s, "d {}", sig(mesh.extrinsic_diameter()))?;
    writeln!(s, "int_abs_H {}", sig(total_mean_curvature(&mesh)))?;
    writeln!(s, "boundary_length {}", sig(mesh.boundary_length()))?;
    for conjectural in [false, true] {
        let b = diameter_bound(&mesh, &field, conjectural)?;
        writeln!(
            s,
            "{} C={} rhs={} margin={} holds={}",
            if conjectural { "conjectural" } else { "proven" },
            sig(b.constant),
            sig(b.rhs),
            sig(b.margin),
            b.holds
        )?;
    }
    Ok((0, s))
}

fn double(a: &DoubleArgs) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    if a.k.is_empty() || a.k.contains(&0) {
        return Err("k values must be positive".into());
    }
    if let Some(e) = a.epsilon {
        positive("epsilon", e)?;
    }
    let mesh = load_mesh(&a.mesh)?;
    let target_c = target_curvature(&mesh);
    let target_d = mesh.extrinsic_diameter();
    let built = a
        .k
        .par_iter()
        .map(|&k| build_double(&mesh, k, a.epsilon))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<ConvergenceRow> = built
        .par_iter()
        .map(|d| ConvergenceRow {
            k: d.k,
            epsilon: d.epsilon,
            curvature: total_mean_curvature(&d.sigma),
            diameter: d.sigma.extrinsic_diameter(),
            target_curvature: target_c,
            target_diameter: target_d,
        })
        .collect();
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir)?;
        for d in &built {
            save_mesh(&d.sigma, &dir.join(format!("double_k{}.obj", d.k)))?;
            std::fs::write(dir.join(format!("double_k{}.pieces.txt", d.k)), d.provenance_text())?;
        }
    }
    Ok((0, table_csv(&rows)))
}

fn teardrop(a: &TeardropArgs) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    if a.k.is_empty() || a.k.contains(&0) {
        return Err("k values must be positive".into());
    }
    let profile = match a.profile {
        ProfileArg::Plateau => Profile::Plateau,
        ProfileArg::Bump => Profile::Bump,
    };
    let curves = a
        .k
        .par_iter()
        .map(|&k| build_teardrop_with(k, resolved_density(k, a.samples_per_unit), profile))
        .collect::<Result<Vec<_>, _>>()?;
    let mut s = String::from("k,samples,total_abs_curvature,excess,max_norm\n");
    for c in &curves {
        let t = c.total_abs_curvature();
        writeln!(
            s,
            "{},{},{},{},{}",
            c.k,
            c.len(),
            sig(t),
            sig((t - std::f64::consts::PI).abs()),
            sig(c.max_norm())
        )?;
    }
    if let Some(dir) = &a.curve_dir {
        std::fs::create_dir_all(dir)?;
        for c in &curves {
            std::fs::write(dir.join(format!("teardrop_k{}.txt", c.k)), c.to_text())?;
        }
    }
    Ok((0, s))
}

fn check_contour(a: &CheckArgs) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    let contour = load_contour(&a.contour)?;
    let family = match &a.family {
        None => None,
        Some(f) => Some(Family::parse(f).ok_or_else(|| format!("unknown family {f}"))?),
    };
    let options = AnalyzeOptions { cone_budget: a.budget, conjectural: !a.no_conjectural, family };
    let report = analyze(&contour, &options)?;
    let text = if a.json {
        let mut t = serde_json::to_string_pretty(&report.to_json())?;
        t.push('\n');
        t
    } else {
        let mut t = format!(
            "contour {} components {} points {}\n",
            a.contour.display(),
            report.components,
            report.points
        );
        t.push_str(&report.table());
        t.push_str(if report.nonexistence_certified() {
            "result: nonexistence certified\n"
        } else {
            "result: no criterion certified nonexistence\n"
        });
        t
    };
    Ok((report.exit_code(), text))
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, String> {
    raw.iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| format!("parameter {p} is not key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| format!("parameter {k} has non-numeric value {v}"))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn generate(a: &GenArgs) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    let params = parse_params(&a.params)?;
    let shape = shape_library(&a.shape, &params)?;
    let mut s = String::new();
    match (&shape, &a.out) {
        (Shape::Mesh(m), Some(path)) => {
            save_mesh(m, path)?;
            writeln!(
                s,
                "{} vertices {} triangles {} euler {} d {} boundary_length {}",
                a.shape,
                m.vertex_count(),
                m.triangles().len(),
                m.euler_characteristic(),
                sig(m.extrinsic_diameter()),
                sig(m.boundary_length())
            )?;
        }
        (Shape::Mesh(m), None) => s = to_obj(m)?,
        (Shape::Contour(c), Some(path)) => {
            save_contour(c, path)?;
            writeln!(
                s,
                "{} components {} points {} d {} l {}",
                a.shape,
                c.len(),
                c.point_count(),
                sig(contour_diameter(c)),
                sig(contour_length(c))
            )?;
        }
        (Shape::Contour(c), None) => {
            s = serde_json::to_string_pretty(&crate::contour::ContourDocument::from_contour(c))?;
            s.push('\n');
        }
    }
    Ok((0, s))
}

fn audit(a: &AuditArgs, seed: u64) -> Result<(i32, String), Box<dyn Error + Send + Sync>> {
    if a.probes == 0 {
        return Err("probes must be positive".into());
    }
    let report = run_audit(&AuditOptions { seed, probes: a.probes, r_samples: a.r_samples })?;
    let mut text = if a.json {
        serde_json::to_string_pretty(&report)?
    } else {
        report.to_text()
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let all = report.all_hold();
    text.push_str(if all { "all checks hold\n" } else { "SOME CHECKS FAILED\n" });
    Ok((if all { 0 } else { 1 }, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("plateau").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn teardrop_table_shrinks() {
        let (code, out, _) = call(&["teardrop", "--k", "10,100,1000"]);
        assert_eq!(code, 0);
        let excess: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
        assert_eq!(excess.len(), 3);
        assert!(excess[0] > excess[1] && excess[1] > excess[2]);
    }

    #[test]
    fn unknown_flag_fails() {
        let (code, _, err) = call(&["teardrop", "--bogus"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
        let (code, _, err) = call(&["verify-bound", "/nonexistent/file.obj"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn gen_then_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.contour.json");
        let p = path.to_str().unwrap();
        let (code, _, _) = call(&["gen", "antipodal-circles", "-p", "epsilon=0.01", "-o", p]);
        assert_eq!(code, 0);
        let (code, out, _) = call(&["check-contour", p, "--budget", "200"]);
        assert_eq!(code, 2);
        assert!(out.contains("diameter-length              yes        nonexistence-certified"));
        let stadium = dir.path().join("s.contour.json");
        let s = stadium.to_str().unwrap();
        call(&["gen", "stadium", "-o", s]);
        let (code, _, _) = call(&["check-contour", s, "--budget", "200"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn verify_bound_flat_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("disk.obj");
        let p = path.to_str().unwrap();
        assert_eq!(call(&["gen", "disk", "-p", "rings=8", "-o", p]).0, 0);
        let (code, out, _) = call(&["verify-bound", p]);
        assert_eq!(code, 0);
        assert!(out.contains("int_abs_H 0\n") || out.lines().any(|l| l.starts_with("int_abs_H ") && l[10..].parse::<f64>().unwrap().abs() < 1e-9));
        assert!(out.contains("proven") && out.contains("holds=true"));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let a = call(&["--threads", "1", "teardrop", "--k", "3,20"]);
        let b = call(&["--threads", "3", "teardrop", "--k", "3,20"]);
        assert_eq!(a, b);
    }
}
