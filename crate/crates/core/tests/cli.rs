//! Runs the `plateau` binary end to end on the bundled data.

use std::path::PathBuf;
use std::process::{Command, Output};

fn plateau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plateau"))
        .args(args)
        .env("PLATEAU_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn antipodal_contour_is_certified() {
    let out = plateau(&["check-contour", &data("antipodal_eps0.01.contour.json")]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("nonexistence-certified"));
}

#[test]
fn stadium_contour_is_silent() {
    let out = plateau(&["check-contour", "--json", &data("stadium.contour.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json output");
    assert!(v.is_object());
}

#[test]
fn disk_satisfies_bound() {
    let out = plateau(&["verify-bound", &data("disk.obj")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_file_and_bad_flag_exit_one() {
    assert_eq!(plateau(&["verify-bound", "/nonexistent.obj"]).status.code(), Some(1));
    assert_eq!(plateau(&["teardrop", "--bogus"]).status.code(), Some(1));
}

#[test]
fn teardrop_table_lists_each_k() {
    let out = plateau(&["teardrop", "--k", "10,100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| !l.trim().is_empty()).count() >= 3, "{text}");
}
