use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;
use tempfile::TempDir;

use twinsurf::io::{write_multigraph_csv, write_scalar_csv};
use twinsurf::numerics::{Bounds, Grid2D, MaskSpec};
use twinsurf::ScalarField;

fn twinsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twinsurf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_graph(p: &Path, n: usize, bounds: Bounds, mask: &MaskSpec, f: &[&dyn Fn(f64, f64) -> f64]) {
    let g = Arc::new(Grid2D::masked(n, n, bounds, mask).unwrap());
    let fields: Vec<ScalarField> = f.iter().map(|f| ScalarField::from_fn(&g, f)).collect();
    let file = std::fs::File::create(p).unwrap();
    if fields.len() == 1 {
        write_scalar_csv(file, &fields[0]).unwrap();
    } else {
        write_multigraph_csv(file, &fields).unwrap();
    }
}

fn helicoid_csv(dir: &TempDir) -> PathBuf {
    let p = path(dir, "helicoid.csv");
    let out = twinsurf(&["catalog", "eval", "helicoid_R3", "--grid", "101", "--output", s(&p)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let plane = path(&dir, "plane.csv");
    write_graph(&plane, 51, Bounds::square(1.0), &MaskSpec::Rect, &[&|x, y| 2.0 * x - y]);
    assert_eq!(twinsurf(&["verify", "--input", s(&plane)]).status.code(), Some(0));

    let helicoid = helicoid_csv(&dir);
    let out = twinsurf(&["verify", "--input", s(&helicoid)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);

    let bowl = path(&dir, "bowl.csv");
    write_graph(&bowl, 51, Bounds::square(1.0), &MaskSpec::Rect, &[&|x, _| x * x]);
    let out = twinsurf(&["verify", "--input", s(&bowl)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
}

#[test]
fn twin_matches_the_catalog() {
    let dir = TempDir::new().unwrap();
    let helicoid = helicoid_csv(&dir);
    let twin = path(&dir, "twin.csv");
    let out = twinsurf(&["twin", "--input", s(&helicoid), "--output", s(&twin), "--expect", "lorentz_catenoid_L3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["expect"]["pass"], true);
    assert!(std::fs::read_to_string(&twin).unwrap().starts_with("x,y,v\n"));
}

#[test]
fn twin_of_zero_is_zero() {
    let dir = TempDir::new().unwrap();
    let zero = path(&dir, "zero.csv");
    write_graph(&zero, 41, Bounds::square(1.0), &MaskSpec::disk(1.0), &[&|_, _| 0.0]);
    let twin = path(&dir, "twin.csv");
    assert_eq!(twinsurf(&["twin", "--input", s(&zero), "--output", s(&twin)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&twin).unwrap();
    for line in text.lines().skip(1) {
        let v: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(v, 0.0);
    }
}

#[test]
fn non_minimal_input_fails_the_curl_test() {
    let dir = TempDir::new().unwrap();
    let bowl = path(&dir, "bowl.csv");
    write_graph(&bowl, 51, Bounds::square(1.0), &MaskSpec::Rect, &[&|x, _| x * x]);
    let out = twinsurf(&["twin", "--input", s(&bowl)]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["kind"], "not_a_gradient");
}

#[test]
fn codim_area_violation_exits_4() {
    let dir = TempDir::new().unwrap();
    let big = path(&dir, "big.csv");
    write_graph(&big, 61, Bounds::square(1.2), &MaskSpec::disk(1.1), &[&|x, y| 0.5 * (x * x - y * y), &|x, y| x * y]);
    let out = twinsurf(&["twin", "--input", s(&big), "--ambient", "flat", "--codim", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["error"]["kind"], "not_area_decreasing");

    let small = path(&dir, "small.csv");
    write_graph(&small, 61, Bounds::square(1.0), &MaskSpec::disk(0.9), &[&|x, y| 0.5 * (x * x - y * y), &|x, y| x * y]);
    let out = twinsurf(&["twin", "--input", s(&small), "--ambient", "flat", "--codim", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn catalog_commands() {
    let out = twinsurf(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v["examples"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"semitrough"));

    let out = twinsurf(&["catalog", "check", "helicoid_R3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);

    let out = twinsurf(&["catalog", "check", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], true);

    let out = twinsurf(&["catalog", "check", "no_such_surface"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "unknown_example");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(twinsurf(&["verify"]).status.code(), Some(2));
    assert_eq!(twinsurf(&["verify", "--input", "/nonexistent/in.csv"]).status.code(), Some(2));
    assert_eq!(twinsurf(&["catalog", "eval", "helicoid_R3", "--param", "nope=1"]).status.code(), Some(2));
}

#[test]
fn conformal_writes_weierstrass_data() {
    let dir = TempDir::new().unwrap();
    let helicoid = helicoid_csv(&dir);
    let (phi, psi) = (path(&dir, "phi.csv"), path(&dir, "psi.csv"));
    let out = twinsurf(&["conformal", "--input", s(&helicoid), "--anchor", "2,0", "--output", s(&phi), "--twin-output", s(&psi)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(json(&out)["min_j_psi"].as_f64().unwrap() > 2.0);
    for p in [&phi, &psi] {
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.starts_with("xi1,xi2,re_phi1,im_phi1"), "{}", &text[..40]);
        assert!(text.lines().count() > 1000);
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |tag: &str| {
        let (g, obj) = (path(&dir, &format!("{tag}.csv")), path(&dir, &format!("{tag}.obj")));
        let out = twinsurf(&["catalog", "eval", "scherk_doubly_R3", "--grid", "101", "--output", s(&g), "--obj", s(&obj)]);
        assert_eq!(out.status.code(), Some(0));
        let t = path(&dir, &format!("{tag}_twin.csv"));
        let out2 = twinsurf(&["twin", "--input", s(&g), "--output", s(&t)]);
        assert_eq!(out2.status.code(), Some(0));
        [g, obj, t].map(|p| std::fs::read(p).unwrap())
    };
    assert_eq!(run("a"), run("b"));
}
