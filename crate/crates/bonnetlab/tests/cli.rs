use std::path::Path;
use std::process::{Command, Output};

use bonnetlab::fields::parse_csv;
use bonnetlab::table::{Table, TableRows};
use bonnetlab_core::vec3::Vec3;
use num_complex::Complex64;
use serde_json::Value;

fn bonnetlab(args: &[&str]) -> Output {
    bonnetlab_env(args, &[])
}

fn bonnetlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bonnetlab"));
    cmd.args(args).env_remove("BONNETLAB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bonnetlab(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&ok(&a)).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = bonnetlab(args);
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn series<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["series"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == name)
        .unwrap()
}

fn order(report: &Value, name: &str) -> f64 {
    let s = &series(report, name)["series"]["status"];
    assert_eq!(s["status"], "order", "{name}: {s}");
    num(&s["order"])
}

fn export(dir: &Path, args: &[&str]) -> String {
    let d = dir.to_str().unwrap();
    let mut a = vec!["export", "--out-dir", d];
    a.extend_from_slice(args);
    ok(&a).lines().next().unwrap().to_string()
}

#[test]
fn gallery_lists_every_entry() {
    let text = ok(&["gallery"]);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("torus-of-revolution"));
    let listing = json(&["gallery"]);
    let names: Vec<&str> = listing
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 8);
    assert!(names.contains(&"perturbed-torus"));
}

#[test]
fn gallery_entry_documents_its_parameters() {
    let text = ok(&["gallery", "torus-of-revolution"]);
    assert!(text.contains("--R"));
    assert!(text.contains("--a"));
    assert!(text.contains("a < R"));
    let entry = json(&["gallery", "torus-of-revolution"]);
    assert_eq!(entry["compact"], true);
    assert_eq!(entry["params"][0]["name"], "R");
}

#[test]
fn catenoid_is_minimal_and_cmc() {
    let r = json(&["analyze", "--gallery", "catenoid", "--nx", "64", "--ny", "128"]);
    for k in ["min", "max", "mean"] {
        assert!(num(&r["invariants"]["H"][k]).abs() < 1e-12);
    }
    assert_eq!(r["classification"]["kind"], "cmc");
    assert_eq!(r["resolution"]["nx"], 64);
    assert_eq!(r["resolution"]["ny"], 128);
    assert_eq!(r["scheme"]["x"], "spectral");
    assert_eq!(r["scheme"]["y"], "fd4");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["tool_version"], env!("CARGO_PKG_VERSION"));
    for t in ["tol_conf", "sign_fraction", "cmc_fraction", "dense_fraction", "floor_factor"] {
        assert!(r["thresholds"][t].is_number(), "{t}");
    }
}

#[test]
fn sphere_is_totally_umbilic() {
    let r = json(&["analyze", "--gallery", "sphere-mercator"]);
    assert_eq!(r["classification"]["kind"], "totally-umbilic");
}

#[test]
fn deltag_dump_follows_the_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let chart = export(dir.path(), &["--gallery", "perturbed-torus", "--nx", "32", "--ny", "32", "--name", "mytorus"]);
    let dumps = dir.path().join("dumps");
    ok(&[
        "analyze",
        "--chart",
        &chart,
        "--dump-fields",
        "deltag,u",
        "--dump-dir",
        dumps.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(dumps.join("mytorus_deltag.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("i,j,x,y,re,im"));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 32 * 32);
    assert_eq!((rows[1].i, rows[1].j), (1, 0));
    assert_eq!((rows[32].i, rows[32].j), (0, 1));
    assert!(rows.iter().all(|r| r.value.im == 0.0));
    assert!(rows.iter().any(|r| r.value.re.abs() > 1e-3));
    assert!(dumps.join("mytorus_u.csv").exists());
}

#[test]
fn unknown_dump_field_is_refused() {
    let (c, err) = code(&["analyze", "--gallery", "plane", "--dump-fields", "curl"]);
    assert_eq!(c, 3, "{err}");
}

#[test]
fn torus_verdict_is_clause_one() {
    let text = ok(&["verdict", "--gallery", "torus-of-revolution", "--R", "2", "--a", "1"]);
    assert_eq!(text.lines().next(), Some("no Bonnet mate (Theorem, clause 1: isothermic)"));
    let r = json(&["verdict", "--gallery", "torus-of-revolution", "--param", "R=2", "--param=a=1"]);
    assert_eq!(r["verdict"]["verdict"], "no-mate-theorem-1");
    assert_eq!(r["verdict"]["clause"], 1);
    assert_eq!(r["chart"]["source"]["gallery"]["params"]["R"], 2.0);
}

#[test]
fn torus_parameters_are_validated() {
    let (c, err) = code(&["verdict", "--gallery", "torus-of-revolution", "--R", "1", "--a", "2"]);
    assert_eq!(c, 3, "{err}");
}

#[test]
fn cylinder_verdict_is_associate_family() {
    let text = ok(&["verdict", "--gallery", "cylinder"]);
    assert_eq!(text.lines().next(), Some("CMC: associate family exists (not compact)"));
}

#[test]
fn perturbed_torus_verdict_prints_sign_statistics() {
    let text = ok(&["verdict", "--gallery", "perturbed-torus"]);
    let line = text.lines().next().unwrap();
    assert!(
        line == "no Bonnet mate (Theorem, clause 2: totally nonisothermic)"
            || line.starts_with("inconclusive:"),
        "{line}"
    );
    assert!(text.contains("sign of deltag: positive"));
    let r = json(&["verdict", "--gallery", "perturbed-torus"]);
    let c = &r["classification"];
    let total = num(&c["fraction_positive"]) + num(&c["fraction_negative"]) + num(&c["fraction_below_floor"]);
    assert!((total - 1.0).abs() < 1e-12);
    assert!(r["verdict"]["surrogate"]["support_nodes"].as_u64().unwrap() >= 16);
}

#[test]
fn catenoid_quarter_turn_associate_is_the_helicoid() {
    let r = json(&["mate", "--gallery", "catenoid", "--theta", "1.5707963267948966"]);
    let m = &r["mate"];
    assert_eq!(num(&m["theta"]), std::f64::consts::FRAC_PI_2);
    let d = &m["deformation"];
    assert!(num(&d["holomorphy_max"]) < 1e-10);
    assert!(num(&d["modulus_max"]) < 1e-12);
    assert!(num(&d["f_spread"]) < 1e-12);
    assert_eq!(d["congruent"], false);
    let f = Complex64::new(num(&d["f_at_origin_node"]["re"]), num(&d["f_at_origin_node"]["im"]));
    assert!((f - Complex64::new(1.0, -1.0)).norm() < 1e-12);
    assert_eq!(m["associate"]["u"], r["invariants"]["u"]);
    assert_eq!(m["associate"]["H"], r["invariants"]["H"]);

    // the helicoid's own e^{2u}h, read off its field dumps
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "analyze",
        "--gallery",
        "helicoid",
        "--dump-fields",
        "u,h",
        "--dump-dir",
        dir.path().to_str().unwrap(),
    ]);
    let read = |f: &str| parse_csv(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap();
    let assoc = Complex64::new(
        num(&m["associate_hopf_coefficient"]["re"]),
        num(&m["associate_hopf_coefficient"]["im"]),
    );
    for (u, h) in read("helicoid_u.csv").iter().zip(read("helicoid_h.csv")) {
        let q = h.value * (2.0 * u.value.re).exp();
        assert!((q - assoc).norm() < 1e-12, "{q} vs {assoc}");
    }
}

#[test]
fn zero_angle_associate_is_congruent() {
    let text = ok(&["mate", "--gallery", "catenoid", "--theta", "0"]);
    assert!(text.lines().nth(1).unwrap().starts_with("congruent"));
    let r = json(&["mate", "--gallery", "catenoid", "--theta", "0"]);
    assert_eq!(num(&r["mate"]["deformation"]["f_max"]), 0.0);
}

#[test]
fn torus_associate_is_refused() {
    let (c, err) = code(&["mate", "--gallery", "torus-of-revolution"]);
    assert_eq!(c, 4, "{err}");
    assert!(err.contains("Codazzi"), "{err}");
    let (c, _) = code(&["mate", "--gallery", "sphere-mercator"]);
    assert_eq!(c, 4);
}

#[test]
fn catenoid_converges_at_the_scheme_order() {
    let r = json(&["converge", "--gallery", "catenoid", "--levels", "3"]);
    let levels = r["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels[0]["ny"], 17);
    assert_eq!(levels[2]["ny"], 65);
    // spectral in x, so the fd4 axis sets the rate
    assert!((order(&r, "gauss") - 4.0).abs() < 0.3);
    assert!((order(&r, "deltag-invariance") - 4.0).abs() < 0.8);
    assert!(series(&r, "rotation-r3")["unavailable"].is_string());
    let r = json(&["converge", "--gallery", "catenoid", "--scheme", "fd2"]);
    assert!((order(&r, "gauss") - 2.0).abs() < 0.2);
}

#[test]
fn plane_residuals_are_converged() {
    let r = json(&["converge", "--gallery", "plane"]);
    for name in ["gauss", "codazzi"] {
        assert_eq!(series(&r, name)["series"]["status"]["status"], "converged", "{name}");
    }
    let text = ok(&["converge", "--gallery", "plane"]);
    assert!(text.lines().any(|l| l.starts_with("gauss") && l.contains("converged")));
}

#[test]
fn positions_only_table_converges_at_the_ingest_order() {
    let dir = tempfile::tempdir().unwrap();
    let chart = export(
        dir.path(),
        &["--gallery", "torus-of-revolution", "--nx", "256", "--ny", "256", "--positions-only", "--name", "table-only"],
    );
    let r = json(&["converge", "--chart", &chart]);
    assert_eq!(r["derivative_source"], "numerical");
    assert_eq!(r["levels"][0]["nx"], 64);
    assert_eq!(r["levels"][2]["nx"], 256);
    // positions are differenced with fd4 on ingest
    assert!((order(&r, "gauss") - 4.0).abs() < 0.2);
    assert!((order(&r, "codazzi") - 4.0).abs() < 0.2);
    let r = json(&["converge", "--chart", &chart, "--scheme", "fd2"]);
    assert!((order(&r, "gauss") - 2.0).abs() < 0.2);
}

#[test]
fn coarse_table_levels_fail_conformality() {
    let dir = tempfile::tempdir().unwrap();
    let chart = export(
        dir.path(),
        &["--gallery", "torus-of-revolution", "--nx", "64", "--ny", "64", "--positions-only"],
    );
    let (c, err) = code(&["converge", "--chart", &chart]);
    assert_eq!(c, 2, "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    std::fs::write(d.join("bad.json"), r#"{"name": 1}"#).unwrap();
    assert_eq!(code(&["analyze", "--chart", d.join("bad.json").to_str().unwrap()]).0, 3);
    assert_eq!(code(&["analyze", "--chart", d.join("missing.json").to_str().unwrap()]).0, 3);
    assert_eq!(code(&["analyze", "--gallery", "no-such-surface"]).0, 3);
    assert_eq!(code(&["analyze", "--no-such-flag"]).0, 3);
    assert_eq!(code(&["converge", "--gallery", "plane", "--levels", "1"]).0, 3);
    assert_eq!(code(&["--help"]).0, 0);

    // X = (x, 2y, 0): E = 1, G = 4
    let n = 9;
    let positions = (0..n * n)
        .map(|k| Vec3::new((k % n) as f64, 2.0 * (k / n) as f64, 0.0))
        .collect();
    Table {
        nx: n,
        ny: n,
        rows: TableRows::Positions(positions),
    }
    .save(&d.join("s.bin"))
    .unwrap();
    let spec = r#"{"name": "s",
        "grid": {"x0": 0, "x1": 8, "y0": 0, "y1": 8, "nx": 9, "ny": 9, "periodic_x": false, "periodic_y": false},
        "source": {"table": {"path": "s.bin", "has_derivatives": false}},
        "metadata": {"compact": false, "simply_connected": true}}"#;
    std::fs::write(d.join("s.json"), spec).unwrap();
    let (c, err) = code(&["analyze", "--chart", d.join("s.json").to_str().unwrap()]);
    assert_eq!(c, 2, "{err}");
    assert!(err.contains("not conformal"), "{err}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["verdict", "--gallery", "perturbed-torus", "--nx", "32", "--ny", "32", "--json"];
    let a = bonnetlab(&args).stdout;
    let b = bonnetlab(&args).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    for t in ["1", "3"] {
        let c = bonnetlab_env(&args, &[("BONNETLAB_THREADS", t)]);
        assert!(c.status.success());
        assert_eq!(c.stdout, a, "threads {t}");
    }

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let text = ok(&[
        "verdict",
        "--gallery",
        "perturbed-torus",
        "--nx",
        "32",
        "--ny",
        "32",
        "--report",
        file.to_str().unwrap(),
    ]);
    assert!(text.starts_with("inconclusive") || text.starts_with("no Bonnet mate"));
    assert_eq!(std::fs::read(&file).unwrap(), a);
}

#[test]
fn invalid_thread_count_is_a_usage_error() {
    let out = bonnetlab_env(&["gallery"], &[("BONNETLAB_THREADS", "0")]);
    assert_eq!(out.status.code(), Some(3));
}
