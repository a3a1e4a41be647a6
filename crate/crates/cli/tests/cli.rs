use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn herglotz(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_herglotz"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("HERGLOTZ_THREADS")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

fn check_passes(m: &Value, name: &str) -> bool {
    m["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))["pass"]
        .as_bool()
        .unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr is not JSON: {}", String::from_utf8_lossy(&o.stderr)))
}

#[test]
fn gamma_power_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["gamma", "--d", "3", "--symbol", "power:mu=2", "--nmax", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("gamma.csv"));
    assert_eq!(rows.len(), 21);
    let g0: f64 = rows[0][2].parse().unwrap();
    assert!((g0 - std::f64::consts::PI).abs() <= 1e-8);
    for row in &rows {
        let rel: f64 = row[6].parse().unwrap();
        assert!(rel <= 1e-6, "{row:?}");
        assert!(row[7].is_empty());
    }
    let m = manifest(dir.path());
    assert_eq!(m["schema"], "herglotz.manifest/1");
    assert_eq!(m["config"]["symbol"], "power:mu=2");
    assert_eq!(m["outputs"][0]["file"], "gamma.csv");
    assert!(check_passes(&m, "oracle_max_rel_error"));
}

#[test]
fn chirp_reports_both_phases() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["gamma", "--symbol", "chirp", "--nmax", "12"]);
    assert!(o.status.success());
    let m = manifest(dir.path());
    assert!(check_passes(&m, "oracle_max_rel_error"));
    assert!(!check_passes(&m, "oracle_alt_max_rel_error"));
    let rows = csv_rows(&dir.path().join("gamma.csv"));
    assert!(rows.iter().all(|r| !r[7].is_empty()));
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["gamma", "--d", "2", "--symbol", "gauss:s=1", "--nmax", "10"];
    assert!(herglotz(a.path(), &args).status.success());
    assert!(herglotz(b.path(), &args).status.success());
    for f in ["gamma.csv", "manifest.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn json_format_writes_json_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["--format", "json", "gamma", "--d", "2", "--symbol", "indicator:rho=1", "--nmax", "4"]);
    assert!(o.status.success());
    let t: Value = serde_json::from_slice(&std::fs::read(dir.path().join("gamma.json")).unwrap()).unwrap();
    assert_eq!(t["schema"], "herglotz.gamma/1");
    assert_eq!(t["rows"].as_array().unwrap().len(), 5);
    assert!(t["rows"][0]["gamma"].as_f64().unwrap() > 0.0);
    assert_eq!(manifest(dir.path())["config"]["format"], "json");
}

#[test]
fn unknown_symbol_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["power:nu=2", "gauss", "wave", "sphere:cos"] {
        let o = herglotz(dir.path(), &["gamma", "--symbol", bad]);
        assert_eq!(o.status.code(), Some(1), "{bad}");
        let e = stderr_json(&o);
        assert_eq!(e["schema"], "herglotz.error/1");
        assert_eq!(e["kind"], "invalid_argument", "{bad}");
    }
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn bad_dimension_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["kernel", "--d", "4"]);
    assert_eq!(stderr_json(&o)["kind"], "domain");
}

#[test]
fn spectra_agree_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["spectrum", "--d", "2", "--symbol", "gauss:s=1", "--grid", "256", "--nmax", "32"]);
    assert!(o.status.success());
    let rows = csv_rows(&dir.path().join("spectrum.csv"));
    for row in &rows[..20] {
        let gap: f64 = row[4].parse().unwrap();
        assert!(gap <= 1e-4, "{row:?}");
    }
    let m = manifest(dir.path());
    assert!(check_passes(&m, "nodal_vs_diag_top"));
    assert!(check_passes(&m, "circle_vs_diag_top"));
}

#[test]
fn spectrum_rejects_too_few_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["spectrum", "--nmax", "4", "--grid", "16"]);
    assert_eq!(stderr_json(&o)["kind"], "invalid_argument");
}

#[test]
fn kernel_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert!(herglotz(dir.path(), &["kernel", "--d", "3"]).status.success());
    let rows = csv_rows(&dir.path().join("kernel.csv"));
    assert_eq!(rows.len(), 201);
    // sin(t) / (2 pi t) at t = 0.1 * 10
    let k: f64 = rows[10][1].parse().unwrap();
    assert!((k - 1f64.sin() / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
    assert!(rows.last().unwrap()[2].is_empty());
    let m = manifest(dir.path());
    assert!(check_passes(&m, "series_max_abs_error"));
    assert!(check_passes(&m, "reproduce_max_residual"));
    assert_eq!(csv_rows(&dir.path().join("reproduce.csv")).len(), 49);
}

#[test]
fn degenerate_forms_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["degenerate", "--d", "2", "--symbol", "gauss:s=1", "--R0", "3", "--nmax", "0", "--R", "20", "--nodes-per-unit", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(dir.path());
    assert!(check_passes(&m, "degenerate_max_over_l1"));
    assert!(m["summary"]["full_max_over_l1"].as_f64().unwrap() >= 1e-2);
}

#[test]
fn bounds_report_and_norm_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["bounds", "--d", "3", "--symbol", "power:mu=2", "--grid", "8"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&std::fs::read(dir.path().join("bounds.json")).unwrap()).unwrap();
    assert_eq!(r["schema"], "herglotz.bounds/1");
    assert!(r["bounds"]["operator_norm_bound"].as_f64().unwrap() > 0.0);
    assert!(check_passes(&manifest(dir.path()), "nodal_norm_over_bound"));
}

#[test]
fn module_flags_give_error_json_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["bounds", "--d", "2", "--symbol", "chirp"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["kind"], "module_flags");
    assert!(!e["flags"].as_array().unwrap().is_empty());
    // artifacts are still written for inspection
    assert_eq!(manifest(dir.path())["flags"], e["flags"]);
}

#[test]
fn hconv_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = herglotz(dir.path(), &["hconv", "--ladder", "4,8", "--R", "400,800"]);
    assert!(o.status.success());
    let m = manifest(dir.path());
    for c in ["nodal_commutator", "nodal_product_defect", "nodal_idempotence_defect", "factorization_residual_first"] {
        assert!(check_passes(&m, c), "{c}");
    }
    let rows = csv_rows(&dir.path().join("factorization.csv"));
    let ratio: f64 = rows[1][2].parse().unwrap();
    assert!((0.3..=0.7).contains(&ratio));
    let r: Value = serde_json::from_slice(&std::fs::read(dir.path().join("hconv.json")).unwrap()).unwrap();
    assert_eq!(r["norm_ladder"].as_array().unwrap().len(), 2);
}

#[test]
fn isometry_and_far_field_ladders() {
    let dir = tempfile::tempdir().unwrap();
    assert!(herglotz(dir.path(), &["isometry", "--fields", "0,1;1,2", "--R", "500,1000"]).status.success());
    let m = manifest(dir.path());
    assert!(check_passes(&m, "deviation_first_radius"));
    assert!(check_passes(&m, "deviation_ratio"));
    assert_eq!(csv_rows(&dir.path().join("isometry.csv")).len(), 4);

    let dir = tempfile::tempdir().unwrap();
    assert!(herglotz(dir.path(), &["farfield", "--d", "3", "--fields", "1,1;2,3"]).status.success());
    assert!(check_passes(&manifest(dir.path()), "residual_ratio"));
}

#[test]
fn thread_variable_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_herglotz"))
            .arg("--out")
            .arg(dir.path())
            .args(["kernel", "--samples", "3"])
            .env("HERGLOTZ_THREADS", v)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    let o = run("0");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["kind"], "runtime");
}
