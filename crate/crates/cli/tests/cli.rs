use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn data(name: &str) -> String {
    repo("data").join(name).to_string_lossy().into_owned()
}

fn harmonia(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonia")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn summary(out: &Path) -> Value {
    let text = std::fs::read_to_string(out.join("summary.json")).expect("summary written");
    serde_json::from_str(&text).expect("summary is JSON")
}

fn assert_schema(out: &Path) {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(repo("schemas/summary.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let s = summary(out);
    let errors: Vec<String> = validator.iter_errors(&s).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

fn assert_csv_headers(out: &Path) {
    for entry in std::fs::read_dir(out).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            let text = std::fs::read_to_string(&path).unwrap();
            let header = text.lines().next().unwrap_or_default();
            assert!(
                header.split(',').all(|h| h.chars().next().is_some_and(|c| c.is_ascii_alphabetic())),
                "{} starts with {header:?}",
                path.display()
            );
        }
    }
}

#[test]
fn analyze_enneper() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["analyze", "--config", &data("enneper.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &summary(dir.path())["results"];
    assert!((r["K"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["h_max"], 0.0);
    assert_schema(dir.path());
    assert_csv_headers(dir.path());
}

#[test]
fn analyze_harmonic_graph() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["analyze", "--config", &data("harmonic_graph.json"), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &summary(dir.path())["results"];
    assert!((r["K"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-9);
    // |h| = |z|^2 peaks on the rim
    assert!((r["h_max"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let svg = std::fs::read_to_string(dir.path().join("curvature.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<rect"));
    assert_schema(dir.path());
}

#[test]
fn json_format_replaces_tables() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["analyze", "--config", &data("enneper.json"), "--grid", "9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("grid.csv").exists());
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("grid.json")).unwrap()).unwrap();
    assert!(rows.as_array().is_some_and(|r| !r.is_empty() && r[0].is_object()));
    assert_eq!(summary(dir.path())["results"]["resolution"], 9);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dimension\": 3,").unwrap();
    let out = harmonia(&dir.path().join("out"), &["analyze", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed surface config") && err.contains("line"), "{err}");

    let missing = harmonia(&dir.path().join("out"), &["analyze", "--config", "/nonexistent/surface.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let no_flag = harmonia(&dir.path().join("out"), &["analyze"]);
    assert_eq!(no_flag.status.code(), Some(2));
}

#[test]
fn degenerate_surface_exits_3() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["analyze", "--config", &data("degenerate.json")]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_subset() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["verify", "--only", "geodesy"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 3, "{stdout}");
    let r = &summary(dir.path())["results"];
    let ids: Vec<u64> = r["criteria"].as_array().unwrap().iter().map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, vec![4, 13, 14]);
    assert_schema(dir.path());
    assert_csv_headers(dir.path());

    let unknown = harmonia(dir.path(), &["verify", "--only", "poetry"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn verify_flags_corrupted_weights() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(
        dir.path(),
        &["verify", "--only", "8", "--planes", &data("five_planes.json"), "--weights", &data("corrupted_weights.json")],
    );
    assert_eq!(out.status.code(), Some(1));
    let s = summary(dir.path());
    assert_eq!(s["status"], "fail");
    let bullets = s["results"]["supplied_weights"]["bullets"].as_array().unwrap();
    let failed: Vec<u64> =
        bullets.iter().filter(|b| b["pass"] == false).map(|b| b["bullet"].as_u64().unwrap()).collect();
    assert_eq!(failed, vec![2]);
    assert_schema(dir.path());
}

#[test]
fn nochka_general_position() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(dir.path(), &["nochka", "--planes", &data("five_planes.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = &summary(dir.path())["results"];
    assert!(r["omega"].as_array().unwrap().iter().all(|w| (w.as_f64().unwrap() - 1.0).abs() < 1e-9));
    assert!((r["theta"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    // the written weights pass verification against the same planes
    let weights = dir.path().join("weights.json");
    let again = harmonia(
        &dir.path().join("check"),
        &["verify", "--only", "nochka", "--planes", &data("five_planes.json"), "--weights", weights.to_str().unwrap()],
    );
    assert_eq!(again.status.code(), Some(0));
    assert_schema(dir.path());
}

#[test]
fn defect_with_certificates() {
    let dir = TempDir::new().unwrap();
    let out = harmonia(
        dir.path(),
        &[
            "defect",
            "--config",
            &data("line.json"),
            "--planes",
            &data("line_planes.json"),
            "--certificates",
            &data("line_certificates.json"),
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &summary(dir.path())["results"];
    // the plane z_0 = 0 is omitted by (1, z)
    assert_eq!(r["modified"][0]["plane"], 0);
    assert_eq!(r["modified"][0]["delta_h"], 1.0);
    assert_eq!(r["sum"], 1.0);
    let csv = std::fs::read_to_string(dir.path().join("defect.csv")).unwrap();
    assert!(csv.starts_with("hyperplane,delta,method\n") && csv.contains("0,1,certificate"));
    assert_schema(dir.path());
}

#[test]
fn geodesic_flat_center() {
    let dir = TempDir::new().unwrap();
    let flat = dir.path().join("flat.json");
    std::fs::write(
        &flat,
        r#"{"dimension": 3, "phi": [[[0.5, 0]], [[0, -0.5]], []], "domain": {"center": [0, 0], "radius": 1, "grid_resolution": 65}}"#,
    )
    .unwrap();
    let out = harmonia(&dir.path().join("out"), &["geodesic", "--config", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &summary(&dir.path().join("out"))["results"];
    assert!((r["d_center"].as_f64().unwrap() - 1.0).abs() < 0.03);
    assert_eq!(r["metric"], "induced");
    assert_schema(&dir.path().join("out"));
    assert_csv_headers(&dir.path().join("out"));
}

#[test]
fn curvature_scan_accepts_and_rejects_directions() {
    let dir = TempDir::new().unwrap();
    let ok = harmonia(
        dir.path(),
        &["curvature-scan", "--config", &data("harmonic_graph.json"), "--directions", &data("equator_directions.json")],
    );
    assert_eq!(ok.status.code(), Some(0));
    let r = &summary(dir.path())["results"];
    assert!(r["C"].as_f64().unwrap().is_finite() && r["C"].as_f64().unwrap() > 0.0);
    assert_schema(dir.path());

    let bad = harmonia(
        &dir.path().join("bad"),
        &["curvature-scan", "--config", &data("harmonic_graph.json"), "--directions", &data("cube_directions.json")],
    );
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("precondition failed") && err.contains("common plane"), "{err}");
}

#[test]
fn outputs_are_deterministic() {
    let runs: Vec<(&str, Vec<String>)> = vec![
        ("analyze", vec!["--config".into(), data("harmonic_graph.json"), "--format".into(), "svg".into()]),
        ("verify", vec!["--only".into(), "nochka".into()]),
        ("geodesic", vec!["--config".into(), data("enneper.json"), "--metric".into(), "klotz".into()]),
    ];
    for (command, args) in runs {
        let dirs = [TempDir::new().unwrap(), TempDir::new().unwrap()];
        for (i, d) in dirs.iter().enumerate() {
            let threads = if i == 0 { "1" } else { "4" };
            let out = Command::new(env!("CARGO_BIN_EXE_harmonia"))
                .arg(command)
                .args(&args)
                .arg("--out")
                .arg(d.path())
                .env("HARMONIA_THREADS", threads)
                .output()
                .unwrap();
            assert_eq!(out.status.code(), Some(0), "{command}");
        }
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for name in names {
            let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
            let b = std::fs::read(dirs[1].path().join(&name)).unwrap();
            assert!(a == b, "{command}: {name:?} differs between runs");
        }
    }
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_harmonia"))
        .args(["nochka", "--planes", &data("five_planes.json"), "--out"])
        .arg(dir.path())
        .env("HARMONIA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_documents_exit_codes() {
    let out = Command::new(env!("CARGO_BIN_EXE_harmonia")).arg("--help").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Exit codes") && text.contains("HARMONIA_THREADS"));
}
