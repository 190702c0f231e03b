use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nilflat::formats::{self, parse_decay_csv};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn nilflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilflat")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    for f in ["h3.json", "z2.json", "z3.json", "n4.json", "h5.json", "h3xz.json"] {
        let o = nilflat(&["validate", path(&data(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stderr(&o));
    }
    let o = nilflat(&["validate", path(&data("jacobi_bad.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(e1, e2, e3)"), "{}", stderr(&o));

    let o = nilflat(&["validate", path(&data("so3.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not nilpotent"));

    let o = nilflat(&["validate", path(&data("n4_unit.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exp(e2) exp(e1)"), "{}", stderr(&o));

    let o = nilflat(&["validate", path(&data("malformed.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let o = nilflat(&["validate", path(&data("missing.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn peel_examples() {
    let o = nilflat(&["peel", path(&data("h3.json"))]);
    assert!(o.status.success());
    let text = stdout(&o);
    let tower = formats::parse_tower(&text).unwrap();
    assert_eq!(tower.len(), 3);
    assert_eq!(tower.steps[0].cocycle.entries().map(|(i, j, c)| (i, j, c.to_string())).collect::<Vec<_>>(), vec![(0, 1, "1".to_string())]);
    assert_eq!(formats::tower_to_json(&tower).unwrap(), text);

    let o = nilflat(&["peel", path(&data("z3.json"))]);
    let tower = formats::parse_tower(&stdout(&o)).unwrap();
    assert_eq!(tower.len(), 3);
    assert!(tower.steps.iter().all(|s| s.cocycle.is_zero()));

    let o = nilflat(&["peel", path(&data("n4.json"))]);
    assert_eq!(formats::parse_tower(&stdout(&o)).unwrap().len(), 4);

    let a = nilflat(&["peel", path(&data("h5.json"))]);
    let b = nilflat(&["peel", path(&data("h5.json"))]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extend_examples() {
    let o = nilflat(&["extend", path(&data("z2.json")), path(&data("omega_z2_1.json"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let h3 = formats::parse_algebra(&std::fs::read_to_string(data("h3.json")).unwrap()).unwrap().into_algebra().unwrap();
    assert_eq!(stdout(&o), formats::algebra_to_json(&h3).unwrap());

    let o = nilflat(&["extend", path(&data("z2.json")), path(&data("omega_z2_0.json"))]);
    let z3 = formats::parse_algebra(&stdout(&o)).unwrap().into_algebra().unwrap();
    assert!(z3.is_abelian() && z3.dim() == 3);

    let o = nilflat(&["extend", path(&data("n4.json")), path(&data("omega_n4_bad.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(e1, e3, e2)"), "{}", stderr(&o));

    let o = nilflat(&["extend", path(&data("h3.json")), path(&data("omega_z2_1.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extend_inverts_peel_on_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["h3.json", "z2.json", "z3.json", "n4.json", "h5.json", "h3xz.json"] {
        let original = std::fs::read_to_string(data(f)).unwrap();
        let lattice = formats::parse_lattice(&original).unwrap();
        let canonical = formats::algebra_to_json(lattice.algebra()).unwrap();

        let tower = formats::parse_tower(&stdout(&nilflat(&["peel", path(&data(f))]))).unwrap();
        let top = &tower.steps[0];
        let base = dir.path().join("base.json");
        let cocycle = dir.path().join("cocycle.json");
        std::fs::write(&base, formats::algebra_to_json(top.base.algebra()).unwrap()).unwrap();
        std::fs::write(&cocycle, formats::cocycle_to_json(&top.cocycle).unwrap()).unwrap();
        let out = dir.path().join("total.json");
        let o = nilflat(&["extend", path(&base), path(&cocycle), "--out", path(&out)]);
        assert!(o.status.success(), "{f}: {}", stderr(&o));
        assert_eq!(std::fs::read_to_string(&out).unwrap(), canonical, "{f}");
    }
}

#[test]
fn curvature_examples() {
    let o = nilflat(&["curvature", path(&data("h3.json")), "--samples", "2000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = parse_decay_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 7);
    let row = rows.iter().find(|r| r.t == 1e-4).unwrap();
    assert!((row.sup_abs_k - 7.5e-5).abs() < 1e-9);
    assert!(rows.windows(2).all(|w| w[1].diam_bound <= w[0].diam_bound));

    let o = nilflat(&["curvature", path(&data("z3.json")), "--samples", "500"]);
    let rows = parse_decay_csv(&stdout(&o)).unwrap();
    assert!(rows.iter().all(|r| r.sup_abs_k == 0.0));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = nilflat(&[
        "curvature",
        path(&data("h3.json")),
        "--metric",
        path(&data("metric_tilted3.json")),
        "--t-max",
        "0.5",
        "--t-min",
        "0.005",
        "--t-points",
        "3",
        "--samples",
        "500",
        "--seed",
        "4",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(parse_decay_csv(&std::fs::read_to_string(&out).unwrap()).unwrap().len(), 3);
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(summary["seed"], 4);
    assert_eq!(summary["sample_count"], 500);
    assert_eq!(summary["config"]["t_grid"]["points"], 3);
    assert!(summary["C"].as_f64().unwrap() > 0.0);
}

#[test]
fn curvature_json_summary() {
    let o = nilflat(&["curvature", path(&data("h3.json")), "--samples", "500", "--format", "json"]);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fit = summary["exponent_fit"].as_f64().unwrap();
    assert!((fit - 1.0).abs() < 0.02);
}

#[test]
fn certify_examples() {
    let o = nilflat(&["certify", path(&data("z3.json")), "--eps", "1e-6", "--samples", "500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["schedule"], serde_json::json!([1.0, 1.0, 1.0]));
    assert_eq!(v["certificate"]["achieved_sup"], 0.0);

    let o = nilflat(&["certify", path(&data("h3.json")), "--eps", "0.01", "--samples", "2000"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t_top = v["certificate"]["schedule"][0].as_f64().unwrap();
    assert!(t_top <= 0.0134);
    assert_eq!(v["config"]["eps"], 0.01);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(nilflat(&["certify", path(&data("h3.json")), "--eps", "-1"]).status.code(), Some(1));
    assert_eq!(nilflat(&["certify", path(&data("h3.json"))]).status.code(), Some(1));
    assert_eq!(nilflat(&["curvature", path(&data("h3.json")), "--t-min", "2"]).status.code(), Some(1));
    assert_eq!(nilflat(&["curvature", path(&data("h3.json")), "--samples", "0"]).status.code(), Some(1));
    assert_eq!(nilflat(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(nilflat(&["--help"]).status.code(), Some(0));
}

#[test]
fn metric_dimension_mismatch_is_invalid() {
    let o = nilflat(&["curvature", path(&data("n4.json")), "--metric", path(&data("metric_tilted3.json"))]);
    assert_eq!(o.status.code(), Some(2));
}
