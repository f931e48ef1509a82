use std::process::{Command, Output};

use serde_json::Value;

fn fricke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fricke"))
        .args(args)
        .current_dir(std::env::temp_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn hopf_charvar() {
    let out = fricke(&["charvar", "a,b | [a,b]"]);
    assert_eq!(status(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["hypersurface"], "x*y*z - x^2 - y^2 - z^2 + 4");
    assert_eq!(v["generators"][0]["poly"], "-x*y*z + x^2 + y^2 + z^2 - 4");
}

#[test]
fn hopf_census() {
    let out = fricke(&["census", "a,b | [a,b]", "--N", "6"]);
    assert_eq!(status(&out), 0);
    assert_eq!(json(&out)["eta"], serde_json::json!([1, 3, 4, 7, 6, 12]));
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        &["charvar", ""][..],
        &["census", "a,b | q"],
        &["census", "hopf", "--N", "0"],
        &["subst", "--map", "wobbly"],
        &["census", "hopf", "--frobnicate"],
    ] {
        let out = fricke(args);
        assert_eq!(status(&out), 2, "{args:?}");
        let v = json(&out);
        assert_eq!(v["error"]["kind"], "parse");
        assert_eq!(v["error"]["status"], 2);
    }
}

#[test]
fn budget_exceeded_exits_3() {
    let out = fricke(&["census", "hopf", "--N", "8", "--max-cosets", "4"]);
    assert_eq!(status(&out), 3);
    assert_eq!(json(&out)["error"]["kind"], "budget");
}

#[test]
fn output_is_deterministic() {
    let a = fricke(&["mic", "modular", "--dim", "3", "--jobs", "1"]);
    let b = fricke(&["mic", "modular", "--dim", "3", "--jobs", "3"]);
    assert_eq!(status(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["geometry"]["lines"]["count"], 12);
    assert!(v["fiducials"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["gram_rank"] == 9));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "input = L5a1\nN = 3\nmap = silver\nrepeats = 2\n").unwrap();
    let out = fricke(&["subst", "--config", cfg.to_str().unwrap(), "--N", "4"]);
    assert_eq!(status(&out), 0);
    let v = json(&out);
    assert_eq!(v["N"], 4);
    assert_eq!(v["invariant"], true);
    assert_eq!(
        v["analysis"]["pf_eigenvalue"].as_str().unwrap()[..12],
        *"2.4142135623"
    );

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = fricke(&["census", "hopf", "--config", cfg.to_str().unwrap()]);
    assert_eq!(status(&out), 2);
}

#[test]
fn surface_writes_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out_json = dir.path().join("hopf.json");
    let out = fricke(&[
        "surface",
        "--res",
        "16",
        "--box",
        "4",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert_eq!(status(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_json).unwrap()).unwrap();
    assert_eq!(v["singular_points"].as_array().unwrap().len(), 4);
    assert_eq!(v["singular_at_infinity"].as_array().unwrap().len(), 0);
    let mesh = std::fs::read_to_string(dir.path().join("hopf.obj")).unwrap();
    assert!(mesh.starts_with("v ") && mesh.contains("\nf "));

    let empty = dir.path().join("one.json");
    let out = fricke(&[
        "surface",
        "1",
        "--res",
        "8",
        "--out",
        empty.to_str().unwrap(),
    ]);
    assert_eq!(status(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&empty).unwrap()).unwrap();
    assert_eq!(v["mesh"]["faces"], 0);
    assert!(v["mesh"]["warning"].is_string());
}

#[test]
fn reproduce_table() {
    let out = fricke(&["reproduce"]);
    let v = json(&out);
    let rows = v["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let all = rows.iter().all(|r| r["pass"] == true);
    assert_eq!(status(&out), if all { 0 } else { 1 });
}
