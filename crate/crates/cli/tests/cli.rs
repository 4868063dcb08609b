use std::fs;
use std::process::{Command, Output};

fn sweepadv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweepadv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn as_f64(v: &serde_json::Value) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn lists_problems() {
    let out = sweepadv(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["sine1d", "cosine1d", "diag2d", "deform2d", "rotation2d", "optimizer1d"] {
        assert!(text.lines().any(|l| l == name), "{name}");
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(sweepadv(&["--problem", "nosuch"]).status.code(), Some(2));
    assert_eq!(
        sweepadv(&["--problem", "sine1d", "--scheme", "nc3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sweepadv(&["--problem", "cosine1d", "--alpha", "courant"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sweepadv(&["--problem", "sine1d", "--alpha", "fixed:abc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sweepadv(&["--problem", "sine1d", "--alpha", "-0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sweepadv(&["--problem", "sine1d", "--emit", "min"]).status.code(),
        Some(2)
    );
    assert_eq!(
        sweepadv(&["--problem", "sine1d", "--ladder", "40-1"]).status.code(),
        Some(2)
    );
    assert_eq!(sweepadv(&[]).status.code(), Some(2));
}

#[test]
fn sine_ladder_and_determinism() {
    let args = [
        "--problem",
        "sine1d",
        "--scheme",
        "nc2",
        "--alpha",
        "courant",
        "--ladder",
        "40:1,80:2",
    ];
    let a = sweepadv(&args);
    let b = sweepadv(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let rows = v["ladder"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["eoc"].is_null());
    let e0 = as_f64(&rows[0]["value"]);
    assert!((e0 - 0.556925).abs() / 0.556925 < 0.02, "{e0}");
    assert!(as_f64(&rows[1]["eoc"]) > 2.0);
}

#[test]
fn numbers_carry_seventeen_digits() {
    let out = sweepadv(&["--problem", "sine1d", "--I", "40", "--N", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"global_error\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let digits = mantissa.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(digits.len(), 17, "{mantissa}");
}

#[test]
fn large_courant_single_step() {
    let v = json(&sweepadv(&[
        "--problem",
        "sine1d",
        "--I",
        "320",
        "--N",
        "1",
        "--scheme",
        "nc2",
        "--alpha",
        "0.5",
    ]));
    assert!((as_f64(&v["max_courant"]) - 30.5).abs() < 0.2);
    assert!(as_f64(&v["max_abs"]) <= 1.05);
}

#[test]
fn emits_series_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = sweepadv(&[
        "--problem",
        "deform2d",
        "--init",
        "gaussian",
        "--I",
        "10",
        "--N",
        "4",
        "--alpha",
        "0.5",
        "--emit",
        "min,mass,fields",
        "--out",
        out_dir,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let min = fs::read_to_string(dir.path().join("min.csv")).unwrap();
    assert_eq!(min.lines().next(), Some("n,t,value"));
    assert_eq!(min.lines().count(), 6);
    let mass = fs::read_to_string(dir.path().join("mass.csv")).unwrap();
    assert_eq!(mass.lines().count(), 6);
    let level = fs::read_to_string(dir.path().join("level_00004.csv")).unwrap();
    assert_eq!(level.lines().next(), Some("i,j,x,y,value"));
    assert_eq!(level.lines().count(), 1 + 11 * 11);
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn one_dimensional_field_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = sweepadv(&[
        "--problem",
        "cosine1d",
        "--I",
        "8",
        "--N",
        "2",
        "--alpha",
        "1",
        "--emit",
        "fields",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let level = fs::read_to_string(dir.path().join("level_00002.csv")).unwrap();
    assert_eq!(level.lines().next(), Some("i,x,value"));
    assert_eq!(level.lines().count(), 9);
    let v = json(&out);
    assert!(as_f64(&v["mass_drift"]) < 1e-13);
}

#[test]
fn optimizer_field_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = sweepadv(&[
        "--problem",
        "optimizer1d",
        "--I",
        "20",
        "--N",
        "10",
        "--optimize",
        "--eta",
        "50",
        "--out",
        d,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let opt = &v["optimizer"];
    assert!(as_f64(&opt["j_after"]) < as_f64(&opt["j_before"]));
    let field = dir.path().join("alpha_optimized.csv");
    assert!(fs::read_to_string(&field).unwrap().starts_with("n,i,value"));

    // A constant 0.5 field reproduces the fixed policy.
    let half = dir.path().join("half.csv");
    let mut text = String::from("n,i,value\n");
    for n in 0..10 {
        for i in 0..21 {
            text.push_str(&format!("{n},{i},0.5\n"));
        }
    }
    fs::write(&half, text).unwrap();
    let a = json(&sweepadv(&[
        "--problem",
        "optimizer1d",
        "--I",
        "20",
        "--N",
        "10",
        "--alpha",
        &format!("field:{}", half.display()),
    ]));
    let b = json(&sweepadv(&[
        "--problem",
        "optimizer1d",
        "--I",
        "20",
        "--N",
        "10",
        "--alpha",
        "0.5",
    ]));
    assert_eq!(a["final_error"], b["final_error"]);
    assert!((as_f64(&opt["e_before"]) - as_f64(&b["final_error"])).abs() < 1e-15);

    let short = dir.path().join("short.csv");
    fs::write(&short, "n,i,value\n0,0,0.5\n").unwrap();
    let bad = sweepadv(&[
        "--problem",
        "optimizer1d",
        "--I",
        "20",
        "--N",
        "10",
        "--alpha",
        &format!("field:{}", short.display()),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
