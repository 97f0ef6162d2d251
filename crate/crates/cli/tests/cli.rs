use std::process::Command;

fn amoeba(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_amoeba")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn area_of_the_line() {
    let (code, out) = amoeba(&["area", "-p", "1+x+y", "--tol", "0.02"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let area = v["area"].as_f64().unwrap();
    assert!((area - 4.9348).abs() < 0.1, "{area}");
    assert_eq!(v["converged"], true);
}

#[test]
fn input_errors_exit_with_2() {
    assert_eq!(amoeba(&["area", "-p", "1+x+"]).0, 2);
    assert_eq!(amoeba(&["area", "-p", "x*y"]).0, 2);
    assert_eq!(amoeba(&["ronkin", "-p", "1+x+y", "--at", "1"]).0, 2);
    assert_eq!(amoeba(&["render", "-p", "1+x+y", "--what", "picture", "--out", "x.svg"]).0, 2);
}

#[test]
fn ronkin_outside_reports_the_order() {
    let (code, out) = amoeba(&["ronkin", "-p", "1+x+y", "--at", "3,-4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"]["j"], 1);
    assert_eq!(v["order"]["k"], 0);
    assert!((v["N"].as_f64().unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn harnack_verify_and_search() {
    let (code, out) = amoeba(&["harnack", "verify", "-p", "1+x+y-x*y"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["verdict"], "Harnack");
    let (code, out) = amoeba(&["harnack", "search", "--polygon", "(0,0),(1,0),(0,1)", "--name", "tri"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["name"], "tri");
    assert_eq!(v["components"], 3);
}

#[test]
fn render_writes_svg_and_sidecar() {
    let dir = std::env::temp_dir().join(format!("amoeba-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("line.svg");
    let (code, _) = amoeba(&[
        "render", "-p", "1+x+y", "--what", "overlay", "--out", svg.to_str().unwrap(), "--resolution", "64",
    ]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(svg.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["what"], "overlay");
    assert_eq!(side["locus_polylines"], 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fast_report_is_deterministic() {
    let a = amoeba(&["report", "-p", "1+x+y", "--profile", "fast"]);
    let b = amoeba(&["report", "-p", "1+x+y", "--profile", "fast"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    assert!(a.1.contains("ConsistentMaximal"));
}

#[test]
fn thread_cap_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .env("AMOEBA_THREADS", "1")
        .args(["area", "-p", "1+x+y"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
