use std::path::PathBuf;
use std::process::{Command, Output};

fn hetnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hetnet")).args(args).output().expect("binary runs")
}

fn preset_path(name: &str) -> String {
    format!("{}/presets/{name}.cfg", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_scratch(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn figure_preset_writes_commented_csv() {
    let out = hetnet(&["figure", "fig3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# hetnet "));
    assert!(text.contains("# network.sigma_m = 250"));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("mode,content.gamma,g.d2d"));
    assert_eq!(body.len(), 1 + 2 * 7);
    assert!(!text.contains('\r'));
}

#[test]
fn json_mirror_has_same_rows() {
    let out = hetnet(&["assoc", "--config", &preset_path("fig3"), "--format", "json", "--mode", "baseline"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "assoc");
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    assert_eq!(v["rows"][0][0], "baseline");
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let base = std::fs::read_to_string(preset_path("fig3")).unwrap();
    for (name, text, field) in [
        ("missing.cfg", base.replace("sigma_m = 250", "sigma_mm = 250"), "network.sigma:"),
        ("unknown.cfg", base.replace("beta = 4", "beta = 4\nbeta_db = 6"), "network.beta_db"),
        ("range.cfg", base.replace("alpha = 0.1", "alpha = 1.5"), "network"),
    ] {
        let out = hetnet(&["assoc", "--config", &write_scratch(name, &text)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(field), "{name}");
    }

    assert_eq!(hetnet(&["assoc"]).status.code(), Some(2));
    assert_eq!(hetnet(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(hetnet(&["assoc", "--config", &preset_path("fig3"), "--mode", "both-ish"]).status.code(), Some(2));
    assert_eq!(hetnet(&["assoc", "--config", "/nonexistent/x.cfg"]).status.code(), Some(2));
}

#[test]
fn out_file_is_byte_identical_across_runs() {
    let a = scratch("traffic_a.csv");
    let b = scratch("traffic_b.csv");
    for p in [&a, &b] {
        let out =
            hetnet(&["traffic", "--config", &preset_path("fig3"), "--mode", "baseline", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn passing_validation_exits_0() {
    let out = hetnet(&["validate", "--config", &preset_path("fig3"), "--mode", "baseline", "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains(",fail"));
    assert!(text.contains("des.tier3.little"));
}

#[test]
fn failed_validation_exits_3() {
    let text = std::fs::read_to_string(preset_path("fig4"))
        .unwrap()
        .replace("rel_tol = 1e-4", "rel_tol = 1e-4\nkernel = \"unconditioned\"");
    let path = write_scratch("unconditioned.cfg", &text);
    let out = hetnet(&["validate", "--config", &path, "--mode", "clustered", "--samples", "20000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains(",fail"));
}
