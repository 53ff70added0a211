use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const Z2: &str = r#"{"kind":"monoid","name":"Z2","order":2,"table":[[0,1],[1,0]],"unit":0}"#;
const Z4: &str = r#"{"kind":"monoid","name":"Z4","order":4,"table":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],"unit":0}"#;
const JOIN: &str = r#"{"kind":"monoid","name":"B","order":2,"table":[[0,1],[1,1]],"unit":0}"#;
const NABLA: &str = r#"{"pairs":[[0,0],[0,1],[1,0],[1,1]]}"#;

fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sigma-lab-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigma-lab"))
        .args(args)
        .env_remove("SIGMA_LAB_CATALOG")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn canonical_form_is_byte_identical() {
    let dir = scratch("canonical");
    let f = write(&dir, "z2.json", &format!("{Z2}\n"));
    let out = run(&["--format", "text", "validate", "--canonical", f.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{Z2}\n"));
}

#[test]
fn unknown_field_is_a_usage_error() {
    let dir = scratch("unknown");
    let f = write(&dir, "bad.json", r#"{"kind":"monoid","name":"Z2","order":2,"table":[[0,1],[1,0]],"unit":0,"x":1}"#);
    let out = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn dangling_hom_reference_is_rejected() {
    let dir = scratch("dangling");
    let f = write(&dir, "hom.json", &format!(r#"[{Z2},{{"kind":"hom","source":"Z2","target":"Z3","map":[0,0]}}]"#));
    let out = run(&["validate", f.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Z3"));
}

#[test]
fn bad_flags_exit_with_two() {
    assert_eq!(code(&run(&["suite", "--no-such-flag"])), 2);
    assert_eq!(code(&run(&["suite", "--max-order", "9", "--modules", ""])), 2);
    let dir = scratch("config");
    let cfg = write(&dir, "cfg.json", r#"{"maxOrder":2,"colour":"blue"}"#);
    assert_eq!(code(&run(&["suite", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn connector_failure_exits_with_one() {
    let dir = scratch("connector");
    let x = write(&dir, "b.json", JOIN);
    let r = write(&dir, "nabla.json", NABLA);
    let (x, r) = (x.to_str().unwrap(), r.to_str().unwrap());
    let out = run(&["connector", x, "--R", r, "--S", r]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["connector"].is_null());
}

#[test]
fn group_connector_succeeds() {
    let dir = scratch("group");
    let x = write(&dir, "z2.json", Z2);
    let r = write(&dir, "nabla.json", NABLA);
    let (x, r) = (x.to_str().unwrap(), r.to_str().unwrap());
    let out = run(&["connector", x, "--R", r, "--S", r]);
    assert_eq!(code(&out), 0);
    // p(x, y, z) = x - y + z on Z2
    for row in json(&out)["connector"].as_array().unwrap() {
        let t: Vec<u64> = row.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        assert_eq!(t[3], (t[0] + t[1] + t[2]) % 2);
    }
}

#[test]
fn suite_module_passes_and_is_deterministic() {
    let args = ["suite", "--kind", "mon", "--sigma", "schreier", "--max-order", "3", "--modules", "maltsev"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    let strip = |o: &Output| {
        let mut v = json(o);
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("wallTime");
        }
        v
    };
    let (ja, jb) = (strip(&a), strip(&b));
    assert_eq!(ja, jb);
    assert_eq!(ja["verdict"], "pass");
    assert!(ja["checks"][0]["instances"].as_u64().unwrap() > 0);
}

#[test]
fn out_file_matches_stdout() {
    let dir = scratch("out");
    let path = dir.join("report.json");
    let out = run(&["--out", path.to_str().unwrap(), "core", "--kind", "qnd", "--max-order", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn doubling_z4_gives_the_split_extension() {
    let dir = scratch("baer");
    let ext = format!(r#"[{Z4},{Z2},{{"kind":"extension","f":{{"kind":"hom","source":"Z4","target":"Z2","map":[0,1,0,1]}}}}]"#);
    let e = write(&dir, "z4.json", &ext);
    let e = e.to_str().unwrap();
    let out = run(&["baer", "--ext1", e, "--ext2", e]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["split"], true);
    assert_eq!(v["order"], 4);
}

#[test]
fn ext_table_of_z2_has_two_classes() {
    let dir = scratch("ext");
    let y = write(&dir, "z2.json", Z2);
    let y = y.to_str().unwrap();
    let out = run(&["ext-table", "--base", y, "--fiber", y]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    let z = v["zero"].as_u64().unwrap() as usize;
    let other = 1 - z;
    assert_eq!(v["sum"][other][other], z);
    assert_eq!(v["sum"][z][other], other);
}
