use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    out: PathBuf,
}

fn run(dir: &Path, name: &str, config: &str, extra: &[&str]) -> Run {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, config).unwrap();
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_lieharm"))
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .status()
        .unwrap();
    Run { code: status.code().unwrap(), out }
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn selftest_on_circle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), "self", r#"{"task":"selftest","group":"torus1","cutoffs":[64],"seed":3}"#, &[]);
    assert_eq!(r.code, 0);
    let m = manifest(&r.out);
    assert_eq!(m["status"], "ok");
    assert!(m["summary"]["plancherel_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(m["seed"], 3);
    let csv = std::fs::read_to_string(r.out.join("selftest.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn selftest_on_su2_passes() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), "self", r#"{"task":"selftest","group":"su2","cutoffs":[6]}"#, &[]);
    assert_eq!(r.code, 0);
}

#[test]
fn wave_symbol_exceeds_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"check-symbol","group":"torus1","cutoffs":[32,64,128],
        "symbols":[{"type":"wave"}],"tolerances":{"marcinkiewicz":10}}"#;
    let r = run(dir.path(), "wave", config, &[]);
    assert_eq!(r.code, 2);
    assert_eq!(manifest(&r.out)["status"], "tolerance-violated");
    let csv = std::fs::read_to_string(r.out.join("check-symbol.csv")).unwrap();
    let c1: Vec<f64> = csv
        .lines()
        .filter(|l| l.contains("alpha=(1)"))
        .map(|l| l.rsplit(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(c1.len(), 3);
    assert!(c1.windows(2).all(|w| w[1] > 1.5 * w[0]), "{c1:?}");
}

#[test]
fn malformed_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), "bad", r#"{"task":"selftest","group":"torus1""#, &[]);
    assert_eq!(r.code, 1);
    assert!(!r.out.exists());
    let r = run(dir.path(), "unknown", r#"{"task":"selftest","group":"torus1","cutoffs":[8],"extra":0}"#, &[]);
    assert_eq!(r.code, 1);
    assert!(!r.out.exists());
    let r = run(dir.path(), "tol", r#"{"task":"selftest","group":"torus1","cutoffs":[8]}"#, &["--tol", "bogus=1"]);
    assert_eq!(r.code, 1);
}

#[test]
fn runtime_error_leaves_failed_marker() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"check-symbol","group":"torus1","cutoffs":[1.5],"symbols":[{"type":"identity"}],
        "check":{"conditions":["marcinkiewicz","weak_marcinkiewicz"]}}"#;
    let r = run(dir.path(), "margin", config, &[]);
    assert_eq!(r.code, 1);
    let csv = std::fs::read_to_string(r.out.join("check-symbol.csv")).unwrap();
    assert!(csv.lines().any(|l| l.contains(",marcinkiewicz,headline,")));
    assert!(csv.lines().last().unwrap().starts_with("failed,"));
    assert_eq!(manifest(&r.out)["status"], "failed");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"bound-sweep","group":"torus1","cutoffs":[16,32],
        "symbols":[{"type":"power_it","t":5}],"norms":[{"r":0,"p":4,"q":2},{"r":0,"p":1,"q":2}],
        "ensemble":{"kind":"translated-windows","count":6},"seed":11}"#;
    let a = run(dir.path(), "a", config, &[]);
    let b = run(dir.path(), "b", config, &[]);
    assert_eq!(a.code, 0);
    let read = |r: &Run, f: &str| std::fs::read(r.out.join(f)).unwrap();
    assert_eq!(read(&a, "bound-sweep.csv"), read(&b, "bound-sweep.csv"));
    let strip = |r: &Run| {
        let mut m = manifest(&r.out);
        m["config"]["output"] = Value::Null;
        m
    };
    assert_eq!(strip(&a), strip(&b));
    let c = run(dir.path(), "c", config, &["--seed", "12"]);
    assert_ne!(read(&a, "bound-sweep.csv"), read(&c, "bound-sweep.csv"));
    assert_eq!(manifest(&c.out)["seed"], 12);
}

#[test]
fn json_reports_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"transform","group":"su2","cutoffs":[4],"format":"json",
        "ensemble":{"kind":"gaussian-coefficients","count":3}}"#;
    let r = run(dir.path(), "json", config, &[]);
    assert_eq!(r.code, 0);
    let rows: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(r.out.join("transform.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!(row["roundtrip_error"].as_f64().unwrap() < 1e-10);
        assert_eq!(row["passed"], Value::Bool(true));
    }
}

#[test]
fn tolerance_override_can_fail_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"transform","group":"torus2","cutoffs":[8],
        "ensemble":{"kind":"gaussian-coefficients","count":2}}"#;
    let r = run(dir.path(), "strict", config, &["--tol", "roundtrip=0"]);
    let m = manifest(&r.out);
    let worst = m["summary"]["max_roundtrip_error"].as_f64().unwrap();
    assert_eq!(r.code, if worst > 0.0 { 2 } else { 0 });
}

#[test]
fn kernel_decay_and_tl_norm_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"task":"kernel-decay","group":"torus1","cutoffs":[128],"symbols":[{"type":"power_it","t":1}],
        "kernel":{"levels":[2,3,4,5]}}"#;
    let r = run(dir.path(), "decay", config, &[]);
    assert_eq!(r.code, 0);
    assert!(manifest(&r.out)["summary"]["slope"].as_f64().unwrap() < 0.0);
    let config = r#"{"task":"tl-norm","group":"torus1","cutoffs":[32],"norms":[{"r":1,"p":1,"q":2}],
        "ensemble":{"kind":"dirichlet-kernels","count":2}}"#;
    let r = run(dir.path(), "tl", config, &[]);
    assert_eq!(r.code, 0);
    let csv = std::fs::read_to_string(r.out.join("tl-norm.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.contains(",weak,")).count(), 2);
}
