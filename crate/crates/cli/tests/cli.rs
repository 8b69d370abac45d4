use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sharpquad"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn nodes_on_the_unit_circle_as_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":1,"poles":[[0,0]]}"#);
    let out = dir.path().join("nodes.csv");
    let o = run(&["nodes", "--config", s(&cfg), "--s", "2", "--phi", "0", "--format", "csv", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1] - 1.0).abs() < 1e-15 && rows[0][2].abs() < 1e-15);
    assert!((rows[1][1] + 1.0).abs() < 1e-15 && rows[1][2].abs() < 1e-15);
}

#[test]
fn nodes_round_trip_residuals() {
    use sharpquad::blaschke::NodeSetJson;
    let dir = TempDir::new().unwrap();
    let text = r#"{"domain":"circle","radius":2,"poles":[[0,0],[0.5,0.7],[-1.2,0.3]]}"#;
    let cfg = write(&dir, "c.json", text);
    let out = dir.path().join("n.json");
    let o = run(&["nodes", "--config", s(&cfg), "--s", "3", "--phi", "1.3", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let back: NodeSetJson = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(back.nodes.len(), 9);
    let sys = sharpquad::BlaschkeSystem::from_config(&sharpquad::PoleConfig::from_json(text).unwrap()).unwrap();
    for r in back.recompute_residuals(&sys).unwrap() {
        assert!(r < 1e-11, "residual {r}");
    }
}

#[test]
fn gauss_chebyshev_abscissae_from_the_segment() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "seg.json", r#"{"domain":"segment","poles":[]}"#);
    let o = run(&["nodes", "--config", s(&cfg), "--s", "6", "--phi", "3.141592653589793"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let mut xs: Vec<f64> = v["abscissae"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    xs.sort_by(|a, b| b.total_cmp(a));
    for k in 1..=3 {
        let lam = ((2 * k - 1) as f64 * std::f64::consts::PI / 6.0).cos();
        assert!((xs[2 * k - 2] - lam).abs() < 1e-12);
        assert!((xs[2 * k - 1] - lam).abs() < 1e-12);
    }
}

#[test]
fn malformed_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", "{not json");
    assert_eq!(code(&run(&["nodes", "--config", s(&cfg), "--s", "1"])), 2);
    let outside = write(&dir, "o.json", r#"{"domain":"circle","radius":1,"poles":[[0,0],[2,0]]}"#);
    assert_eq!(code(&run(&["nodes", "--config", s(&outside), "--s", "1"])), 2);
}

#[test]
fn constant_on_circle_gives_two_pi_r() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":2,"poles":[[0,0],[0.3,-0.4]]}"#);
    let f = write(&dir, "f.json", r#"{"poly":[[1,0]]}"#);
    let o = run(&["integrate", "--config", s(&cfg), "--function", s(&f), "--mode", "circle-int", "--s", "1"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let two_pi_r = 4.0 * std::f64::consts::PI;
    assert!((v["rule"][0].as_f64().unwrap() - two_pi_r).abs() < 1e-12);
    assert!((v["oracle"][0].as_f64().unwrap() - two_pi_r).abs() < 1e-12);
}

#[test]
fn half_plane_example_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "h.json", r#"{"domain":"halfplane","poles":[[0,1]]}"#);
    let f = write(
        &dir,
        "f.json",
        r#"{"terms":[{"pole":[0,1],"order":3,"coef":[1,0.5]},{"pole":[0,-1],"order":2,"coef":[-0.3,0.2]},{"pole":[0,1],"order":1,"coef":[0,2]}]}"#,
    );
    let o = run(&["integrate", "--config", s(&cfg), "--function", s(&f), "--mode", "line-l2", "--s", "3", "--phi", "3.141592653589793"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert!(v["relative_gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn circle_l2m_mode() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":1,"poles":[[0,0],[0.4,0.2]]}"#);
    let f = write(&dir, "f.json", r#"{"terms":[{"pole":[0.4,0.2],"order":1,"coef":[0.2,0]}],"poly":[[1,0],[0.5,0]]}"#);
    let o = run(&["integrate", "--config", s(&cfg), "--function", s(&f), "--mode", "circle-l2m", "--m", "2", "--s", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn inadmissible_function_exits_4() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "h.json", r#"{"domain":"halfplane","poles":[[0,1]]}"#);
    let f = write(&dir, "f.json", r#"{"terms":[{"pole":[0,1],"order":4,"coef":[1,0]}]}"#);
    let o = run(&["integrate", "--config", s(&cfg), "--function", s(&f), "--mode", "line-l2", "--s", "3"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("order 4"));
}

#[test]
fn mode_domain_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "h.json", r#"{"domain":"halfplane","poles":[[0,1]]}"#);
    let f = write(&dir, "f.json", r#"{"poly":[[1,0]]}"#);
    assert_eq!(code(&run(&["integrate", "--config", s(&cfg), "--function", s(&f), "--mode", "circle-int"])), 2);
}

#[test]
fn spf_mode_three_way() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "h.json", r#"{"domain":"halfplane","poles":[[0,1],[0,2]]}"#);
    let o = run(&["integrate", "--config", s(&cfg), "--mode", "spf", "--phi", "2.0"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let expected = 17.0 * std::f64::consts::PI / 6.0;
    assert!((v["oracle"].as_f64().unwrap() - expected).abs() < 1e-9 * expected);
}

#[test]
fn verify_lemma1_passes_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m.json");
    let args = ["verify", "--suite", "lemma1", "--seed", "7", "--out", s(&out)];
    assert_eq!(code(&run(&args)), 0);
    let first = fs::read_to_string(&out).unwrap();
    assert_eq!(code(&run(&args)), 0);
    let second = fs::read_to_string(&out).unwrap();
    let strip = |t: &str| t.lines().filter(|l| !l.contains("wall_time_s")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&first), strip(&second));
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["seed"].as_u64(), Some(7));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_sharpness_rows() {
    let o = run(&["verify", "--suite", "sharpness"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let rows = v["rows"].as_array().unwrap();
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r["check"] == "eq11-extremal-ratio")
        .map(|r| r["value"].as_f64().unwrap())
        .collect();
    assert!(!ratios.is_empty());
    assert!(ratios.iter().all(|&x| x >= 1.0 - 1e-6));
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(code(&run(&["verify", "--suite", "everything"])), 2);
}

#[test]
fn missing_argument_exits_2() {
    assert_eq!(code(&run(&["nodes", "--s", "1"])), 2);
}

#[test]
fn sweep_single_pole_traverses_circle() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":1,"poles":[[0,0]]}"#);
    let out = dir.path().join("sweep.csv");
    let o = run(&["sweep-phi", "--config", s(&cfg), "--s", "1", "--steps", "360", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let params: Vec<f64> = rdr.records().map(|r| r.unwrap()[4].parse().unwrap()).collect();
    assert_eq!(params.len(), 360);
    assert!(params.windows(2).all(|w| w[1] > w[0]));
    assert!(params[0].abs() < 1e-12);
    let last = 2.0 * std::f64::consts::PI * 359.0 / 360.0;
    assert!((params[359] - last).abs() < 1e-10);
}

#[test]
fn sweep_two_poles_without_crossings() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":1,"poles":[[0,0],[0.6,0.3]]}"#);
    let o = run(&["sweep-phi", "--config", s(&cfg), "--s", "2", "--steps", "90", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["monotone"], Value::Bool(true));
    assert_eq!(v["order_preserved"], Value::Bool(true));
}

#[test]
fn sweep_one_step_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"domain":"circle","radius":1,"poles":[[0,0]]}"#);
    assert_eq!(code(&run(&["sweep-phi", "--config", s(&cfg), "--s", "1", "--steps", "1"])), 2);
}
