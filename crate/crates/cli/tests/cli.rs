use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qcharlab"));
    c.env_remove("QCHARLAB_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcharlab-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn qchar_counts() {
    let dir = scratch("qchar");
    let out = dir.join("a1.json");
    let o = run(&["qchar", "--type", "A1", "--node", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("monomials              2"));
    let q = read_json(&out);
    assert_eq!(q["entries"].as_array().unwrap().len(), 2);
    assert!(q["conventions"].is_string());

    let o = run(&["qchar", "--type", "A2", "--node", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("monomials              3"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["qchar", "--type", "X9", "--node", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported Cartan type"));
    assert_eq!(run(&["qchar", "--type", "A2", "--node", "3"]).status.code(), Some(1));
    assert_eq!(run(&["qchar", "--type", "A2"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn caps_exit_two() {
    let o = run(&["qchar", "--type", "G2", "--node", "2", "--cap-monomials", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["extremal-check", "--type", "D4", "--node", "1", "--cap-w", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extremal_check_reports() {
    let dir = scratch("extremal");
    let report = dir.join("report.json");
    let o = run(&["extremal-check", "--type", "G2", "--node", "1", "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&report);
    assert_eq!(r["results"][0]["weyl_order"], 12);
    assert_eq!(r["results"][0]["violations"].as_array().unwrap().len(), 0);
    assert_eq!(run(&["extremal-check", "--type", "A2", "--node", "2"]).status.code(), Some(0));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn cache_hits_and_corruption() {
    let dir = scratch("cache");
    let cache = dir.join("cache");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let first = run(&["qchar", "--type", "B2", "--node", "1", "--cache-dir", s(&cache), "--out", s(&a)]);
    assert_eq!(first.status.code(), Some(0));
    let hit = bin()
        .env("QCHARLAB_CACHE_DIR", &cache)
        .args(["qchar", "--type", "B2", "--node", "1", "--out", s(&b)])
        .output()
        .unwrap();
    assert_eq!(hit.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(stdout(&first), stdout(&hit));

    let entry = fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let text = fs::read_to_string(&entry).unwrap();
    fs::write(&entry, text.replacen("\\\"mu\\\":1", "\\\"mu\\\":2", 1)).unwrap();
    let o = run(&["extremal-check", "--type", "B2", "--node", "1", "--cache-dir", s(&cache)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cache integrity"));
    fs::write(&entry, "garbage").unwrap();
    let o = run(&["qchar", "--type", "B2", "--node", "1", "--cache-dir", s(&cache)]);
    assert_eq!(o.status.code(), Some(2));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_supplies_defaults() {
    let dir = scratch("config");
    let cfg = dir.join("run.conf");
    let out = dir.join("q.json");
    fs::write(&cfg, format!("# B2 short node\ntype = B2\nnode = 2\nout = {}\n", out.display())).unwrap();
    let o = run(&["qchar", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&out)["node"], 2);
    // flags win over the file
    let o = run(&["qchar", "--config", s(&cfg), "--node", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&out)["node"], 1);
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["qchar", "--config", s(&cfg)]).status.code(), Some(1));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn braid_orbit_vertices() {
    let o = run(&["braid-orbit", "--type", "A2", "--node", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6 elements, 3 distinct vertices"));
    let o = run(&["braid-orbit", "--type", "A1", "--node", "1", "--word", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1@(1,-1)"));
    assert_eq!(run(&["braid-orbit", "--type", "A1", "--node", "1", "--word", "2"]).status.code(), Some(1));
}

const POINT_A1: &str = r#"{"field":"F2","type":"A1","v":[[1,1,1]],"w":[[1,0,1]],
  "maps":[{"kind":"A","from":[1,0],"to":[1,1],"matrix":[[1]]}]}"#;

#[test]
fn quiver_reflect_a1() {
    let dir = scratch("reflect");
    let point = dir.join("point-a1.json");
    let out = dir.join("reflected.json");
    fs::write(&point, POINT_A1).unwrap();
    let o = run(&["quiver-reflect", "--node", "1", "--theta", "-1", s(&point), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&out);
    assert_eq!(r["v"], serde_json::json!([]));
    assert_eq!(r["maps"], serde_json::json!([]));
    assert_eq!(r["theta"], serde_json::json!([1]));

    // the reflected file is itself a valid point
    assert_eq!(run(&["quiver-check", s(&out)]).status.code(), Some(0));
    // positive parameter is rejected as usage
    let o = run(&["quiver-reflect", "--node", "1", "--theta", "1", s(&point)]);
    assert_eq!(o.status.code(), Some(1));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn quiver_check_points() {
    let dir = scratch("check");
    let zero = dir.join("zero.json");
    fs::write(&zero, r#"{"field":"Q","type":"A2","v":[],"w":[[1,0,1]],"maps":[]}"#).unwrap();
    assert_eq!(run(&["quiver-check", s(&zero)]).status.code(), Some(0));

    // loop on V_1^1 composed with A is nonzero: relation violation
    let bad = dir.join("bad.json");
    fs::write(
        &bad,
        r#"{"field":"F2","type":"A1","v":[[1,1,1],[1,-1,1]],"w":[[1,0,1]],
  "maps":[{"kind":"A","from":[1,0],"to":[1,1],"matrix":[[1]]},
          {"kind":"arrow","from":[1,1],"to":[1,-1],"matrix":[[1]]}]}"#,
    )
    .unwrap();
    let o = run(&["quiver-check", s(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("violation"));

    let a1 = dir.join("a1.json");
    fs::write(&a1, POINT_A1).unwrap();
    let o = run(&["quiver-check", s(&a1), "--theta", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stable"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn quiver_search_a2() {
    let dir = scratch("search");
    let out = dir.join("points.json");
    let args = [
        "quiver-search",
        "--type",
        "A2",
        "--v",
        "1@(1,1),1@(2,2)",
        "--w",
        "1@(1,0)",
        "--out",
        s(&out),
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let r = read_json(&out);
    let stable = r["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["stable"][0] == true)
        .count();
    assert!(stable > 0);
    let first = fs::read(&out).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), first);
    let o = run(&["quiver-search", "--type", "A2", "--v", "1@(1,1)", "--w", "1@(1,0)", "--field", "Q"]);
    assert_eq!(o.status.code(), Some(1));
    fs::remove_dir_all(dir).unwrap();
}
