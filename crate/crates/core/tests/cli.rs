use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn updag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_updag")).args(args).output().expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Reduces `values` and returns the gadget and sidecar paths.
fn gadget(dir: &TempDir, name: &str, values: &str) -> (PathBuf, PathBuf) {
    let p = path(dir, &format!("{name}.txt"));
    fs::write(&p, values).unwrap();
    let g = path(dir, &format!("{name}.updag"));
    let o = updag(&["reduce", s(&p), "-o", s(&g)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let side = g.with_extension("json");
    (g, side)
}

#[test]
fn round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let (g, side) = gadget(&dir, "s", "1 1 2\n");
    let report = path(&dir, "report.json");
    let o = updag(&["test", s(&g), "--edge", "0", "31", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    fs::write(&report, &o.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["answer"], true);

    // a full report works as the embedding input too
    let o = updag(&["extract", s(&side), s(&report), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let x: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((x["sum1"].as_u64(), x["sum2"].as_u64()), (Some(2), Some(2)));
}

#[test]
fn negative_gadget_exits_one() {
    let dir = TempDir::new().unwrap();
    let (g, _) = gadget(&dir, "s", "1 2");
    assert_eq!(updag(&["test", s(&g), "--edge", "0", "23"]).status.code(), Some(1));
    assert_eq!(updag(&["test", s(&g)]).status.code(), Some(1));
}

#[test]
fn tampered_labeling_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (g, side) = gadget(&dir, "s", "1 1");
    let w = path(&dir, "w.json");
    let o = updag(&["test", s(&g), "--edge", "0", "17", "--witness", s(&w)]);
    assert_eq!(o.status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_slice(&fs::read(&w).unwrap()).unwrap();
    let label = &mut v["labels"][0][2];
    *label = serde_json::json!(if label.as_i64() == Some(0) { -1 } else { 0 });
    fs::write(&w, v.to_string()).unwrap();
    let o = updag(&["extract", s(&side), s(&w)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn mismatched_sidecar_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (g, _) = gadget(&dir, "a", "1 1");
    let (_, other) = gadget(&dir, "b", "2 2");
    let w = path(&dir, "w.json");
    assert_eq!(updag(&["test", s(&g), "--edge", "0", "17", "--witness", s(&w)]).status.code(), Some(0));
    assert_eq!(updag(&["extract", s(&other), s(&w)]).status.code(), Some(2));

    let mut side: serde_json::Value = serde_json::from_slice(&fs::read(g.with_extension("json")).unwrap()).unwrap();
    side["prescribed_edge"] = serde_json::json!([1, 2]);
    let bad = path(&dir, "bad.json");
    fs::write(&bad, side.to_string()).unwrap();
    assert_eq!(updag(&["extract", s(&bad), s(&w)]).status.code(), Some(2));
}

#[test]
fn render_gadget_with_embedding() {
    let dir = TempDir::new().unwrap();
    let (g, _) = gadget(&dir, "s", "1 1 2");
    let w = path(&dir, "w.json");
    assert_eq!(updag(&["test", s(&g), "--edge", "0", "31", "--witness", s(&w)]).status.code(), Some(0));
    let dot = path(&dir, "g.dot");
    let o = updag(&["render", s(&g), "--embedding", s(&w), "-o", s(&dot)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    let vertices = text.lines().filter(|l| l.trim().trim_end_matches(';').parse::<u32>().is_ok()).count();
    assert_eq!(vertices, 86);
    assert!(text.contains("outer face"));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let path_graph = path(&dir, "path.updag");
    fs::write(&path_graph, "updag 1\nvertices 3\nedge 0 1\nedge 1 2\n").unwrap();
    let o = updag(&["test", s(&path_graph)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());

    let cyclic = path(&dir, "cyclic.updag");
    fs::write(&cyclic, "updag 1\nvertices 3\nedge 0 1\nedge 1 2\nedge 2 0\n").unwrap();
    assert_eq!(updag(&["test", s(&cyclic)]).status.code(), Some(2));

    let garbage = path(&dir, "garbage.updag");
    fs::write(&garbage, "vertices three\n").unwrap();
    assert_eq!(updag(&["oracle", s(&garbage)]).status.code(), Some(2));

    let zero = path(&dir, "zero.txt");
    fs::write(&zero, "1 0 2").unwrap();
    assert_eq!(updag(&["solve-partition", s(&zero)]).status.code(), Some(2));
    assert_eq!(updag(&["bench", "--sizes", "0"]).status.code(), Some(2));
    assert_eq!(updag(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn edge_flag_is_undirected() {
    let dir = TempDir::new().unwrap();
    let t = path(&dir, "t.updag");
    fs::write(&t, "# triangle\nupdag 1\nvertices 3\nedge 0 1\nedge 0 2\nedge 1 2\n").unwrap();
    assert_eq!(updag(&["test", s(&t), "--edge", "0", "2"]).status.code(), Some(0));
    assert_eq!(updag(&["oracle", s(&t), "--edge", "0", "2"]).status.code(), Some(0));
    assert_eq!(updag(&["test", s(&t), "--edge", "2", "0"]).status.code(), Some(0));
    assert_eq!(updag(&["test", s(&t), "--edge", "0", "5"]).status.code(), Some(2));
}

#[test]
fn bench_csv_shape() {
    let o = updag(&["bench", "--sizes", "20,40", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,k,reduce_ns,test_ns,answer");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("20,16,"));
    assert!(lines[2].starts_with("40,16,"));
}
