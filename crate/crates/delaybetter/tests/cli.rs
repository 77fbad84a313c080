//! End-to-end runs of the `delaybetter` binary.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use delaybetter::core::reductions::{cube_graph, Color, NaeFormula};
use delaybetter::format::{parse_instance, serialize_cubic, serialize_nae};
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delaybetter")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn put(dir: &TempDir, name: &str, text: impl AsRef<[u8]>) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn path_example() -> Value {
    json!({
        "directed": true,
        "vertices": ["u", "v", "w"],
        "edges": [{"u": "u", "v": "v", "time": 2}, {"u": "v", "v": "w", "time": 1}],
        "demands": [{"from": "u", "to": "w", "deadline": 3, "path": [["u", "v"], ["v", "w"]]}]
    })
}

fn triangle(directed: bool, deadline: u64) -> Value {
    json!({
        "directed": directed,
        "vertices": ["a", "b", "c"],
        "edges": [
            {"u": "a", "v": "b", "time": 2},
            {"u": "b", "v": "c", "time": 1},
            {"u": "a", "v": "c", "time": 5}
        ],
        "demands": [{"from": "a", "to": "c", "deadline": deadline}]
    })
}

#[test]
fn solve_pathdb_example() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", path_example().to_string());
    let sol = dir.path().join("s.json");
    let o = run(&["solve", "--algo", "pathdb", s(&inst), "-o", s(&sol)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc["answer"], "yes");
    let times: Vec<u64> = doc["labels"].as_array().unwrap().iter().map(|l| l["time"].as_u64().unwrap()).collect();
    assert_eq!(times, [2, 3]);
    let report = String::from_utf8_lossy(&o.stderr);
    assert!(report.contains("answer") && report.contains("exit"));
}

#[test]
fn solve_no_instance_exits_one() {
    let dir = TempDir::new().unwrap();
    // a-c at 5 is too late and a-b-c needs two steps after time 2.
    let inst = put(&dir, "i.json", triangle(true, 2).to_string());
    let o = run(&["solve", "--algo", "brute", s(&inst)]);
    assert_eq!(code(&o), 1);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["answer"], "no");
    assert!(doc["reason"].is_string());
}

#[test]
fn tree_engine_rejects_cycles() {
    let dir = TempDir::new().unwrap();
    // Deadline 6 keeps all three edges live after compression.
    let inst = put(&dir, "i.json", triangle(false, 6).to_string());
    let o = run(&["solve", "--algo", "tree", s(&inst)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NOT_A_TREE"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", "{\"directed\": true, \"vertices\": [");
    let o = run(&["solve", s(&inst)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("MALFORMED"));
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let mut inst = triangle(true, 3);
    inst["delta"] = json!(2);
    let inst = put(&dir, "i.json", inst.to_string());
    let labels = |ab: u64, bc: u64, ac: u64| {
        json!({"answer": "yes", "labels": [
            {"u": "a", "v": "b", "time": ab},
            {"u": "b", "v": "c", "time": bc},
            {"u": "a", "v": "c", "time": ac}
        ]})
        .to_string()
    };
    let good = put(&dir, "good.json", labels(2, 3, 5));
    let o = run(&["verify", s(&inst), s(&good)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("accepted"));

    let earlier = put(&dir, "earlier.json", labels(1, 2, 5));
    assert_eq!(code(&run(&["verify", s(&inst), s(&earlier)])), 1);

    let too_late = put(&dir, "late.json", labels(2, 4, 5));
    let o = run(&["verify", s(&inst), s(&too_late)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("rejected"));
}

#[test]
fn verify_checks_no_answers_by_solving() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", triangle(true, 2).to_string());
    let no = put(&dir, "no.json", json!({"answer": "no", "reason": "DEADLINE_UNSATISFIABLE"}).to_string());
    assert_eq!(code(&run(&["verify", s(&inst), s(&no)])), 0);
    let inst = put(&dir, "j.json", triangle(true, 3).to_string());
    assert_eq!(code(&run(&["verify", s(&inst), s(&no)])), 1);
}

#[test]
fn reduce_nae_one_clause() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "f.json", serialize_nae(&NaeFormula::new(3, vec![[0, 1, 2]]).unwrap()));
    let out = dir.path().join("o.json");
    let back = dir.path().join("b.json");
    let o = run(&["reduce", "--from", "nae3sat", "--undirected", s(&f), "-o", s(&out), "--back-map", s(&back)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let i = parse_instance(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(i.graph().vertex_count(), 15);
    let map: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert!(map.is_object());
}

#[test]
fn reduce_delta_db_lifetime() {
    let dir = TempDir::new().unwrap();
    let src = json!({
        "directed": true,
        "vertices": ["a", "b"],
        "edges": [{"u": "a", "v": "b", "time": 2}],
        "demands": [{"from": "a", "to": "b", "deadline": 3}],
        "delta": 1
    });
    let f = put(&dir, "d.json", src.to_string());
    let o = run(&["reduce", "--from", "delta-db", "--directed", s(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let i = parse_instance(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(i.delta(), None);
    assert!(i.graph().lifetime() <= 2 * 2 + 3);
}

#[test]
fn reduce_cube_has_bounded_degree() {
    let dir = TempDir::new().unwrap();
    let base = cube_graph(BTreeMap::new());
    let (a, b) = base.edges()[0];
    let cube = cube_graph(BTreeMap::from([((a, b), Color::ALL[0])]));
    let f = put(&dir, "q3.json", serialize_cubic(&cube));
    for orient in ["--directed", "--undirected"] {
        let o = run(&["reduce", "--from", "cbp-epe", orient, s(&f)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let i = parse_instance(&String::from_utf8(o.stdout).unwrap()).unwrap();
        let g = i.graph();
        assert!((0..g.vertex_count()).all(|v| g.degree(v) <= 10));
        assert_eq!(i.delta(), Some(10));
    }
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--kind", "low-fes", "--n", "7", "--seed", "42", "--directed"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, run(&["generate", "--kind", "low-fes", "--n", "7", "--seed", "43", "--directed"]).stdout);
}

#[test]
fn generate_then_solve_then_verify() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("i.json");
    let sol = dir.path().join("s.json");
    let mut yes = 0;
    for seed in 0..20 {
        let seed = seed.to_string();
        assert_eq!(code(&run(&["generate", "--seed", &seed, "--delta", "2", "-o", s(&inst)])), 0);
        let c = code(&run(&["solve", s(&inst), "-o", s(&sol)]));
        assert!(c == 0 || c == 1);
        yes += usize::from(c == 0);
        assert_eq!(code(&run(&["verify", s(&inst), s(&sol)])), 0);
    }
    assert!(yes > 0);
}

#[test]
fn compress_and_oracle_agree() {
    let dir = TempDir::new().unwrap();
    let src = json!({
        "directed": false,
        "vertices": ["a", "b", "c"],
        "edges": [{"u": "a", "v": "b", "time": 1000}, {"u": "b", "v": "c", "time": 40}],
        "demands": [{"from": "a", "to": "c", "deadline": 5000}]
    });
    let f = put(&dir, "big.json", src.to_string());
    let small = dir.path().join("small.json");
    assert_eq!(code(&run(&["compress", s(&f), "-o", s(&small)])), 0);
    let i = parse_instance(&std::fs::read_to_string(&small).unwrap()).unwrap();
    assert!(i.t_max() <= 10);
    assert_eq!(code(&run(&["oracle", s(&small)])), 0);
}

#[test]
fn unknown_algorithm_is_an_error() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "i.json", triangle(true, 3).to_string());
    assert_eq!(code(&run(&["solve", "--algo", "magic", s(&inst)])), 2);
}
