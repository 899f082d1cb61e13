use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use subdirect_cli::report::{read_lines, write_lines, Record};
use subdirect_cli::spec::{load_group, GroupSpec};
use subdirect_core::Caps;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdirect")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_lines(o: &Output) -> Vec<Value> {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn last(o: &Output) -> Value {
    json_lines(o).pop().unwrap()
}

fn methods(record: &Value, p: usize) -> Vec<String> {
    let entry = record["per_prime"].as_array().unwrap().iter().find(|e| e["prime"] == p).unwrap();
    entry["methods"].as_array().unwrap().iter().map(|m| m.as_str().unwrap().to_string()).collect()
}

#[test]
fn load_group_examples() {
    let caps = Caps::default();
    let order = |s: &str| load_group(&GroupSpec::parse(s).unwrap(), &caps).unwrap().order();
    assert_eq!(order("cyclic:1"), 1);
    assert_eq!(order("symmetric:3"), 6);
    assert_eq!(order("dihedral:8xdihedral:8"), 64);
}

#[test]
fn analyze_examples() {
    let r = last(&run(&["analyze", "--G", "S3", "--H", "S3", "--U", "derived-diagonal", "--pi", "2,3"]));
    assert_eq!(r["kind"], "analysis");
    assert_eq!(r["extensible"], true);
    assert_eq!(r["subgroup"]["order"], 18);
    for e in r["per_prime"].as_array().unwrap() {
        assert_eq!(e["oracle"], true);
    }

    let r = last(&run(&["analyze", "--G", "D8", "--H", "D8", "--U", "center-diagonal", "--prime", "2"]));
    assert_eq!(r["extensible"], false);
    assert!(methods(&r, 2).contains(&"central-shortcut".to_string()));
    assert_eq!(r["per_prime"][0]["oracle"], false);
    assert_eq!(r["consistent"], true);

    let r = last(&run(&["analyze", "--G", "Q8", "--H", "C2", "--U", "full"]));
    assert_eq!(r["extensible"], true);
    assert_eq!(methods(&r, 2)[0], "exact-criterion");
    assert_eq!(r["pi"], serde_json::json!([2]));
}

#[test]
fn non_subdirect_is_reported_not_fatal() {
    let r = last(&run(&["analyze", "--G", "S3", "--U", "pairs:1,1"]));
    assert_eq!(r["subdirect"], false);
    assert!(r["extensible"].is_null());
    assert!(r["note"].as_str().unwrap().contains("not subdirect"));
}

/// Subdirect products of `G x G` by closing every set of generators found so far.
fn naive_subdirect_count(spec: &str) -> usize {
    let g = load_group(&GroupSpec::parse(spec).unwrap(), &Caps::default()).unwrap();
    let n = g.order();
    let mul = |a: (usize, usize), b: (usize, usize)| (g.mul(a.0, b.0), g.mul(a.1, b.1));
    let close = |seed: &BTreeSet<(usize, usize)>| {
        let mut s = seed.clone();
        s.insert((0, 0));
        loop {
            let cur: Vec<_> = s.iter().copied().collect();
            let before = s.len();
            for &a in &cur {
                for &b in &cur {
                    s.insert(mul(a, b));
                }
            }
            if s.len() == before {
                return s;
            }
        }
    };
    let mut found = HashSet::new();
    let mut todo = vec![close(&BTreeSet::new())];
    found.insert(todo[0].clone());
    while let Some(s) = todo.pop() {
        for x in 0..n {
            for y in 0..n {
                if !s.contains(&(x, y)) {
                    let mut seed = s.clone();
                    seed.insert((x, y));
                    let c = close(&seed);
                    if found.insert(c.clone()) {
                        todo.push(c);
                    }
                }
            }
        }
    }
    found
        .iter()
        .filter(|s| {
            s.iter().map(|p| p.0).collect::<HashSet<_>>().len() == n
                && s.iter().map(|p| p.1).collect::<HashSet<_>>().len() == n
        })
        .count()
}

#[test]
fn subdirects_examples() {
    let lines = json_lines(&run(&["subdirects", "--G", "C2", "--H", "C2"]));
    let summary = lines.last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["count"], 2);
    assert_eq!(summary["extensible_all"], 2);
    assert_eq!(lines.len(), 4);

    assert_eq!(last(&run(&["subdirects", "--G", "C2", "--H", "C3"]))["count"], 1);

    let count = last(&run(&["subdirects", "--G", "S3", "--H", "S3"]))["count"].as_u64().unwrap() as usize;
    assert_eq!(count, naive_subdirect_count("S3"));
}

#[test]
fn star_examples() {
    let r = last(&run(&["star", "--G", "D8", "--U", "diagonal", "--V", "diagonal"]));
    assert_eq!(r["product"]["subgroup"]["order"], 8);
    assert_eq!(r["product"]["extensible"], true);
    assert_eq!(r["condition"]["predicts_extensible"], true);

    let r = last(&run(&["star", "--G", "S3", "--H", "C2", "--K", "C3", "--U", "full", "--V", "full"]));
    assert_eq!(r["product"]["subgroup"]["order"], 18);
    assert!(r["condition"].is_null());

    // an exhaustive scan over D8, Q8 and S3 finds no pair that breaks
    // preservation, so the witness lives in D8 x C2
    let r = last(&run(&["star", "--G", "D8xC2", "--U", "normal-diagonal:1", "--V", "normal-diagonal:5"]));
    assert_eq!(r["u_extensible"], true);
    assert_eq!(r["v_extensible"], true);
    assert_eq!(r["condition"]["side1"], false);
    assert_eq!(r["condition"]["side2"], false);
    assert_eq!(r["product"]["extensible"], false);
    assert_eq!(r["product"]["consistent"], true);
    assert_eq!(r["sections"]["section_of_q_u"], true);
    assert_eq!(r["sections"]["section_of_q_v"], true);
}

#[test]
fn star_from_record_files() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.jsonl");
    let out = run(&["analyze", "--G", "D8", "--U", "center-diagonal", "--out", u.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = last(&run(&["star", "--G", "D8", "--U", u.to_str().unwrap(), "--V", "diagonal"]));
    assert_eq!(r["u"]["order"], 16);
    assert_eq!(r["product"]["subgroup"]["order"], 16);

    let s3 = dir.path().join("s3.jsonl");
    assert_eq!(code(&run(&["analyze", "--G", "S3", "--U", "diagonal", "--out", s3.to_str().unwrap()])), 0);
    let mismatch = run(&["star", "--G", "D8", "--U", s3.to_str().unwrap(), "--V", "diagonal"]);
    assert_eq!(code(&mismatch), 2);
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("factor mismatch"));
}

#[test]
fn verify_examples() {
    let out = run(&["verify"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(code(&out), 0, "{report}");
    assert_eq!(report["passed"], true);
    assert!(report["properties"]["criterion-oracle"]["checked"].as_u64().unwrap() > 0);

    let out = run(&["verify", "--catalog", ""]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["properties"], serde_json::json!({}));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let catalog = r#"[{"name": "C2", "kind": "preset", "data": {"id": "cyclic", "params": [2]}},
                      {"name": "broken", "kind": "cayley", "data": [[0, 1, 2], [1, 2, 0], [2, 1, 0]]}]"#;
    std::fs::write(&path, catalog).unwrap();
    let out = run(&["verify", "--catalog", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a group"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["analyze", "--G", "S8"])), 3);
    assert_eq!(code(&run(&["analyze", "--G", "D8", "--max-order", "32"])), 3);
    assert_eq!(code(&run(&["analyze", "--G", "D8", "--U", "bogus"])), 2);
    assert_eq!(code(&run(&["analyze", "--G", "Z9"])), 2);
    assert_eq!(code(&run(&["analyze", "--G", "S3", "--pi", "4"])), 2);
    assert_eq!(code(&run(&["analyze"])), 2);
    assert_eq!(code(&run(&["catalog"])), 0);
}

fn roundtrip(path: &Path) {
    let bytes = std::fs::read(path).unwrap();
    let lines = read_lines(bytes.as_slice()).unwrap();
    let mut again = Vec::new();
    write_lines(&mut again, &lines).unwrap();
    assert_eq!(again, bytes);
    assert!(matches!(lines[0].record, Record::Header(_)));
}

#[test]
fn reports_roundtrip_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for p in [&a, &b] {
        assert_eq!(code(&run(&["subdirects", "--G", "D8", "--H", "Q8", "--out", p.to_str().unwrap()])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    roundtrip(&a);

    let s = dir.path().join("s.jsonl");
    let args = ["star", "--G", "D8", "--U", "center-diagonal", "--V", "derived-diagonal", "--out", s.to_str().unwrap()];
    assert_eq!(code(&run(&args)), 0);
    roundtrip(&s);

    let t = dir.path().join("t.jsonl");
    assert_eq!(code(&run(&["analyze", "--G", "S3", "--timing", "--out", t.to_str().unwrap()])), 0);
    roundtrip(&t);
}

#[test]
fn raw_oracle_agrees() {
    let a = json_lines(&run(&["subdirects", "--G", "Q8"]));
    let b = json_lines(&run(&["subdirects", "--G", "Q8", "--raw-oracle"]));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b).skip(1) {
        assert_eq!(x["per_prime"], y["per_prime"]);
    }
    assert_eq!(b[0]["oracle"], "raw-table");
}

#[test]
fn group_and_quintuple_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s3.json");
    std::fs::write(
        &spec,
        r#"{"name": "S3perm", "kind": "permutations", "data": {"degree": 3, "generators": ["(0 1 2)", [1, 0, 2]]}}"#,
    )
    .unwrap();
    let r = last(&run(&["subdirects", "--G", spec.to_str().unwrap()]));
    assert_eq!(r["count"], 8);

    // C4 x C4 with q(U) = C2: k1 = k2 = <2>, generator 1 maps to 1
    let q = dir.path().join("q.json");
    std::fs::write(&q, r#"{"p1": [1], "k1": [2], "p2": [1], "k2": [2], "phi": [[1, 1]]}"#).unwrap();
    let u = format!("quintuple:@{}", q.display());
    let r = last(&run(&["analyze", "--G", "C4", "--U", &u]));
    assert_eq!(r["subgroup"]["order"], 8);
    assert_eq!(r["goursat"]["q"]["name"], "C2");
    assert_eq!(r["extensible"], true);
}
