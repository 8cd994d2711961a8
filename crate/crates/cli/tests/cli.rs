use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_clusterfree"));
    cmd.args(args).env_remove("CLUSTERFREE_CACHE");
    if let Some(dir) = cache {
        cmd.env("CLUSTERFREE_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The value after `key ` on the first stdout line starting with it.
fn field(o: &Output, key: &str) -> String {
    let prefix = format!("{key} ");
    stdout(o).lines().find_map(|l| l.strip_prefix(&prefix).map(str::to_string)).unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
}

#[test]
fn construct_s_and_l1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.txt");
    let o = run(&["construct", "S", "10", "3", "1", "--out", out.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&o, "size"), "16");
    assert_eq!(field(&o, "formula"), "16");
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 17);

    let o = run(&["construct", "L1", "20", "3", "2"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 82);
}

#[test]
fn construct_rejects_bad_parameters() {
    assert_eq!(code(&run(&["construct", "L4", "20", "3", "1"], None)), 2);
    assert_eq!(code(&run(&["construct", "L3", "13", "4", "2"], None)), 2);
    assert_eq!(code(&run(&["construct", "L5", "14", "5", "1"], None)), 2);
    assert_eq!(code(&run(&["construct", "L9", "14", "5", "1"], None)), 2);
    assert_eq!(code(&run(&["construct", "S", "5", "3", "1"], None)), 2);
}

#[test]
fn construct_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (name, n, k, nu, d, m) in [("L3", 13, 4, 1, 4, 2), ("L2", 16, 4, 2, 3, 3), ("L4", 16, 4, 2, 4, 3)] {
        for json in [false, true] {
            let path = dir.path().join(format!("{name}-{json}"));
            let (n, k, nu) = (n.to_string(), k.to_string(), nu.to_string());
            let mut args = vec!["construct", name, &n, &k, &nu, "--out", path.to_str().unwrap()];
            if json {
                args.push("--json");
            }
            let built = run(&args, None);
            assert_eq!(code(&built), 0, "{name}");
            let digest = if json {
                let v: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
                v["digest"].as_str().unwrap().to_string()
            } else {
                field(&built, "digest")
            };
            let (d, m) = (d.to_string(), m.to_string());
            let checked = run(&["verify", path.to_str().unwrap(), "--d", &d, "--expected-matching", &m], None);
            assert_eq!(code(&checked), 0, "{name}");
            assert_eq!(field(&checked, "digest"), digest);
            assert!(stdout(&checked).lines().any(|l| l == "cluster-free"));
        }
    }
}

#[test]
fn verify_reports_clusters_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "6 3\n1 2 3\n1 4 5\n2 4 6\n").unwrap();
    let o = run(&["verify", bad.to_str().unwrap(), "--d", "3"], None);
    assert_eq!(code(&o), 1);
    assert_eq!(field(&o, "cluster"), "0 1 2");

    let o = run(&["verify", bad.to_str().unwrap(), "--d", "3", "--json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cluster"], serde_json::json!([[1, 2, 3], [1, 4, 5], [2, 4, 6]]));
    assert_eq!(v["matching"], 1);

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&run(&["verify", empty.to_str().unwrap(), "--d", "3"], None)), 2);
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&run(&["verify", missing.to_str().unwrap(), "--d", "3"], None)), 2);

    // intersecting, so cluster-free, but the matching expectation fails
    let star = dir.path().join("star.txt");
    fs::write(&star, "5 2\n1 2\n1 3\n1 4\n").unwrap();
    assert_eq!(code(&run(&["verify", star.to_str().unwrap(), "--d", "2"], None)), 0);
    assert_eq!(code(&run(&["verify", star.to_str().unwrap(), "--d", "2", "--expected-matching", "2"], None)), 1);
}

#[test]
fn turan_examples() {
    let o = run(&["turan", "tight-path", "7", "3", "2"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&o, "value"), "7");
    assert_eq!(field(&o, "status"), "proven-optimal");

    let o = run(&["turan", "pattern", "3", "2", "2", "3"], None);
    assert_eq!((code(&o), field(&o, "value")), (0, "6".to_string()));

    let o = run(&["turan", "pattern", "1", "2", "2", "2"], None);
    assert_eq!((code(&o), field(&o, "status")), (0, "unbounded".to_string()));

    let o = run(&["turan", "pattern", "5", "2", "3", "3", "--simple"], None);
    assert_eq!(field(&o, "value"), "6");

    let o = run(&["turan", "pattern", "5", "2", "1", "3"], None);
    assert_eq!(code(&o), 2);
}

#[test]
fn extremal_examples() {
    let o = run(&["extremal", "f", "4", "2", "2", "0"], None);
    assert_eq!((code(&o), field(&o, "value")), (0, "3".to_string()));

    let o = run(&["extremal", "f", "6", "2", "2", "1"], None);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("infeasible"));

    let g = run(&["extremal", "g", "5", "2", "3", "2"], None);
    let f = run(&["extremal", "f", "5", "2", "3", "1"], None);
    assert_eq!(field(&g, "value"), field(&f, "value"));

    assert_eq!(code(&run(&["extremal", "g", "5", "2", "3", "1"], None)), 2);
}

#[test]
fn lower_bound_only_exits_one() {
    let o = run(&["extremal", "f", "10", "3", "4", "1", "--budget", "1000"], None);
    assert_eq!(code(&o), 1);
    assert_eq!(field(&o, "status"), "lower-bound-only");
}

#[test]
fn witness_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("fano.txt");
    let o = run(&["turan", "tight-path", "7", "3", "2", "--out", w.to_str().unwrap()], None);
    assert_eq!(field(&o, "witness"), w.to_str().unwrap());
    assert_eq!(fs::read_to_string(&w).unwrap().lines().count(), 8);
}

#[test]
fn report_examples() {
    let o = run(&["report", "20", "3", "3", "2"], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let constant = |sym: &str| v["constants"].as_array().unwrap().iter().find(|c| c["symbol"] == sym).unwrap()["value"].clone();
    assert_eq!(constant("c1_lower"), 4);
    assert_eq!(constant("c2_upper"), 5);
    assert_eq!(v["lower_bound_value"], 81);

    let o = run(&["report", "13", "4", "4", "1"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lower_bound_value"], 61);
    assert_eq!(v["lower_bound_construction"], "L3");

    assert_eq!(code(&run(&["report", "10", "3", "5", "1"], None)), 2);
}

#[test]
fn cache_hits_and_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path();
    let first = run(&["extremal", "f", "8", "3", "3", "1", "--json"], Some(cache));
    assert_eq!(code(&first), 0);
    let a: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(a["source"], "computed");
    assert_eq!(a["problem"], "f");
    assert_eq!(a["params"], serde_json::json!([8, 3, 3, 1]));

    let second = run(&["extremal", "f", "8", "3", "3", "1", "--json", "--recheck"], Some(cache));
    assert_eq!(code(&second), 0);
    let b: serde_json::Value = serde_json::from_slice(&second.stdout).unwrap();
    assert_eq!(b["source"], "cache");
    assert_eq!(a["value"], b["value"]);
    assert_eq!(a["witness_digest"], b["witness_digest"]);

    let file = cache.join("results.jsonl");
    assert_eq!(fs::read_to_string(&file).unwrap().lines().count(), 1);

    // a corrupt line is skipped; a tampered record fails the recheck
    let mut rec: serde_json::Value = serde_json::from_str(fs::read_to_string(&file).unwrap().lines().next().unwrap()).unwrap();
    rec["value"] = serde_json::json!(999);
    let text = fs::read_to_string(&file).unwrap() + "garbage\n" + &rec.to_string() + "\n";
    fs::write(&file, text).unwrap();
    let third = run(&["extremal", "f", "8", "3", "3", "1"], Some(cache));
    assert_eq!(field(&third, "value"), "999");
    assert!(String::from_utf8_lossy(&third.stderr).contains("corrupt cache line"));
    let fourth = run(&["--recheck", "extremal", "f", "8", "3", "3", "1"], Some(cache));
    assert_eq!(code(&fourth), 1);

    let flag = dir.path().join("other");
    let o = run(&["--cache", flag.to_str().unwrap(), "turan", "tight-path", "6", "3", "2"], None);
    assert_eq!(code(&o), 0);
    assert!(flag.join("results.jsonl").exists());
}
