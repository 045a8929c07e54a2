use std::process::{Command, Output};

fn rotdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotdist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn right_arm_distance_of_a_single_rotation() {
    let o = rotdist(&["dist", "--metric", "ra", "--t1", "((* *) *)", "--t2", "(* (* *))", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["distance"], 1);
    assert_eq!(v["n"], 2);
    assert_eq!(v["genset"], "right-all");
}

#[test]
fn undefined_restricted_distance_exits_1() {
    let o = rotdist(&["dist", "--metric", "rra", "--gens", "x0,x2", "--t1", "(* (* (* *)))", "--t2", "(* ((* *) *))"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("defined: false"));
    let o = rotdist(&[
        "dist", "--metric", "rra", "--gens", "x0,x2", "--t1", "(* (* (* *)))", "--t2", "(* ((* *) *))", "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["defined"], false);
    assert!(v["distance"].is_null());
}

#[test]
fn identical_trees_are_at_distance_zero() {
    for metric in ["rr", "ra", "r"] {
        let o = rotdist(&["dist", "--metric", metric, "--t1", "((* *) (* *))", "--t2", "((* *) (* *))", "--json"]);
        assert_eq!(o.status.code(), Some(0), "{metric}");
        assert_eq!(json(&o)["distance"], 0, "{metric}");
    }
}

#[test]
fn json_schema_and_determinism() {
    let args = [
        "dist", "--metric", "rr", "--t1", "((* *) ((* *) *))", "--t2", "(* (* (* (* *))))", "--witness", "--json",
    ];
    let a = rotdist(&args);
    let b = rotdist(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 5);
    for k in ["n", "genset", "defined", "distance", "witness"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    let letters = v["witness"].as_array().unwrap();
    let total: i64 = letters
        .iter()
        .map(|l| {
            let l = l.as_str().unwrap();
            l.split_once('^').map_or(1, |(_, p)| p.parse::<i64>().unwrap().abs())
        })
        .sum();
    assert_eq!(total, v["distance"].as_i64().unwrap());
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["dist", "--metric", "rr", "--t1", "(* *", "--t2", "(* *)"],
        vec!["dist", "--metric", "rr", "--t1", "(* *)", "--t2", "(* (* *))"],
        vec!["dist", "--metric", "rr", "--gens", "x0,x2", "--t1", "(* *)", "--t2", "(* *)"],
        vec!["dist", "--metric", "rra", "--gens", "x1,x2", "--t1", "(* *)", "--t2", "(* *)"],
        vec!["dist", "--metric", "bogus", "--t1", "(* *)", "--t2", "(* *)"],
        vec!["nf", "--word", "x0 z1"],
        vec!["family", "--name", "badword", "--m", "1", "--n", "5"],
        vec!["verify", "--check", "sharp-rr", "--n", "7..3"],
        vec!["verify", "--check", "sharp-rr", "--n", "20"],
    ] {
        let o = rotdist(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn normal_forms() {
    let o = rotdist(&["nf", "--word", "x0 x2 x0^-1"]);
    let s = stdout(&o);
    assert!(s.contains("unique normal form: x1\n"));
    assert!(s.contains("partially reduced form: x0 x2 x0^-1\n"));
    assert!(s.contains("length: 1\n"));
    let o = rotdist(&["nf", "--t1", "(* (* *))", "--t2", "((* *) *)", "--json"]);
    assert_eq!(json(&o)["unique"], "x0");
    let o = rotdist(&["nf", "--word", "", "--json"]);
    let v = json(&o);
    assert_eq!(v["unique"], "");
    assert_eq!(v["length"], 0);
}

#[test]
fn family_instances() {
    let o = rotdist(&["family", "--name", "longra", "--n", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["word_length"], 8);
    let o = rotdist(&["family", "--name", "badword", "--m", "1", "--n", "6", "--certify", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["predicted_lower_bound"], 16);
    assert_eq!(v["certified"]["distance"], 10);
    assert_eq!(v["certified"]["holds"], false);
    let o = rotdist(&["family", "--name", "spinal", "--I", "1", "--m", "5", "--certify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("distance: 18\n"));
}

#[test]
fn verification_checks() {
    let o = rotdist(&["verify", "--check", "sharp-rr", "--n", "3..6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 4);
    let o = rotdist(&["verify", "--check", "ra-2n2", "--n", "3..7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 5);
    let o = rotdist(&["verify", "--check", "gtables", "--n", "3..6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS gtables n=6"));
    let o = rotdist(&["verify", "--check", "defined-vs-reach", "--gens", "x0,x3", "--n", "3..5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = rotdist(&["verify", "--check", "upper-4n8", "--gens", "x0,x1,y1", "--n", "3..5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = rotdist(&["verify", "--check", "family", "--name", "badword", "--m", "1", "--n", "6..7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().all(|l| l.starts_with("FAIL family")));
}

#[test]
fn cache_table_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["dist", "--metric", "rr", "--t1", "((* *) (* *))", "--t2", "(* (* (* *)))", "--cache", cache, "--json"];
    let first = rotdist(&args);
    assert_eq!(first.status.code(), Some(0));
    let table = std::fs::read_to_string(dir.path().join("distances.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,genset,tree_a,tree_b,distance"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("3,\"x0,x1\","), "{row}");
    assert_eq!(lines.next(), None);
    let second = rotdist(&args);
    assert_eq!(first.stdout, second.stdout);

    let undefined = rotdist(&[
        "dist", "--metric", "rra", "--gens", "x0,x2", "--t1", "(* (* (* *)))", "--t2", "(* ((* *) *))", "--cache",
        cache,
    ]);
    assert_eq!(undefined.status.code(), Some(1));
    let table = std::fs::read_to_string(dir.path().join("distances.csv")).unwrap();
    assert!(table.lines().any(|l| l.ends_with(",undefined")));
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
}
