use std::fs;
use std::path::Path;

use zchan_cli::app::{run_args, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut all = vec!["zchan"];
    all.extend_from_slice(args);
    run_args(all).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_and_free_points() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.zcode");
    fs::write(&good, "# zcode v1\nn=4 t=1 M=4\n0000\n0011\n1100\n1111\n").unwrap();
    let out = run(&["validate", path(&good)]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("valid: yes") && out.stdout.contains("min d_Z: 2"));

    let bad = dir.path().join("bad.zcode");
    fs::write(&bad, "# zcode v1\nn=4 t=1 M=2\n0000\n0001\n").unwrap();
    let out = run(&["validate", path(&bad)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("violation: 0000 0001 (d_Z=1)"));

    let out = run(&["free-points", path(&good)]);
    assert!(out.stdout.starts_with("free points: 4\n"));
    let v: serde_json::Value = serde_json::from_str(&run(&["--format", "json", "free-points", path(&good)]).stdout).unwrap();
    assert_eq!(v["free"], 4);
    assert_eq!(v["points"], serde_json::json!(["0101", "0110", "1001", "1010"]));
    assert!(run_args(["zchan", "free-points", path(&bad)]).is_err());
}

#[test]
fn bound_and_exact_search() {
    assert!(run(&["bound", "--n", "7", "--m", "18"]).stdout.starts_with("n=7 M=18 t=1: F <= 49\n"));
    assert!(run(&["bound", "--n", "4", "--m", "5"]).stdout.contains("no weight distribution is feasible"));
    let out = run(&["search", "exact", "--n", "7", "--m", "17"]);
    assert!(out.stdout.starts_with("n=7 M=17 status=optimal F=55 upper=56"), "{}", out.stdout);
    let out = run(&["--format", "tsv", "search", "exact", "--n", "4", "--m", "5"]);
    assert_eq!(out.stdout.lines().nth(1).unwrap().split('\t').nth(2), Some("infeasible"));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.zcode");
    run(&["search", "exact", "--n", "6", "--m", "12", "--out", path(&file)]);
    assert!(run(&["free-points", path(&file)]).stdout.starts_with("free points: 16\n"));
}

#[test]
fn randomized_commands_need_seeds() {
    assert!(run_args(["zchan", "search", "heuristic", "--n", "8", "--target", "30", "--budget", "10"]).is_err());
    assert!(run_args(["zchan", "reproduce", "--tables", "V"]).is_err());
    let err = run_args(["zchan", "tradeoff", "--n", "9"]).unwrap_err().to_string();
    assert!(err.contains("--seed"), "{}", err);
    let out = run(&["--format", "tsv", "tradeoff", "--n", "4"]);
    assert_eq!(out.stdout, "M\tF\tstatus\tdistribution\n0\t16\toptimal\t0+0+0+0+0\n1\t15\toptimal\t1+0+0+0+0\n2\t12\toptimal\t1+0+1+0+0\n3\t9\toptimal\t1+0+2+0+0\n4\t4\toptimal\t1+0+2+0+1\n");
}

#[test]
fn heuristic_output() {
    let out = run(&["search", "heuristic", "--n", "8", "--target", "36", "--budget", "20000", "--seed", "3"]);
    assert!(out.stdout.starts_with("n=8 size=36 target=36 reached=true"), "{}", out.stdout);
}

#[test]
fn twostage_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let out = run(&["twostage", "build", "--n1", "5", "--n2", "4", "--sizes", "2,2,3,3,4,4", "--out", path(&file)]);
    assert!(out.stdout.starts_with("n1=5 n2=4 messages=96\n"), "{}", out.stdout);
    assert_eq!(run(&["twostage", "verify", "--scheme", path(&file)]).code, 0);

    for m in [1u64, 40, 96] {
        let m = m.to_string();
        let enc: serde_json::Value =
            serde_json::from_str(&run(&["--format", "json", "twostage", "encode", "--scheme", path(&file), "--message", &m]).stdout)
                .unwrap();
        let y = format!("{}{}", enc["first"].as_str().unwrap(), enc["second"].as_str().unwrap());
        let dec = run(&["--format", "tsv", "twostage", "decode", "--scheme", path(&file), "--received", &y]);
        assert_eq!(dec.stdout, format!("received\tmessage\n{}\t{}\n", y, m));
    }
    let out = run(&["twostage", "encode", "--scheme", path(&file), "--message", "96", "--feedback", "11011"]);
    assert_eq!(out.stdout, "message 96: first 11111 second 1010\n");

    let text = fs::read_to_string(&file).unwrap().replacen("\"0101\": \"11111\"", "\"0001\": \"11111\"", 1);
    fs::write(&file, text).unwrap();
    assert!(run_args(["zchan", "twostage", "verify", "--scheme", path(&file)]).is_err());
}

#[test]
fn twostage_optimize_small() {
    let out = run(&["twostage", "optimize", "--n", "7", "--method", "dp", "--budget", "100000", "--seed", "1"]);
    assert!(out.stdout.starts_with("n1=5 n2=2 messages=29\n"), "{}", out.stdout);
    let out = run(&["twostage", "optimize", "--n", "8", "--budget", "100000", "--seed", "1"]);
    assert!(out.stdout.starts_with("n1=6 n2=2 messages=53\n"), "{}", out.stdout);
}

#[test]
fn reproduce_exit_codes() {
    let out = run(&["reproduce", "--tables", "V", "--seed", "0"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("n=13  1024       1024      match"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("allow.txt");
    fs::write(&empty, "# nothing is expected to differ\n").unwrap();
    let out = run(&["reproduce", "--tables", "II", "--seed", "1", "--allowlist", path(&empty)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("n=7 M=17  56         55        mismatch"));
    let out = run(&["reproduce", "--tables", "II", "--seed", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("mismatch (known)"));

    let err = run_args(["zchan", "reproduce", "--tables", "III", "--budget", "0", "--seed", "1"]).unwrap_err();
    assert!(err.to_string().contains("tradeoff_n7.tsv"), "{}", err);

    let v: serde_json::Value = serde_json::from_str(&run(&["--format", "json", "reproduce", "--tables", "V", "--seed", "0"]).stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["sections"][0]["cells"].as_array().unwrap().len(), 9);
}
