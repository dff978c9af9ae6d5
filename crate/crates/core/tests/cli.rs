use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn lt(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lt-influence"))
        .args(args)
        .env("LT_INFLUENCE_THREADS", "1")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).expect("valid JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const CYCLE: &str = "# nodes=3\n0\t1\t0.5\n1\t2\t0.5\n2\t0\t0.5\n";

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.tsv", CYCLE);
    let (code, out, _) = lt(&["validate", &good]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["result"]["valid"], true);
    assert_eq!(v["result"]["nodes"], 3);

    let bad = write(dir.path(), "bad.tsv", "# nodes=3\n0\t2\t0.7\n1\t2\t0.6\n");
    let (code, out, _) = lt(&["validate", &bad]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["result"]["valid"], false);
}

#[test]
fn exact_both_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.tsv", CYCLE);
    let (code, out, _) = lt(&["exact", &g, "--seeds", "0", "--method", "both"]);
    assert_eq!(code, 0);
    let r = &json(&out)["result"];
    assert!((r["recursion"].as_f64().unwrap() - 1.75).abs() < 1e-12);
    assert!((r["paths"].as_f64().unwrap() - 1.75).abs() < 1e-12);
}

#[test]
fn simulate_is_reproducible_and_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.tsv", CYCLE);
    let a = lt(&["simulate", &g, "--seeds", "0", "--runs", "2000", "--rng", "17"]);
    let b = lt(&["simulate", &g, "--seeds", "0", "--runs", "2000", "--rng", "17"]);
    assert_eq!(a.0, 0);
    let (va, vb) = (json(&a.1), json(&b.1));
    assert_eq!(va["result"], vb["result"]);
    assert_eq!(va["manifest"]["rng_seeds"]["rng"], 17);

    // Without --rng a seed is generated and announced.
    let (code, out, err) = lt(&["simulate", &g, "--seeds", "0", "--runs", "100"]);
    assert_eq!(code, 0);
    assert!(err.contains("no --rng given"));
    assert!(json(&out)["manifest"]["rng_seeds"]["rng"].is_u64());
}

#[test]
fn tsv_output_starts_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.tsv", CYCLE);
    let (code, out, _) = lt(&["--format", "tsv", "rank", &g, "--method", "degree"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with('#'));
    let header = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert_eq!(lines[header], "rank\tnode\tscore");
    assert_eq!(lines.len() - header - 1, 3);
}

#[test]
fn compare_emits_one_row_per_method_and_k() {
    let dir = tempfile::tempdir().unwrap();
    let (code, graph_tsv, _) = lt(&["--format", "tsv", "gen", "--random", "12", "--edge-prob", "0.3", "--rng", "5"]);
    assert_eq!(code, 0);
    let g = write(dir.path(), "g.tsv", &graph_tsv);
    let (code, out, err) =
        lt(&["compare", &g, "--k", "5", "--methods", "greedy,pagerank", "--runs", "500", "--rng", "1"]);
    assert_eq!(code, 0, "{err}");
    let rows = json(&out)["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 10);
    let (code, _, _) = lt(&["compare", &g, "--k", "5", "--methods", "bogus", "--runs", "10", "--rng", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn greedy_and_sieve_report_calls() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.tsv", CYCLE);
    let (code, out, _) = lt(&["greedy", &g, "--k", "2", "--exact"]);
    assert_eq!(code, 0);
    let r = &json(&out)["result"];
    assert_eq!(r["chosen"].as_array().unwrap().len(), 2);
    assert_eq!(r["evaluator_calls"], 5);
    let (code, out, _) = lt(&["sieve", &g, "--k", "2", "--exact"]);
    assert_eq!(code, 0);
    assert!(json(&out)["result"]["evaluator_calls"].as_u64().unwrap() >= 3);
    let (code, _, _) = lt(&["greedy", &g, "--k", "4", "--exact"]);
    assert_eq!(code, 1);
}

#[test]
fn gen_degree_tree_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.tsv");
    let p = path.to_str().unwrap();
    let (code, _, _) = lt(&["gen", "--degree", "--tree", "15", "--rng", "3", "-o", p]);
    assert_eq!(code, 0);
    let (code, out, _) = lt(&["validate", p]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["edges"], 28);
}

#[test]
fn gen_uislt_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.tsv");
    let p = path.to_str().unwrap();
    let alphas = "0.2,0.4,0.3";
    let betas = "1,1.2,1.1";
    let (code, _, err) = lt(&["gen", "--uislt", "--alphas", alphas, "--betas", betas, "-o", p]);
    assert_eq!(code, 0, "{err}");
    let (_, exact, _) = lt(&["exact", p, "--seeds", "0,2"]);
    let (_, closed, _) = lt(&["closed-form", "--uislt", "--alphas", alphas, "--betas", betas, "--seeds", "0,2"]);
    let e = json(&exact)["result"]["recursion"].as_f64().unwrap();
    let c = json(&closed)["result"]["evaluation"]["sigma"].as_f64().unwrap();
    assert!((e - c).abs() < 1e-9);
}

#[test]
fn ingest_builds_a_valid_graph() {
    let dir = tempfile::tempdir().unwrap();
    let records = write(dir.path(), "papers.tsv", "p1\tann,bob\np2\tann,bob,cy\np3\tcy\n");
    let out_path = dir.path().join("g.tsv");
    let o = out_path.to_str().unwrap();
    let (code, _, err) = lt(&["ingest", "--coauth", &records, "-o", o]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = lt(&["validate", o]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["nodes"], 3);
}

#[test]
fn optimum_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.tsv", CYCLE);
    let (code, out, _) = lt(&["optimum", &g, "--k", "1"]);
    assert_eq!(code, 0);
    assert!((json(&out)["result"]["sigma"].as_f64().unwrap() - 1.75).abs() < 1e-12);
    let (code, _, _) = lt(&["optimum", &g, "--k", "2", "--budget", "1"]);
    assert_eq!(code, 1);
    let (code, _, _) = lt(&["exact", &g, "--seeds", "7"]);
    assert_eq!(code, 1);
    let (code, _, _) = lt(&["--version"]);
    assert_eq!(code, 0);
}
