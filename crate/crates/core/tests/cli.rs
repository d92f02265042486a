use std::path::PathBuf;
use std::process::{Command, Output};

use trinom::record::{read_jsonl, RunManifest};

fn trinom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinom")).args(args).env_remove("TRINOM_FACTORS").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn s_values(out: &Output) -> Vec<u64> {
    read_jsonl(out.stdout.as_slice()).unwrap().iter().map(|r| r.s).collect()
}

#[test]
fn search_examples() {
    let out = trinom(&["search", "--r", "107", "--delta", "2", "--mode", "apt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(s_values(&out), vec![8, 14, 17]);

    let out = trinom(&["search", "--r", "8", "--min-delta-search", "--cap", "16", "--mode", "apt"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = read_jsonl(out.stdout.as_slice()).unwrap();
    assert!(recs.iter().all(|r| r.delta == 5));
    assert_eq!(s_values(&out), vec![1, 2]);

    let out = trinom(&["search", "--r", "13", "--delta", "0", "--mode", "ait"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
}

#[test]
fn search_output_verifies_and_threads_do_not_matter() {
    let dir = tempfile::tempdir().unwrap();
    let rows = dir.path().join("rows.jsonl");
    let manifest = dir.path().join("manifest.json");
    let out = trinom(&[
        "search",
        "--r",
        "30",
        "--delta",
        "9",
        "--mode",
        "ait",
        "--out",
        rows.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m: RunManifest = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m.command, "search");
    assert_eq!(m.parameters["delta"], "9");
    assert!(!m.records.is_empty());
    let verified = trinom(&["verify", "--rows", rows.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0), "{}", stdout(&verified));

    let one = trinom(&["--threads", "1", "search", "--r", "61", "--delta", "5"]);
    let two = trinom(&["--threads", "2", "search", "--r", "61", "--delta", "5"]);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(s_values(&one), vec![17]);
}

#[test]
fn bundled_rows_verify() {
    for file in ["mersenne_small.jsonl", "pow2_k3_8.jsonl"] {
        let out = trinom(&["verify", "--rows", &data(file)]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stdout(&out));
    }
}

#[test]
fn corrupted_row_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    let good = std::fs::read_to_string(data("mersenne_small.jsonl")).unwrap();
    std::fs::write(&path, good.replacen("\"f\":\"7\"", "\"f\":\"3\"", 1)).unwrap();
    let out = trinom(&["verify", "--rows", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("MISMATCH row 1"));
}

#[test]
fn census_rows() {
    let out = trinom(&["census", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,N_ait,E_ait\n2,1,1.0000\n");

    let out = trinom(&["census", "--n-max", "30", "--mode", "apt"]);
    assert_eq!(stdout(&out), include_str!("data/census30_apt.csv"));

    let out = trinom(&["census", "--n-max", "4", "--exact"]);
    assert_eq!(stdout(&out), "n,N_ait,E_ait\n2,1,1/1\n3,2,1/1\n4,2,5/6\n");
}

#[test]
fn field_demo() {
    let out = trinom(&["field-demo", "--r", "13", "--s", "3", "--delta", "3", "order"]);
    let text = stdout(&out);
    assert!(text.contains("rho = 57337\n") && text.contains("f = 7\n"), "{text}");
    let out = trinom(&["field-demo", "--r", "8", "--s", "1", "--delta", "5", "order"]);
    assert!(stdout(&out).contains("f = 31\n"));

    let canon = |hex: &str| stdout(&trinom(&["field-demo", "--r", "13", "--s", "3", "--delta", "3", "canon", hex]));
    let once = canon("b7e3");
    assert_eq!(canon("b7e3"), once);
    assert_eq!(canon(once.trim()), once);

    let out = trinom(&["field-demo", "--r", "5", "--s", "2", "--delta", "0", "lfsr", "--count", "10"]);
    assert_eq!(stdout(&out), "1010111011\n");
}

#[test]
fn exit_codes() {
    assert_eq!(trinom(&["search", "--r", "13"]).status.code(), Some(64));
    assert_eq!(trinom(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(trinom(&["--help"]).status.code(), Some(0));
    assert_eq!(trinom(&["search", "--r", "300", "--delta", "2", "--mode", "apt"]).status.code(), Some(2));
    assert_eq!(trinom(&["verify", "--rows", "/nonexistent/rows.jsonl"]).status.code(), Some(2));
    let cert = trinom(&["field-demo", "--r", "13", "--s", "5", "--delta", "3", "order"]);
    assert_eq!(cert.status.code(), Some(3));
    assert_eq!(trinom(&["search", "--r", "13", "--delta", "20"]).status.code(), Some(64));
}

#[test]
fn factor_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let out = trinom(&["factors", "generate", "--max", "128", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // the bundled rows up to 128 were produced the same way
    let generated = std::fs::read_to_string(&path).unwrap();
    let bundled = trinom::apt::FactorTable::bundled();
    let regenerated = trinom::apt::FactorTable::parse(&generated).unwrap();
    for r in 2..=128 {
        assert_eq!(regenerated.get(r), bundled.get(r), "r = {r}");
    }
    assert_eq!(trinom(&["factors", "check", path.to_str().unwrap()]).status.code(), Some(0));

    std::fs::write(&path, "300: 7\n").unwrap();
    assert_eq!(trinom(&["factors", "check", path.to_str().unwrap()]).status.code(), Some(2));
    let extra = dir.path().join("extra.txt");
    std::fs::write(&extra, "300: 7\n").unwrap();
    let out = trinom(&["--factors", extra.to_str().unwrap(), "census", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = trinom(&["factors", "show", "12"]);
    assert!(stdout(&out).contains("3^2 * 5 * 7 * 13"), "{}", stdout(&out));
}
