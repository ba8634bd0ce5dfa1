// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nvcache-dse");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).arg("--out").arg(dir).output().unwrap()
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn tune_writes_one_row_per_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["tune", "--caps", "1,2,4,8,16,32"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&dir.path().join("tuner.csv"));
    assert_eq!(rows.len(), 3 * 6);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("tuner.json")).unwrap()).unwrap();
    assert_eq!(json["mix"]["read_fraction"], 0.8);
}

#[test]
fn iso_area_reports_published_capacities() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["iso-area", "--budget-from", "SRAM:3", "--tolerance", "1.02"]);
    assert!(out.status.success());
    let rows = data_rows(&dir.path().join("iso_area_capacities.csv"));
    let cap = |t: &str| rows.iter().find(|r| r[0] == t).unwrap()[1].clone();
    assert_eq!((cap("STT"), cap("SOT")), ("7".to_string(), "10".to_string()));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("iso_area_dram.json")).unwrap()).unwrap();
    assert_eq!(json["parameters"]["tolerance"], 1.02);
    assert!(json["parameters"]["provenance"].as_str().unwrap().len() > 10);
}

#[test]
fn simulate_misses_non_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(
        dir.path(),
        &["gen-trace", "--length", "150000", "--working-set-bytes", "12582912", "--hot-fraction", "0.4", "--seed", "5"],
    );
    assert!(gen.status.success());
    let trace = dir.path().join("trace.txt");
    let out = run(dir.path(), &["simulate", "--trace", trace.to_str().unwrap(), "--caps", "3,6,12,24", "--line", "128"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let misses: Vec<u64> = data_rows(&dir.path().join("sim.csv")).iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(misses.len(), 4);
    assert!(misses.windows(2).all(|w| w[1] <= w[0]), "{misses:?}");
}

fn assert_error(out: &Output, code: i32, kind: &str) {
    assert_eq!(out.status.code(), Some(code));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error kind={kind} code={code}:")), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "tech,opt\nSRAM,EDAP\n").unwrap();
    assert_error(&run(dir.path(), &["iso-capacity", "--curves", bad.to_str().unwrap()]), 2, "parse");
    assert_error(&run(dir.path(), &["ppa", "--tech", "SOT", "--capacity", "64"]), 3, "range");
    assert_error(&run(dir.path(), &["iso-area", "--grid", "30,32"]), 4, "infeasible");
    assert_error(&run(dir.path(), &["tune", "--no-such-flag"]), 2, "usage");
    assert_error(&run(dir.path(), &["simulate", "--trace", "/nonexistent/t.txt"]), 1, "io");
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "0")] {
        let out = Command::new(BIN)
            .env("NVCACHE_DSE_THREADS", threads)
            .args(["scalability", "--out"])
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for name in ["scalability.json", "scalability_tuned.csv", "plot_scalability_edp.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
