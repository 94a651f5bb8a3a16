use std::process::{Command, Output};

use serde_json::Value;

fn perminv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perminv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_n3_reproduces_diagonal() {
    let out = perminv(&["spectrum", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "perminv/1");
    assert_eq!(v["pass"], true);
    let clusters = v["report"]["result"]["clusters"].as_array().unwrap();
    let got: Vec<(f64, u64)> = clusters
        .iter()
        .map(|c| (c["value"].as_f64().unwrap(), c["multiplicity"].as_u64().unwrap()))
        .collect();
    let want = [(0.0, 1), (1.5, 4), (3.0, 1)];
    assert_eq!(got.len(), 3);
    for ((g, gm), (w, wm)) in got.iter().zip(want) {
        assert!((g - w).abs() < 1e-6);
        assert_eq!(*gm, wm);
    }
}

#[test]
fn young_eigenvalues_n4() {
    let out = perminv(&["young", "eigenvalues", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows: Vec<(String, String)> = v["report"]["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["lambda"].to_string(), r["e"].as_str().unwrap().to_string()))
        .collect();
    let want = [("[4]", "0"), ("[3,1]", "4/3"), ("[2,2]", "4"), ("[2,1,1]", "8/3"), ("[1,1,1,1]", "4")];
    assert_eq!(rows.len(), want.len());
    for ((l, e), (wl, we)) in rows.iter().zip(want) {
        assert_eq!(l, wl);
        assert_eq!(e, we);
    }
}

#[test]
fn hellman_csv_defaults() {
    let out = perminv(&["hellman", "--log-n", "12", "--t", "64", "--trials", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,t,s_entries,s_bits,t_max,t_avg,success,st_product"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "4096");
    assert_eq!(row[6], "1");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("\"seed\":7"), "config line missing: {stderr}");
}

#[test]
fn identical_flags_give_identical_bytes() {
    for args in [
        &["avgbound", "--n", "4", "--samples", "20", "--seed", "3"][..],
        &["game", "--n", "3", "--program", "random", "--p", "1", "--t", "1", "--seed", "9", "--check"][..],
        &["altgame", "--n", "3", "--adversaries", "2", "--seed", "5"][..],
        &["hellman", "--n", "5000", "--t", "70,140", "--trials", "2", "--format", "json"][..],
    ] {
        let a = perminv(args);
        let b = perminv(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let a = perminv(&["hellman", "--n", "3000", "--t", "55,110", "--threads", "1"]);
    let b = perminv(&["hellman", "--n", "3000", "--t", "55,110", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(perminv(&["spectrum"]).status.code(), Some(2));
    assert_eq!(perminv(&["no-such-suite"]).status.code(), Some(2));
    let cap = perminv(&["spectrum", "--n", "12"]);
    assert_eq!(cap.status.code(), Some(2));
    let record: Value = serde_json::from_str(String::from_utf8(cap.stderr).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(record["error"]["kind"], "usage");
    assert_eq!(perminv(&["young", "dims", "--n", "4", "--format", "csv", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(perminv(&["young", "identities", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn verification_failure_exits_1() {
    // The fixed small-angle model does not reach the 0.999 fit threshold at N = 1024.
    let out = perminv(&["grover", "--n", "1024", "--t", "1,2,3,4,5,6,7,8,9,10", "--fit"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["report"]["result"]["fit"]["r2_fixed"].as_f64().unwrap() < 0.999);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("perminv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.csv");
    let out = perminv(&["young", "dims", "--n", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("lambda,dim,level\n"));
    assert_eq!(text.lines().count(), 8);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn game_transcript_fields() {
    let out = perminv(&["game", "--n", "3", "--program", "empty"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["report"]["result"];
    for key in ["n", "p", "t", "postselect_prob", "per_challenge", "lemma_checks"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    for c in r["per_challenge"].as_array().unwrap() {
        assert!((c["p_succ"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn text_and_decomp() {
    let out = perminv(&["decomp-check", "--n", "4", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# decomp-check seed=0 pass=true"));
    assert!(text.contains("dim A_1 = 10"));
}
