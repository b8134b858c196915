use std::io::Write;
use std::process::{Command, Output, Stdio};

use dupdist::PathCertificate;
use serde_json::Value;

fn dupdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dupdist")).args(args).output().expect("binary runs")
}

fn dupdist_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dupdist"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn distance_examples() {
    let o = dupdist(&["distance", "-q", "2", "0101"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("f=1"));
    let cert = PathCertificate::from_json(lines.next().unwrap()).unwrap();
    assert!(cert.verify().is_ok());

    let o = dupdist(&["distance", "-q", "2", "--beta", "1/1", "0011"]);
    assert!(stdout(&o).starts_with("f_beta=2\n"));
    let o = dupdist(&["distance", "-q", "3", "012"]);
    assert!(stdout(&o).starts_with("f=0\n"));
}

#[test]
fn distance_json_reverifies() {
    let o = dupdist(&["distance", "--format", "json", "-q", "3", "0120120", "2211"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 2);
    for item in items {
        let cert = PathCertificate::from_json(&item["certificate"].to_string()).unwrap();
        assert!(cert.verify().is_ok());
        assert_eq!(cert.len() as u64, item["f"].as_u64().unwrap());
    }
}

#[test]
fn distance_reads_text_format() {
    let o = dupdist_stdin(&["distance", "--input", "-"], "# sample\nq=2\n000\n0101\n");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let fs: Vec<&str> = out.lines().filter(|l| l.starts_with("f=")).collect();
    assert_eq!(fs, ["f=2", "f=1"]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&dupdist(&["distance", "-q", "2", "0120"])), 1);
    assert_eq!(code(&dupdist(&["distance", "--beta", "0.5", "0101"])), 1);
    assert_eq!(code(&dupdist(&["frobnicate"])), 1);
    assert_eq!(code(&dupdist(&["--help"])), 0);
    let o = dupdist(&["distance", "--budget-states", "3", "0001011100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("<= f <="));
    let o = dupdist(&["table", "-n", "12", "--budget-states", "100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("largest completed n=6"));
    assert_eq!(code(&dupdist(&["debruijn", "-q", "2", "-k", "2", "--verify", "0101"])), 3);
}

#[test]
fn table_output_and_check() {
    let o = dupdist(&["table", "-q", "2", "-n", "8"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 8);
    assert!(out.lines().last().unwrap().starts_with("8\t5\t"));
    assert_eq!(stdout(&dupdist(&["table", "-q", "2", "-n", "1"])), "1\t0\t0\n");
    assert_eq!(code(&dupdist(&["table", "-q", "2", "-n", "16", "--check-table1"])), 0);

    let o = dupdist(&["table", "-n", "10", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f: Vec<u64> = v.as_array().unwrap().iter().map(|e| e["fmax"].as_u64().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(f.last(), Some(&6));
}

#[test]
fn greedy_and_repeat() {
    let o = dupdist(&["greedy", "-q", "2", "0101"]);
    let out = stdout(&o);
    assert!(out.starts_with("steps=1\n"));
    let cert = PathCertificate::from_json(out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(cert.root.to_string(), "01");

    let o = dupdist(&["repeat", "-q", "2", "011011", "-k", "3"]);
    assert!(stdout(&o).starts_with("b=011 at 0 b_hat=011 at 3"));
    assert_eq!(stdout(&dupdist(&["repeat", "-q", "3", "001022112", "-k", "2"])), "none\n");
    let o = dupdist(&["repeat", "-q", "2", "--beta", "1/1", "000111", "-k", "3"]);
    assert!(stdout(&o).contains("admitted=fallback"));
}

#[test]
fn debruijn_and_bounds() {
    assert_eq!(code(&dupdist(&["debruijn", "-q", "3", "-k", "2", "--verify", "001022112"])), 0);
    let o = dupdist(&["debruijn", "-q", "2", "-k", "3", "--linear"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("0001011100"));

    let o = dupdist(&["bounds", "-q", "2", "--beta", "3/4", "-n", "1024"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("c=3 q'=4/3"));
    let o = dupdist(&["bounds", "-q", "2", "-n", "1024", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["entries"].as_array().unwrap().iter().any(|e| e["name"] == "counting" && e["value"] == 34));
}

#[test]
fn codec_round_trip() {
    let o = dupdist(&["codec", "--beta", "1/1", "decode", "--root", "0", "--steps", "0,1,0,0;0,2,0,3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("0011"));
    let cert_json = lines.next().unwrap().to_string();

    let o = dupdist_stdin(&["codec", "encode", "-"], &cert_json);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q=2 root=0 beta=1/1\n0,1,0,0;0,2,0,3\n");

    let tampered = cert_json.replace("0011", "0010");
    assert_eq!(code(&dupdist_stdin(&["codec", "encode", "-"], &tampered)), 3);
}

#[test]
fn code_and_random_are_deterministic() {
    let o = dupdist(&["code", "-q", "2", "-k", "3", "--beta", "1"]);
    assert_eq!(stdout(&o), "M=2 min_distance=3 nodes=0\n000\n111\n");
    let a = dupdist(&["random", "-q", "4", "-n", "12", "--count", "3", "--seed", "7"]);
    let b = dupdist(&["random", "-q", "4", "-n", "12", "--count", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 4);
}
