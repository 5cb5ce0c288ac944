//! End-to-end runs of the `psu4d` binary: outputs, files and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn psu4d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psu4d")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// PG(3,3) points with leading coordinate 1, lexicographic; block `i` is the
/// hyperplane orthogonal to point `i` under the standard dot product.
fn pg33_oracle() -> String {
    let mut pts = Vec::new();
    for n in 0..81u32 {
        let c = [n / 27, n / 9 % 3, n / 3 % 3, n % 3];
        if c.iter().find(|&&x| x != 0) == Some(&1) {
            pts.push(c);
        }
    }
    let mut s = format!("{} {}\n", pts.len(), pts.len());
    for a in &pts {
        let block: Vec<String> = pts
            .iter()
            .enumerate()
            .filter(|(_, b)| a.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<u32>() % 3 == 0)
            .map(|(j, _)| j.to_string())
            .collect();
        s.push_str(&block.join(" "));
        s.push('\n');
    }
    s
}

#[test]
fn construct_pg33_matches_hyperplane_oracle() {
    let o = psu4d(&["construct", "pg33"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), pg33_oracle());
    assert_eq!(String::from_utf8_lossy(&o.stderr), "pg33: (40, 13, 4)\n");
}

#[test]
fn construct_then_verify_every_design() {
    let dir = TempDir::new().unwrap();
    let expected = [
        ("menon36", "(36, 15, 6)", "(36, 21, 12)"),
        ("minus45", "(45, 12, 3)", "(45, 33, 24)"),
        ("higman40", "(40, 13, 4)", "(40, 27, 18)"),
        ("pg33", "(40, 13, 4)", "(40, 27, 18)"),
    ];
    for (kind, base, comp) in expected {
        for (extra, params) in [(None, base), (Some("--complement"), comp)] {
            let file = dir.path().join(format!("{kind}{}.txt", extra.map_or("", |_| "-c")));
            let mut args = vec!["construct", kind, "--out", path_str(&file)];
            args.extend(extra);
            assert_eq!(code(&psu4d(&args)), 0);
            let v = psu4d(&["verify", path_str(&file)]);
            assert_eq!(code(&v), 0, "{kind}");
            assert_eq!(stdout(&v), format!("symmetric design {params}\n"));
        }
    }
}

#[test]
fn stdout_and_file_output_agree() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("m.txt");
    assert_eq!(code(&psu4d(&["construct", "minus45", "--out", path_str(&file)])), 0);
    let piped = psu4d(&["construct", "minus45"]);
    assert_eq!(fs::read_to_string(&file).unwrap(), stdout(&piped));
}

#[test]
fn verify_reports_violations_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.txt");
    // Fano plane with one block damaged.
    fs::write(&broken, "7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 6\n").unwrap();
    let o = psu4d(&["verify", path_str(&broken)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("violation:"), "{}", stdout(&o));

    let fano = dir.path().join("fano.txt");
    fs::write(&fano, "7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n").unwrap();
    assert_eq!(stdout(&psu4d(&["verify", path_str(&fano)])), "symmetric design (7, 3, 1)\n");

    let garbage = dir.path().join("garbage.txt");
    fs::write(&garbage, "7 7\n0 1 x\n").unwrap();
    assert_eq!(code(&psu4d(&["verify", path_str(&garbage)])), 2);
    assert_eq!(code(&psu4d(&["verify", path_str(&dir.path().join("absent.txt"))])), 3);
}

#[test]
fn iso_distinguishes_the_27_18_pair() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    psu4d(&["construct", "pg33", "--complement", "--out", path_str(&a)]);
    psu4d(&["construct", "higman40", "--complement", "--out", path_str(&b)]);
    let o = psu4d(&["iso", path_str(&a), path_str(&b)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "no\n");

    let same = psu4d(&["iso", path_str(&a), path_str(&a)]);
    let text = stdout(&same);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "yes");
    assert_eq!(lines[1].split(' ').count(), 41, "points: plus 40 images");
    assert_eq!(lines[2].split(' ').count(), 41);
}

#[test]
fn sieve_json_is_reproducible_without_timestamp() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("scan.json");
    let args = ["sieve", "--pmax", "5", "--amax", "2", "--no-timestamp", "--json", path_str(&p)];
    assert_eq!(code(&psu4d(&args)), 0);
    let bytes = fs::read(&p).unwrap();
    assert_eq!(code(&psu4d(&args)), 0);
    assert_eq!(bytes, fs::read(&p).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    assert!(v["command"].as_str().unwrap().starts_with("sieve "));
    assert!(v.get("timestamp").is_none());
    let outcomes = v["outcomes"].as_array().unwrap();
    let line8 = outcomes.iter().find(|o| o["line"] == 8 && o["q"] == 2).unwrap();
    assert_eq!(line8["status"], "survivor");
    assert_eq!(line8["candidates"][0]["k"], 15);
    assert_eq!(line8["candidates"][0]["lambda"], 6);
}

#[test]
fn timestamp_present_by_default() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("t.json");
    assert_eq!(code(&psu4d(&["tables", "--table", "3", "--json", path_str(&p)])), 0);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    assert!(v["timestamp"].is_string());
}

#[test]
fn single_line_sieve_text() {
    let o = psu4d(&["sieve", "--line", "6", "--pmax", "2", "--amax", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("41600"), "{text}");
}

#[test]
fn group_checks_and_exit_codes() {
    let o = psu4d(&["group", "--design", "menon36", "--check", "order"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "menon36: order 51840 (PSU4(2):2)\n");
    let o = psu4d(&["group", "--design", "minus45", "--check", "order", "--simple"]);
    assert_eq!(stdout(&o), "minus45: order 25920 (PSU4(2))\n");
    let o = psu4d(&["group", "--design", "higman40", "--check", "rank"]);
    assert_eq!(stdout(&o), "higman40: rank 3, subdegrees 1 12 27\n");
    for check in ["flagtrans", "primitive"] {
        assert_eq!(code(&psu4d(&["group", "--design", "pg33", "--check", check])), 0);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&psu4d(&[])), 2);
    assert_eq!(code(&psu4d(&["sieve", "--line", "0"])), 2);
    assert_eq!(code(&psu4d(&["tables", "--table", "1"])), 2);
    assert_eq!(code(&psu4d(&["group", "--design", "fano", "--check", "order"])), 2);
    assert_eq!(code(&psu4d(&["group", "--design", "pg33", "--check", "everything"])), 2);
}

#[test]
fn json_reports_conform_to_the_schema() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&schema)
        .expect("schema compiles");
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("r.json");
    let runs: &[&[&str]] = &[
        &["sieve", "--pmax", "3", "--amax", "3"],
        &["sieve", "--line", "6", "--pmax", "5", "--amax", "2", "--no-timestamp"],
        &["tables", "--table", "3"],
        &["tables", "--table", "4"],
        &["tables", "--table", "7"],
        &["tables", "--table", "9"],
        &["group", "--design", "pg33", "--check", "flagtrans"],
        &["group", "--design", "menon36", "--check", "rank", "--simple"],
        &["group", "--design", "minus45", "--check", "order"],
    ];
    for args in runs {
        let mut full = args.to_vec();
        full.extend(["--json", path_str(&p)]);
        psu4d(&full);
        let report: serde_json::Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
        let msgs: Vec<String> = match validator.validate(&report) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "{args:?}: {msgs:?}");
    }
    // The schema rejects what it should.
    let mut bad: serde_json::Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    bad["design"] = "fano".into();
    assert!(!validator.is_valid(&bad));
    let mut bad: serde_json::Value = serde_json::from_slice(&fs::read(&p).unwrap()).unwrap();
    bad["degree"] = 0.into();
    assert!(!validator.is_valid(&bad));
    bad["degree"] = "45".into();
    assert!(!validator.is_valid(&bad));
}
