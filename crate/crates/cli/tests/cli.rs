//! End-to-end tests of the command-line surface: exit codes, emitted
//! files, and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn subiso() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subiso"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let c3 = write(dir.path(), "c3", "digraph 3\n1 2\n2 3\n3 1\n");
    let path = write(dir.path(), "path", "digraph 3\n1 2\n2 3\n");
    let edge = write(dir.path(), "edge", "digraph 2\n1 2\n2 1\n");

    let yes = subiso().arg("check").arg(&c3).arg(&path).output().unwrap();
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("YES"));

    let no = subiso().arg("check").arg(&c3).arg(&edge).output().unwrap();
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("NO"));

    let missing = subiso()
        .arg("check")
        .arg(dir.path().join("nope"))
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let malformed = write(dir.path(), "bad", "digraph 2\n1 5\n");
    let parse_error = subiso()
        .arg("check")
        .arg(&malformed)
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(parse_error.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse_error.stderr).contains("line 2"));
}

#[test]
fn oracle_prints_witness_and_matches_check() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge", "digraph 2\n1 2\n2 1\n");
    let arc = write(dir.path(), "arc", "digraph 2\n1 2\n");
    let out = subiso()
        .arg("oracle")
        .arg(&edge)
        .arg(&arc)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("YES"));
    assert!(text.contains("witness: 1->1 2->2"));

    // Oversized pattern resolves to NO without an error.
    let big = write(dir.path(), "big", "digraph 3\n1 2\n");
    let no = subiso()
        .arg("oracle")
        .arg(&edge)
        .arg(&big)
        .output()
        .unwrap();
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn check_emits_certificate_and_lp_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g", "digraph 2\n1 2\n");
    let s = write(dir.path(), "s", "digraph 2\n2 1\n");
    let lp_path = dir.path().join("out.lp");
    let out = subiso()
        .arg("check")
        .arg(&g)
        .arg(&s)
        .arg("--emit-certificate")
        .arg("--emit-lp")
        .arg(&lp_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let json_start = text
        .find('{')
        .expect("certificate JSON follows the verdict");
    let cert: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(cert["status"], "feasible");
    assert!(cert["assignment"].as_object().unwrap().len() >= 3);

    let lp = fs::read_to_string(&lp_path).unwrap();
    assert!(lp.starts_with("Minimize"));
    assert!(lp.contains("Subject To"));
    assert!(lp.contains("Bounds"));
    assert!(lp.trim_end().ends_with("End"));
    assert!(lp.contains("x_1_2_1_2 = 0"));
}

#[test]
fn emit_lp_subcommand_writes_n1_system() {
    let dir = tempfile::tempdir().unwrap();
    let v = write(dir.path(), "v", "digraph 1\n1 1\n");
    let out_path = dir.path().join("v.lp");
    let out = subiso()
        .arg("emit-lp")
        .arg(&v)
        .arg(&v)
        .arg("--output")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let lp = fs::read_to_string(&out_path).unwrap();
    assert!(lp.contains(" c1: y_1_1 = 1\n"));
}

#[test]
fn examples_reports_all_matches() {
    let out = subiso().arg("examples").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cycle-vs-path"));
    assert!(text.contains("all verdicts match"));
}

#[test]
fn compare_is_bit_reproducible_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let j1 = dir.path().join("a.json");
    let j2 = dir.path().join("b.json");
    for path in [&j1, &j2] {
        let out = subiso()
            .args([
                "compare",
                "--n",
                "3",
                "--trials",
                "40",
                "--seed",
                "11",
                "--arc-probability",
                "2/3",
                "--pattern-density",
                "1/3",
                "--json",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    assert_eq!(fs::read(&j1).unwrap(), fs::read(&j2).unwrap());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&j1).unwrap()).unwrap();
    assert_eq!(report["trials"], 40);
    assert_eq!(report["lp_infeasible_and_oracle_yes"], 0);
}

#[test]
fn compare_exhaustive_census_covers_all_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("census.json");
    let out = subiso()
        .args(["compare", "--n", "2", "--exhaustive", "--json"])
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["trials"], 256);
    let yes = report["lp_feasible_and_oracle_yes"].as_u64().unwrap();
    let no = report["lp_infeasible_and_oracle_no"].as_u64().unwrap();
    let gap = report["lp_feasible_and_oracle_no"].as_u64().unwrap();
    let unsound = report["lp_infeasible_and_oracle_yes"].as_u64().unwrap();
    assert_eq!(yes + no + gap + unsound, 256);
    assert_eq!(unsound, 0);
}

#[test]
fn tsp_reports_value_and_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let w = write(
        dir.path(),
        "w",
        "wdigraph 3\n1 2 1\n2 3 1\n3 1 1\n1 3 4\n3 2 4\n2 1 4\n",
    );
    let out = subiso().arg("tsp").arg(&w).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("optimal value: 3"));
    assert!(text.contains("brute-force tour optimum: 3"));

    // A vertex with no outgoing weight makes the program infeasible.
    let broken = write(
        dir.path(),
        "broken",
        "wdigraph 3\n1 2 1\n2 1 1\n1 3 1\n2 3 1\n",
    );
    let out = subiso().arg("tsp").arg(&broken).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("infeasible"));

    // Negative weights are legal.
    let negative = write(dir.path(), "neg", "wdigraph 2\n1 2 -3\n2 1 -1/2\n");
    let out = subiso().arg("tsp").arg(&negative).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("optimal value: -7/2"));
}

#[test]
fn sat_agrees_with_its_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = subiso().arg("sat").arg(&unsat).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("lp: NO"));
    assert!(text.contains("oracle: NO"));
    assert!(text.contains("agree: true"));

    let sat = write(dir.path(), "sat.cnf", "p cnf 2 2\n1 2 0\n1 0\n");
    let out = subiso().arg("sat").arg(&sat).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("agree: true"));

    let bad = write(dir.path(), "bad.cnf", "p cnf 1 1\n2 0\n");
    let out = subiso().arg("sat").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pivot_limit_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let c3 = write(dir.path(), "c3", "digraph 3\n1 2\n2 3\n3 1\n");
    let path = write(dir.path(), "path", "digraph 3\n1 2\n2 3\n");
    let out = subiso()
        .arg("check")
        .arg(&c3)
        .arg(&path)
        .env("SUBISO_PIVOT_LIMIT", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pivot limit"));

    let bad = subiso()
        .arg("check")
        .arg(&c3)
        .arg(&path)
        .env("SUBISO_PIVOT_LIMIT", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn propagate_flag_keeps_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write(dir.path(), "c4", "digraph 4\n1 2\n2 3\n3 4\n4 1\n");
    let c3 = write(dir.path(), "c3", "digraph 3\n1 2\n2 3\n3 1\n");
    let plain = subiso().arg("check").arg(&c4).arg(&c3).output().unwrap();
    let depleted = subiso()
        .arg("check")
        .arg(&c4)
        .arg(&c3)
        .arg("--propagate")
        .output()
        .unwrap();
    assert_eq!(plain.status.code(), depleted.status.code());
    assert_eq!(plain.status.code(), Some(1));
}
