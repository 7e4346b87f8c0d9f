use std::path::Path;
use std::process::{Command, Output};

use calogero::text::parse_expression;

fn calogero(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_calogero"));
    cmd.env_remove("CALOGERO_CACHE_DIR");
    match cache {
        Some(dir) => cmd.arg("--cache-dir").arg(dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&calogero(None, &["jacobi", "0,0,0,0,0,0,1", "--algebra", "E7"])), "z7\n");
    assert_eq!(
        stdout(&calogero(None, &["mult", "1,0,0,0,0,0,0", "--algebra", "E7"])),
        "M(1000000):1  M(0000000):7\n"
    );
    assert_eq!(stdout(&calogero(None, &["orbit", "0,0,0,0,0,0,0"])), "size 1\n");
    assert_eq!(stdout(&calogero(None, &["m2z", "1,0,0,0,0,0,0"])), "z1 - 7\n");
}

#[test]
fn algebra_info() {
    let text = stdout(&calogero(None, &["-a", "E7", "algebra", "info"]));
    assert!(text.contains("positive roots 63"));
    assert!(text.contains("fundamental dimensions 133 912 8645 365750 27664 1539 56"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&calogero(None, &["-a", "D4", "-f", "json", "algebra", "info"]))).unwrap();
    assert_eq!(json["positive_roots"], 12);
}

#[test]
fn exit_codes_by_category() {
    let code = |args: &[&str]| calogero(None, args).status.code();
    assert_eq!(code(&["-a", "A2", "mult", "1,x"]), Some(2));
    assert_eq!(code(&["-a", "A2", "mult", "1,0,0"]), Some(2));
    assert_eq!(code(&["-a", "A2", "mult", "1,-1"]), Some(2));
    assert_eq!(code(&["-a", "E7", "jacobi", "1000000", "--kappa", "-1/17"]), Some(3));
    assert_eq!(code(&["-a", "F4", "algebra", "info"]), Some(5));
    assert_eq!(code(&["-a", "A2", "verify-paper"]), Some(1));
    assert_eq!(code(&["no-such-command"]), Some(2));
}

#[test]
fn specialization_and_series() {
    assert_eq!(
        stdout(&calogero(None, &["jacobi", "0000002", "--kappa", "0"])),
        "z7^2 - 2 z6 - 2\n"
    );
    assert_eq!(
        stdout(&calogero(None, &["cg", "0000001", "0000001", "--classical"])),
        "chi(0000002) + chi(0000010) + chi(1000000) + chi(0000000)\n"
    );
    assert_eq!(
        stdout(&calogero(None, &["cg", "0000001", "0000001"])),
        "P(0000002) + 2/(1 + κ) P(0000010) + 12 (1 + 4 κ)/((1 + 5 κ) (1 + 9 κ)) P(1000000) \
         + 56 (1 + 4 κ) (1 + 8 κ)/((1 + 9 κ) (1 + 13 κ) (1 + 17 κ)) P(0000000)\n"
    );
    // At κ = 1 the generalized series collapses to the classical one.
    assert_eq!(
        stdout(&calogero(None, &["cg", "0000001", "0000001", "--kappa", "1"])),
        "P(0000002) + P(0000010) + P(1000000) + P(0000000)\n"
    );
}

#[test]
fn mathematica_output_reparses() {
    let formal = stdout(&calogero(None, &["jacobi", "0000002"]));
    let explicit = stdout(&calogero(None, &["-f", "mathematica", "jacobi", "0000002"]));
    assert!(!explicit.contains('κ'));
    let mut depth = 0i32;
    for ch in explicit.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        assert!(depth >= 0);
    }
    assert_eq!(depth, 0);
    assert_eq!(parse_expression(&explicit, 7).unwrap(), parse_expression(&formal, 7).unwrap());
    let series = stdout(&calogero(None, &["-f", "mathematica", "cg", "0000001", "0000001"]));
    assert!(series.starts_with("P[0,0,0,0,0,0,2] + 2/(1 + k)*P[0,0,0,0,0,1,0]"), "{series}");
}

#[test]
fn output_is_independent_of_cache_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["-a", "D4", "jacobi", "0,1,0,1"];
    let plain = stdout(&calogero(None, &args));
    let cold = stdout(&calogero(Some(dir.path()), &args));
    let warm = stdout(&calogero(Some(dir.path()), &args));
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    let one_thread = stdout(&calogero(Some(dir.path()), &single));
    assert_eq!(plain, cold);
    assert_eq!(cold, warm);
    assert_eq!(warm, one_thread);
    assert!(dir.path().join("D4/jacobi/0_1_0_1.json").exists());
}

#[test]
fn corrupted_cache_records_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["-a", "A2", "char2z", "2,1"];
    let expected = stdout(&calogero(Some(dir.path()), &args));
    let record = dir.path().join("A2/char_z/2_1.json");
    let text = std::fs::read_to_string(&record).unwrap();
    std::fs::write(&record, text.replacen("\"c\": \"1\"", "\"c\": \"5\"", 1)).unwrap();
    std::fs::write(dir.path().join("A2/char_z/9_9.json"), "{ not json").unwrap();
    let out = calogero(Some(dir.path()), &args);
    assert_eq!(stdout(&out), expected);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring cache record"));
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["-a", "A2", "-f", "json", "mult", "2,1"],
        vec!["-a", "A2", "-f", "json", "orbit", "1,1", "--elements"],
        vec!["-a", "A2", "-f", "json", "jacobi", "1,1"],
        vec!["-a", "A2", "-f", "json", "cg", "1,0", "0,1"],
        vec!["-a", "A2", "-f", "json", "operator", "--part", "a"],
    ] {
        let text = stdout(&calogero(None, &args));
        serde_json::from_str::<serde_json::Value>(&text).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn verify_paper_single_criterion() {
    let text = stdout(&calogero(None, &["verify-paper", "--criterion", "11"]));
    assert!(text.starts_with("criterion 11 PASS"), "{text}");
}
