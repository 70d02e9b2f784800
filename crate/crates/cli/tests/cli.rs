//! End-to-end checks of the command-line surface: subcommand outputs, the
//! JSON report envelope, CSV columns, exit codes, and the cap override.

use std::process::{Command, Output};

fn freembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freembed"))
        .args(args)
        .env_remove("FREEEMBED_MAX_K")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn nc_enumerates_catalan_many_partitions() {
    let out = freembed(&["nc", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 14);
    assert!(lines.contains(&"{{1,2,3,4}}"));
    assert!(!lines.contains(&"{{1,3},{2,4}}"));
}

#[test]
fn nc_kreweras_and_mobius_examples() {
    let out = freembed(&["nc", "3", "--kreweras", "{{1,2},{3}}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "{{1},{2,3}}");

    let out = freembed(&["nc", "4", "--mobius", "0", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-5");

    let out = freembed(&["nc", "4", "--pairs"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).lines().collect::<Vec<_>>(),
        vec!["{{1,2},{3,4}}", "{{1,4},{2,3}}"]
    );
}

#[test]
fn moment_methods_agree_and_evaluate() {
    let out = freembed(&["moment", "1,2,1,2", "--symbolic", "--method", "all"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1 + 2y"), "{text}");
    assert!(text.trim_end().ends_with("AGREE"), "{text}");

    let out = freembed(&["moment", "1,1", "--y", "1/2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3/2");

    let out = freembed(&["moment", "1", "--symbolic"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn verify_embedding_passes() {
    for args in [
        ["verify-embedding", "3", "5", "--seed", "7"],
        ["verify-embedding", "1", "1", "--seed", "1"],
        ["verify-embedding", "10", "7", "--seed", "0"],
    ] {
        let out = freembed(&args);
        assert!(out.status.success(), "{:?}", args);
        assert!(stdout(&out).starts_with("PASS"), "{}", stdout(&out));
    }
}

#[test]
fn simulate_json_envelope_is_reproducible_apart_from_timestamp() {
    let args = [
        "simulate", "1,1", "--p", "20", "--n", "40", "--reps", "10", "--seed", "42", "--format",
        "json",
    ];
    let normalize = |s: &str| -> serde_json::Value {
        let mut doc: serde_json::Value = serde_json::from_str(s).expect("valid JSON");
        doc["manifest"]["timestamp_unix"] = serde_json::json!(0);
        doc
    };
    let first = normalize(&stdout(&freembed(&args)));
    let second = normalize(&stdout(&freembed(&args)));
    assert_eq!(first, second);
    assert_eq!(first["manifest"]["subcommand"], "simulate");
    assert_eq!(first["manifest"]["seed"], 42);
    let report = &first["result"][0];
    assert_eq!(report["p"], 20);
    assert_eq!(report["oracle"], 1.5);
    assert!(report["estimate"].is_f64());
}

#[test]
fn simulate_csv_has_contract_columns() {
    let out = freembed(&[
        "simulate", "1,2", "--p", "10", "--n", "10", "--reps", "4", "--seed", "3", "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,n,y,word,replicates,seed,estimate,std_error,oracle,abs_error,rel_error"
    );
    assert!(lines.next().unwrap().starts_with("10,10,1,\"1,2\",4,3,"));
}

#[test]
fn simulate_ladder_emits_one_row_per_rung() {
    let out = freembed(&[
        "simulate", "1,1", "--ladder", "10:20,20:40", "--reps", "4", "--seed", "1", "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 3);

    let out = freembed(&["simulate", "1,1", "--ladder", "10:20,30:40", "--reps", "4"]);
    assert_eq!(out.status.code(), Some(2), "inconsistent ladder must be rejected");
}

#[test]
fn usage_errors_exit_2() {
    let out = freembed(&["nc", "15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap"));

    let out = freembed(&["nc", "3", "--kreweras", "{{1,2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = freembed(&["moment", "1,x"]);
    assert_eq!(out.status.code(), Some(2));

    let out = freembed(&["simulate", "1,1", "--reps", "4"]);
    assert_eq!(out.status.code(), Some(2));

    // clap usage failures use the same code
    let out = freembed(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_var_overrides_caps() {
    let out = Command::new(env!("CARGO_BIN_EXE_freembed"))
        .args(["nc", "4"])
        .env("FREEEMBED_MAX_K", "3")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap 3"));

    let out = Command::new(env!("CARGO_BIN_EXE_freembed"))
        .args(["nc", "3"])
        .env("FREEEMBED_MAX_K", "3")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn json_nc_includes_manifest_and_partitions() {
    let out = freembed(&["nc", "3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["manifest"]["subcommand"], "nc");
    assert_eq!(doc["result"]["count"], 5);
    assert_eq!(doc["result"]["partitions"][0], serde_json::json!([[1], [2], [3]]));
}
