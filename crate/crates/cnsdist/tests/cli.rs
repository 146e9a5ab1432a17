//! End-to-end runs of the cnsdist binary: artifact shapes, determinism,
//! and the exit-code contract (0 ok, 2 usage, 3 input, 4 numerical).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cnsdist(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnsdist"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_code(out: &Output, want: i32) {
    let got = out.status.code().expect("no signal");
    assert_eq!(
        got,
        want,
        "exit {got}, wanted {want}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn generate_rrl_is_deterministic_and_exact() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "generate", "--model", "rrl", "--n", "100", "--m", "5", "--out", "g.txt",
    ];
    assert_code(&cnsdist(&args, dir.path()), 0);
    let first = fs::read(dir.path().join("g.txt")).unwrap();
    let edge_lines = String::from_utf8_lossy(&first)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(edge_lines, 500); // n·m links exactly

    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("g.txt.json")).unwrap()).unwrap();
    assert_eq!(sidecar["result"]["edges"], 500);
    assert_eq!(sidecar["config"]["model"]["kind"], "rrl");
    assert_eq!(sidecar["format_version"], 1);

    assert_code(&cnsdist(&args, dir.path()), 0);
    assert_eq!(first, fs::read(dir.path().join("g.txt")).unwrap());
}

#[test]
fn generate_er_needs_seed_and_honors_it() {
    let dir = tempfile::tempdir().unwrap();
    let no_seed = [
        "generate", "--model", "er", "--n", "200", "--k", "10", "--out", "er.txt",
    ];
    assert_code(&cnsdist(&no_seed, dir.path()), 2);

    let seeded = [
        "generate", "--model", "er", "--n", "200", "--k", "10", "--seed", "7", "--out", "er.txt",
    ];
    assert_code(&cnsdist(&seeded, dir.path()), 0);
    let first = fs::read(dir.path().join("er.txt")).unwrap();
    let edges = String::from_utf8_lossy(&first)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count() as f64;
    let expected = 200.0 * 10.0 / 2.0;
    assert!(
        (edges - expected).abs() < 5.0 * expected.sqrt(),
        "got {edges} edges, expected about {expected}"
    );

    assert_code(&cnsdist(&seeded, dir.path()), 0);
    assert_eq!(first, fs::read(dir.path().join("er.txt")).unwrap());
}

#[test]
fn generate_rejects_unknown_model_and_stray_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = cnsdist(
        &["generate", "--model", "gnp", "--n", "10", "--out", "x"],
        dir.path(),
    );
    assert_code(&out, 2);
    let out = cnsdist(
        &[
            "generate", "--model", "rrl", "--n", "20", "--m", "2", "--p", "0.5", "--out", "x",
        ],
        dir.path(),
    );
    assert_code(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not take"));
}

#[test]
fn cns_analytic_emits_roundtrippable_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out = cnsdist(
        &[
            "cns", "--model", "ws", "--n", "120", "--m", "3", "--p", "0.2", "--out-dir", "d",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    for name in ["p_c.csv", "p_d.csv", "p_a.csv"] {
        let path = dir.path().join("d").join(name);
        let text = fs::read_to_string(&path).unwrap();
        let pmf = cnsdist::read_pmf_csv(text.as_bytes()).unwrap();
        assert!(!pmf.is_empty(), "{name} empty");
        assert!(text.starts_with("# cnsdist pmf-csv v1"));
        assert!(text.contains("\"command\":\"cns\""));
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d/summary.json")).unwrap())
            .unwrap();
    let residual = summary["result"]["summary"]["mixture_residual"]
        .as_f64()
        .unwrap();
    assert!(residual.abs() < 1e-9);
}

#[test]
fn cns_empirical_from_file_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &cnsdist(
            &[
                "generate", "--model", "ws", "--n", "80", "--m", "2", "--p", "0.1", "--seed", "3",
                "--out", "g.txt",
            ],
            dir.path(),
        ),
        0,
    );
    assert_code(
        &cnsdist(
            &["cns", "--input", "g.txt", "--out-dir", "emp"],
            dir.path(),
        ),
        0,
    );
    assert!(dir.path().join("emp/p_a.csv").exists());

    // q may not drop below pairs
    let out = cnsdist(
        &["cns", "--input", "g.txt", "--q", "1", "--out-dir", "q1"],
        dir.path(),
    );
    assert_code(&out, 2);

    // two sources at once
    let out = cnsdist(
        &[
            "cns", "--input", "g.txt", "--model", "er", "--n", "10", "--k", "2.0", "--out-dir",
            "z",
        ],
        dir.path(),
    );
    assert_code(&out, 2);

    // missing file is an input error
    let out = cnsdist(&["cns", "--input", "nope.txt", "--out-dir", "z"], dir.path());
    assert_code(&out, 3);
}

#[test]
fn cns_both_mode_reports_total_variation() {
    let dir = tempfile::tempdir().unwrap();
    let out = cnsdist(
        &[
            "cns", "--model", "er", "--n", "150", "--k", "8", "--mode", "both", "--seed", "11",
            "--out-dir", "b",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    assert!(dir.path().join("b/p_a.csv").exists());
    assert!(dir.path().join("b/empirical_p_a.csv").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("b/summary.json")).unwrap())
            .unwrap();
    let tv = summary["result"]["total_variation"]["p_a"].as_f64().unwrap();
    assert!(tv > 0.0 && tv < 0.5, "tv {tv} out of plausible range");
}

#[test]
fn cns_malformed_edge_list_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.txt"), "1 2\n3 two\n").unwrap();
    let out = cnsdist(
        &["cns", "--input", "bad.txt", "--out-dir", "z"],
        dir.path(),
    );
    assert_code(&out, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn evaluate_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &cnsdist(
            &[
                "generate", "--model", "ws", "--n", "150", "--m", "4", "--p", "0.3", "--seed",
                "5", "--out", "g.txt",
            ],
            dir.path(),
        ),
        0,
    );
    let args = [
        "evaluate", "--input", "g.txt", "--indices", "cn", "--eps", "0.1", "--reps", "5",
        "--comparisons", "500", "--seed", "1", "--out", "report.json",
    ];
    let first_run = cnsdist(&args, dir.path());
    assert_code(&first_run, 0);
    let first = fs::read(dir.path().join("report.json")).unwrap();
    assert_code(&cnsdist(&args, dir.path()), 0);
    assert_eq!(first, fs::read(dir.path().join("report.json")).unwrap());

    let report: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let row = &report["result"]["indices"][0];
    assert_eq!(row["label"], "cn");
    assert!(row["auc_experimental_mean"].as_f64().unwrap() > 0.5);
    assert!(row["auc_theoretical"].as_f64().unwrap() > 0.5);
    // the text table went to stdout
    assert!(String::from_utf8_lossy(&first_run.stdout).contains("AUC(theory)"));
}

#[test]
fn evaluate_index_name_errors_list_the_valid_set() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), "0 1\n1 2\n2 0\n").unwrap();
    let out = cnsdist(
        &[
            "evaluate", "--input", "g.txt", "--indices", "cn,pagerank", "--seed", "1",
        ],
        dir.path(),
    );
    assert_code(&out, 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("cn, ra, aa, lp, katz, katz-shifted"),
        "stderr: {stderr}"
    );
}

#[test]
fn evaluate_theory_only_needs_no_seed() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &cnsdist(
            &[
                "generate", "--model", "ws", "--n", "100", "--m", "3", "--p", "0.2", "--seed",
                "9", "--out", "g.txt",
            ],
            dir.path(),
        ),
        0,
    );
    let out = cnsdist(
        &[
            "evaluate", "--input", "g.txt", "--indices", "cn,katz-shifted", "--theory-only",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("katz-shifted"));

    // without --theory-only the split needs a seed
    let out = cnsdist(&["evaluate", "--input", "g.txt"], dir.path());
    assert_code(&out, 2);
}

#[test]
fn evaluate_katz_divergence_is_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    // star K_{1,30}: spectral radius sqrt(30), so phi = 0.5 diverges
    let mut star = String::new();
    for leaf in 1..=30 {
        star.push_str(&format!("0 {leaf}\n"));
    }
    fs::write(dir.path().join("star.txt"), star).unwrap();
    let out = cnsdist(
        &[
            "evaluate", "--input", "star.txt", "--indices", "katz", "--phi-katz", "0.5",
            "--theory-only",
        ],
        dir.path(),
    );
    assert_code(&out, 4);
}

#[test]
fn model_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("model.json"),
        r#"{"kind": "ws", "n": 90, "m": 3, "p": 0.5}"#,
    )
    .unwrap();
    // override p from the command line, keep the rest
    let out = cnsdist(
        &[
            "cns", "--config", "model.json", "--p", "0.1", "--out-dir", "cfg",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let summary =
        fs::read_to_string(dir.path().join("cfg/summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(v["config"]["model"]["p"], 0.1);
    assert_eq!(v["config"]["model"]["n"], 90);

    // unknown descriptor fields are rejected
    fs::write(dir.path().join("bad.json"), r#"{"kind": "ws", "n": 90, "q": 3}"#).unwrap();
    let out = cnsdist(
        &["cns", "--config", "bad.json", "--out-dir", "z"],
        dir.path(),
    );
    assert_code(&out, 3);
}
