//! End-to-end tests of the `lrmds` binary: exit codes, file outputs and
//! reproducibility of every subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn lrmds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrmds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_path3_mtx(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("path3.mtx");
    std::fs::write(
        &path,
        "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n1 2\n2 3\n",
    )
    .unwrap();
    path
}

#[test]
fn dict_build_gft_writes_an_orthonormal_dictionary() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_path3_mtx(dir.path());
    let out = dir.path().join("g.csv");
    let result = lrmds(&[
        "dict-build",
        "--family",
        "gft",
        "--graph",
        graph.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let dict = lrmds::dictio::load_dictionary(&out).unwrap();
    assert_eq!(dict.family(), lrmds::dictio::DictionaryFamily::Gft);
    assert_eq!((dict.rows(), dict.atom_count()), (3, 3));
    let gram = dict.atoms().transpose().matmul(dict.atoms());
    for i in 0..3 {
        for j in 0..3 {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((gram.get(i, j) - expected).abs() < 1e-8);
        }
    }
}

#[test]
fn dict_build_ramanujan_has_totient_sum_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let result = lrmds(&[
        "dict-build",
        "--family",
        "ramanujan",
        "--length",
        "8",
        "--max-period",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let dict = lrmds::dictio::load_dictionary(&out).unwrap();
    // phi(1) + phi(2) + phi(3) = 4
    assert_eq!((dict.rows(), dict.atom_count()), (8, 4));
}

#[test]
fn dict_build_without_out_flag_exits_2() {
    let result = lrmds(&["dict-build", "--family", "gft", "--graph", "x.mtx"]);
    assert_eq!(result.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("--out"), "usage text should mention --out: {stderr}");
}

#[test]
fn dict_build_unknown_family_exits_2() {
    let result = lrmds(&["dict-build", "--family", "fourier", "--out", "/tmp/x.csv"]);
    assert_eq!(result.status.code(), Some(2));
}

fn synth_args(dir: &Path, seed: &str, snr: &str) -> Vec<String> {
    [
        "synth",
        "--nodes",
        "24",
        "--blocks",
        "3",
        "--gt-left",
        "4",
        "--gt-right",
        "4",
        "--rank",
        "2",
        "--time-steps",
        "20",
        "--max-period",
        "5",
        "--snr",
        snr,
        "--seed",
        seed,
        "--out-dir",
        dir.to_str().unwrap(),
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

#[test]
fn synth_is_byte_identical_for_a_fixed_seed() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let args: Vec<String> = synth_args(dir.path(), "7", "10");
        let result = Command::new(env!("CARGO_BIN_EXE_lrmds")).args(&args).output().unwrap();
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    }
    for file in ["x.csv", "clean.csv", "graph.mtx", "gt.json", "psi.csv", "phi.csv"] {
        let a = std::fs::read(dir_a.path().join(file)).unwrap();
        let b = std::fs::read(dir_b.path().join(file)).unwrap();
        assert_eq!(a, b, "{file} must be byte-identical across runs");
    }
}

#[test]
fn synth_with_infinite_snr_writes_equal_x_and_clean() {
    let dir = tempfile::tempdir().unwrap();
    let args = synth_args(dir.path(), "3", "inf");
    let result = Command::new(env!("CARGO_BIN_EXE_lrmds")).args(&args).output().unwrap();
    assert!(result.status.success());
    let x = std::fs::read(dir.path().join("x.csv")).unwrap();
    let clean = std::fs::read(dir.path().join("clean.csv")).unwrap();
    assert_eq!(x, clean);
}

fn run_config(dir: &Path, method: &str, extra_method_fields: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let body = format!(
        r#"{{
  "data": {{"synth": {{"n_nodes": 24, "sbm_blocks": 3, "gt_left_atoms": 4, "gt_right_atoms": 4,
                       "rank": 2, "time_steps": 20, "seed": 5}}}},
  "dictionaries": {{
    "left": {{"family": "gft"}},
    "right": {{"family": "ramanujan", "max_period": 5}}
  }},
  "method": {{"name": "{method}", "k": 3, "rank": 2, "residual_tol": 1e-7{extra_method_fields}}}
}}"#
    );
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn run_lrmds_on_noiseless_synth_reports_tiny_residual() {
    let dir = tempfile::tempdir().unwrap();
    let config = run_config(dir.path(), "lrmds", "");
    let out_dir = dir.path().join("out");
    let result = lrmds(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    let rel = summary["results"]["final_relative_residual"].as_f64().unwrap();
    assert!(rel < 1e-6, "relative residual {rel}");
    assert_eq!(summary["results"]["ground_truth"]["gt_covered"], true);
    // The summary embeds the resolved config.
    assert_eq!(summary["config"]["method"]["name"], "lrmds");
    assert!(out_dir.join("trace.csv").exists());
}

#[test]
fn run_rand_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = run_config(dir.path(), "rand", r#", "k_left": 2, "k_right": 2"#);
    let mut summaries = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let result = lrmds(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "3",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
        let mut summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
                .unwrap();
        // Everything except the clock must be reproducible.
        summary["results"]
            .as_object_mut()
            .unwrap()
            .remove("wall_time_s");
        summaries.push(summary);
    }
    assert_eq!(summaries[0], summaries[1]);
}

#[test]
fn run_with_unknown_method_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = run_config(dir.path(), "lrmds", "");
    let out_dir = dir.path().join("out");
    let result = lrmds(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--method",
        "magic",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn run_omp2d_without_target_pairs_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = run_config(dir.path(), "omp2d", "");
    let out_dir = dir.path().join("out");
    let result = lrmds(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn run_rejects_config_with_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"data": {"synth": {}}, "dictionaries": {"left": {"family": "gft"},
            "right": {"family": "ramanujan", "max_period": 3}},
            "method": {"name": "lrmds"}, "never-seen": true}"#,
    )
    .unwrap();
    let result = lrmds(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out-dir",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn bench_sweeps_methods_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("bench.csv");
    let path = dir.path().join("bench.json");
    let body = format!(
        r#"{{
  "data": {{"synth": {{"n_nodes": 24, "sbm_blocks": 3, "gt_left_atoms": 4, "gt_right_atoms": 4,
                       "rank": 2, "time_steps": 20, "snr": 10.0, "seed": 2}}}},
  "dictionaries": {{
    "left": {{"family": "gft"}},
    "right": {{"family": "ramanujan", "max_period": 5}}
  }},
  "method": {{"name": "lrmds", "k": 3, "rank": 2}},
  "bench": {{"budgets_pct": [20.0, 40.0], "seeds": [0, 1], "out": "{}",
             "methods": ["lrmds", "lrmds-f", "omp2d"]}}
}}"#,
        out_csv.display()
    );
    std::fs::write(&path, body).unwrap();
    let result = lrmds(&["bench", "--config", path.to_str().unwrap()]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let records = lrmds::benchkit::read_records_csv(&out_csv).unwrap();
    // 3 methods x 2 seeds x 2 budgets
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| r.rmse.is_finite()));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_csv.with_extension("json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["failed_cells"], 0);
    for method in ["lrmds", "lrmds-f", "omp2d"] {
        assert_eq!(summary["aggregates"][method]["runs"], 4, "{method}");
        assert_eq!(
            summary["aggregates"][method]["budget_levels"].as_array().unwrap().len(),
            2
        );
    }
}

#[test]
fn denoise_smoke_run_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let result = lrmds(&[
        "denoise",
        "--n",
        "60",
        "--m",
        "8",
        "--i",
        "120",
        "--j",
        "16",
        "--rank",
        "2",
        "--sparsity",
        "0.2",
        "--k",
        "4",
        "--max-outer-iters",
        "10",
        "--omp-noise-pairs",
        "60",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(result.status.success(), "{stderr}");
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("denoise.json")).unwrap())
            .unwrap();
    assert_eq!(verdict["verdict"]["pass"], true);
    assert!(dir.path().join("denoise.csv").exists());
}

#[test]
fn noisecoef_smoke_run_reports_decreasing_trend() {
    let dir = tempfile::tempdir().unwrap();
    let result = lrmds(&[
        "noisecoef",
        "--n-grid",
        "64,128,256",
        "--m",
        "48",
        "--j-atoms",
        "12",
        "--i-factor",
        "1",
        "--target-pairs",
        "5",
        "--seeds",
        "0,1,2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let body: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("noisecoef.json")).unwrap())
            .unwrap();
    assert_eq!(body["monotone_decreasing"], true);
    assert!(dir.path().join("noisecoef.csv").exists());
}
