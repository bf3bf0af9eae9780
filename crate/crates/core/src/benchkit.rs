//! Metrics, sweep orchestration and CSV emission for the evaluation axes:
//! RMSE vs selected-atom percentage, wall time vs percentage, RMSE vs time.

use crate::baselines;
use crate::coder::{CoderConfig, CoderVariant, EncodingModel};
use crate::derive_seed;
use crate::dictio::Dictionary;
use crate::numerics::{self, DenseMatrix};
use crate::pipeline::{self, PipelineConfig, PipelineTrace, SelectionMode};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("x has zero norm, explained percentage is undefined")]
    ZeroNorm,
    #[error("budgets must be ascending percentages in (0, 100]")]
    BadBudgets,
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("csv write failed: {0}")]
    Csv(String),
}

/// Root mean squared error between a matrix and its reconstruction.
pub fn rmse(x: &DenseMatrix, x_hat: &DenseMatrix) -> Result<f64, BenchError> {
    if x.rows() != x_hat.rows() || x.cols() != x_hat.cols() {
        return Err(BenchError::ShapeMismatch(x.rows(), x.cols(), x_hat.rows(), x_hat.cols()));
    }
    let count = (x.rows() * x.cols()) as f64;
    Ok(numerics::frobenius_norm(&x.sub(x_hat)) / count.sqrt())
}

/// Percentage of the data explained: 100 * (1 - ||X - X'||_F / ||X||_F).
pub fn explained_pct(x: &DenseMatrix, x_hat: &DenseMatrix) -> Result<f64, BenchError> {
    if x.rows() != x_hat.rows() || x.cols() != x_hat.cols() {
        return Err(BenchError::ShapeMismatch(x.rows(), x.cols(), x_hat.rows(), x_hat.cols()));
    }
    let norm = numerics::frobenius_norm(x);
    if norm == 0.0 {
        return Err(BenchError::ZeroNorm);
    }
    Ok(100.0 * (1.0 - numerics::frobenius_norm(&x.sub(x_hat)) / norm))
}

/// One benchmark sample. Serialized to CSV with the fixed header
/// `method,atoms_selected,atoms_pct,rmse,wall_time_s,outer_iter,seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub atoms_selected: usize,
    pub atoms_pct: f64,
    pub rmse: f64,
    pub wall_time_s: f64,
    pub outer_iter: usize,
    pub seed: u64,
}

/// A benchmarked method with its per-method parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum MethodSpec {
    Lrmds { k: usize, rank: usize },
    LrmdsF { k: usize, rank: usize },
    #[serde(rename = "lrmds-1d")]
    Lrmds1d { k_left: usize, k_right: usize, rank: usize },
    Rand { k_left: usize, k_right: usize, rank: usize },
    #[serde(rename = "omp2d")]
    Omp2d,
    ScAls { rank: usize },
}

impl MethodSpec {
    pub fn label(&self) -> &'static str {
        match self {
            MethodSpec::Lrmds { .. } => "lrmds",
            MethodSpec::LrmdsF { .. } => "lrmds-f",
            MethodSpec::Lrmds1d { .. } => "lrmds-1d",
            MethodSpec::Rand { .. } => "rand",
            MethodSpec::Omp2d => "omp2d",
            MethodSpec::ScAls { .. } => "sc-als",
        }
    }
}

/// Sweep driver: for every method and seed, runs (or resumes) to each atom
/// budget and records RMSE plus cumulative wall time, then writes the CSV
/// atomically. Failed cells become records with NaN RMSE and the sweep
/// continues.
pub fn sweep(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    methods: &[MethodSpec],
    atom_budgets_pct: &[f64],
    seeds: &[u64],
    out_path: impl AsRef<Path>,
) -> Result<Vec<RunRecord>, BenchError> {
    sweep_with_jobs(x, psi, phi, methods, atom_budgets_pct, seeds, out_path, 1)
}

/// `sweep` with up to `jobs` cells (method x seed) running concurrently.
/// Cells are pure given their seed, so the records come out identical to a
/// sequential sweep and in the same order; wall times reflect contention.
#[allow(clippy::too_many_arguments)]
pub fn sweep_with_jobs(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    methods: &[MethodSpec],
    atom_budgets_pct: &[f64],
    seeds: &[u64],
    out_path: impl AsRef<Path>,
    jobs: usize,
) -> Result<Vec<RunRecord>, BenchError> {
    if atom_budgets_pct.is_empty()
        || atom_budgets_pct.windows(2).any(|w| w[0] >= w[1])
        || atom_budgets_pct.iter().any(|p| !(*p > 0.0 && *p <= 100.0))
    {
        return Err(BenchError::BadBudgets);
    }
    let cells: Vec<(&MethodSpec, u64)> =
        methods.iter().flat_map(|m| seeds.iter().map(move |&s| (m, s))).collect();
    let mut results: Vec<Option<Vec<RunRecord>>> = vec![None; cells.len()];
    let jobs = jobs.max(1).min(cells.len().max(1));

    let error_row = |method: &MethodSpec, seed: u64, err: &dyn std::fmt::Display| {
        // Error row: keeps the sweep going, surfaces the failure.
        eprintln!("sweep cell failed ({} seed {seed}): {err}", method.label());
        vec![RunRecord {
            method: method.label().to_string(),
            atoms_selected: 0,
            atoms_pct: 0.0,
            rmse: f64::NAN,
            wall_time_s: 0.0,
            outer_iter: 0,
            seed,
        }]
    };

    if jobs == 1 {
        for ((method, seed), slot) in cells.iter().zip(results.iter_mut()) {
            *slot = Some(
                run_method_over_budgets(x, psi, phi, method, atom_budgets_pct, *seed)
                    .unwrap_or_else(|e| error_row(method, *seed, &e)),
            );
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<Vec<RunRecord>>>> =
            results.iter_mut().map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some(&(method, seed)) = cells.get(idx) else { break };
                    let rows = run_method_over_budgets(x, psi, phi, method, atom_budgets_pct, seed)
                        .unwrap_or_else(|e| error_row(method, seed, &e));
                    *slots[idx].lock().unwrap() = Some(rows);
                });
            }
        });
        for (slot, out) in slots.into_iter().zip(results.iter_mut()) {
            *out = slot.into_inner().unwrap();
        }
    }

    let records: Vec<RunRecord> =
        results.into_iter().flat_map(|r| r.expect("every cell ran")).collect();
    write_records_csv(&records, out_path)?;
    Ok(records)
}

fn budget_atoms(pct: f64, total: usize) -> usize {
    ((pct / 100.0) * total as f64).ceil().max(1.0) as usize
}

fn run_method_over_budgets(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    method: &MethodSpec,
    budgets: &[f64],
    seed: u64,
) -> Result<Vec<RunRecord>, Box<dyn std::error::Error>> {
    let total = psi.atom_count() + phi.atom_count();
    let count = (x.rows() * x.cols()) as f64;
    let label = method.label().to_string();
    let pipeline_params = match *method {
        MethodSpec::Lrmds { k, rank } => {
            Some((SelectionMode::Joint, k, 0, 0, rank, CoderVariant::Exact))
        }
        MethodSpec::LrmdsF { k, rank } => {
            Some((SelectionMode::Joint, k, 0, 0, rank, CoderVariant::Fast))
        }
        MethodSpec::Lrmds1d { k_left, k_right, rank } => {
            Some((SelectionMode::OneD, 1, k_left, k_right, rank, CoderVariant::Exact))
        }
        MethodSpec::Rand { k_left, k_right, rank } => {
            Some((SelectionMode::Random, 1, k_left, k_right, rank, CoderVariant::Exact))
        }
        MethodSpec::Omp2d | MethodSpec::ScAls { .. } => None,
    };
    match method {
        MethodSpec::Lrmds { .. }
        | MethodSpec::LrmdsF { .. }
        | MethodSpec::Lrmds1d { .. }
        | MethodSpec::Rand { .. } => {
            let (mode, k_per_iter, k_left, k_right, rank, variant) =
                pipeline_params.expect("pipeline methods carry parameters");
            let base_cfg = PipelineConfig {
                k_per_iter,
                rank,
                max_outer_iters: None,
                residual_tol: 0.0,
                selection_mode: mode,
                k_left,
                k_right,
                atom_budget: None,
                seed: derive_seed(seed, "selection"),
                coder: CoderConfig {
                    variant,
                    seed: derive_seed(seed, "init"),
                    ..CoderConfig::default()
                },
            };
            let mut rows = Vec::new();
            let mut prior: Option<(EncodingModel, PipelineTrace)> = None;
            for &pct in budgets {
                let mut cfg = base_cfg.clone();
                cfg.atom_budget = Some(budget_atoms(pct, total).min(total));
                let result = match prior.take() {
                    None => pipeline::run_lrmds(x, psi, phi, &cfg)?,
                    Some(p) => pipeline::resume(x, psi, phi, &cfg, p)?,
                };
                let last = result.1.last().copied();
                if let Some(rec) = last {
                    rows.push(RunRecord {
                        method: label.clone(),
                        atoms_selected: rec.left_count + rec.right_count,
                        atoms_pct: 100.0 * (rec.left_count + rec.right_count) as f64
                            / total as f64,
                        rmse: rec.residual_norm / count.sqrt(),
                        wall_time_s: rec.elapsed_s,
                        outer_iter: rec.iteration,
                        seed,
                    });
                }
                prior = Some(result);
            }
            Ok(rows)
        }
        MethodSpec::Omp2d => {
            // The pair budget follows the percentage convention: a budget of
            // p% runs ceil(p% of I+J) greedy pairs.
            let psi_hat = psi.normalize()?;
            let phi_hat = phi.normalize()?;
            let max_pairs = budget_atoms(*budgets.last().expect("nonempty budgets"), total);
            let (_, trace) = baselines::run_omp2d(x, &psi_hat, &phi_hat, max_pairs)?;
            let mut rows = Vec::new();
            for &pct in budgets {
                let pairs = budget_atoms(pct, total);
                let rec = trace
                    .records
                    .iter()
                    .find(|r| r.iteration >= pairs)
                    .or(trace.records.last());
                if let Some(rec) = rec {
                    rows.push(RunRecord {
                        method: label.clone(),
                        atoms_selected: rec.left_count + rec.right_count,
                        atoms_pct: 100.0 * (rec.left_count + rec.right_count) as f64
                            / total as f64,
                        rmse: rec.residual_norm / count.sqrt(),
                        wall_time_s: rec.elapsed_s,
                        outer_iter: rec.iteration,
                        seed,
                    });
                }
            }
            Ok(rows)
        }
        MethodSpec::ScAls { rank } => {
            // Table-2 style ratio grid; per budget pick the ratio whose
            // survivor count lands closest at or above the budget.
            let ratios: Vec<f64> = (10..=90).map(|r| r as f64 / 100.0).collect();
            let curve = baselines::sc_survivor_curve(x, psi, phi, &ratios)?;
            let counts: Vec<(f64, usize)> = curve
                .iter()
                .filter_map(|(r, s)| s.as_ref().map(|s| (*r, s.total())))
                .collect();
            let mut rows = Vec::new();
            for &pct in budgets {
                let want = budget_atoms(pct, total);
                let choice = counts
                    .iter()
                    .filter(|(_, c)| *c >= want)
                    .min_by_key(|(_, c)| *c)
                    .or_else(|| counts.iter().max_by_key(|(_, c)| *c));
                let Some(&(ratio, _)) = choice else { continue };
                let coder_cfg =
                    CoderConfig { seed: derive_seed(seed, "init"), ..CoderConfig::default() };
                let (model, trace) = baselines::run_sc_als(x, psi, phi, ratio, &coder_cfg, *rank)?;
                if let Some(rec) = trace.last() {
                    rows.push(RunRecord {
                        method: label.clone(),
                        atoms_selected: model.selection.total(),
                        atoms_pct: 100.0 * model.selection.total() as f64 / total as f64,
                        rmse: rec.residual_norm / count.sqrt(),
                        wall_time_s: rec.elapsed_s,
                        outer_iter: rec.iteration,
                        seed,
                    });
                }
            }
            Ok(rows)
        }
    }
}

/// Per-method aggregates over a record set: for each method and budget
/// level, the median RMSE and median wall time across seeds.
pub fn summarize(records: &[RunRecord]) -> serde_json::Value {
    let mut methods: Vec<&str> = records.iter().map(|r| r.method.as_str()).collect();
    methods.sort_unstable();
    methods.dedup();
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        match v.len() {
            0 => f64::NAN,
            n if n % 2 == 1 => v[n / 2],
            n => 0.5 * (v[n / 2 - 1] + v[n / 2]),
        }
    };
    let mut out = serde_json::Map::new();
    for method in methods {
        let rows: Vec<&RunRecord> =
            records.iter().filter(|r| r.method == method && r.rmse.is_finite()).collect();
        let failed =
            records.iter().filter(|r| r.method == method && r.rmse.is_nan()).count();
        // Seeds share the budget schedule, so the i-th finite row of each
        // seed belongs to the same budget level.
        let mut seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        let per_seed = if seeds.is_empty() { 0 } else { rows.len() / seeds.len() };
        let mut levels = Vec::new();
        for level in 0..per_seed {
            let at_level: Vec<&&RunRecord> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| i % per_seed == level)
                .map(|(_, r)| r)
                .collect();
            levels.push(serde_json::json!({
                "median_atoms_pct": median(at_level.iter().map(|r| r.atoms_pct).collect()),
                "median_rmse": median(at_level.iter().map(|r| r.rmse).collect()),
                "median_wall_time_s": median(at_level.iter().map(|r| r.wall_time_s).collect()),
            }));
        }
        out.insert(
            method.to_string(),
            serde_json::json!({
                "runs": rows.len(),
                "failed_cells": failed,
                "budget_levels": levels,
            }),
        );
    }
    serde_json::Value::Object(out)
}

/// Writes records as CSV, atomically (temp file + rename).
pub fn write_records_csv(
    records: &[RunRecord],
    out_path: impl AsRef<Path>,
) -> Result<(), BenchError> {
    let out_path = out_path.as_ref();
    let dir = out_path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut builder = tempfile::Builder::new();
    builder.prefix(".bench").suffix(".csv.tmp");
    let tmp = match dir {
        Some(d) => builder.tempfile_in(d),
        None => builder.tempfile(),
    }
    .map_err(|e| BenchError::Csv(e.to_string()))?;
    {
        let mut writer = csv::Writer::from_writer(tmp.as_file());
        for record in records {
            writer.serialize(record).map_err(|e| BenchError::Csv(e.to_string()))?;
        }
        writer.flush().map_err(|e| BenchError::Csv(e.to_string()))?;
    }
    tmp.persist(out_path).map_err(|e| BenchError::Csv(e.to_string()))?;
    Ok(())
}

/// Reads records back from CSV.
pub fn read_records_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>, BenchError> {
    let mut reader = csv::Reader::from_path(path.as_ref()).map_err(|e| BenchError::Csv(e.to_string()))?;
    reader
        .deserialize()
        .collect::<Result<Vec<RunRecord>, _>>()
        .map_err(|e| BenchError::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictio;
    use crate::matio::GraphSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rmse_examples() {
        let x = DenseMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(rmse(&x, &x).unwrap(), 0.0);
        let zero = DenseMatrix::zeros(2, 2);
        let expected = (30.0f64 / 4.0).sqrt();
        assert!((rmse(&x, &zero).unwrap() - expected).abs() < 1e-12);
        assert_eq!(rmse(&x, &zero).unwrap(), rmse(&zero, &x).unwrap());
    }

    #[test]
    fn explained_pct_examples() {
        let x = DenseMatrix::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((explained_pct(&x, &x).unwrap() - 100.0).abs() < 1e-12);
        let zero = DenseMatrix::zeros(2, 2);
        assert!(explained_pct(&x, &zero).unwrap().abs() < 1e-12);
        let half = x.scaled(0.5);
        assert!((explained_pct(&x, &half).unwrap() - 50.0).abs() < 1e-12);
        assert!(matches!(explained_pct(&zero, &zero), Err(BenchError::ZeroNorm)));
    }

    fn small_setup() -> (DenseMatrix, Dictionary, Dictionary) {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut edges = Vec::new();
        let n = 18;
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if (u < n / 2) == (v < n / 2) { 0.5 } else { 0.05 };
                if rng.random::<f64>() < p {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let g = GraphSpec::new(n, edges).unwrap();
        let psi = dictio::build_gft(&g).unwrap();
        let phi = dictio::build_ramanujan(16, 5).unwrap();
        let y = DenseMatrix::from_fn(3, 2, |_, _| rng.random::<f64>()).unwrap();
        let w = DenseMatrix::from_fn(2, 3, |_, _| rng.random::<f64>()).unwrap();
        let psi_gt = psi.atoms().select_columns(&[1, 4, 7]);
        let phi_gt = phi.atoms().select_columns(&[0, 3, 6]);
        let x = psi_gt.matmul(&y).matmul(&w.matmul(&phi_gt.transpose()));
        (x, psi, phi)
    }

    #[test]
    fn sweep_emits_one_record_per_cell_and_round_trips() {
        let (x, psi, phi) = small_setup();
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bench.csv");
        let methods = vec![MethodSpec::Lrmds { k: 3, rank: 2 }, MethodSpec::Omp2d];
        let records = sweep(&x, &psi, &phi, &methods, &[25.0], &[0, 1], &out).unwrap();
        assert_eq!(records.len(), 4);
        let back = read_records_csv(&out).unwrap();
        assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            assert_eq!(a.method, b.method);
            assert!((a.rmse - b.rmse).abs() < 1e-12);
        }
        let header = std::fs::read_to_string(&out).unwrap();
        assert!(header
            .starts_with("method,atoms_selected,atoms_pct,rmse,wall_time_s,outer_iter,seed"));
    }

    #[test]
    fn sweep_budget_resume_matches_direct_runs() {
        let (x, psi, phi) = small_setup();
        let dir = tempfile::tempdir().unwrap();
        let methods = vec![MethodSpec::Lrmds { k: 3, rank: 2 }];
        let swept = sweep(
            &x,
            &psi,
            &phi,
            &methods,
            &[20.0, 40.0],
            &[5],
            dir.path().join("a.csv"),
        )
        .unwrap();
        let direct = sweep(
            &x,
            &psi,
            &phi,
            &methods,
            &[40.0],
            &[5],
            dir.path().join("b.csv"),
        )
        .unwrap();
        let last = swept.last().unwrap();
        let one = direct.last().unwrap();
        assert_eq!(last.atoms_selected, one.atoms_selected);
        assert!((last.rmse - one.rmse).abs() < 1e-12);
    }

    #[test]
    fn sweep_random_seeds_are_reproducible() {
        let (x, psi, phi) = small_setup();
        let dir = tempfile::tempdir().unwrap();
        let methods = vec![MethodSpec::Rand { k_left: 2, k_right: 2, rank: 2 }];
        let a = sweep(&x, &psi, &phi, &methods, &[30.0], &[7], dir.path().join("a.csv")).unwrap();
        let b = sweep(&x, &psi, &phi, &methods, &[30.0], &[7], dir.path().join("b.csv")).unwrap();
        assert_eq!(a[0].atoms_selected, b[0].atoms_selected);
        assert_eq!(a[0].rmse, b[0].rmse);
    }

    #[test]
    fn summarize_groups_by_method_and_budget_level() {
        let rec = |method: &str, seed: u64, rmse: f64, t: f64| RunRecord {
            method: method.into(),
            atoms_selected: 10,
            atoms_pct: 25.0,
            rmse,
            wall_time_s: t,
            outer_iter: 3,
            seed,
        };
        let records = vec![
            rec("lrmds", 0, 0.2, 1.0),
            rec("lrmds", 0, 0.1, 2.0),
            rec("lrmds", 1, 0.4, 1.5),
            rec("lrmds", 1, 0.3, 2.5),
            rec("omp2d", 0, f64::NAN, 0.0),
        ];
        let summary = summarize(&records);
        let lrmds = &summary["lrmds"];
        assert_eq!(lrmds["runs"], 4);
        let levels = lrmds["budget_levels"].as_array().unwrap();
        assert_eq!(levels.len(), 2);
        assert!((levels[0]["median_rmse"].as_f64().unwrap() - 0.3).abs() < 1e-12);
        assert!((levels[1]["median_rmse"].as_f64().unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(summary["omp2d"]["failed_cells"], 1);
    }

    #[test]
    fn parallel_sweep_matches_sequential() {
        let (x, psi, phi) = small_setup();
        let dir = tempfile::tempdir().unwrap();
        let methods =
            vec![MethodSpec::Lrmds { k: 3, rank: 2 }, MethodSpec::Rand { k_left: 2, k_right: 2, rank: 2 }];
        let seq = sweep(&x, &psi, &phi, &methods, &[20.0, 40.0], &[0, 1], dir.path().join("s.csv"))
            .unwrap();
        let par = sweep_with_jobs(
            &x,
            &psi,
            &phi,
            &methods,
            &[20.0, 40.0],
            &[0, 1],
            dir.path().join("p.csv"),
            4,
        )
        .unwrap();
        assert_eq!(seq.len(), par.len());
        for (a, b) in seq.iter().zip(&par) {
            assert_eq!((&a.method, a.seed, a.atoms_selected), (&b.method, b.seed, b.atoms_selected));
            assert_eq!(a.rmse, b.rmse, "records must be order- and value-identical");
        }
    }

    #[test]
    fn sweep_rejects_bad_budgets() {
        let (x, psi, phi) = small_setup();
        let err = sweep(&x, &psi, &phi, &[MethodSpec::Omp2d], &[50.0, 20.0], &[0], "/tmp/x.csv");
        assert!(matches!(err, Err(BenchError::BadBudgets)));
    }

    #[test]
    fn budgets_are_monotone_within_a_sweep_row_sequence() {
        let (x, psi, phi) = small_setup();
        let dir = tempfile::tempdir().unwrap();
        let methods = vec![MethodSpec::Lrmds { k: 3, rank: 2 }];
        let records = sweep(
            &x,
            &psi,
            &phi,
            &methods,
            &[10.0, 20.0, 30.0],
            &[3],
            dir.path().join("c.csv"),
        )
        .unwrap();
        for pair in records.windows(2) {
            assert!(pair[1].atoms_pct >= pair[0].atoms_pct);
            assert!(pair[1].wall_time_s > pair[0].wall_time_s);
            assert!(pair[1].rmse <= pair[0].rmse + 1e-8);
        }
    }
}
