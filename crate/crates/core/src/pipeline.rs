//! The outer selection-and-coding loop: alternate between growing the
//! selected atom sets against the current residual and refitting the
//! low-rank coder on the full data with the grown sub-dictionaries.

use crate::coder::{self, CoderError, EncodingModel};
use crate::derive_seed;
use crate::dictio::{Dictionary, DictioError};
use crate::numerics::{self, DenseMatrix};
use crate::selection::{self, SelectionError};
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Dictionary(#[from] DictioError),
    #[error("iteration {iteration}: {source}")]
    Selection {
        iteration: usize,
        #[source]
        source: SelectionError,
    },
    #[error("iteration {iteration}: {source}")]
    Coder {
        iteration: usize,
        #[source]
        source: CoderError,
    },
    #[error("resume inputs do not match the prior run (fingerprint {got:#x} vs {want:#x})")]
    FingerprintMismatch { got: u64, want: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMode {
    /// Rank all atom pairs jointly by |P| and take the top k new atoms.
    Joint,
    /// Rank each dictionary independently by projection energy.
    OneD,
    /// Uniform random selection from the unselected atoms.
    Random,
}

/// Outer-loop configuration.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PipelineConfig {
    /// New atoms per iteration in Joint mode.
    pub k_per_iter: usize,
    /// Target coding rank r.
    pub rank: usize,
    /// Cap on outer iterations; `None` means ceil((I+J) / atoms-per-iter).
    pub max_outer_iters: Option<usize>,
    /// Stop once ||R||_F / ||X||_F falls below this.
    pub residual_tol: f64,
    pub selection_mode: SelectionMode,
    /// Per-side budgets for OneD and Random modes.
    pub k_left: usize,
    pub k_right: usize,
    /// Stop once the total selected atom count reaches this.
    pub atom_budget: Option<usize>,
    /// Seed for the selection sub-stream (Random mode).
    pub seed: u64,
    pub coder: coder::CoderConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            k_per_iter: 5,
            rank: 3,
            max_outer_iters: None,
            residual_tol: 1e-4,
            selection_mode: SelectionMode::Joint,
            k_left: 3,
            k_right: 3,
            atom_budget: None,
            seed: 0,
            coder: coder::CoderConfig::default(),
        }
    }
}

/// One row of the outer-loop trace.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub left_count: usize,
    pub right_count: usize,
    pub residual_norm: f64,
    /// Cumulative wall time since the run started, in seconds.
    pub elapsed_s: f64,
}

/// Per-iteration history of a run; also carries the input fingerprint that
/// guards `resume`.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineTrace {
    pub records: Vec<TraceRecord>,
    fingerprint: u64,
}

impl PipelineTrace {
    /// Trace assembled outside the resumable pipeline (baseline methods).
    /// Such traces carry no input fingerprint and cannot seed `resume`.
    pub(crate) fn manual(records: Vec<TraceRecord>) -> Self {
        Self { records, fingerprint: 0 }
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn elapsed_s(&self) -> f64 {
        self.last().map_or(0.0, |r| r.elapsed_s)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

fn fold_bytes(mut h: u64, bytes: &[u8]) -> u64 {
    const FNV_PRIME: u64 = 0x100000001b3;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn fold_matrix(mut h: u64, m: &DenseMatrix) -> u64 {
    h = fold_bytes(h, &m.rows().to_le_bytes());
    h = fold_bytes(h, &m.cols().to_le_bytes());
    for v in m.as_slice() {
        h = fold_bytes(h, &v.to_bits().to_le_bytes());
    }
    h
}

fn input_fingerprint(x: &DenseMatrix, psi: &Dictionary, phi: &Dictionary) -> u64 {
    let mut h = 0xcbf29ce484222325;
    h = fold_matrix(h, x);
    h = fold_matrix(h, psi.atoms());
    h = fold_matrix(h, phi.atoms());
    h
}

/// Runs the full loop from an empty selection.
pub fn run_lrmds(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    cfg: &PipelineConfig,
) -> Result<(EncodingModel, PipelineTrace), PipelineError> {
    run_loop(x, psi, phi, cfg, None)
}

/// Continues a prior run on the same inputs. With the same configuration the
/// combined run visits the same iterations (and selects the same atoms) as
/// one uninterrupted run with the cumulative iteration budget.
pub fn resume(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    cfg: &PipelineConfig,
    prior: (EncodingModel, PipelineTrace),
) -> Result<(EncodingModel, PipelineTrace), PipelineError> {
    let fingerprint = input_fingerprint(x, psi, phi);
    if prior.1.fingerprint != fingerprint {
        return Err(PipelineError::FingerprintMismatch {
            got: fingerprint,
            want: prior.1.fingerprint,
        });
    }
    run_loop(x, psi, phi, cfg, Some(prior))
}

fn run_loop(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    cfg: &PipelineConfig,
    prior: Option<(EncodingModel, PipelineTrace)>,
) -> Result<(EncodingModel, PipelineTrace), PipelineError> {
    if psi.rows() != x.rows() || phi.rows() != x.cols() {
        return Err(PipelineError::DimensionMismatch(format!(
            "X is {}x{} but dictionaries have {} and {} rows",
            x.rows(),
            x.cols(),
            psi.rows(),
            phi.rows()
        )));
    }
    let fingerprint = input_fingerprint(x, psi, phi);
    let timer = Instant::now();
    let psi_hat = psi.normalize()?;
    let phi_hat = phi.normalize()?;

    let (mut model, mut trace, base_elapsed) = match prior {
        Some((m, t)) => {
            let base = t.elapsed_s();
            (m, t, base)
        }
        None => (EncodingModel::empty(), PipelineTrace { records: Vec::new(), fingerprint }, 0.0),
    };
    let mut state = model.selection.clone();
    let mut iteration = trace.records.last().map_or(0, |r| r.iteration);

    let x_norm = numerics::frobenius_norm(x);
    if x_norm == 0.0 {
        if trace.records.is_empty() {
            trace.records.push(TraceRecord {
                iteration: 0,
                left_count: 0,
                right_count: 0,
                residual_norm: 0.0,
                elapsed_s: timer.elapsed().as_secs_f64(),
            });
        }
        return Ok((model, trace));
    }

    let total_atoms = psi.atom_count() + phi.atom_count();
    let per_iter = match cfg.selection_mode {
        SelectionMode::Joint => cfg.k_per_iter.max(1),
        SelectionMode::OneD | SelectionMode::Random => (cfg.k_left + cfg.k_right).max(1),
    };
    let max_outer = cfg.max_outer_iters.unwrap_or(total_atoms.div_ceil(per_iter));

    let mut residual = if state.is_empty() {
        x.clone()
    } else {
        let psi_s = psi.atoms().select_columns(state.left_indices());
        let phi_s = phi.atoms().select_columns(state.right_indices());
        let recon = coder::reconstruct(&model, &psi_s, &phi_s)
            .map_err(|source| PipelineError::Coder { iteration, source })?;
        x.sub(&recon)
    };
    let mut rel_residual = numerics::frobenius_norm(&residual) / x_norm;

    while iteration < max_outer {
        if rel_residual < cfg.residual_tol && !trace.records.is_empty() {
            break;
        }
        if let Some(budget) = cfg.atom_budget {
            if state.total() >= budget {
                break;
            }
        }
        iteration += 1;

        let new_state = match cfg.selection_mode {
            SelectionMode::Joint => {
                let p = selection::project(&residual, &psi_hat, &phi_hat)
                    .map_err(|source| PipelineError::Selection { iteration, source })?;
                selection::select_top_k(&p, &state, cfg.k_per_iter)
            }
            SelectionMode::OneD => {
                selection::select_1d(&residual, &psi_hat, &phi_hat, &state, cfg.k_left, cfg.k_right)
                    .map_err(|source| PipelineError::Selection { iteration, source })?
            }
            SelectionMode::Random => {
                let k_left = cfg.k_left.min(psi.atom_count() - state.left_count());
                let k_right = cfg.k_right.min(phi.atom_count() - state.right_count());
                if k_left + k_right == 0 {
                    break;
                }
                selection::select_random(
                    &state,
                    psi.atom_count(),
                    phi.atom_count(),
                    k_left,
                    k_right,
                    derive_seed(cfg.seed, &format!("select-random-{iteration}")),
                )
                .map_err(|source| PipelineError::Selection { iteration, source })?
            }
        };
        if new_state.total() == state.total() {
            // Stall guard: every candidate atom is already selected.
            break;
        }
        state = new_state;

        let psi_s = psi.atoms().select_columns(state.left_indices());
        let phi_s = phi.atoms().select_columns(state.right_indices());
        let init = if model.selection.is_empty() {
            None
        } else {
            let mut pad_rng = ChaCha8Rng::seed_from_u64(derive_seed(
                cfg.coder.seed,
                &format!("warm-start-{iteration}"),
            ));
            Some(coder::pad_warm_start(
                &model,
                state.left_count(),
                state.right_count(),
                cfg.rank,
                &mut pad_rng,
            ))
        };
        let mut fitted = coder::fit(x, &psi_s, &phi_s, cfg.rank, &cfg.coder, init.as_ref())
            .map_err(|source| PipelineError::Coder { iteration, source })?;
        fitted.selection = state.clone();
        let recon = coder::reconstruct(&fitted, &psi_s, &phi_s)
            .map_err(|source| PipelineError::Coder { iteration, source })?;
        model = fitted;
        residual = x.sub(&recon);
        rel_residual = numerics::frobenius_norm(&residual) / x_norm;

        trace.records.push(TraceRecord {
            iteration,
            left_count: state.left_count(),
            right_count: state.right_count(),
            residual_norm: rel_residual * x_norm,
            elapsed_s: base_elapsed + timer.elapsed().as_secs_f64(),
        });
    }

    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictio::{self, DictionaryFamily};
    use crate::matio::GraphSpec;
    use crate::selection::SelectionState;
    use rand::{Rng, SeedableRng};

    fn sbm_like_graph(n: usize, seed: u64) -> GraphSpec {
        // Two dense blocks with a sparse bridge; enough structure for a GFT.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let same = (u < n / 2) == (v < n / 2);
                let p = if same { 0.5 } else { 0.05 };
                if rng.random::<f64>() < p {
                    edges.push((u, v, 1.0));
                }
            }
        }
        GraphSpec::new(n, edges).unwrap()
    }

    fn small_instance(
        seed: u64,
    ) -> (DenseMatrix, Dictionary, Dictionary, SelectionState, DenseMatrix) {
        let n = 24;
        let m = 20;
        let psi = dictio::build_gft(&sbm_like_graph(n, seed)).unwrap();
        let phi = dictio::build_ramanujan(m, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
        let mut gt = SelectionState::new();
        while gt.left_count() < 4 {
            gt.push_left(rng.random_range(0..psi.atom_count()));
        }
        while gt.right_count() < 4 {
            gt.push_right(rng.random_range(0..phi.atom_count()));
        }
        let y = DenseMatrix::from_fn(4, 2, |_, _| rng.random::<f64>()).unwrap();
        let w = DenseMatrix::from_fn(2, 4, |_, _| rng.random::<f64>()).unwrap();
        let psi_gt = psi.atoms().select_columns(gt.left_indices());
        let phi_gt = phi.atoms().select_columns(gt.right_indices());
        let clean = psi_gt.matmul(&y).matmul(&w.matmul(&phi_gt.transpose()));
        (clean.clone(), psi, phi, gt, clean)
    }

    fn recovery_config() -> PipelineConfig {
        PipelineConfig {
            k_per_iter: 3,
            rank: 2,
            residual_tol: 1e-8,
            coder: coder::CoderConfig { max_inner_iters: 200, tol: 1e-10, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn zero_data_terminates_immediately() {
        let psi = dictio::build_ramanujan(6, 3).unwrap();
        let phi = dictio::build_ramanujan(5, 2).unwrap();
        let x = DenseMatrix::zeros(6, 5);
        let (model, trace) = run_lrmds(&x, &psi, &phi, &PipelineConfig::default()).unwrap();
        assert!(model.selection.is_empty());
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.records[0].residual_norm, 0.0);
    }

    #[test]
    fn noiseless_recovery_selects_the_generating_atoms() {
        let (x, psi, phi, gt, _) = small_instance(7);
        let (model, trace) = run_lrmds(&x, &psi, &phi, &recovery_config()).unwrap();
        for &i in gt.left_indices() {
            assert!(model.selection.contains_left(i), "missing generating left atom {i}");
        }
        for &j in gt.right_indices() {
            assert!(model.selection.contains_right(j), "missing generating right atom {j}");
        }
        let final_rel =
            trace.last().unwrap().residual_norm / numerics::frobenius_norm(&x);
        assert!(final_rel < 1e-6, "relative residual {final_rel}");
    }

    #[test]
    fn residual_is_monotone_and_growth_bounded() {
        let (x, psi, phi, _, _) = small_instance(13);
        let cfg = recovery_config();
        let (_, trace) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        let mut prev_norm = f64::INFINITY;
        let mut prev_atoms = 0;
        for rec in &trace.records {
            assert!(rec.residual_norm <= prev_norm * (1.0 + 1e-8) || prev_norm.is_infinite());
            let atoms = rec.left_count + rec.right_count;
            assert!(atoms - prev_atoms <= cfg.k_per_iter + 1);
            assert!(atoms >= prev_atoms);
            prev_norm = rec.residual_norm;
            prev_atoms = atoms;
        }
    }

    #[test]
    fn resume_with_no_extra_budget_is_identity() {
        let (x, psi, phi, _, _) = small_instance(21);
        let mut cfg = recovery_config();
        cfg.max_outer_iters = Some(2);
        let (model, trace) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        let (model2, trace2) =
            resume(&x, &psi, &phi, &cfg, (model.clone(), trace.clone())).unwrap();
        assert_eq!(model.y.as_slice(), model2.y.as_slice());
        assert_eq!(trace.records.len(), trace2.records.len());
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let (x, psi, phi, _, _) = small_instance(33);
        let mut cfg = recovery_config();
        cfg.max_outer_iters = Some(4);
        let (full_model, _) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();

        let mut cfg_half = cfg.clone();
        cfg_half.max_outer_iters = Some(2);
        let half = run_lrmds(&x, &psi, &phi, &cfg_half).unwrap();
        let (resumed_model, _) = resume(&x, &psi, &phi, &cfg, half).unwrap();

        assert_eq!(full_model.selection.left_indices(), resumed_model.selection.left_indices());
        assert_eq!(full_model.selection.right_indices(), resumed_model.selection.right_indices());
        assert_eq!(full_model.y.as_slice(), resumed_model.y.as_slice());
        assert_eq!(full_model.w.as_slice(), resumed_model.w.as_slice());
    }

    #[test]
    fn resume_rejects_mismatched_input() {
        let (x, psi, phi, _, _) = small_instance(41);
        let mut cfg = recovery_config();
        cfg.max_outer_iters = Some(1);
        let prior = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        let other = x.scaled(2.0);
        assert!(matches!(
            resume(&other, &psi, &phi, &cfg, prior),
            Err(PipelineError::FingerprintMismatch { .. })
        ));
    }

    #[test]
    fn random_mode_is_deterministic_and_stalls_when_exhausted() {
        let (x, psi, phi, _, _) = small_instance(55);
        let cfg = PipelineConfig {
            selection_mode: SelectionMode::Random,
            k_left: 6,
            k_right: 6,
            rank: 2,
            residual_tol: 0.0,
            max_outer_iters: Some(50),
            seed: 9,
            ..Default::default()
        };
        let (a, _) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        let (b, _) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        assert_eq!(a.selection.left_indices(), b.selection.left_indices());
        assert_eq!(a.selection.right_indices(), b.selection.right_indices());
        // With residual_tol 0 the loop must stop by exhausting the pools.
        assert_eq!(a.selection.left_count(), psi.atom_count());
        assert_eq!(a.selection.right_count(), phi.atom_count());
    }

    #[test]
    fn atom_budget_stops_the_loop() {
        let (x, psi, phi, _, _) = small_instance(66);
        let mut cfg = recovery_config();
        cfg.residual_tol = 0.0;
        cfg.atom_budget = Some(8);
        let (model, _) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        assert!(model.selection.total() >= 8);
        assert!(model.selection.total() <= 8 + cfg.k_per_iter + 1);
    }

    #[test]
    fn one_d_mode_recovers_structured_signal() {
        let (x, psi, phi, gt, _) = small_instance(77);
        let cfg = PipelineConfig {
            selection_mode: SelectionMode::OneD,
            k_left: 2,
            k_right: 2,
            rank: 2,
            residual_tol: 1e-8,
            coder: coder::CoderConfig { max_inner_iters: 200, tol: 1e-10, ..Default::default() },
            ..Default::default()
        };
        let (model, _) = run_lrmds(&x, &psi, &phi, &cfg).unwrap();
        // OneD should still find the generating atoms on a clean signal.
        for &i in gt.left_indices() {
            assert!(model.selection.contains_left(i));
        }
    }

    #[test]
    fn trace_iterations_strictly_increase() {
        let (x, psi, phi, _, _) = small_instance(88);
        let (_, trace) = run_lrmds(&x, &psi, &phi, &recovery_config()).unwrap();
        for pair in trace.records.windows(2) {
            assert!(pair[1].iteration > pair[0].iteration);
            assert!(pair[1].elapsed_s >= pair[0].elapsed_s);
        }
    }

    #[test]
    fn dictionary_type_guard() {
        let psi = Dictionary::new(DenseMatrix::identity(4), DictionaryFamily::Custom).unwrap();
        let phi = Dictionary::new(DenseMatrix::identity(3), DictionaryFamily::Custom).unwrap();
        let x = DenseMatrix::zeros(5, 3);
        assert!(matches!(
            run_lrmds(&x, &psi, &phi, &PipelineConfig::default()),
            Err(PipelineError::DimensionMismatch(_))
        ));
    }
}
