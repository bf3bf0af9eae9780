//! Synthetic data generation (stochastic block model graphs, ground-truth
//! atom subsets, SNR-controlled noise) and the two theory-validation
//! experiments: denoising with near-orthogonal dictionaries and the decay of
//! noise-only coefficients with growing row dimension.

use crate::baselines::{self, BaselineError};
use crate::coder::EncodingModel;
use crate::derive_seed;
use crate::dictio::{Dictionary, DictionaryFamily, DictioError};
use crate::matio::{GraphSpec, MatioError};
use crate::numerics::{self, DenseMatrix, NumericsError};
use crate::pipeline::{self, PipelineConfig, PipelineError};
use crate::selection::SelectionState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Dictionary(#[from] DictioError),
    #[error(transparent)]
    Graph(#[from] MatioError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
}

/// Generation parameters for the default synthetic protocol: an SBM graph
/// with near-equal blocks, ground-truth atom subsets drawn from each
/// dictionary and a low-rank coefficient model with uniform [0, 1) entries.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SynthSpec {
    pub n_nodes: usize,
    pub sbm_blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub gt_left_atoms: usize,
    pub gt_right_atoms: usize,
    pub rank: usize,
    /// Linear power ratio ‖clean‖²/‖noise‖²; infinite disables noise.
    pub snr: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_nodes: 1000,
            sbm_blocks: 3,
            p_in: 0.2,
            p_out: 0.02,
            gt_left_atoms: 20,
            gt_right_atoms: 20,
            rank: 3,
            snr: 10.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    fn validate(&self) -> Result<(), SynthError> {
        if self.sbm_blocks == 0 || self.n_nodes == 0 {
            return Err(SynthError::InvalidSpec("need at least one node and one block".into()));
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return Err(SynthError::InvalidSpec("edge probabilities must lie in [0, 1]".into()));
        }
        if self.p_out > self.p_in {
            return Err(SynthError::InvalidSpec("p_out must not exceed p_in".into()));
        }
        if self.rank == 0 {
            return Err(SynthError::InvalidSpec("rank must be at least 1".into()));
        }
        if self.snr.is_nan() || self.snr <= 0.0 {
            return Err(SynthError::InvalidSpec("snr must be positive".into()));
        }
        Ok(())
    }
}

/// Stochastic block model graph with near-equal blocks: nodes within a block
/// connect with probability `p_in`, across blocks with `p_out`.
pub fn generate_sbm(spec: &SynthSpec) -> Result<GraphSpec, SynthError> {
    spec.validate()?;
    let n = spec.n_nodes;
    let blocks = spec.sbm_blocks;
    let base = n / blocks;
    let extra = n % blocks;
    let mut block_of = Vec::with_capacity(n);
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        block_of.extend(std::iter::repeat_n(b, size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "sbm"));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if block_of[u] == block_of[v] { spec.p_in } else { spec.p_out };
            if p > 0.0 && rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    Ok(GraphSpec::new(n, edges)?)
}

/// Output of `generate_signal`: the observed matrix, the generating atom
/// indices and the noise-free signal.
pub struct SyntheticSignal {
    pub x: DenseMatrix,
    pub gt: SelectionState,
    pub clean: DenseMatrix,
}

/// Draws ground-truth atom subsets and uniform [0, 1) factors, then adds
/// Gaussian noise scaled analytically so the realized SNR matches the
/// requested ratio exactly.
pub fn generate_signal(
    spec: &SynthSpec,
    psi: &Dictionary,
    phi: &Dictionary,
) -> Result<SyntheticSignal, SynthError> {
    spec.validate()?;
    if spec.gt_left_atoms > psi.atom_count() || spec.gt_right_atoms > phi.atom_count() {
        return Err(SynthError::InvalidSpec(format!(
            "ground truth asks for {}+{} atoms but dictionaries hold {}+{}",
            spec.gt_left_atoms,
            spec.gt_right_atoms,
            psi.atom_count(),
            phi.atom_count()
        )));
    }
    if spec.gt_left_atoms == 0 || spec.gt_right_atoms == 0 {
        return Err(SynthError::InvalidSpec("need at least one ground-truth atom per side".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "signal"));
    let left = sample_without_replacement(psi.atom_count(), spec.gt_left_atoms, &mut rng);
    let right = sample_without_replacement(phi.atom_count(), spec.gt_right_atoms, &mut rng);
    let gt = SelectionState::from_indices(left, right);

    let r = spec.rank;
    let y = DenseMatrix::from_fn(spec.gt_left_atoms, r, |_, _| rng.random::<f64>())?;
    let w = DenseMatrix::from_fn(r, spec.gt_right_atoms, |_, _| rng.random::<f64>())?;
    let psi_gt = psi.atoms().select_columns(gt.left_indices());
    let phi_gt = phi.atoms().select_columns(gt.right_indices());
    let clean = psi_gt.matmul(&y).matmul(&w.matmul(&phi_gt.transpose()));

    let x = if spec.snr.is_infinite() {
        clean.clone()
    } else {
        let mut noise_rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "noise"));
        let raw = gaussian_matrix(clean.rows(), clean.cols(), &mut noise_rng);
        let clean_norm = numerics::frobenius_norm(&clean);
        let raw_norm = numerics::frobenius_norm(&raw);
        if raw_norm == 0.0 || clean_norm == 0.0 {
            clean.clone()
        } else {
            // ‖clean‖² / ‖eps‖² = snr exactly.
            let scale = clean_norm / (raw_norm * spec.snr.sqrt());
            clean.add(&raw.scaled(scale))
        }
    };
    Ok(SyntheticSignal { x, gt, clean })
}

fn sample_without_replacement(total: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..total).collect();
    let mut out = Vec::with_capacity(k);
    for step in 0..k {
        let pick = rng.random_range(step..pool.len());
        pool.swap(step, pick);
        out.push(pool[step]);
    }
    out
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::new(rows, cols, data).expect("gaussian draws are finite")
}

/// Parameters of the denoising experiment: dictionaries whose first half is
/// a perturbed orthogonal basis and second half pure Gaussian atoms, a
/// sparse low-rank clean signal on the near-orthogonal atoms, and additive
/// noise with deviation sigma(R) / noise_divisor.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct DenoiseSpec {
    pub n: usize,
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub rank: usize,
    /// Ground-truth atom count as a fraction of the near-orthogonal pool.
    pub sparsity_fraction: f64,
    /// Linear SNR of the perturbation applied to the orthogonal basis half.
    pub ortho_snr: f64,
    /// The noise deviation is sigma(R) divided by this; infinite disables
    /// the noise entirely.
    pub noise_divisor: f64,
    pub seed: u64,
    /// Pair budget for the 2D-OMP encoding of the pure-noise matrix.
    pub omp_noise_pairs: usize,
}

impl Default for DenoiseSpec {
    fn default() -> Self {
        Self {
            n: 500,
            m: 10,
            i: 1000,
            j: 20,
            rank: 3,
            sparsity_fraction: 0.10,
            ortho_snr: 20.0,
            noise_divisor: 20.0,
            seed: 0,
            omp_noise_pairs: 400,
        }
    }
}

/// Orthonormal DCT-II basis of size n (deterministic orthogonal basis used
/// as the seed of the near-orthogonal dictionary halves).
fn dct_basis(n: usize) -> DenseMatrix {
    let scale0 = (1.0 / n as f64).sqrt();
    let scale = (2.0 / n as f64).sqrt();
    DenseMatrix::from_fn(n, n, |i, k| {
        if k == 0 {
            scale0
        } else {
            scale * (std::f64::consts::PI * (i as f64 + 0.5) * k as f64 / n as f64).cos()
        }
    })
    .expect("cosines are finite")
}

/// Dictionary whose first `count/2` atoms are an orthogonal basis perturbed
/// with Gaussian noise at the given SNR and re-normalized, and whose second
/// half is normalized Gaussian atoms.
fn half_orthogonal_dictionary(
    dim: usize,
    count: usize,
    ortho_snr: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Dictionary, SynthError> {
    let near = count / 2;
    if near > dim {
        return Err(SynthError::InvalidSpec(format!(
            "near-orthogonal half needs {near} atoms but the space has dimension {dim}"
        )));
    }
    let basis = dct_basis(dim);
    let mut atoms = DenseMatrix::zeros(dim, count).into_array();
    for a in 0..near {
        let perturb: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let pnorm = perturb.iter().map(|v| v * v).sum::<f64>().sqrt();
        // Basis columns have unit norm; scale the perturbation for the
        // requested linear SNR.
        let scale = if pnorm == 0.0 { 0.0 } else { 1.0 / (pnorm * ortho_snr.sqrt()) };
        for row in 0..dim {
            atoms[[row, a]] = basis.get(row, a) + perturb[row] * scale;
        }
    }
    for a in near..count {
        for row in 0..dim {
            atoms[[row, a]] = StandardNormal.sample(rng);
        }
    }
    let dict = Dictionary::new(DenseMatrix::from_array(atoms)?, DictionaryFamily::Custom)?;
    Ok(dict.normalize()?)
}

/// One point of an RMSE-vs-atoms curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub atoms: usize,
    pub rmse: f64,
}

/// Summary of the absolute differences between two coefficient matrices:
/// count of nonzero entries, their median, and a fixed-bin histogram.
#[derive(Debug, Clone, Serialize)]
pub struct DiffHistogram {
    pub nonzero_count: usize,
    pub median: f64,
    pub bin_edges: Vec<f64>,
    pub bin_counts: Vec<usize>,
}

fn diff_histogram(a: &DenseMatrix, b: &DenseMatrix, bins: usize) -> DiffHistogram {
    let mut diffs: Vec<f64> = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .filter(|d| *d > 0.0)
        .collect();
    diffs.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite"));
    let nonzero_count = diffs.len();
    let median = if diffs.is_empty() {
        0.0
    } else if diffs.len() % 2 == 1 {
        diffs[diffs.len() / 2]
    } else {
        0.5 * (diffs[diffs.len() / 2 - 1] + diffs[diffs.len() / 2])
    };
    let max = diffs.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let mut bin_edges = Vec::with_capacity(bins + 1);
    for b in 0..=bins {
        bin_edges.push(max * b as f64 / bins as f64);
    }
    let mut bin_counts = vec![0usize; bins];
    for d in &diffs {
        let mut idx = ((d / max) * bins as f64) as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        bin_counts[idx] += 1;
    }
    DiffHistogram { nonzero_count, median, bin_edges, bin_counts }
}

/// Report of the denoising experiment.
#[derive(Debug, Clone, Serialize)]
pub struct DenoiseReport {
    pub spec: DenoiseSpec,
    /// RMSE against the clean signal when coding the clean signal.
    pub clean_curve: Vec<CurvePoint>,
    /// RMSE against the clean signal when coding the noisy signal.
    pub noisy_curve: Vec<CurvePoint>,
    /// RMS entry scale of the clean signal, the natural curve unit.
    pub signal_rmse_scale: f64,
    /// |(YW)_R - (YW)_{R+Q}| over the full coefficient space.
    pub clean_vs_noisy: DiffHistogram,
    /// |(YW)_R - Z_Q| where Z_Q encodes pure noise via 2D-OMP.
    pub clean_vs_pure_noise: DiffHistogram,
}

/// Runs the denoising validation: codes the clean signal and its noisy
/// version with identical configurations, tracks both RMSE-vs-atoms curves
/// against the clean signal, and compares coefficient matrices against a
/// pure-noise 2D-OMP encoding.
pub fn run_denoise_experiment(
    spec: &DenoiseSpec,
    cfg: &PipelineConfig,
) -> Result<DenoiseReport, SynthError> {
    if spec.rank == 0 || !(spec.sparsity_fraction > 0.0 && spec.sparsity_fraction <= 1.0) {
        return Err(SynthError::InvalidSpec("rank >= 1 and sparsity in (0, 1] required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "denoise-dicts"));
    let psi = half_orthogonal_dictionary(spec.n, spec.i, spec.ortho_snr, &mut rng)?;
    let phi = half_orthogonal_dictionary(spec.m, spec.j, spec.ortho_snr, &mut rng)?;

    // Ground truth lives on the near-orthogonal halves. The right side gets
    // `rank` atoms so that i.i.d. standard-normal coefficients produce a
    // signal of exactly the requested rank; the rest of the sparsity budget
    // goes to the left side.
    let near_left = spec.i / 2;
    let near_right = spec.j / 2;
    let s_total =
        ((spec.sparsity_fraction * (near_left + near_right) as f64).round() as usize).max(spec.rank + 1);
    let gt_right = spec.rank.min(near_right);
    let gt_left = (s_total - gt_right).min(near_left);
    let mut gt_rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "denoise-gt"));
    let left = sample_without_replacement(near_left, gt_left, &mut gt_rng);
    let right = sample_without_replacement(near_right, gt_right, &mut gt_rng);
    let psi_gt = psi.atoms().select_columns(&left);
    let phi_gt = phi.atoms().select_columns(&right);
    let coeffs = gaussian_matrix(gt_left, gt_right, &mut gt_rng);
    let clean = psi_gt.matmul(&coeffs).matmul(&phi_gt.transpose());

    // Pure noise with deviation sigma(R) / divisor.
    let sigma = entry_std(&clean);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, "denoise-noise"));
    let q = gaussian_matrix(spec.n, spec.m, &mut noise_rng);
    let q = if spec.noise_divisor.is_infinite() {
        DenseMatrix::zeros(spec.n, spec.m)
    } else {
        q.scaled(sigma / spec.noise_divisor)
    };
    let noisy = clean.add(&q);

    let count = (spec.n * spec.m) as f64;
    let signal_rmse_scale = numerics::frobenius_norm(&clean) / count.sqrt();
    // Coefficient matrices are compared at the ground-truth sparsity
    // crossing, where the clean run converges and the selected right-side
    // atoms still fit inside the row space. Past that point the right
    // selection can grow beyond M atoms, the coefficient matrix stops being
    // identifiable, and differences would measure null-space drift instead
    // of noise effects. The curves themselves keep going past convergence.
    let clean_run = trace_curve(&clean, &psi, &phi, cfg, &clean, s_total)?;
    let noisy_run = trace_curve(&noisy, &psi, &phi, cfg, &clean, s_total)?;

    let coef_clean = clean_run.1.coefficients_full(spec.i, spec.j);
    let coef_noisy = noisy_run.1.coefficients_full(spec.i, spec.j);
    let psi_hat = psi.normalize()?;
    let phi_hat = phi.normalize()?;
    let (noise_model, _) = baselines::run_omp2d(&q, &psi_hat, &phi_hat, spec.omp_noise_pairs)?;
    let coef_noise = noise_model.coefficients_full(spec.i, spec.j);

    Ok(DenoiseReport {
        spec: spec.clone(),
        clean_curve: clean_run.0,
        noisy_curve: noisy_run.0,
        signal_rmse_scale,
        clean_vs_noisy: diff_histogram(&coef_clean, &coef_noisy, 20),
        clean_vs_pure_noise: diff_histogram(&coef_clean, &coef_noise, 20),
    })
}

fn entry_std(m: &DenseMatrix) -> f64 {
    let n = m.as_slice().len() as f64;
    let mean = m.as_slice().iter().sum::<f64>() / n;
    let var = m.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

/// Runs the pipeline on `input` one outer iteration at a time, reporting
/// RMSE against `reference` at every step. Returns the curve plus the model
/// snapshot at the first step whose atom count reaches `snapshot_budget`
/// (the final model when the budget is never reached).
fn trace_curve(
    input: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    cfg: &PipelineConfig,
    reference: &DenseMatrix,
    snapshot_budget: usize,
) -> Result<(Vec<CurvePoint>, EncodingModel), SynthError> {
    let mut curve = Vec::new();
    let mut prior: Option<(EncodingModel, pipeline::PipelineTrace)> = None;
    let mut snapshot: Option<EncodingModel> = None;
    let max_outer = cfg.max_outer_iters.unwrap_or(24);
    let count = (reference.rows() * reference.cols()) as f64;
    for step in 1..=max_outer {
        let mut step_cfg = cfg.clone();
        step_cfg.max_outer_iters = Some(step);
        // Curves must continue past the solver's own convergence point.
        step_cfg.residual_tol = 0.0;
        let result = match prior.take() {
            None => pipeline::run_lrmds(input, psi, phi, &step_cfg)?,
            Some(p) => pipeline::resume(input, psi, phi, &step_cfg, p)?,
        };
        let psi_s = psi.atoms().select_columns(result.0.selection.left_indices());
        let phi_s = phi.atoms().select_columns(result.0.selection.right_indices());
        let recon = crate::coder::reconstruct(&result.0, &psi_s, &phi_s)
            .map_err(BaselineError::Coder)?;
        let rmse = numerics::frobenius_norm(&reference.sub(&recon)) / count.sqrt();
        let atoms = result.0.selection.total();
        if snapshot.is_none() && atoms >= snapshot_budget {
            snapshot = Some(result.0.clone());
        }
        let stalled = curve.last().is_some_and(|p: &CurvePoint| p.atoms == atoms);
        if !stalled {
            curve.push(CurvePoint { atoms, rmse });
        }
        prior = Some(result);
        if stalled {
            break;
        }
    }
    let final_model = prior.expect("at least one step ran").0;
    Ok((curve, snapshot.unwrap_or(final_model)))
}

/// Report of the noise-coefficient decay experiment.
#[derive(Debug, Clone, Serialize)]
pub struct NoiseCoefReport {
    pub m: usize,
    pub n_grid: Vec<usize>,
    /// Per-N median (over seeds) of the max |coefficient|.
    pub median_max_coefficient: Vec<f64>,
    /// Per-N, per-seed max |coefficient|.
    pub samples: Vec<Vec<f64>>,
    pub monotone_decreasing: bool,
}

/// Configuration of the noise-coefficient experiment. Dictionaries follow
/// the denoising recipe (half perturbed-orthogonal, half Gaussian); the
/// right dictionary atom count stays fixed while the left scales with N.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct NoiseCoefConfig {
    pub m: usize,
    pub j_atoms: usize,
    /// Left dictionary holds `i_factor * N` atoms.
    pub i_factor: usize,
    pub target_pairs: usize,
    pub sigma: f64,
    pub ortho_snr: f64,
    pub seeds: Vec<u64>,
}

impl Default for NoiseCoefConfig {
    fn default() -> Self {
        Self {
            m: 1000,
            j_atoms: 60,
            i_factor: 2,
            target_pairs: 12,
            sigma: 1.0,
            ortho_snr: 20.0,
            seeds: vec![0, 1, 2, 3, 4],
        }
    }
}

/// For each N in the grid, encodes a pure Gaussian noise matrix
/// Q = sigma / sqrt(N·M) · N(0, 1) via 2D-OMP and records the largest
/// learned coefficient magnitude.
pub fn run_noise_coefficient_experiment(
    n_grid: &[usize],
    cfg: &NoiseCoefConfig,
) -> Result<NoiseCoefReport, SynthError> {
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SynthError::InvalidSpec("n_grid must be strictly ascending".into()));
    }
    if cfg.seeds.is_empty() || cfg.target_pairs == 0 {
        return Err(SynthError::InvalidSpec("need at least one seed and one pair".into()));
    }
    let mut samples = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let mut per_seed = Vec::with_capacity(cfg.seeds.len());
        for &seed in &cfg.seeds {
            per_seed.push(noise_max_coefficient(n, cfg, seed)?);
        }
        samples.push(per_seed);
    }
    let medians: Vec<f64> = samples.iter().map(|s| median(s)).collect();
    let monotone = medians.windows(2).all(|w| w[1] < w[0]);
    Ok(NoiseCoefReport {
        m: cfg.m,
        n_grid: n_grid.to_vec(),
        median_max_coefficient: medians,
        samples,
        monotone_decreasing: monotone,
    })
}

fn noise_max_coefficient(n: usize, cfg: &NoiseCoefConfig, seed: u64) -> Result<f64, SynthError> {
    let mut dict_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "noisecoef-dicts"));
    let psi = half_orthogonal_dictionary(n, cfg.i_factor * n, cfg.ortho_snr, &mut dict_rng)?;
    let phi = half_orthogonal_dictionary(cfg.m, cfg.j_atoms, cfg.ortho_snr, &mut dict_rng)?;
    let mut q_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "noisecoef-q"));
    let scale = cfg.sigma / ((n * cfg.m) as f64).sqrt();
    let q = gaussian_matrix(n, cfg.m, &mut q_rng).scaled(scale);
    let (model, _) = baselines::run_omp2d(&q, &psi, &phi, cfg.target_pairs)?;
    Ok(model.max_abs_coefficient())
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    if v.is_empty() {
        return f64::NAN;
    }
    if v.len() % 2 == 1 {
        v[v.len() / 2]
    } else {
        0.5 * (v[v.len() / 2 - 1] + v[v.len() / 2])
    }
}
