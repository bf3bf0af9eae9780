//! Low-rank coding on selected sub-dictionaries: fit X ≈ Ψ_s · Y · W · Φ_sᵀ
//! by alternating closed-form least-squares updates.
//!
//! Two variants share the stopping rule but differ in what they pre-compute.
//! The exact variant inverts the coupled products each half-step:
//!
//! ```text
//! Y ← Ψ_s† · X · (W · Φ_sᵀ)†        W ← (Ψ_s · Y)† · X · (Φ_s†)ᵀ
//! ```
//!
//! Each half-step is the exact least-squares minimizer in that factor, so
//! the objective ‖X − Ψ_s Y W Φ_sᵀ‖_F never increases. The fast variant
//! splits the product inverses (valid when the sub-dictionaries have full
//! column rank), which leaves a fixed core matrix C = Ψ_s† · X · (Φ_s†)ᵀ and
//! the cheap updates Y ← C · W†, W ← Y† · C. When the rank conditions fail
//! the fast variant trades accuracy for speed.

use crate::numerics::{self, DenseMatrix, NumericsError};
use crate::selection::SelectionState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoderError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("sub-dictionaries must be nonempty")]
    EmptySubDictionary,
    #[error("init model has shape {got_y:?}/{got_w:?}, expected {want_y:?}/{want_w:?}")]
    BadInit {
        got_y: (usize, usize),
        got_w: (usize, usize),
        want_y: (usize, usize),
        want_w: (usize, usize),
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoderVariant {
    Exact,
    Fast,
}

/// Solver knobs for one coding fit.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CoderConfig {
    pub variant: CoderVariant,
    /// Cap on alternating update rounds.
    pub max_inner_iters: usize,
    /// Relative Frobenius change of both factors below which the loop stops.
    pub tol: f64,
    /// Singular value truncation for pseudo-inverses; `None` picks
    /// `max(rows, cols) * eps` per matrix.
    pub rcond: Option<f64>,
    /// Seed for the uniform [0, 1) factor initialization.
    pub seed: u64,
}

impl Default for CoderConfig {
    fn default() -> Self {
        Self { variant: CoderVariant::Exact, max_inner_iters: 50, tol: 1e-6, rcond: None, seed: 0 }
    }
}

/// A fitted low-rank encoding: the selected atoms plus factors Y (|I_s| x r)
/// and W (r x |J_s|).
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingModel {
    pub selection: SelectionState,
    pub y: DenseMatrix,
    pub w: DenseMatrix,
    pub rank: usize,
}

impl EncodingModel {
    pub fn empty() -> Self {
        Self {
            selection: SelectionState::new(),
            y: DenseMatrix::zeros(0, 0),
            w: DenseMatrix::zeros(0, 0),
            rank: 0,
        }
    }

    /// Coefficient matrix Y·W over the selected atoms (|I_s| x |J_s|).
    pub fn coefficients(&self) -> DenseMatrix {
        self.y.matmul(&self.w)
    }

    /// Embeds Y·W into the full I x J coefficient space, zero elsewhere.
    pub fn coefficients_full(&self, left_total: usize, right_total: usize) -> DenseMatrix {
        let compact = self.coefficients();
        let mut full = vec![0.0; left_total * right_total];
        for (a, &i) in self.selection.left_indices().iter().enumerate() {
            for (b, &j) in self.selection.right_indices().iter().enumerate() {
                full[i * right_total + j] = compact.get(a, b);
            }
        }
        DenseMatrix::new(left_total, right_total, full).expect("finite coefficients")
    }
}

fn pinv(a: &DenseMatrix, rcond: Option<f64>) -> Result<DenseMatrix, CoderError> {
    let r = rcond.unwrap_or_else(|| numerics::default_rcond(a.rows(), a.cols()));
    Ok(numerics::pseudo_inverse(a, r)?)
}

fn uniform_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    DenseMatrix::new(rows, cols, data).expect("uniform draws are finite")
}

fn relative_change(new: &DenseMatrix, old: &DenseMatrix) -> f64 {
    let denom = numerics::frobenius_norm(old).max(f64::MIN_POSITIVE);
    numerics::frobenius_norm(&new.sub(old)) / denom
}

fn check_fit_inputs(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
) -> Result<(), CoderError> {
    if psi_s.cols() == 0 || phi_s.cols() == 0 {
        return Err(CoderError::EmptySubDictionary);
    }
    if psi_s.rows() != x.rows() || phi_s.rows() != x.cols() {
        return Err(CoderError::DimensionMismatch(format!(
            "X is {}x{} but sub-dictionaries have {} and {} rows",
            x.rows(),
            x.cols(),
            psi_s.rows(),
            phi_s.rows()
        )));
    }
    Ok(())
}

struct FitSetup {
    y: DenseMatrix,
    w: DenseMatrix,
    rank: usize,
}

/// Clamps the rank to min(rank, |I_s|, |J_s|) and prepares the initial
/// factors: seeded uniform [0, 1) draws, or the provided warm start.
fn prepare_factors(
    psi_cols: usize,
    phi_cols: usize,
    rank: usize,
    cfg: &CoderConfig,
    init: Option<&EncodingModel>,
) -> Result<FitSetup, CoderError> {
    let r = rank.max(1).min(psi_cols).min(phi_cols);
    match init {
        Some(model) => {
            let want_y = (psi_cols, r);
            let want_w = (r, phi_cols);
            let got_y = (model.y.rows(), model.y.cols());
            let got_w = (model.w.rows(), model.w.cols());
            if got_y != want_y || got_w != want_w {
                return Err(CoderError::BadInit { got_y, got_w, want_y, want_w });
            }
            Ok(FitSetup { y: model.y.clone(), w: model.w.clone(), rank: r })
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let y = uniform_matrix(psi_cols, r, &mut rng);
            let w = uniform_matrix(r, phi_cols, &mut rng);
            Ok(FitSetup { y, w, rank: r })
        }
    }
}

/// Grows a previous model's factors to new selection sizes and rank so a
/// refit can warm-start from it. Rows of Y for new left atoms and columns of
/// W for new right atoms are zero (the selection only ever appends, so old
/// atoms keep their positions); new rank columns of Y are zero while the
/// matching rank rows of W get fresh uniform draws. The padded product
/// Y·W is exactly the old one, and the first Y update re-derives every
/// entry from W, so no dimension stays locked at zero.
pub fn pad_warm_start(
    prev: &EncodingModel,
    left_count: usize,
    right_count: usize,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> EncodingModel {
    let r = rank.max(1).min(left_count).min(right_count);
    let r_old = prev.y.cols().min(r);
    let mut y = DenseMatrix::zeros(left_count, r).into_array();
    for i in 0..prev.y.rows().min(left_count) {
        for c in 0..r_old {
            y[[i, c]] = prev.y.get(i, c);
        }
    }
    let mut w = DenseMatrix::zeros(r, right_count).into_array();
    for c in 0..prev.w.cols().min(right_count) {
        for row in 0..r_old {
            w[[row, c]] = prev.w.get(row, c);
        }
    }
    for row in r_old..r {
        for c in 0..right_count {
            w[[row, c]] = rng.random::<f64>();
        }
    }
    EncodingModel {
        selection: prev.selection.clone(),
        y: DenseMatrix::from_array_unchecked(y),
        w: DenseMatrix::from_array_unchecked(w),
        rank: r,
    }
}

/// Exact alternating fit of X against the given sub-dictionaries.
pub fn fit_exact(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
    rank: usize,
    cfg: &CoderConfig,
    init: Option<&EncodingModel>,
) -> Result<EncodingModel, CoderError> {
    Ok(fit_exact_traced(x, psi_s, phi_s, rank, cfg, init, false)?.0)
}

/// Exact fit that can also report the objective ‖X − Ψ_s Y W Φ_sᵀ‖_F after
/// every half-update (used to verify per-step monotonicity).
pub fn fit_exact_traced(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
    rank: usize,
    cfg: &CoderConfig,
    init: Option<&EncodingModel>,
    track_objective: bool,
) -> Result<(EncodingModel, Vec<f64>), CoderError> {
    check_fit_inputs(x, psi_s, phi_s)?;
    let setup = prepare_factors(psi_s.cols(), phi_s.cols(), rank, cfg, init)?;
    let (mut y, mut w) = (setup.y, setup.w);

    let psi_pinv = pinv(psi_s, cfg.rcond)?;
    let phi_pinv = pinv(phi_s, cfg.rcond)?;
    // Fixed across the inner loop: Ψ_s†·X for the Y update, X·(Φ_s†)ᵀ for
    // the W update.
    let psi_pinv_x = psi_pinv.matmul(x);
    let x_phi_pinv_t = x.matmul(&phi_pinv.transpose());

    let mut objectives = Vec::new();
    let record = |y: &DenseMatrix, w: &DenseMatrix, objectives: &mut Vec<f64>| {
        if track_objective {
            objectives.push(objective(x, psi_s, phi_s, y, w));
        }
    };

    for _ in 0..cfg.max_inner_iters {
        let w_phi_t = w.matmul(&phi_s.transpose());
        let y_new = psi_pinv_x.matmul(&pinv(&w_phi_t, cfg.rcond)?);
        record(&y_new, &w, &mut objectives);

        let psi_y = psi_s.matmul(&y_new);
        let w_new = pinv(&psi_y, cfg.rcond)?.matmul(&x_phi_pinv_t);
        record(&y_new, &w_new, &mut objectives);

        let dy = relative_change(&y_new, &y);
        let dw = relative_change(&w_new, &w);
        y = y_new;
        w = w_new;
        if dy < cfg.tol && dw < cfg.tol {
            break;
        }
    }
    let model = EncodingModel { selection: SelectionState::new(), y, w, rank: setup.rank };
    Ok((model, objectives))
}

/// Fast alternating fit: iterates on the pre-projected core matrix
/// C = Ψ_s† · X · (Φ_s†)ᵀ.
pub fn fit_fast(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
    rank: usize,
    cfg: &CoderConfig,
    init: Option<&EncodingModel>,
) -> Result<EncodingModel, CoderError> {
    check_fit_inputs(x, psi_s, phi_s)?;
    let setup = prepare_factors(psi_s.cols(), phi_s.cols(), rank, cfg, init)?;
    let (mut y, mut w) = (setup.y, setup.w);

    let psi_pinv = pinv(psi_s, cfg.rcond)?;
    let phi_pinv = pinv(phi_s, cfg.rcond)?;
    let core = psi_pinv.matmul(x).matmul(&phi_pinv.transpose());

    for _ in 0..cfg.max_inner_iters {
        let y_new = core.matmul(&pinv(&w, cfg.rcond)?);
        let w_new = pinv(&y_new, cfg.rcond)?.matmul(&core);
        let dy = relative_change(&y_new, &y);
        let dw = relative_change(&w_new, &w);
        y = y_new;
        w = w_new;
        if dy < cfg.tol && dw < cfg.tol {
            break;
        }
    }
    let model = EncodingModel { selection: SelectionState::new(), y, w, rank: setup.rank };
    Ok(model)
}

/// Dispatches on the configured variant.
pub fn fit(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
    rank: usize,
    cfg: &CoderConfig,
    init: Option<&EncodingModel>,
) -> Result<EncodingModel, CoderError> {
    match cfg.variant {
        CoderVariant::Exact => fit_exact(x, psi_s, phi_s, rank, cfg, init),
        CoderVariant::Fast => fit_fast(x, psi_s, phi_s, rank, cfg, init),
    }
}

/// Reconstruction Ψ_s · Y · W · Φ_sᵀ.
pub fn reconstruct(
    model: &EncodingModel,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
) -> Result<DenseMatrix, CoderError> {
    if psi_s.cols() != model.y.rows() || phi_s.cols() != model.w.cols() {
        return Err(CoderError::DimensionMismatch(format!(
            "factors are {}x{} and {}x{} but sub-dictionaries hold {} and {} atoms",
            model.y.rows(),
            model.y.cols(),
            model.w.rows(),
            model.w.cols(),
            psi_s.cols(),
            phi_s.cols()
        )));
    }
    Ok(psi_s.matmul(&model.y).matmul(&model.w.matmul(&phi_s.transpose())))
}

/// Fit objective ‖X − Ψ_s Y W Φ_sᵀ‖_F.
pub fn objective(
    x: &DenseMatrix,
    psi_s: &DenseMatrix,
    phi_s: &DenseMatrix,
    y: &DenseMatrix,
    w: &DenseMatrix,
) -> f64 {
    let recon = psi_s.matmul(y).matmul(&w.matmul(&phi_s.transpose()));
    numerics::frobenius_norm(&x.sub(&recon))
}
