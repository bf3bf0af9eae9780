//! Reference competitors: greedy 2D-OMP pair selection and the one-shot
//! screening + alternating-least-squares coder (SC-ALS).

use crate::coder::{self, CoderConfig, CoderError, EncodingModel};
use crate::dictio::{Dictionary, DictioError};
use crate::numerics::{self, DenseMatrix};
use crate::pipeline::{PipelineTrace, TraceRecord};
use crate::selection::{self, SelectionError, SelectionState};
use ndarray::Array2;
use ndarray_linalg::{FactorizeC, SolveC, UPLO};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("target_pairs must be >= 1")]
    ZeroTarget,
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Coder(#[from] CoderError),
    #[error(transparent)]
    Dictionary(#[from] DictioError),
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
}

/// Greedy pair model: ordered selected (left, right) pairs and one
/// coefficient per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Omp2dModel {
    pub pairs: Vec<(usize, usize)>,
    pub coeffs: Vec<f64>,
    /// Set when a Gram system went singular and was solved by pseudo-inverse.
    pub singular_gram: bool,
}

impl Omp2dModel {
    /// Embeds the pair coefficients into the full I x J coefficient space.
    pub fn coefficients_full(&self, left_total: usize, right_total: usize) -> DenseMatrix {
        let mut data = vec![0.0; left_total * right_total];
        for (&(i, j), &c) in self.pairs.iter().zip(&self.coeffs) {
            data[i * right_total + j] = c;
        }
        DenseMatrix::new(left_total, right_total, data).expect("finite coefficients")
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc: f64, c| acc.max(c.abs()))
    }
}

/// Reconstruction from selected pairs: sum of c_t * psi_i phi_j^T, computed
/// through the compact coefficient block over the distinct atoms in use.
fn omp_reconstruction(
    model: &Omp2dModel,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
) -> DenseMatrix {
    let mut left: Vec<usize> = model.pairs.iter().map(|p| p.0).collect();
    left.sort_unstable();
    left.dedup();
    let mut right: Vec<usize> = model.pairs.iter().map(|p| p.1).collect();
    right.sort_unstable();
    right.dedup();
    let pos_left: std::collections::HashMap<usize, usize> =
        left.iter().enumerate().map(|(a, &i)| (i, a)).collect();
    let pos_right: std::collections::HashMap<usize, usize> =
        right.iter().enumerate().map(|(b, &j)| (j, b)).collect();
    let mut z = DenseMatrix::zeros(left.len(), right.len()).into_array();
    for (&(i, j), &c) in model.pairs.iter().zip(&model.coeffs) {
        z[[pos_left[&i], pos_right[&j]]] = c;
    }
    let psi_s = psi_hat.atoms().select_columns(&left);
    let phi_s = phi_hat.atoms().select_columns(&right);
    psi_s
        .matmul(&DenseMatrix::from_array_unchecked(z))
        .matmul(&phi_s.transpose())
}

/// 2D orthogonal matching pursuit over normalized dictionaries.
///
/// Each iteration picks the unselected pair with the largest absolute
/// alignment to the residual, re-solves the joint least squares over all
/// selected pairs through the Gram system G[(i,j),(k,l)] = (psi_i . psi_k)
/// (phi_j . phi_l), and updates the residual. Stops at `target_pairs` pairs
/// or once the relative residual falls below 1e-10.
pub fn run_omp2d(
    x: &DenseMatrix,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
    target_pairs: usize,
) -> Result<(Omp2dModel, PipelineTrace), BaselineError> {
    if target_pairs == 0 {
        return Err(BaselineError::ZeroTarget);
    }
    if psi_hat.rows() != x.rows() || phi_hat.rows() != x.cols() {
        return Err(BaselineError::DimensionMismatch(format!(
            "X is {}x{} but dictionaries have {} and {} rows",
            x.rows(),
            x.cols(),
            psi_hat.rows(),
            phi_hat.rows()
        )));
    }
    let timer = Instant::now();
    let x_norm = numerics::frobenius_norm(x);
    let mut model = Omp2dModel { pairs: Vec::new(), coeffs: Vec::new(), singular_gram: false };
    let mut trace = Vec::new();
    let mut residual = x.clone();
    let mut selected = std::collections::HashSet::new();

    // Gram matrix over selected pairs, grown one row/column per iteration.
    let mut gram: Vec<Vec<f64>> = Vec::new();
    // Alignment of each selected pair with the data: psi_i^T X phi_j.
    let mut rhs: Vec<f64> = Vec::new();

    while model.pairs.len() < target_pairs {
        let p = selection::project(&residual, psi_hat, phi_hat)?;
        let cols = p.cols();
        let data = p.as_slice();
        let mut best: Option<(usize, f64)> = None;
        for (flat, value) in data.iter().enumerate() {
            if selected.contains(&flat) {
                continue;
            }
            let score = value.abs();
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((flat, score));
            }
        }
        let Some((flat, _)) = best else {
            break; // every pair selected
        };
        selected.insert(flat);
        let (i, j) = (flat / cols, flat % cols);

        let psi_i = psi_hat.atoms().select_columns(&[i]);
        let phi_j = phi_hat.atoms().select_columns(&[j]);
        let mut new_row = Vec::with_capacity(model.pairs.len() + 1);
        for &(k, l) in &model.pairs {
            let psi_k = psi_hat.atoms().select_columns(&[k]);
            let phi_l = phi_hat.atoms().select_columns(&[l]);
            let g = dot(&psi_i, &psi_k) * dot(&phi_j, &phi_l);
            new_row.push(g);
        }
        new_row.push(dot(&psi_i, &psi_i) * dot(&phi_j, &phi_j));
        for (row, &value) in gram.iter_mut().zip(&new_row) {
            row.push(value);
        }
        gram.push(new_row);
        rhs.push(psi_i.transpose().matmul(x).matmul(&phi_j).get(0, 0));
        model.pairs.push((i, j));

        let t = model.pairs.len();
        let mut g = Array2::zeros((t, t));
        for (a, row) in gram.iter().enumerate() {
            for (b, &value) in row.iter().enumerate() {
                g[[a, b]] = value;
            }
        }
        model.coeffs = solve_gram(g, &rhs, &mut model.singular_gram)?;

        let recon = omp_reconstruction(&model, psi_hat, phi_hat);
        residual = x.sub(&recon);
        let rn = numerics::frobenius_norm(&residual);
        let distinct_left = {
            let mut v: Vec<usize> = model.pairs.iter().map(|p| p.0).collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        let distinct_right = {
            let mut v: Vec<usize> = model.pairs.iter().map(|p| p.1).collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        trace.push(TraceRecord {
            iteration: t,
            left_count: distinct_left,
            right_count: distinct_right,
            residual_norm: rn,
            elapsed_s: timer.elapsed().as_secs_f64(),
        });
        if x_norm > 0.0 && rn / x_norm < 1e-10 {
            break;
        }
    }
    Ok((model, PipelineTrace::manual(trace)))
}

fn dot(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum()
}

/// Solves G c = b by Cholesky, falling back to the pseudo-inverse (and
/// raising the singular flag) when the Gram matrix is not positive definite.
fn solve_gram(
    g: Array2<f64>,
    b: &[f64],
    singular_flag: &mut bool,
) -> Result<Vec<f64>, BaselineError> {
    let rhs = ndarray::Array1::from(b.to_vec());
    if let Ok(factor) = g.factorizec(UPLO::Lower) {
        if let Ok(solution) = factor.solvec(&rhs) {
            if solution.iter().all(|v| v.is_finite()) {
                return Ok(solution.to_vec());
            }
        }
    }
    *singular_flag = true;
    let t = g.nrows();
    let gm = DenseMatrix::from_array(g)
        .map_err(|_| BaselineError::DimensionMismatch("non-finite Gram entries".into()))?;
    let pinv = numerics::pseudo_inverse(&gm, numerics::default_rcond(t, t))?;
    let b_col = DenseMatrix::new(t, 1, b.to_vec())
        .map_err(|_| BaselineError::DimensionMismatch("non-finite alignment".into()))?;
    Ok(pinv.matmul(&b_col).as_slice().to_vec())
}

/// Screening followed by a single coder fit on the surviving atoms.
pub fn run_sc_als(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    ratio: f64,
    coder_cfg: &CoderConfig,
    rank: usize,
) -> Result<(EncodingModel, PipelineTrace), BaselineError> {
    let timer = Instant::now();
    let psi_hat = psi.normalize()?;
    let phi_hat = phi.normalize()?;
    let state = selection::screen(x, &psi_hat, &phi_hat, ratio)?;
    let psi_s = psi.atoms().select_columns(state.left_indices());
    let phi_s = phi.atoms().select_columns(state.right_indices());
    let mut model = coder::fit(x, &psi_s, &phi_s, rank, coder_cfg, None)?;
    model.selection = state;
    let recon = coder::reconstruct(&model, &psi_s, &phi_s)?;
    let rn = numerics::frobenius_norm(&x.sub(&recon));
    let record = TraceRecord {
        iteration: 1,
        left_count: model.selection.left_count(),
        right_count: model.selection.right_count(),
        residual_norm: rn,
        elapsed_s: timer.elapsed().as_secs_f64(),
    };
    Ok((model, PipelineTrace::manual(vec![record])))
}

/// Screening survivor counts across a ratio grid, reusing one projection.
pub fn sc_survivor_curve(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    ratios: &[f64],
) -> Result<Vec<(f64, Option<SelectionState>)>, BaselineError> {
    let psi_hat = psi.normalize()?;
    let phi_hat = phi.normalize()?;
    let p = selection::project(x, &psi_hat, &phi_hat)?;
    Ok(ratios
        .iter()
        .map(|&r| (r, selection::screen_with_projection(&p, r).ok()))
        .collect())
}
