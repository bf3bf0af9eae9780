//! Atom selection: residual/atom-pair alignment scoring, joint top-k
//! selection, independent 1D selection, random selection and screening.

use crate::dictio::Dictionary;
use crate::numerics::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("dictionary must be normalized for alignment scoring")]
    NotNormalized,
    #[error("requested {requested} atoms but only {available} remain unselected")]
    InsufficientAtoms { requested: usize, available: usize },
    #[error("screening ratio must be in (0, 1], got {0}")]
    InvalidRatio(f64),
    #[error("screening removed every atom")]
    EmptySelection,
}

/// Ordered, duplicate-free sets of selected left and right atom indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelectionState {
    left: Vec<usize>,
    right: Vec<usize>,
    left_set: HashSet<usize>,
    right_set: HashSet<usize>,
}

impl SelectionState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_indices(left: Vec<usize>, right: Vec<usize>) -> Self {
        let mut state = Self::new();
        for i in left {
            state.push_left(i);
        }
        for j in right {
            state.push_right(j);
        }
        state
    }

    pub fn left_indices(&self) -> &[usize] {
        &self.left
    }

    pub fn right_indices(&self) -> &[usize] {
        &self.right
    }

    pub fn left_count(&self) -> usize {
        self.left.len()
    }

    pub fn right_count(&self) -> usize {
        self.right.len()
    }

    pub fn total(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    pub fn contains_left(&self, i: usize) -> bool {
        self.left_set.contains(&i)
    }

    pub fn contains_right(&self, j: usize) -> bool {
        self.right_set.contains(&j)
    }

    /// Appends a left index if absent, returning whether it was new.
    pub fn push_left(&mut self, i: usize) -> bool {
        if self.left_set.insert(i) {
            self.left.push(i);
            true
        } else {
            false
        }
    }

    /// Appends a right index if absent, returning whether it was new.
    pub fn push_right(&mut self, j: usize) -> bool {
        if self.right_set.insert(j) {
            self.right.push(j);
            true
        } else {
            false
        }
    }
}

fn require_normalized(d: &Dictionary) -> Result<(), SelectionError> {
    if d.is_normalized() {
        Ok(())
    } else {
        Err(SelectionError::NotNormalized)
    }
}

fn check_projection_dims(
    residual: &DenseMatrix,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
) -> Result<(), SelectionError> {
    if psi_hat.rows() != residual.rows() || phi_hat.rows() != residual.cols() {
        return Err(SelectionError::DimensionMismatch(format!(
            "residual is {}x{} but dictionaries have {} and {} rows",
            residual.rows(),
            residual.cols(),
            psi_hat.rows(),
            phi_hat.rows()
        )));
    }
    Ok(())
}

/// Alignment scores of every atom pair with the residual: P = Psi_hat^T R
/// Phi_hat, where entry (i, j) is the inner product of the residual with the
/// unit-norm rank-1 atom psi_i phi_j^T.
///
/// The two possible multiplication orders have different cost; the cheaper
/// one is chosen from the operand shapes.
pub fn project(
    residual: &DenseMatrix,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
) -> Result<DenseMatrix, SelectionError> {
    require_normalized(psi_hat)?;
    require_normalized(phi_hat)?;
    check_projection_dims(residual, psi_hat, phi_hat)?;
    let (n, m) = (residual.rows(), residual.cols());
    let (i, j) = (psi_hat.atom_count(), phi_hat.atom_count());
    // (Psi^T R) Phi costs I*N*M + I*M*J; Psi^T (R Phi) costs N*M*J + I*N*J.
    let left_first = i * n * m + i * m * j;
    let right_first = n * m * j + i * n * j;
    let p = if left_first <= right_first {
        psi_hat.atoms().transpose().matmul(residual).matmul(phi_hat.atoms())
    } else {
        psi_hat.atoms().transpose().matmul(&residual.matmul(phi_hat.atoms()))
    };
    Ok(p)
}

/// Visits entries of P in descending |P| order (ties broken by row-major
/// pair order) and grows the selection with each pair's unseen indices,
/// stopping once at least k new atoms were added. A final pair may push the
/// count to k+1 when both of its atoms are new.
pub fn select_top_k(p: &DenseMatrix, state: &SelectionState, k: usize) -> SelectionState {
    let cols = p.cols();
    let data = p.as_slice();
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let (va, vb) = (data[a].abs(), data[b].abs());
        vb.partial_cmp(&va).expect("finite entries").then_with(|| a.cmp(&b))
    });
    let mut out = state.clone();
    let mut added = 0usize;
    for flat in order {
        if added >= k {
            break;
        }
        let i = flat / cols;
        let j = flat % cols;
        if out.push_left(i) {
            added += 1;
        }
        if out.push_right(j) {
            added += 1;
        }
    }
    out
}

/// Independent per-dictionary selection: ranks left atoms by the row energy
/// of Psi_hat^T R and right atoms by the column energy of R Phi_hat, then
/// appends the top previously-unselected indices on each side. Ties go to
/// the lowest index.
pub fn select_1d(
    residual: &DenseMatrix,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
    state: &SelectionState,
    k_left: usize,
    k_right: usize,
) -> Result<SelectionState, SelectionError> {
    require_normalized(psi_hat)?;
    require_normalized(phi_hat)?;
    check_projection_dims(residual, psi_hat, phi_hat)?;

    let p1 = psi_hat.atoms().transpose().matmul(residual);
    let mut left_energy: Vec<(usize, f64)> = (0..p1.rows())
        .map(|i| {
            let e = (0..p1.cols()).map(|c| p1.get(i, c).powi(2)).sum::<f64>();
            (i, e)
        })
        .collect();
    let p2 = residual.matmul(phi_hat.atoms());
    let mut right_energy: Vec<(usize, f64)> = (0..p2.cols())
        .map(|j| {
            let e = (0..p2.rows()).map(|r| p2.get(r, j).powi(2)).sum::<f64>();
            (j, e)
        })
        .collect();

    let by_energy_desc = |a: &(usize, f64), b: &(usize, f64)| {
        b.1.partial_cmp(&a.1).expect("finite energies").then_with(|| a.0.cmp(&b.0))
    };
    left_energy.sort_unstable_by(by_energy_desc);
    right_energy.sort_unstable_by(by_energy_desc);

    let mut out = state.clone();
    let mut taken = 0usize;
    for (i, _) in left_energy {
        if taken == k_left {
            break;
        }
        if out.push_left(i) {
            taken += 1;
        }
    }
    let mut taken = 0usize;
    for (j, _) in right_energy {
        if taken == k_right {
            break;
        }
        if out.push_right(j) {
            taken += 1;
        }
    }
    Ok(out)
}

/// Uniform sample without replacement from the unselected indices of each
/// dictionary. Deterministic for a fixed seed.
pub fn select_random(
    state: &SelectionState,
    left_total: usize,
    right_total: usize,
    k_left: usize,
    k_right: usize,
    seed: u64,
) -> Result<SelectionState, SelectionError> {
    let mut remaining_left: Vec<usize> =
        (0..left_total).filter(|i| !state.contains_left(*i)).collect();
    let mut remaining_right: Vec<usize> =
        (0..right_total).filter(|j| !state.contains_right(*j)).collect();
    if k_left > remaining_left.len() {
        return Err(SelectionError::InsufficientAtoms {
            requested: k_left,
            available: remaining_left.len(),
        });
    }
    if k_right > remaining_right.len() {
        return Err(SelectionError::InsufficientAtoms {
            requested: k_right,
            available: remaining_right.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = state.clone();
    partial_fisher_yates(&mut remaining_left, k_left, &mut rng)
        .into_iter()
        .for_each(|i| {
            out.push_left(i);
        });
    partial_fisher_yates(&mut remaining_right, k_right, &mut rng)
        .into_iter()
        .for_each(|j| {
            out.push_right(j);
        });
    Ok(out)
}

/// First `k` elements of a Fisher-Yates shuffle. Hand-rolled so the sampled
/// sequence depends only on the rng stream, not on library internals.
fn partial_fisher_yates(pool: &mut [usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    for step in 0..k {
        let pick = rng.random_range(step..pool.len());
        pool.swap(step, pick);
        out.push(pool[step]);
    }
    out
}

/// One-shot screening: keeps the atoms whose best alignment with the data
/// reaches `ratio` times the global maximum.
pub fn screen(
    x: &DenseMatrix,
    psi_hat: &Dictionary,
    phi_hat: &Dictionary,
    ratio: f64,
) -> Result<SelectionState, SelectionError> {
    let p = project(x, psi_hat, phi_hat)?;
    screen_with_projection(&p, ratio)
}

/// Screening applied to a pre-computed projection matrix; lets a ratio sweep
/// reuse one projection.
pub fn screen_with_projection(p: &DenseMatrix, ratio: f64) -> Result<SelectionState, SelectionError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(SelectionError::InvalidRatio(ratio));
    }
    let lambda = ratio * p.max_abs();
    let mut left = Vec::new();
    let mut right_keep = vec![false; p.cols()];
    for i in 0..p.rows() {
        let mut keep_row = false;
        for (j, keep) in right_keep.iter_mut().enumerate() {
            if p.get(i, j).abs() >= lambda {
                keep_row = true;
                *keep = true;
            }
        }
        if keep_row {
            left.push(i);
        }
    }
    let right: Vec<usize> = (0..p.cols()).filter(|&j| right_keep[j]).collect();
    if left.is_empty() || right.is_empty() {
        return Err(SelectionError::EmptySelection);
    }
    Ok(SelectionState::from_indices(left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictio::{Dictionary, DictionaryFamily};
    use proptest::prelude::*;

    fn identity_dict(n: usize) -> Dictionary {
        Dictionary::new(DenseMatrix::identity(n), DictionaryFamily::Custom)
            .unwrap()
            .normalize()
            .unwrap()
    }

    fn random_normalized(rows: usize, cols: usize, seed: u64) -> Dictionary {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0)).unwrap();
        Dictionary::new(m, DictionaryFamily::Custom).unwrap().normalize().unwrap()
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0)).unwrap()
    }

    #[test]
    fn projection_of_rank_one_signal_is_a_single_spike() {
        let psi = identity_dict(4);
        let phi = identity_dict(3);
        // R = psi_1 phi_1^T exactly.
        let r = DenseMatrix::from_fn(4, 3, |i, j| if i == 1 && j == 1 { 1.0 } else { 0.0 }).unwrap();
        let p = project(&r, &psi, &phi).unwrap();
        for i in 0..4 {
            for j in 0..3 {
                let expected = if (i, j) == (1, 1) { 1.0 } else { 0.0 };
                assert!((p.get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_matches_per_pair_inner_products() {
        let psi = random_normalized(6, 5, 1);
        let phi = random_normalized(4, 3, 2);
        let r = random_matrix(6, 4, 3);
        let p = project(&r, &psi, &phi).unwrap();
        for i in 0..5 {
            for j in 0..3 {
                let mut direct = 0.0;
                for a in 0..6 {
                    for b in 0..4 {
                        direct += psi.atoms().get(a, i) * r.get(a, b) * phi.atoms().get(b, j);
                    }
                }
                assert!((p.get(i, j) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_is_linear() {
        let psi = random_normalized(6, 5, 4);
        let phi = random_normalized(4, 3, 5);
        let r = random_matrix(6, 4, 6);
        let p1 = project(&r, &psi, &phi).unwrap();
        let p2 = project(&r.scaled(2.0), &psi, &phi).unwrap();
        for (a, b) in p1.as_slice().iter().zip(p2.as_slice()) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_rejects_unnormalized_dictionary() {
        let raw = Dictionary::new(DenseMatrix::identity(3).scaled(2.0), DictionaryFamily::Custom)
            .unwrap();
        let phi = identity_dict(3);
        let r = DenseMatrix::zeros(3, 3);
        assert!(matches!(project(&r, &raw, &phi), Err(SelectionError::NotNormalized)));
    }

    #[test]
    fn top_k_follows_the_pair_trace() {
        let p = DenseMatrix::new(2, 2, vec![3.0, 1.0, 2.0, 0.5]).unwrap();
        let s = select_top_k(&p, &SelectionState::new(), 2);
        assert_eq!(s.left_indices(), &[0]);
        assert_eq!(s.right_indices(), &[0]);

        let s3 = select_top_k(&p, &SelectionState::new(), 3);
        assert_eq!(s3.left_indices(), &[0, 1]);
        assert_eq!(s3.right_indices(), &[0]);
    }

    #[test]
    fn top_k_on_saturated_state_is_identity() {
        let p = DenseMatrix::new(2, 2, vec![3.0, 1.0, 2.0, 0.5]).unwrap();
        let full = SelectionState::from_indices(vec![0, 1], vec![0, 1]);
        let s = select_top_k(&p, &full, 4);
        assert_eq!(s, full);
    }

    #[test]
    fn top_k_overshoots_by_at_most_one() {
        let p = random_matrix(8, 7, 9);
        for k in 1..6 {
            let s = select_top_k(&p, &SelectionState::new(), k);
            assert!(s.total() >= k.min(15));
            assert!(s.total() <= k + 1);
        }
    }

    #[test]
    fn one_d_selection_finds_the_generating_pair() {
        let psi = identity_dict(8);
        let phi = identity_dict(6);
        let r = DenseMatrix::from_fn(8, 6, |i, j| if i == 2 && j == 5 { 2.5 } else { 0.0 }).unwrap();
        let s = select_1d(&r, &psi, &phi, &SelectionState::new(), 1, 1).unwrap();
        assert_eq!(s.left_indices(), &[2]);
        assert_eq!(s.right_indices(), &[5]);
    }

    #[test]
    fn one_d_selection_with_zero_budget_keeps_side_unchanged() {
        let psi = identity_dict(4);
        let phi = identity_dict(4);
        let r = random_matrix(4, 4, 10);
        let s = select_1d(&r, &psi, &phi, &SelectionState::new(), 0, 2).unwrap();
        assert!(s.left_indices().is_empty());
        assert_eq!(s.right_count(), 2);
    }

    #[test]
    fn one_d_selection_breaks_ties_toward_lowest_index() {
        let psi = identity_dict(3);
        let phi = identity_dict(3);
        let r = DenseMatrix::identity(3); // all three atoms carry equal energy
        let s = select_1d(&r, &psi, &phi, &SelectionState::new(), 2, 1).unwrap();
        assert_eq!(s.left_indices(), &[0, 1]);
        assert_eq!(s.right_indices(), &[0]);
    }

    #[test]
    fn random_selection_is_deterministic_and_duplicate_free() {
        let state = SelectionState::from_indices(vec![1], vec![2]);
        let a = select_random(&state, 10, 8, 3, 2, 99).unwrap();
        let b = select_random(&state, 10, 8, 3, 2, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.left_count(), 4);
        assert_eq!(a.right_count(), 3);
        let mut left = a.left_indices().to_vec();
        left.sort_unstable();
        left.dedup();
        assert_eq!(left.len(), 4);
    }

    #[test]
    fn random_selection_can_exhaust_the_pool() {
        let s = select_random(&SelectionState::new(), 5, 4, 5, 4, 1).unwrap();
        assert_eq!(s.left_count(), 5);
        assert_eq!(s.right_count(), 4);
        assert!(matches!(
            select_random(&s, 5, 4, 1, 0, 2),
            Err(SelectionError::InsufficientAtoms { .. })
        ));
    }

    #[test]
    fn screen_with_tiny_ratio_keeps_every_aligned_atom() {
        let psi = identity_dict(4);
        let phi = identity_dict(3);
        // Row 3 and column 2 see exactly zero alignment.
        let x = DenseMatrix::from_fn(4, 3, |i, j| {
            if i < 3 && j < 2 {
                (1 + i + j) as f64
            } else {
                0.0
            }
        })
        .unwrap();
        let s = screen(&x, &psi, &phi, 1e-12).unwrap();
        assert_eq!(s.left_indices(), &[0, 1, 2]);
        assert_eq!(s.right_indices(), &[0, 1]);
    }

    #[test]
    fn screen_with_ratio_one_keeps_only_the_argmax_pair() {
        let psi = identity_dict(4);
        let phi = identity_dict(3);
        let x = DenseMatrix::from_fn(4, 3, |i, j| (i * 3 + j) as f64).unwrap();
        let s = screen(&x, &psi, &phi, 1.0).unwrap();
        assert_eq!(s.left_indices(), &[3]);
        assert_eq!(s.right_indices(), &[2]);
    }

    #[test]
    fn screen_survivors_shrink_as_ratio_grows() {
        let psi = random_normalized(10, 9, 20);
        let phi = random_normalized(7, 6, 21);
        let x = random_matrix(10, 7, 22);
        let p = project(&x, &psi, &phi).unwrap();
        let mut last = usize::MAX;
        for ratio in [0.05, 0.2, 0.4, 0.6, 0.8, 1.0] {
            let s = screen_with_projection(&p, ratio).unwrap();
            assert!(s.total() <= last, "survivors must not grow with ratio");
            last = s.total();
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn top_k_never_duplicates_and_bounds_growth(seed in 0u64..500, k in 1usize..8) {
            let p = random_matrix(6, 5, seed);
            let base = SelectionState::from_indices(vec![0], vec![1]);
            let s = select_top_k(&p, &base, k);
            let new_atoms = s.total() - base.total();
            prop_assert!(new_atoms <= k + 1);
            let mut left = s.left_indices().to_vec();
            left.sort_unstable();
            let deduped = {
                let mut l = left.clone();
                l.dedup();
                l
            };
            prop_assert_eq!(left.len(), deduped.len());
        }
    }
}
