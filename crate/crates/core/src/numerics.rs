//! Dense linear algebra shared by every other module: the `DenseMatrix`
//! carrier type, SVD-based pseudo-inverse, column normalization and norms.
//!
//! Matrices are stored row-major. Constructors reject non-finite entries, so
//! downstream code can assume NaN-free data.

use ndarray::{Array2, ArrayView2, Axis};
use ndarray_linalg::{Eigh, JobSvd, SVDDC, UPLO};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("matrix data length {got} does not match {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("matrix must be nonempty")]
    EmptyMatrix,
    #[error("SVD failed to converge on a {rows}x{cols} matrix")]
    SvdFailure { rows: usize, cols: usize },
    #[error("eigendecomposition failed on a {n}x{n} matrix")]
    EigFailure { n: usize },
    #[error("column {index} has zero norm and cannot be normalized")]
    DegenerateColumn { index: usize },
    #[error("rcond must be >= 0, got {0}")]
    InvalidRcond(f64),
}

/// Dense real matrix in row-major order. The universal numeric carrier for
/// data matrices, residuals, dictionaries and coding factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    inner: Array2<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting shape mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::ShapeMismatch { rows, cols, got: data.len() });
        }
        let inner = Array2::from_shape_vec((rows, cols), data)
            .expect("length checked above");
        Self::from_array(inner)
    }

    /// Wraps an existing array, rejecting non-finite entries.
    pub fn from_array(inner: Array2<f64>) -> Result<Self, NumericsError> {
        if let Some(((row, col), _)) = inner.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(NumericsError::NonFinite { row, col });
        }
        Ok(Self { inner: into_standard_layout(inner) })
    }

    /// Wraps an array that is already known to be finite (e.g. the result of
    /// arithmetic on finite inputs). Debug builds still verify.
    pub(crate) fn from_array_unchecked(inner: Array2<f64>) -> Self {
        debug_assert!(inner.iter().all(|v| v.is_finite()), "non-finite entry");
        Self { inner: into_standard_layout(inner) }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { inner: Array2::zeros((rows, cols)) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Array2::eye(n) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, NumericsError> {
        Self::from_array(Array2::from_shape_fn((rows, cols), |(i, j)| f(i, j)))
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.inner[[row, col]]
    }

    /// Row-major view of the raw entries.
    pub fn as_slice(&self) -> &[f64] {
        self.inner.as_slice().expect("DenseMatrix is always standard layout")
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.inner.view()
    }

    pub fn array(&self) -> &Array2<f64> {
        &self.inner
    }

    pub fn into_array(self) -> Array2<f64> {
        self.inner
    }

    /// Matrix product. Panics on inner-dimension mismatch; public operations
    /// validate shapes before multiplying.
    pub fn matmul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matmul inner dimensions {}x{} . {}x{}",
            self.rows(),
            self.cols(),
            rhs.rows(),
            rhs.cols()
        );
        Self::from_array_unchecked(self.inner.dot(&rhs.inner))
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_array_unchecked(self.inner.t().to_owned())
    }

    pub fn scaled(&self, factor: f64) -> DenseMatrix {
        Self::from_array_unchecked(&self.inner * factor)
    }

    pub fn add(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()), "add shape");
        Self::from_array_unchecked(&self.inner + &rhs.inner)
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows(), self.cols()), (rhs.rows(), rhs.cols()), "sub shape");
        Self::from_array_unchecked(&self.inner - &rhs.inner)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// New matrix keeping the given columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> DenseMatrix {
        let mut out = Array2::zeros((self.rows(), indices.len()));
        for (dst, &src) in indices.iter().enumerate() {
            out.column_mut(dst).assign(&self.inner.column(src));
        }
        Self { inner: out }
    }

    pub fn column_norm(&self, col: usize) -> f64 {
        self.inner.column(col).iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// BLAS-backed products sometimes come back column-major; every matrix is
/// stored row-major, so reorder when needed.
fn into_standard_layout(a: Array2<f64>) -> Array2<f64> {
    if a.is_standard_layout() {
        a
    } else {
        a.as_standard_layout().into_owned()
    }
}

/// Frobenius norm, the square root of the sum of squared entries.
pub fn frobenius_norm(a: &DenseMatrix) -> f64 {
    a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Default singular-value truncation threshold factor for a matrix of the
/// given shape: `max(rows, cols) * machine epsilon`.
pub fn default_rcond(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// `rcond * sigma_max` are treated as zero.
pub fn pseudo_inverse(a: &DenseMatrix, rcond: f64) -> Result<DenseMatrix, NumericsError> {
    if a.is_empty() {
        return Err(NumericsError::EmptyMatrix);
    }
    if rcond.is_nan() || rcond < 0.0 {
        return Err(NumericsError::InvalidRcond(rcond));
    }
    let (rows, cols) = (a.rows(), a.cols());
    let (u, sigma, vt) = a
        .array()
        .svddc(JobSvd::Some)
        .map_err(|_| NumericsError::SvdFailure { rows, cols })?;
    let u = u.expect("requested U");
    let vt = vt.expect("requested Vt");
    let sigma_max = sigma.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = rcond * sigma_max;
    // A† = V Σ† Uᵀ, built as (diag scale of Vᵀ rows)ᵀ · Uᵀ.
    let mut v_scaled = vt.t().to_owned(); // cols x k
    for (j, mut col) in v_scaled.axis_iter_mut(Axis(1)).enumerate() {
        let s = sigma[j];
        let inv = if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 };
        col.mapv_inplace(|v| v * inv);
    }
    let pinv = v_scaled.dot(&u.t());
    DenseMatrix::from_array(pinv).map_err(|_| NumericsError::SvdFailure { rows, cols })
}

/// Eigendecomposition of a symmetric matrix. Returns eigenvalues in
/// ascending order and the matching eigenvectors as columns.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix), NumericsError> {
    let n = a.rows();
    if n == 0 || a.cols() != n {
        return Err(NumericsError::DimensionMismatch {
            context: format!("symmetric_eigen needs a square matrix, got {}x{}", a.rows(), a.cols()),
        });
    }
    let (values, vectors) = a.array().eigh(UPLO::Lower).map_err(|_| NumericsError::EigFailure { n })?;
    let vectors = DenseMatrix::from_array(vectors).map_err(|_| NumericsError::EigFailure { n })?;
    Ok((values.to_vec(), vectors))
}

/// Rescales every column to unit L2 norm, preserving direction.
pub fn normalize_columns(a: &DenseMatrix) -> Result<DenseMatrix, NumericsError> {
    let mut out = a.array().clone();
    for j in 0..out.ncols() {
        let norm = out.column(j).iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(NumericsError::DegenerateColumn { index: j });
        }
        out.column_mut(j).mapv_inplace(|v| v / norm);
    }
    Ok(DenseMatrix::from_array_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0)).unwrap()
    }

    fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constructor_rejects_bad_shape_and_nan() {
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![1.0; 3]),
            Err(NumericsError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            DenseMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(NumericsError::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            DenseMatrix::new(1, 1, vec![f64::INFINITY]),
            Err(NumericsError::NonFinite { .. })
        ));
    }

    #[test]
    fn pseudo_inverse_of_identity_is_identity() {
        let eye = DenseMatrix::identity(3);
        let pinv = pseudo_inverse(&eye, 1e-12).unwrap();
        assert!(max_abs_diff(&pinv, &eye) < 1e-12);
    }

    #[test]
    fn pseudo_inverse_truncates_zero_singular_values() {
        let a = DenseMatrix::new(2, 2, vec![2.0, 0.0, 0.0, 0.0]).unwrap();
        let pinv = pseudo_inverse(&a, 1e-12).unwrap();
        let expected = DenseMatrix::new(2, 2, vec![0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(max_abs_diff(&pinv, &expected) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_satisfies_moore_penrose_conditions() {
        let a = random_matrix(5, 3, 42);
        let p = pseudo_inverse(&a, 1e-12).unwrap();
        let apa = a.matmul(&p).matmul(&a);
        let pap = p.matmul(&a).matmul(&p);
        assert!(max_abs_diff(&apa, &a) < 1e-10, "A A† A = A");
        assert!(max_abs_diff(&pap, &p) < 1e-10, "A† A A† = A†");
        let ap = a.matmul(&p);
        let pa = p.matmul(&a);
        assert!(max_abs_diff(&ap, &ap.transpose()) < 1e-10, "(A A†)ᵀ = A A†");
        assert!(max_abs_diff(&pa, &pa.transpose()) < 1e-10, "(A† A)ᵀ = A† A");
    }

    #[test]
    fn pseudo_inverse_is_an_involution_on_full_rank_input() {
        let a = random_matrix(4, 4, 7);
        let back = pseudo_inverse(&pseudo_inverse(&a, 1e-12).unwrap(), 1e-12).unwrap();
        let scale = frobenius_norm(&a);
        assert!(max_abs_diff(&back, &a) / scale < 1e-8);
    }

    #[test]
    fn pseudo_inverse_rejects_empty_and_negative_rcond() {
        let a = DenseMatrix::zeros(0, 3);
        assert!(matches!(pseudo_inverse(&a, 1e-12), Err(NumericsError::EmptyMatrix)));
        let b = DenseMatrix::identity(2);
        assert!(matches!(pseudo_inverse(&b, -1.0), Err(NumericsError::InvalidRcond(_))));
    }

    #[test]
    fn normalize_columns_scales_to_unit_norm() {
        let a = DenseMatrix::new(2, 1, vec![3.0, 4.0]).unwrap();
        let n = normalize_columns(&a).unwrap();
        assert_abs_diff_eq!(n.get(0, 0), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(n.get(1, 0), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn normalize_columns_keeps_orthonormal_matrix_fixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = DenseMatrix::new(2, 2, vec![s, s, s, -s]).unwrap();
        let n = normalize_columns(&q).unwrap();
        assert!(max_abs_diff(&n, &q) < 1e-12);
    }

    #[test]
    fn normalize_columns_rejects_zero_column() {
        let a = DenseMatrix::new(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            normalize_columns(&a),
            Err(NumericsError::DegenerateColumn { index: 1 })
        ));
    }

    #[test]
    fn frobenius_norm_examples() {
        assert_eq!(frobenius_norm(&DenseMatrix::zeros(3, 2)), 0.0);
        let a = DenseMatrix::new(1, 2, vec![3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(frobenius_norm(&a), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn frobenius_norm_matches_elementwise_sum() {
        let a = random_matrix(10, 10, 3);
        let mut acc = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                acc += a.get(i, j) * a.get(i, j);
            }
        }
        assert_abs_diff_eq!(frobenius_norm(&a), acc.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn unit_outer_product_has_unit_frobenius_norm() {
        let u = normalize_columns(&random_matrix(6, 1, 11)).unwrap();
        let v = normalize_columns(&random_matrix(4, 1, 12)).unwrap();
        let outer = u.matmul(&v.transpose());
        assert_abs_diff_eq!(frobenius_norm(&outer), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn select_columns_copies_in_order() {
        let a = DenseMatrix::new(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let s = a.select_columns(&[2, 0]);
        assert_eq!(s.as_slice(), &[3.0, 1.0, 6.0, 4.0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn normalize_is_idempotent(seed in 0u64..1000) {
            let a = random_matrix(6, 4, seed);
            // Random entries in (-1, 1) virtually never give a zero column.
            let once = normalize_columns(&a).unwrap();
            let twice = normalize_columns(&once).unwrap();
            prop_assert!(max_abs_diff(&once, &twice) < 1e-12);
            for j in 0..once.cols() {
                prop_assert!((once.column_norm(j) - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn pseudo_inverse_mp_conditions_hold(seed in 0u64..200, rows in 2usize..6, cols in 2usize..6) {
            let a = random_matrix(rows, cols, seed);
            let p = pseudo_inverse(&a, default_rcond(rows, cols)).unwrap();
            let apa = a.matmul(&p).matmul(&a);
            prop_assert!(max_abs_diff(&apa, &a) < 1e-9);
        }
    }
}
