//! Analytical dictionary builders: graph Fourier (GFT), graph Haar wavelets,
//! Ramanujan periodic and B-spline bases, plus stacking and persistence.
//!
//! Builders produce unnormalized atoms; normalization is an explicit step so
//! alignment scoring (which needs unit atoms) and least-squares coding (which
//! uses raw atoms) can coexist.

use crate::matio::{self, GraphSpec, MatioError};
use crate::numerics::{self, DenseMatrix, NumericsError};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DictioError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Matio(#[from] MatioError),
    #[error("dictionary atom {index} is identically zero")]
    ZeroAtom { index: usize },
    #[error("invalid dictionary parameters: {0}")]
    InvalidParams(String),
    #[error("cannot stack dictionaries with row counts {0:?}")]
    RowMismatch(Vec<usize>),
    #[error("sidecar error for {path}: {message}")]
    Sidecar { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictionaryFamily {
    Gft,
    GraphHaar,
    Ramanujan,
    Spline,
    Composite,
    Custom,
}

impl std::fmt::Display for DictionaryFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            DictionaryFamily::Gft => "gft",
            DictionaryFamily::GraphHaar => "graph-haar",
            DictionaryFamily::Ramanujan => "ramanujan",
            DictionaryFamily::Spline => "spline",
            DictionaryFamily::Composite => "composite",
            DictionaryFamily::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// Atom matrix (one atom per column) with family metadata and normalization
/// state.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    atoms: DenseMatrix,
    family: DictionaryFamily,
    normalized: bool,
}

impl Dictionary {
    /// Wraps an atom matrix, rejecting zero columns.
    pub fn new(atoms: DenseMatrix, family: DictionaryFamily) -> Result<Self, DictioError> {
        for j in 0..atoms.cols() {
            if atoms.column_norm(j) == 0.0 {
                return Err(DictioError::ZeroAtom { index: j });
            }
        }
        Ok(Self { atoms, family, normalized: false })
    }

    /// Unit-norm copy of this dictionary.
    pub fn normalize(&self) -> Result<Self, DictioError> {
        if self.normalized {
            return Ok(self.clone());
        }
        let atoms = numerics::normalize_columns(&self.atoms)?;
        Ok(Self { atoms, family: self.family, normalized: true })
    }

    pub fn atoms(&self) -> &DenseMatrix {
        &self.atoms
    }

    pub fn family(&self) -> DictionaryFamily {
        self.family
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn rows(&self) -> usize {
        self.atoms.rows()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.cols()
    }
}

/// Graph Fourier dictionary: eigenvectors of the combinatorial Laplacian
/// L = D - A, ordered by ascending eigenvalue. Orthonormal N x N basis.
pub fn build_gft(g: &GraphSpec) -> Result<Dictionary, DictioError> {
    if g.node_count() == 0 {
        return Err(DictioError::InvalidParams("graph has no nodes".into()));
    }
    if g.node_count() == 1 {
        let atoms = DenseMatrix::identity(1);
        return Ok(Dictionary { atoms, family: DictionaryFamily::Gft, normalized: true });
    }
    let (_, vectors) = numerics::symmetric_eigen(&g.laplacian())?;
    Ok(Dictionary { atoms: vectors, family: DictionaryFamily::Gft, normalized: true })
}

/// Graph Haar wavelet dictionary built by recursive spectral bipartition.
///
/// The level-0 atom is the constant vector; every split of a cell into two
/// child cells contributes one atom that is positive-constant on the first
/// child, negative-constant on the second and zero elsewhere, scaled to unit
/// norm and zero mean. Cells are split by the sign of the Fiedler vector of
/// the induced subgraph, falling back to a balanced index split whenever the
/// sign split would leave a child empty.
pub fn build_graph_haar(g: &GraphSpec) -> Result<Dictionary, DictioError> {
    let n = g.node_count();
    if n < 2 {
        return Err(DictioError::InvalidParams(format!(
            "graph Haar needs at least 2 nodes, got {n}"
        )));
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    columns.push(vec![1.0 / (n as f64).sqrt(); n]);

    let mut stack = vec![(0..n).collect::<Vec<usize>>()];
    while let Some(cell) = stack.pop() {
        if cell.len() < 2 {
            continue;
        }
        let (left, right) = split_cell(g, &cell)?;
        let (n1, n2) = (left.len() as f64, right.len() as f64);
        let total = n1 + n2;
        let pos = (n2 / (n1 * total)).sqrt();
        let neg = -(n1 / (n2 * total)).sqrt();
        let mut atom = vec![0.0; n];
        for &i in &left {
            atom[i] = pos;
        }
        for &i in &right {
            atom[i] = neg;
        }
        columns.push(atom);
        // Pre-order: descend into the positive child first.
        stack.push(right);
        stack.push(left);
    }

    debug_assert_eq!(columns.len(), n);
    let mut data = vec![0.0; n * n];
    for (j, col) in columns.iter().enumerate() {
        for i in 0..n {
            data[i * n + j] = col[i];
        }
    }
    let atoms = DenseMatrix::new(n, n, data)?;
    Ok(Dictionary { atoms, family: DictionaryFamily::GraphHaar, normalized: true })
}

/// Splits a cell by Fiedler-vector sign, with a balanced index split as the
/// degenerate-case fallback.
fn split_cell(g: &GraphSpec, cell: &[usize]) -> Result<(Vec<usize>, Vec<usize>), DictioError> {
    let m = cell.len();
    if m == 2 {
        return Ok((vec![cell[0]], vec![cell[1]]));
    }
    let pos_in_cell: std::collections::HashMap<usize, usize> =
        cell.iter().enumerate().map(|(k, &node)| (node, k)).collect();
    let mut lap = vec![0.0; m * m];
    for &(u, v, w) in g.edges() {
        if let (Some(&a), Some(&b)) = (pos_in_cell.get(&u), pos_in_cell.get(&v)) {
            lap[a * m + b] -= w;
            lap[b * m + a] -= w;
            lap[a * m + a] += w;
            lap[b * m + b] += w;
        }
    }
    let lap = DenseMatrix::new(m, m, lap)?;
    let (_, vectors) = numerics::symmetric_eigen(&lap)?;
    let mut fiedler: Vec<f64> = (0..m).map(|i| vectors.get(i, 1)).collect();
    if let Some(first) = fiedler.iter().find(|v| **v != 0.0) {
        if *first < 0.0 {
            for v in &mut fiedler {
                *v = -*v;
            }
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (k, &node) in cell.iter().enumerate() {
        if fiedler[k] >= 0.0 {
            left.push(node);
        } else {
            right.push(node);
        }
    }
    if left.is_empty() || right.is_empty() {
        let mid = m.div_ceil(2);
        left = cell[..mid].to_vec();
        right = cell[mid..].to_vec();
    }
    Ok((left, right))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Euler totient.
fn phi(q: usize) -> usize {
    (1..=q).filter(|k| gcd(*k, q) == 1).count()
}

/// Ramanujan periodic dictionary. For every period q in [1, max_period] the
/// block holds the phi(q) circular shifts of the Ramanujan sum sequence
/// c_q(n) = sum over k coprime with q of cos(2 pi k n / q), each extended
/// periodically to `length` samples. Blocks are stacked by ascending period,
/// for sum over q of phi(q) columns in total.
pub fn build_ramanujan(length: usize, max_period: usize) -> Result<Dictionary, DictioError> {
    if length == 0 || max_period == 0 {
        return Err(DictioError::InvalidParams(format!(
            "ramanujan needs length >= 1 and max_period >= 1, got {length}, {max_period}"
        )));
    }
    let total_atoms: usize = (1..=max_period).map(phi).sum();
    let mut data = vec![0.0; length * total_atoms];
    let mut col = 0usize;
    for q in 1..=max_period {
        let mut base = vec![0.0; q];
        for (n, value) in base.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 1..=q {
                if gcd(k, q) == 1 {
                    acc += (2.0 * std::f64::consts::PI * (k * n) as f64 / q as f64).cos();
                }
            }
            *value = acc;
        }
        for shift in 0..phi(q) {
            for n in 0..length {
                data[n * total_atoms + col] = base[(n + q - shift % q) % q];
            }
            col += 1;
        }
    }
    let atoms = DenseMatrix::new(length, total_atoms, data)?;
    Dictionary::new(atoms, DictionaryFamily::Ramanujan)
}

/// B-spline dictionary: one block per scale, where a scale with `k` basis
/// functions uses a clamped uniform knot vector on [0, 1] and contributes
/// `k` columns sampled on a uniform grid of `length` points.
pub fn build_spline(
    length: usize,
    basis_per_scale: &[usize],
    degree: usize,
) -> Result<Dictionary, DictioError> {
    if length < degree + 2 {
        return Err(DictioError::InvalidParams(format!(
            "spline needs length >= degree + 2, got length {length}, degree {degree}"
        )));
    }
    if basis_per_scale.is_empty() {
        return Err(DictioError::InvalidParams("spline needs at least one scale".into()));
    }
    for &k in basis_per_scale {
        if k < degree + 1 {
            return Err(DictioError::InvalidParams(format!(
                "scale with {k} basis functions is infeasible for degree {degree}"
            )));
        }
    }
    let total: usize = basis_per_scale.iter().sum();
    let mut data = vec![0.0; length * total];
    let mut offset = 0usize;
    for &k in basis_per_scale {
        let knots = clamped_uniform_knots(k, degree);
        for t in 0..length {
            let u = t as f64 / (length - 1) as f64;
            let (span, values) = bspline_basis(&knots, k, degree, u);
            for (local, value) in values.iter().enumerate() {
                let basis_index = span - degree + local;
                data[t * total + offset + basis_index] = *value;
            }
        }
        offset += k;
    }
    let atoms = DenseMatrix::new(length, total, data)?;
    Dictionary::new(atoms, DictionaryFamily::Spline).map_err(|e| match e {
        DictioError::ZeroAtom { index } => DictioError::InvalidParams(format!(
            "basis function {index} vanishes on the sample grid; use fewer basis functions or more samples"
        )),
        other => other,
    })
}

/// Clamped uniform knot vector with `k` basis functions of the given degree:
/// degree+1 repeated knots at each end, interior knots uniform in (0, 1).
fn clamped_uniform_knots(k: usize, degree: usize) -> Vec<f64> {
    let n_knots = k + degree + 1;
    let segments = (k - degree) as f64;
    let mut knots = Vec::with_capacity(n_knots);
    for i in 0..n_knots {
        if i <= degree {
            knots.push(0.0);
        } else if i >= k {
            knots.push(1.0);
        } else {
            knots.push((i - degree) as f64 / segments);
        }
    }
    knots
}

/// Evaluates the degree+1 basis functions that are nonzero at `u`.
/// Returns the knot span and the values for basis indices
/// span-degree ..= span (The NURBS Book, algorithm A2.2).
fn bspline_basis(knots: &[f64], k: usize, degree: usize, u: f64) -> (usize, Vec<f64>) {
    // Knot span: largest i in [degree, k-1] with knots[i] <= u.
    let mut span = degree;
    while span + 1 < k && u >= knots[span + 1] {
        span += 1;
    }
    let mut values = vec![0.0; degree + 1];
    let mut left = vec![0.0; degree + 1];
    let mut right = vec![0.0; degree + 1];
    values[0] = 1.0;
    for j in 1..=degree {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            let denom = right[r + 1] + left[j - r];
            let temp = if denom == 0.0 { 0.0 } else { values[r] / denom };
            values[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        values[j] = saved;
    }
    (span, values)
}

/// Concatenates dictionaries column-wise. The result is Composite and keeps
/// the normalized flag only if every input was normalized.
pub fn stack(dicts: &[Dictionary]) -> Result<Dictionary, DictioError> {
    if dicts.is_empty() {
        return Err(DictioError::InvalidParams("stack needs at least one dictionary".into()));
    }
    let rows = dicts[0].rows();
    if dicts.iter().any(|d| d.rows() != rows) {
        return Err(DictioError::RowMismatch(dicts.iter().map(|d| d.rows()).collect()));
    }
    if dicts.len() == 1 {
        return Ok(dicts[0].clone());
    }
    let total: usize = dicts.iter().map(|d| d.atom_count()).sum();
    let mut data = vec![0.0; rows * total];
    let mut offset = 0usize;
    for d in dicts {
        let cols = d.atom_count();
        for i in 0..rows {
            for j in 0..cols {
                data[i * total + offset + j] = d.atoms().get(i, j);
            }
        }
        offset += cols;
    }
    let atoms = DenseMatrix::new(rows, total, data)?;
    Ok(Dictionary {
        atoms,
        family: DictionaryFamily::Composite,
        normalized: dicts.iter().all(|d| d.is_normalized()),
    })
}

/// Sidecar metadata stored next to a dictionary CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DictionarySidecar {
    pub family: DictionaryFamily,
    pub rows: usize,
    pub atoms: usize,
    pub normalized: bool,
    #[serde(default)]
    pub params: serde_json::Value,
}

fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the atom matrix as dense CSV plus a JSON sidecar with family and
/// parameters.
pub fn save_dictionary(
    dict: &Dictionary,
    csv_path: impl AsRef<Path>,
    params: serde_json::Value,
) -> Result<(), DictioError> {
    let csv_path = csv_path.as_ref();
    matio::write_dense_csv(dict.atoms(), csv_path)?;
    let sidecar = DictionarySidecar {
        family: dict.family(),
        rows: dict.rows(),
        atoms: dict.atom_count(),
        normalized: dict.is_normalized(),
        params,
    };
    let side_path = sidecar_path(csv_path);
    let body = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    std::fs::write(&side_path, body).map_err(|e| DictioError::Sidecar {
        path: side_path.display().to_string(),
        message: e.to_string(),
    })
}

/// Loads a dictionary from CSV. A sidecar, when present, restores the family
/// and normalization flag; otherwise the dictionary is treated as Custom.
pub fn load_dictionary(csv_path: impl AsRef<Path>) -> Result<Dictionary, DictioError> {
    let csv_path = csv_path.as_ref();
    let atoms = matio::read_dense_csv(csv_path)?;
    let side_path = sidecar_path(csv_path);
    if side_path.exists() {
        let body = std::fs::read_to_string(&side_path).map_err(|e| DictioError::Sidecar {
            path: side_path.display().to_string(),
            message: e.to_string(),
        })?;
        let sidecar: DictionarySidecar =
            serde_json::from_str(&body).map_err(|e| DictioError::Sidecar {
                path: side_path.display().to_string(),
                message: e.to_string(),
            })?;
        if sidecar.rows != atoms.rows() || sidecar.atoms != atoms.cols() {
            return Err(DictioError::Sidecar {
                path: side_path.display().to_string(),
                message: format!(
                    "sidecar says {}x{} but CSV holds {}x{}",
                    sidecar.rows,
                    sidecar.atoms,
                    atoms.rows(),
                    atoms.cols()
                ),
            });
        }
        let dict = Dictionary::new(atoms, sidecar.family)?;
        Ok(Dictionary { normalized: sidecar.normalized, ..dict })
    } else {
        Dictionary::new(atoms, DictionaryFamily::Custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn path_graph(n: usize) -> GraphSpec {
        GraphSpec::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0)).collect()).unwrap()
    }

    fn assert_orthonormal(d: &Dictionary, tol: f64) {
        let gram = d.atoms().transpose().matmul(d.atoms());
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram.get(i, j) - expected).abs() < tol,
                    "gram[{i},{j}] = {}",
                    gram.get(i, j)
                );
            }
        }
    }

    #[test]
    fn gft_of_path3_has_known_spectrum() {
        let g = path_graph(3);
        let (values, _) = numerics::symmetric_eigen(&g.laplacian()).unwrap();
        assert_abs_diff_eq!(values[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(values[2], 3.0, epsilon = 1e-10);
        let d = build_gft(&g).unwrap();
        let c = 1.0 / 3f64.sqrt();
        for i in 0..3 {
            assert_abs_diff_eq!(d.atoms().get(i, 0).abs(), c, epsilon = 1e-10);
        }
        assert_orthonormal(&d, 1e-8);
    }

    #[test]
    fn gft_of_single_node_is_identity() {
        let g = GraphSpec::new(1, vec![]).unwrap();
        let d = build_gft(&g).unwrap();
        assert_eq!((d.rows(), d.atom_count()), (1, 1));
        assert_eq!(d.atoms().get(0, 0), 1.0);
    }

    #[test]
    fn gft_is_orthonormal_on_an_irregular_graph() {
        let g = GraphSpec::new(
            7,
            vec![(0, 1, 1.0), (0, 2, 2.0), (1, 3, 1.0), (2, 3, 0.5), (4, 5, 1.0), (5, 6, 3.0)],
        )
        .unwrap();
        assert_orthonormal(&build_gft(&g).unwrap(), 1e-8);
    }

    #[test]
    fn haar_basis_of_two_nodes() {
        let g = path_graph(2);
        let d = build_graph_haar(&g).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(d.atoms().get(0, 0), s, epsilon = 1e-12);
        assert_abs_diff_eq!(d.atoms().get(1, 0), s, epsilon = 1e-12);
        assert_abs_diff_eq!(d.atoms().get(0, 1).abs(), s, epsilon = 1e-12);
        assert_abs_diff_eq!(d.atoms().get(1, 1).abs(), s, epsilon = 1e-12);
        assert!(d.atoms().get(0, 1) * d.atoms().get(1, 1) < 0.0);
    }

    #[test]
    fn haar_first_split_separates_two_cliques() {
        // Two 2-cliques joined by a single bridge: the Fiedler sign pattern
        // puts {0, 1} on one side and {2, 3} on the other.
        let g = GraphSpec::new(4, vec![(0, 1, 1.0), (2, 3, 1.0), (1, 2, 1.0)]).unwrap();
        let d = build_graph_haar(&g).unwrap();
        let a = &d.atoms();
        // Column 1 is the root split atom.
        assert_abs_diff_eq!(a.get(0, 1), a.get(1, 1), epsilon = 1e-10);
        assert_abs_diff_eq!(a.get(2, 1), a.get(3, 1), epsilon = 1e-10);
        assert!(a.get(0, 1) * a.get(2, 1) < 0.0, "cliques must take opposite signs");
        assert_orthonormal(&d, 1e-8);
    }

    #[test]
    fn haar_is_orthonormal_on_disconnected_graph() {
        let g = GraphSpec::new(6, vec![(0, 1, 1.0), (1, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0)]).unwrap();
        assert_orthonormal(&build_graph_haar(&g).unwrap(), 1e-8);
    }

    #[test]
    fn haar_rejects_single_node() {
        let g = GraphSpec::new(1, vec![]).unwrap();
        assert!(build_graph_haar(&g).is_err());
    }

    #[test]
    fn ramanujan_q1_block_is_constant() {
        let d = build_ramanujan(6, 1).unwrap();
        assert_eq!(d.atom_count(), 1);
        for n in 0..6 {
            assert_abs_diff_eq!(d.atoms().get(n, 0), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ramanujan_q2_block_alternates() {
        let d = build_ramanujan(8, 2).unwrap();
        assert_eq!(d.atom_count(), 2);
        for n in 0..8 {
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(d.atoms().get(n, 1), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn ramanujan_column_count_is_totient_sum() {
        // phi(1..5) = 1, 1, 2, 2, 4.
        let d = build_ramanujan(16, 5).unwrap();
        assert_eq!(d.atom_count(), 10);
    }

    #[test]
    fn ramanujan_atoms_are_periodic() {
        let d = build_ramanujan(37, 6).unwrap();
        let mut col = 0;
        for q in 1..=6 {
            for _ in 0..phi(q) {
                for n in 0..37 {
                    assert_eq!(
                        d.atoms().get(n, col),
                        d.atoms().get(n % q, col),
                        "period-{q} atom must repeat exactly"
                    );
                }
                col += 1;
            }
        }
    }

    #[test]
    fn spline_degree0_atoms_partition_the_axis() {
        let d = build_spline(8, &[4], 0).unwrap();
        assert_eq!(d.atom_count(), 4);
        for t in 0..8 {
            let mut nonzero = 0;
            let mut sum = 0.0;
            for j in 0..4 {
                let v = d.atoms().get(t, j);
                assert!(v == 0.0 || v == 1.0);
                if v != 0.0 {
                    nonzero += 1;
                }
                sum += v;
            }
            assert_eq!(nonzero, 1, "indicators are disjoint");
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spline_atoms_are_nonnegative_with_compact_support() {
        let d = build_spline(32, &[6], 3).unwrap();
        for j in 0..d.atom_count() {
            let col: Vec<f64> = (0..32).map(|t| d.atoms().get(t, j)).collect();
            assert!(col.iter().all(|&v| v >= 0.0));
            let support: Vec<usize> =
                (0..32).filter(|&t| col[t] > 0.0).collect();
            assert!(!support.is_empty());
            // Support is a contiguous sample range.
            assert_eq!(support.last().unwrap() - support[0] + 1, support.len());
            assert!(support.len() < 32, "atom {j} must not cover the whole axis");
        }
    }

    #[test]
    fn spline_blocks_sum_to_one_everywhere() {
        let d = build_spline(40, &[5, 9], 3).unwrap();
        assert_eq!(d.atom_count(), 14);
        for t in 0..40 {
            let first: f64 = (0..5).map(|j| d.atoms().get(t, j)).sum();
            let second: f64 = (5..14).map(|j| d.atoms().get(t, j)).sum();
            assert_abs_diff_eq!(first, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(second, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn spline_rejects_infeasible_scale() {
        assert!(build_spline(8, &[2], 3).is_err());
    }

    #[test]
    fn stack_of_one_is_identity_operation() {
        let d = build_ramanujan(8, 3).unwrap();
        let s = stack(std::slice::from_ref(&d)).unwrap();
        assert_eq!(s, d);
    }

    #[test]
    fn stack_concatenates_columns_in_order() {
        let g = path_graph(5);
        let gft = build_gft(&g).unwrap();
        let haar = build_graph_haar(&g).unwrap();
        let s = stack(&[gft.clone(), haar.clone()]).unwrap();
        assert_eq!(s.family(), DictionaryFamily::Composite);
        assert_eq!((s.rows(), s.atom_count()), (5, 10));
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(s.atoms().get(i, j), gft.atoms().get(i, j));
                assert_eq!(s.atoms().get(i, 5 + j), haar.atoms().get(i, j));
            }
        }
    }

    #[test]
    fn stack_rejects_row_mismatch() {
        let a = build_ramanujan(8, 2).unwrap();
        let b = build_ramanujan(9, 2).unwrap();
        assert!(matches!(stack(&[a, b]), Err(DictioError::RowMismatch(_))));
    }

    #[test]
    fn dictionary_round_trips_with_sidecar() {
        let d = build_ramanujan(12, 4).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("dict.csv");
        save_dictionary(&d, &csv, serde_json::json!({"length": 12, "max_period": 4})).unwrap();
        let back = load_dictionary(&csv).unwrap();
        assert_eq!(back.family(), DictionaryFamily::Ramanujan);
        assert_eq!(back.atoms().as_slice(), d.atoms().as_slice());
    }
}
