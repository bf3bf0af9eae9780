//! File I/O for dense matrices (CSV), undirected weighted graphs (Matrix
//! Market coordinate format) and the `GraphSpec` domain type.
//!
//! The dense CSV layout is `rows,cols` on the first line followed by one
//! comma-separated line per row. Values are written with 17 significant
//! digits so a write/read round trip reproduces every f64 bit-exactly.

use crate::numerics::{DenseMatrix, NumericsError};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatioError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl MatioError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        MatioError::Io { path: path.display().to_string(), source }
    }

    fn parse(path: &Path, line: usize, message: impl Into<String>) -> Self {
        MatioError::Parse { path: path.display().to_string(), line, message: message.into() }
    }
}

/// Undirected weighted graph in canonical form: every edge is stored once as
/// `(u, v, weight)` with `u < v`, no self-loops, strictly positive weights,
/// edges sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl GraphSpec {
    /// Canonicalizes a raw edge list: orients endpoints as `u < v`, drops
    /// self-loops, merges duplicates (first occurrence wins) and sorts.
    pub fn new(node_count: usize, raw_edges: Vec<(usize, usize, f64)>) -> Result<Self, MatioError> {
        let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(raw_edges.len());
        for (a, b, w) in raw_edges {
            if a >= node_count || b >= node_count {
                return Err(MatioError::Parse {
                    path: "<edge list>".into(),
                    line: 0,
                    message: format!("edge ({a}, {b}) out of range for {node_count} nodes"),
                });
            }
            if a == b {
                continue;
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(MatioError::Parse {
                    path: "<edge list>".into(),
                    line: 0,
                    message: format!("edge ({a}, {b}) has non-positive weight {w}"),
                });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            edges.push((u, v, w));
        }
        edges.sort_by_key(|e| (e.0, e.1));
        edges.dedup_by_key(|e| (e.0, e.1));
        Ok(Self { node_count, edges })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Dense adjacency matrix.
    pub fn adjacency(&self) -> DenseMatrix {
        let n = self.node_count;
        let mut a = vec![0.0; n * n];
        for &(u, v, w) in &self.edges {
            a[u * n + v] = w;
            a[v * n + u] = w;
        }
        DenseMatrix::new(n, n, a).expect("finite weights")
    }

    /// Combinatorial Laplacian L = D - A.
    pub fn laplacian(&self) -> DenseMatrix {
        let n = self.node_count;
        let mut l = vec![0.0; n * n];
        for &(u, v, w) in &self.edges {
            l[u * n + v] = -w;
            l[v * n + u] = -w;
            l[u * n + u] += w;
            l[v * n + v] += w;
        }
        DenseMatrix::new(n, n, l).expect("finite weights")
    }
}

/// Reads a dense matrix from the `rows,cols` CSV layout.
pub fn read_dense_csv(path: impl AsRef<Path>) -> Result<DenseMatrix, MatioError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| MatioError::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| MatioError::parse(path, 1, "empty file, expected `rows,cols` header"))?;
    let header = header.map_err(|e| MatioError::io(path, e))?;
    let mut dims = header.trim().split(',');
    let rows: usize = dims
        .next()
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| MatioError::parse(path, 1, format!("bad row count in header `{header}`")))?;
    let cols: usize = dims
        .next()
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| MatioError::parse(path, 1, format!("bad column count in header `{header}`")))?;
    if dims.next().is_some() {
        return Err(MatioError::parse(path, 1, "header must be exactly `rows,cols`"));
    }

    let mut data = Vec::with_capacity(rows * cols);
    let mut filled_rows = 0usize;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| MatioError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if filled_rows == rows {
            return Err(MatioError::parse(path, line_no, format!("expected {rows} data rows, found more")));
        }
        let mut count = 0usize;
        for token in line.split(',') {
            let value: f64 = token.trim().parse().map_err(|_| {
                MatioError::parse(path, line_no, format!("non-numeric token `{}`", token.trim()))
            })?;
            if !value.is_finite() {
                return Err(MatioError::parse(path, line_no, format!("non-finite value `{}`", token.trim())));
            }
            data.push(value);
            count += 1;
        }
        if count != cols {
            return Err(MatioError::parse(
                path,
                line_no,
                format!("expected {cols} values, found {count}"),
            ));
        }
        filled_rows += 1;
    }
    if filled_rows != rows {
        return Err(MatioError::parse(
            path,
            filled_rows + 2,
            format!("expected {rows} data rows, found {filled_rows}"),
        ));
    }
    Ok(DenseMatrix::new(rows, cols, data)?)
}

/// Writes a dense matrix in the `rows,cols` CSV layout with 17 significant
/// digits per entry.
pub fn write_dense_csv(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<(), MatioError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| MatioError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, s: String| {
        out.write_all(s.as_bytes()).map_err(|e| MatioError::io(path, e))
    };
    write(&mut out, format!("{},{}\n", m.rows(), m.cols()))?;
    let mut line = String::new();
    for i in 0..m.rows() {
        line.clear();
        for j in 0..m.cols() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.16e}", m.get(i, j)));
        }
        line.push('\n');
        write(&mut out, std::mem::take(&mut line))?;
    }
    out.flush().map_err(|e| MatioError::io(path, e))
}

/// Reads an undirected graph from Matrix Market coordinate format. Accepts
/// `real`, `integer` and `pattern` fields with `general` or `symmetric`
/// symmetry; duplicate directed edges in general files are merged.
pub fn read_graph_mtx(path: impl AsRef<Path>) -> Result<GraphSpec, MatioError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| MatioError::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let (_, banner) = lines
        .next()
        .ok_or_else(|| MatioError::parse(path, 1, "empty file, expected MatrixMarket banner"))?;
    let banner = banner.map_err(|e| MatioError::io(path, e))?;
    let tokens: Vec<String> = banner.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(MatioError::parse(path, 1, format!("malformed banner `{banner}`")));
    }
    let pattern = match tokens[3].as_str() {
        "pattern" => true,
        "real" | "integer" => false,
        other => return Err(MatioError::parse(path, 1, format!("unsupported field `{other}`"))),
    };
    match tokens[4].as_str() {
        "general" | "symmetric" => {}
        other => return Err(MatioError::parse(path, 1, format!("unsupported symmetry `{other}`"))),
    }

    let mut size_line = None;
    let mut size_line_no = 0;
    for (idx, line) in &mut lines {
        let line = line.map_err(|e| MatioError::io(path, e))?;
        let trimmed = line.trim().to_string();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some(trimmed);
        size_line_no = idx + 1;
        break;
    }
    let size_line =
        size_line.ok_or_else(|| MatioError::parse(path, size_line_no.max(2), "missing size line"))?;
    let dims: Vec<&str> = size_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(MatioError::parse(path, size_line_no, format!("bad size line `{size_line}`")));
    }
    let parse_count = |t: &str| -> Result<usize, MatioError> {
        t.parse().map_err(|_| MatioError::parse(path, size_line_no, format!("bad count `{t}`")))
    };
    let n_rows = parse_count(dims[0])?;
    let n_cols = parse_count(dims[1])?;
    let nnz = parse_count(dims[2])?;
    if n_rows != n_cols {
        return Err(MatioError::parse(
            path,
            size_line_no,
            format!("graph matrix must be square, got {n_rows}x{n_cols}"),
        ));
    }

    let mut raw_edges = Vec::with_capacity(nnz);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| MatioError::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let expected = if pattern { 2 } else { 3 };
        if fields.len() != expected {
            return Err(MatioError::parse(
                path,
                line_no,
                format!("expected {expected} fields, found {}", fields.len()),
            ));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| MatioError::parse(path, line_no, format!("bad index `{}`", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| MatioError::parse(path, line_no, format!("bad index `{}`", fields[1])))?;
        if u == 0 || v == 0 || u > n_rows || v > n_rows {
            return Err(MatioError::parse(
                path,
                line_no,
                format!("index ({u}, {v}) out of range [1, {n_rows}]"),
            ));
        }
        let w = if pattern {
            1.0
        } else {
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| MatioError::parse(path, line_no, format!("bad weight `{}`", fields[2])))?;
            if w <= 0.0 || !w.is_finite() {
                return Err(MatioError::parse(path, line_no, format!("non-positive weight {w}")));
            }
            w
        };
        raw_edges.push((u - 1, v - 1, w));
    }
    GraphSpec::new(n_rows, raw_edges)
}

/// Writes a graph in Matrix Market coordinate format (real symmetric).
pub fn write_graph_mtx(g: &GraphSpec, path: impl AsRef<Path>) -> Result<(), MatioError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| MatioError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let n = g.node_count();
    let mut body = String::new();
    body.push_str("%%MatrixMarket matrix coordinate real symmetric\n");
    body.push_str(&format!("{n} {n} {}\n", g.edges().len()));
    for &(u, v, w) in g.edges() {
        body.push_str(&format!("{} {} {:.16e}\n", u + 1, v + 1, w));
    }
    out.write_all(body.as_bytes()).map_err(|e| MatioError::io(path, e))?;
    out.flush().map_err(|e| MatioError::io(path, e))
}
