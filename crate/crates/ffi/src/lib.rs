//! C ABI over the lrmds library.
//!
//! Every object crosses the boundary as an opaque pointer created and freed
//! by this library. Functions return `LrmdsStatus`; on any failure the
//! thread-local error message is readable via `lrmds_last_error`. The
//! matching C header lives in `include/lrmds.h` (regenerate with cbindgen,
//! see `cbindgen.toml`).
//!
//! Pointer rules: inputs are borrowed for the duration of the call; outputs
//! marked "caller frees" must be released with the matching `_free`
//! function. Passing a pointer that was not produced by this library (or
//! freeing twice) is undefined behavior, as usual for C APIs.

use lrmds::baselines;
use lrmds::benchkit;
use lrmds::coder::{CoderConfig, CoderVariant};
use lrmds::dictio::{self, Dictionary};
use lrmds::matio::{self, GraphSpec};
use lrmds::numerics::DenseMatrix;
use lrmds::pipeline::{self, PipelineConfig, SelectionMode, TraceRecord};
use lrmds::derive_seed;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes shared by every fallible function.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmdsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NumericError = 4,
    IoError = 5,
    BufferTooSmall = 6,
    InternalPanic = 7,
}

/// Method selector for `lrmds_run`.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LrmdsMethod {
    Lrmds = 0,
    LrmdsFast = 1,
    Lrmds1d = 2,
    Random = 3,
    Omp2d = 4,
    ScAls = 5,
}

/// Plain-old-data run options. `lrmds_run_options_default` fills the same
/// defaults the CLI uses; zero-valued optional fields mean "unset".
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LrmdsRunOptions {
    pub method: LrmdsMethod,
    /// Atoms added per iteration (joint selection).
    pub k: usize,
    pub rank: usize,
    /// Per-side budgets for the 1D and random modes.
    pub k_left: usize,
    pub k_right: usize,
    /// Relative residual stop; 0 disables the early stop.
    pub residual_tol: f64,
    /// Outer iteration cap; 0 picks ceil((I+J)/atoms-per-iteration).
    pub max_outer_iters: usize,
    /// Stop once this many atoms are selected; 0 disables the budget.
    pub atom_budget: usize,
    pub coder_tol: f64,
    pub coder_max_inner_iters: usize,
    /// Screening threshold ratio (sc-als only).
    pub ratio: f64,
    /// Greedy pair budget (omp2d only); 0 is invalid for omp2d.
    pub target_pairs: usize,
    pub seed: u64,
}

/// One trace row as plain data.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LrmdsTraceRow {
    pub iteration: usize,
    pub left_atoms: usize,
    pub right_atoms: usize,
    pub residual_norm: f64,
    pub elapsed_s: f64,
}

pub struct LrmdsMatrix(DenseMatrix);
pub struct LrmdsGraph(GraphSpec);
pub struct LrmdsDictionary(Dictionary);

pub struct LrmdsResult {
    left: Vec<usize>,
    right: Vec<usize>,
    trace: Vec<TraceRecord>,
    reconstruction: DenseMatrix,
    rmse: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn fail(status: LrmdsStatus, message: impl Into<String>) -> LrmdsStatus {
    set_error(message);
    status
}

/// Copies the last error message (NUL-terminated, truncated to `cap`).
/// Returns the full message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (length query).
#[no_mangle]
pub unsafe extern "C" fn lrmds_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

fn guard<T>(label: &str, body: impl FnOnce() -> Result<T, LrmdsStatus>) -> Result<T, LrmdsStatus> {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(result) => result,
        Err(_) => {
            set_error(format!("{label}: internal panic"));
            Err(LrmdsStatus::InternalPanic)
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, LrmdsStatus> {
    if ptr.is_null() {
        return Err(fail(LrmdsStatus::NullPointer, format!("{what} is null")));
    }
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|_| fail(LrmdsStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, LrmdsStatus> {
    if ptr.is_null() {
        Err(fail(LrmdsStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(unsafe { &*ptr })
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

// ── Matrices ────────────────────────────────────────────────────────────

/// Creates a matrix from row-major data (copied). Caller frees. Returns
/// null on invalid input (see `lrmds_last_error`).
///
/// # Safety
/// `data` must point to `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_create(
    rows: usize,
    cols: usize,
    data: *const f64,
) -> *mut LrmdsMatrix {
    let result = guard("lrmds_matrix_create", || {
        if data.is_null() {
            return Err(fail(LrmdsStatus::NullPointer, "data is null"));
        }
        let slice = unsafe { std::slice::from_raw_parts(data, rows * cols) };
        DenseMatrix::new(rows, cols, slice.to_vec())
            .map_err(|e| fail(LrmdsStatus::InvalidArgument, e.to_string()))
    });
    match result {
        Ok(m) => boxed(LrmdsMatrix(m)),
        Err(_) => ptr::null_mut(),
    }
}

/// Reads a matrix from the dense CSV layout. Caller frees.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_read_csv(path: *const c_char) -> *mut LrmdsMatrix {
    let result = guard("lrmds_matrix_read_csv", || {
        let path = unsafe { str_arg(path, "path") }?;
        matio::read_dense_csv(path).map_err(|e| fail(LrmdsStatus::ParseError, e.to_string()))
    });
    match result {
        Ok(m) => boxed(LrmdsMatrix(m)),
        Err(_) => ptr::null_mut(),
    }
}

/// Writes a matrix as dense CSV.
///
/// # Safety
/// `m` must be a live matrix handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_write_csv(
    m: *const LrmdsMatrix,
    path: *const c_char,
) -> LrmdsStatus {
    let result = guard("lrmds_matrix_write_csv", || {
        let m = unsafe { ref_arg(m, "matrix") }?;
        let path = unsafe { str_arg(path, "path") }?;
        matio::write_dense_csv(&m.0, path).map_err(|e| fail(LrmdsStatus::IoError, e.to_string()))
    });
    result.err().unwrap_or(LrmdsStatus::Ok)
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_rows(m: *const LrmdsMatrix) -> usize {
    unsafe { ref_arg(m, "matrix") }.map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_cols(m: *const LrmdsMatrix) -> usize {
    unsafe { ref_arg(m, "matrix") }.map_or(0, |m| m.0.cols())
}

/// Copies the row-major entries into `out` (must hold rows*cols doubles).
///
/// # Safety
/// `m` must be a live matrix handle and `out` large enough.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_copy_data(
    m: *const LrmdsMatrix,
    out: *mut f64,
    cap: usize,
) -> LrmdsStatus {
    let result = guard("lrmds_matrix_copy_data", || {
        let m = unsafe { ref_arg(m, "matrix") }?;
        if out.is_null() {
            return Err(fail(LrmdsStatus::NullPointer, "out is null"));
        }
        let need = m.0.rows() * m.0.cols();
        if cap < need {
            return Err(fail(
                LrmdsStatus::BufferTooSmall,
                format!("need {need} doubles, got {cap}"),
            ));
        }
        unsafe { ptr::copy_nonoverlapping(m.0.as_slice().as_ptr(), out, need) };
        Ok(())
    });
    result.err().unwrap_or(LrmdsStatus::Ok)
}

/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrmds_matrix_free(m: *mut LrmdsMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

// ── Graphs ──────────────────────────────────────────────────────────────

/// Reads an undirected graph in Matrix Market coordinate format. Caller
/// frees.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lrmds_graph_read_mtx(path: *const c_char) -> *mut LrmdsGraph {
    let result = guard("lrmds_graph_read_mtx", || {
        let path = unsafe { str_arg(path, "path") }?;
        matio::read_graph_mtx(path).map_err(|e| fail(LrmdsStatus::ParseError, e.to_string()))
    });
    match result {
        Ok(g) => boxed(LrmdsGraph(g)),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_graph_node_count(g: *const LrmdsGraph) -> usize {
    unsafe { ref_arg(g, "graph") }.map_or(0, |g| g.0.node_count())
}

/// # Safety
/// `g` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrmds_graph_free(g: *mut LrmdsGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

// ── Dictionaries ────────────────────────────────────────────────────────

fn dict_result(
    result: Result<Result<Dictionary, LrmdsStatus>, LrmdsStatus>,
) -> *mut LrmdsDictionary {
    match result {
        Ok(Ok(d)) => boxed(LrmdsDictionary(d)),
        _ => ptr::null_mut(),
    }
}

/// Graph Fourier dictionary (Laplacian eigenvectors). Caller frees.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_gft(g: *const LrmdsGraph) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_gft", || {
        let g = unsafe { ref_arg(g, "graph") }?;
        Ok(dictio::build_gft(&g.0).map_err(|e| fail(LrmdsStatus::NumericError, e.to_string())))
    }))
}

/// Graph Haar wavelet dictionary. Caller frees.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_graph_haar(g: *const LrmdsGraph) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_graph_haar", || {
        let g = unsafe { ref_arg(g, "graph") }?;
        Ok(dictio::build_graph_haar(&g.0)
            .map_err(|e| fail(LrmdsStatus::NumericError, e.to_string())))
    }))
}

/// Ramanujan periodic dictionary. Caller frees.
#[no_mangle]
pub extern "C" fn lrmds_dict_ramanujan(length: usize, max_period: usize) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_ramanujan", || {
        Ok(dictio::build_ramanujan(length, max_period)
            .map_err(|e| fail(LrmdsStatus::InvalidArgument, e.to_string())))
    }))
}

/// B-spline dictionary with one block per scale. Caller frees.
///
/// # Safety
/// `basis_per_scale` must point to `scales` counts.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_spline(
    length: usize,
    basis_per_scale: *const usize,
    scales: usize,
    degree: usize,
) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_spline", || {
        if basis_per_scale.is_null() {
            return Err(fail(LrmdsStatus::NullPointer, "basis_per_scale is null"));
        }
        let basis = unsafe { std::slice::from_raw_parts(basis_per_scale, scales) };
        Ok(dictio::build_spline(length, basis, degree)
            .map_err(|e| fail(LrmdsStatus::InvalidArgument, e.to_string())))
    }))
}

/// Column-wise concatenation of two dictionaries. Caller frees.
///
/// # Safety
/// Both inputs must be live dictionary handles.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_stack(
    a: *const LrmdsDictionary,
    b: *const LrmdsDictionary,
) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_stack", || {
        let a = unsafe { ref_arg(a, "left dictionary") }?;
        let b = unsafe { ref_arg(b, "right dictionary") }?;
        Ok(dictio::stack(&[a.0.clone(), b.0.clone()])
            .map_err(|e| fail(LrmdsStatus::InvalidArgument, e.to_string())))
    }))
}

/// Loads a dictionary CSV written by this library (sidecar optional).
/// Caller frees.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_load_csv(path: *const c_char) -> *mut LrmdsDictionary {
    dict_result(guard("lrmds_dict_load_csv", || {
        let path = unsafe { str_arg(path, "path") }?;
        Ok(dictio::load_dictionary(path).map_err(|e| fail(LrmdsStatus::ParseError, e.to_string())))
    }))
}

/// # Safety
/// `d` must be a live dictionary handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_rows(d: *const LrmdsDictionary) -> usize {
    unsafe { ref_arg(d, "dictionary") }.map_or(0, |d| d.0.rows())
}

/// # Safety
/// `d` must be a live dictionary handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_atom_count(d: *const LrmdsDictionary) -> usize {
    unsafe { ref_arg(d, "dictionary") }.map_or(0, |d| d.0.atom_count())
}

/// # Safety
/// `d` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrmds_dict_free(d: *mut LrmdsDictionary) {
    if !d.is_null() {
        drop(unsafe { Box::from_raw(d) });
    }
}

// ── Running methods ─────────────────────────────────────────────────────

/// Fills the default options (method lrmds, k = 5, rank = 3).
///
/// # Safety
/// `opts` must point to writable memory for one options struct.
#[no_mangle]
pub unsafe extern "C" fn lrmds_run_options_default(opts: *mut LrmdsRunOptions) {
    if opts.is_null() {
        return;
    }
    unsafe {
        *opts = LrmdsRunOptions {
            method: LrmdsMethod::Lrmds,
            k: 5,
            rank: 3,
            k_left: 3,
            k_right: 3,
            residual_tol: 1e-4,
            max_outer_iters: 0,
            atom_budget: 0,
            coder_tol: 1e-6,
            coder_max_inner_iters: 50,
            ratio: 0.5,
            target_pairs: 0,
            seed: 0,
        };
    }
}

/// Runs the selected method and hands back a result handle (caller frees).
///
/// # Safety
/// `x`, `psi`, `phi` and `opts` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lrmds_run(
    x: *const LrmdsMatrix,
    psi: *const LrmdsDictionary,
    phi: *const LrmdsDictionary,
    opts: *const LrmdsRunOptions,
    out: *mut *mut LrmdsResult,
) -> LrmdsStatus {
    let result = guard("lrmds_run", || {
        if out.is_null() {
            return Err(fail(LrmdsStatus::NullPointer, "out is null"));
        }
        let x = unsafe { ref_arg(x, "x") }?;
        let psi = unsafe { ref_arg(psi, "psi") }?;
        let phi = unsafe { ref_arg(phi, "phi") }?;
        let opts = unsafe { ref_arg(opts, "options") }?;
        run_impl(&x.0, &psi.0, &phi.0, opts)
    });
    match result {
        Ok(value) => {
            unsafe { *out = boxed(value) };
            LrmdsStatus::Ok
        }
        Err(status) => status,
    }
}

fn run_impl(
    x: &DenseMatrix,
    psi: &Dictionary,
    phi: &Dictionary,
    opts: &LrmdsRunOptions,
) -> Result<LrmdsResult, LrmdsStatus> {
    let numeric = |e: &dyn std::fmt::Display| fail(LrmdsStatus::NumericError, e.to_string());
    let coder_cfg = CoderConfig {
        variant: if opts.method == LrmdsMethod::LrmdsFast {
            CoderVariant::Fast
        } else {
            CoderVariant::Exact
        },
        max_inner_iters: opts.coder_max_inner_iters.max(1),
        tol: opts.coder_tol,
        rcond: None,
        seed: derive_seed(opts.seed, "init"),
    };
    match opts.method {
        LrmdsMethod::Lrmds | LrmdsMethod::LrmdsFast | LrmdsMethod::Lrmds1d | LrmdsMethod::Random => {
            let cfg = PipelineConfig {
                k_per_iter: opts.k.max(1),
                rank: opts.rank.max(1),
                max_outer_iters: (opts.max_outer_iters > 0).then_some(opts.max_outer_iters),
                residual_tol: opts.residual_tol,
                selection_mode: match opts.method {
                    LrmdsMethod::Lrmds1d => SelectionMode::OneD,
                    LrmdsMethod::Random => SelectionMode::Random,
                    _ => SelectionMode::Joint,
                },
                k_left: opts.k_left,
                k_right: opts.k_right,
                atom_budget: (opts.atom_budget > 0).then_some(opts.atom_budget),
                seed: derive_seed(opts.seed, "selection"),
                coder: coder_cfg,
            };
            let (model, trace) =
                pipeline::run_lrmds(x, psi, phi, &cfg).map_err(|e| numeric(&e))?;
            let psi_s = psi.atoms().select_columns(model.selection.left_indices());
            let phi_s = phi.atoms().select_columns(model.selection.right_indices());
            let reconstruction = if model.selection.is_empty() {
                DenseMatrix::zeros(x.rows(), x.cols())
            } else {
                lrmds::coder::reconstruct(&model, &psi_s, &phi_s).map_err(|e| numeric(&e))?
            };
            let rmse = benchkit::rmse(x, &reconstruction).map_err(|e| numeric(&e))?;
            Ok(LrmdsResult {
                left: model.selection.left_indices().to_vec(),
                right: model.selection.right_indices().to_vec(),
                trace: trace.records,
                reconstruction,
                rmse,
            })
        }
        LrmdsMethod::Omp2d => {
            if opts.target_pairs == 0 {
                return Err(fail(LrmdsStatus::InvalidArgument, "omp2d needs target_pairs >= 1"));
            }
            let psi_hat = psi.normalize().map_err(|e| numeric(&e))?;
            let phi_hat = phi.normalize().map_err(|e| numeric(&e))?;
            let (model, trace) = baselines::run_omp2d(x, &psi_hat, &phi_hat, opts.target_pairs)
                .map_err(|e| numeric(&e))?;
            let mut left: Vec<usize> = model.pairs.iter().map(|p| p.0).collect();
            left.sort_unstable();
            left.dedup();
            let mut right: Vec<usize> = model.pairs.iter().map(|p| p.1).collect();
            right.sort_unstable();
            right.dedup();
            let coeffs =
                model.coefficients_full(psi_hat.atom_count(), phi_hat.atom_count());
            let reconstruction = psi_hat
                .atoms()
                .matmul(&coeffs)
                .matmul(&phi_hat.atoms().transpose());
            let rmse = benchkit::rmse(x, &reconstruction).map_err(|e| numeric(&e))?;
            Ok(LrmdsResult { left, right, trace: trace.records, reconstruction, rmse })
        }
        LrmdsMethod::ScAls => {
            if !(opts.ratio > 0.0 && opts.ratio <= 1.0) {
                return Err(fail(LrmdsStatus::InvalidArgument, "sc-als needs ratio in (0, 1]"));
            }
            let (model, trace) =
                baselines::run_sc_als(x, psi, phi, opts.ratio, &coder_cfg, opts.rank.max(1))
                    .map_err(|e| numeric(&e))?;
            let psi_s = psi.atoms().select_columns(model.selection.left_indices());
            let phi_s = phi.atoms().select_columns(model.selection.right_indices());
            let reconstruction =
                lrmds::coder::reconstruct(&model, &psi_s, &phi_s).map_err(|e| numeric(&e))?;
            let rmse = benchkit::rmse(x, &reconstruction).map_err(|e| numeric(&e))?;
            Ok(LrmdsResult {
                left: model.selection.left_indices().to_vec(),
                right: model.selection.right_indices().to_vec(),
                trace: trace.records,
                reconstruction,
                rmse,
            })
        }
    }
}

// ── Results ─────────────────────────────────────────────────────────────

/// RMSE between the input and the final reconstruction.
///
/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_rmse(r: *const LrmdsResult) -> f64 {
    unsafe { ref_arg(r, "result") }.map_or(f64::NAN, |r| r.rmse)
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_left_count(r: *const LrmdsResult) -> usize {
    unsafe { ref_arg(r, "result") }.map_or(0, |r| r.left.len())
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_right_count(r: *const LrmdsResult) -> usize {
    unsafe { ref_arg(r, "result") }.map_or(0, |r| r.right.len())
}

/// Copies selected left atom indices; returns how many indices exist.
///
/// # Safety
/// `buf` must hold `cap` entries, or be null for a pure length query.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_selected_left(
    r: *const LrmdsResult,
    buf: *mut usize,
    cap: usize,
) -> usize {
    let Ok(r) = (unsafe { ref_arg(r, "result") }) else { return 0 };
    if !buf.is_null() {
        let n = r.left.len().min(cap);
        unsafe { ptr::copy_nonoverlapping(r.left.as_ptr(), buf, n) };
    }
    r.left.len()
}

/// Copies selected right atom indices; returns how many indices exist.
///
/// # Safety
/// `buf` must hold `cap` entries, or be null for a pure length query.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_selected_right(
    r: *const LrmdsResult,
    buf: *mut usize,
    cap: usize,
) -> usize {
    let Ok(r) = (unsafe { ref_arg(r, "result") }) else { return 0 };
    if !buf.is_null() {
        let n = r.right.len().min(cap);
        unsafe { ptr::copy_nonoverlapping(r.right.as_ptr(), buf, n) };
    }
    r.right.len()
}

/// The final reconstruction as a fresh matrix handle (caller frees).
///
/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_reconstruction(r: *const LrmdsResult) -> *mut LrmdsMatrix {
    match unsafe { ref_arg(r, "result") } {
        Ok(r) => boxed(LrmdsMatrix(r.reconstruction.clone())),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_trace_len(r: *const LrmdsResult) -> usize {
    unsafe { ref_arg(r, "result") }.map_or(0, |r| r.trace.len())
}

/// Copies trace row `index` into `out`.
///
/// # Safety
/// `r` must be live; `out` must point to a writable row struct.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_trace_row(
    r: *const LrmdsResult,
    index: usize,
    out: *mut LrmdsTraceRow,
) -> LrmdsStatus {
    let result = guard("lrmds_result_trace_row", || {
        let r = unsafe { ref_arg(r, "result") }?;
        if out.is_null() {
            return Err(fail(LrmdsStatus::NullPointer, "out is null"));
        }
        let Some(row) = r.trace.get(index) else {
            return Err(fail(
                LrmdsStatus::InvalidArgument,
                format!("trace has {} rows, asked for {index}", r.trace.len()),
            ));
        };
        unsafe {
            *out = LrmdsTraceRow {
                iteration: row.iteration,
                left_atoms: row.left_count,
                right_atoms: row.right_count,
                residual_norm: row.residual_norm,
                elapsed_s: row.elapsed_s,
            };
        }
        Ok(())
    });
    result.err().unwrap_or(LrmdsStatus::Ok)
}

/// # Safety
/// `r` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrmds_result_free(r: *mut LrmdsResult) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}
