//! JSON experiment configuration: one schema-validated document describing
//! the data source, the dictionaries for each side, the method and the
//! optional bench section. Unknown keys are rejected.

use crate::benchkit::MethodSpec;
use crate::dictio::{self, Dictionary, DictioError};
use crate::matio::{self, GraphSpec};
use crate::numerics::DenseMatrix;
use crate::synthlab::SynthSpec;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Matio(#[from] matio::MatioError),
    #[error(transparent)]
    Dictio(#[from] DictioError),
}

/// Root document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataConfig,
    pub dictionaries: DictionariesConfig,
    pub method: MethodConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchConfig>,
}

/// Data source: explicit files or a synthetic specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_mtx: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthDataConfig>,
}

/// Synthetic data source parameters (the SBM protocol plus the temporal
/// dimension needed for the right dictionary).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthDataConfig {
    #[serde(default = "default_nodes")]
    pub n_nodes: usize,
    #[serde(default = "default_blocks")]
    pub sbm_blocks: usize,
    #[serde(default = "default_p_in")]
    pub p_in: f64,
    #[serde(default = "default_p_out")]
    pub p_out: f64,
    #[serde(default = "default_gt_atoms")]
    pub gt_left_atoms: usize,
    #[serde(default = "default_gt_atoms")]
    pub gt_right_atoms: usize,
    #[serde(default = "default_rank")]
    pub rank: usize,
    /// Linear SNR; omit for a noiseless signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    #[serde(default = "default_time_steps")]
    pub time_steps: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_nodes() -> usize {
    1000
}
fn default_blocks() -> usize {
    3
}
fn default_p_in() -> f64 {
    0.2
}
fn default_p_out() -> f64 {
    0.02
}
fn default_gt_atoms() -> usize {
    20
}
fn default_rank() -> usize {
    3
}
fn default_time_steps() -> usize {
    256
}

impl SynthDataConfig {
    pub fn to_spec(&self) -> SynthSpec {
        SynthSpec {
            n_nodes: self.n_nodes,
            sbm_blocks: self.sbm_blocks,
            p_in: self.p_in,
            p_out: self.p_out,
            gt_left_atoms: self.gt_left_atoms,
            gt_right_atoms: self.gt_right_atoms,
            rank: self.rank,
            snr: self.snr.unwrap_or(f64::INFINITY),
            seed: self.seed,
        }
    }
}

impl Default for SynthDataConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields defaulted")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionariesConfig {
    pub left: DictConfig,
    pub right: DictConfig,
}

/// A dictionary recipe. `graph`/`length` fall back to the data's graph and
/// the data's column count when omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DictConfig {
    Gft {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<String>,
    },
    GraphHaar {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        graph: Option<String>,
    },
    Ramanujan {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        length: Option<usize>,
        max_period: usize,
    },
    Spline {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        length: Option<usize>,
        basis: Vec<usize>,
        #[serde(default = "default_spline_degree")]
        degree: usize,
    },
    Csv {
        path: String,
    },
    Stack {
        parts: Vec<DictConfig>,
    },
}

fn default_spline_degree() -> usize {
    3
}

/// Method section: the method name plus the union of per-method knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodConfig {
    pub name: String,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_rank")]
    pub rank: usize,
    #[serde(default = "default_k_side")]
    pub k_left: usize,
    #[serde(default = "default_k_side")]
    pub k_right: usize,
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_outer_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_budget: Option<usize>,
    #[serde(default = "default_coder_tol")]
    pub coder_tol: f64,
    #[serde(default = "default_coder_iters")]
    pub coder_max_inner_iters: usize,
    /// Screening threshold ratio for sc-als; required by that method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Pair budget for omp2d.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pairs: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_k() -> usize {
    5
}
fn default_k_side() -> usize {
    3
}
fn default_residual_tol() -> f64 {
    1e-4
}
fn default_coder_tol() -> f64 {
    1e-6
}
fn default_coder_iters() -> usize {
    50
}

pub const METHOD_NAMES: [&str; 6] = ["lrmds", "lrmds-f", "lrmds-1d", "rand", "omp2d", "sc-als"];

impl MethodConfig {
    pub fn to_spec(&self) -> Result<MethodSpec, ConfigError> {
        match self.name.as_str() {
            "lrmds" => Ok(MethodSpec::Lrmds { k: self.k, rank: self.rank }),
            "lrmds-f" => Ok(MethodSpec::LrmdsF { k: self.k, rank: self.rank }),
            "lrmds-1d" => Ok(MethodSpec::Lrmds1d {
                k_left: self.k_left,
                k_right: self.k_right,
                rank: self.rank,
            }),
            "rand" => Ok(MethodSpec::Rand {
                k_left: self.k_left,
                k_right: self.k_right,
                rank: self.rank,
            }),
            "omp2d" => Ok(MethodSpec::Omp2d),
            "sc-als" => Ok(MethodSpec::ScAls { rank: self.rank }),
            other => Err(ConfigError::Invalid(format!(
                "unknown method `{other}`; expected one of {METHOD_NAMES:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub budgets_pct: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub out: String,
    /// Method names to sweep; defaults to the method section's method.
    #[serde(default)]
    pub methods: Vec<String>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

pub fn load(path: impl AsRef<Path>) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.as_ref().display())))?;
    parse(&text)
}

/// Materialized inputs for a run: the data matrix, both dictionaries, and
/// when the data was synthetic, the generating ground truth.
pub struct ResolvedInputs {
    pub x: DenseMatrix,
    pub psi: Dictionary,
    pub phi: Dictionary,
    pub clean: Option<DenseMatrix>,
    pub gt: Option<crate::selection::SelectionState>,
    pub graph: Option<GraphSpec>,
}

/// Loads or generates the data and builds both dictionaries.
pub fn resolve_inputs(cfg: &ExperimentConfig) -> Result<ResolvedInputs, ConfigError> {
    let graph = match (&cfg.data.graph_mtx, &cfg.data.synth) {
        (Some(path), _) => Some(matio::read_graph_mtx(path)?),
        (None, Some(synth)) => {
            Some(crate::synthlab::generate_sbm(&synth.to_spec()).map_err(to_invalid)?)
        }
        (None, None) => None,
    };

    // Dictionaries may need the graph or the data dimensions; the synthetic
    // path needs the dictionaries before the data exists, so dictionaries
    // resolve first against the declared dimensions.
    let (rows_hint, cols_hint) = match (&cfg.data.x_csv, &cfg.data.synth) {
        (Some(_), _) => (None, None),
        (None, Some(synth)) => (Some(synth.n_nodes), Some(synth.time_steps)),
        (None, None) => {
            return Err(ConfigError::Invalid("data needs either x_csv or synth".into()))
        }
    };

    let x_loaded = cfg.data.x_csv.as_deref().map(matio::read_dense_csv).transpose()?;
    let (rows_hint, cols_hint) = match &x_loaded {
        Some(x) => (Some(x.rows()), Some(x.cols())),
        None => (rows_hint, cols_hint),
    };

    let psi = build_dict(&cfg.dictionaries.left, graph.as_ref(), rows_hint)?;
    let phi = build_dict(&cfg.dictionaries.right, graph.as_ref(), cols_hint)?;

    let (x, clean, gt) = match x_loaded {
        Some(x) => (x, None, None),
        None => {
            let synth = cfg.data.synth.as_ref().expect("checked above");
            let signal =
                crate::synthlab::generate_signal(&synth.to_spec(), &psi, &phi).map_err(to_invalid)?;
            (signal.x, Some(signal.clean), Some(signal.gt))
        }
    };
    if psi.rows() != x.rows() || phi.rows() != x.cols() {
        return Err(ConfigError::Invalid(format!(
            "X is {}x{} but dictionaries have {} and {} rows",
            x.rows(),
            x.cols(),
            psi.rows(),
            phi.rows()
        )));
    }
    Ok(ResolvedInputs { x, psi, phi, clean, gt, graph })
}

fn to_invalid(e: crate::synthlab::SynthError) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

fn build_dict(
    cfg: &DictConfig,
    graph: Option<&GraphSpec>,
    length_hint: Option<usize>,
) -> Result<Dictionary, ConfigError> {
    match cfg {
        DictConfig::Gft { graph: path } => {
            let g = resolve_graph(path.as_deref(), graph)?;
            Ok(dictio::build_gft(&g)?)
        }
        DictConfig::GraphHaar { graph: path } => {
            let g = resolve_graph(path.as_deref(), graph)?;
            Ok(dictio::build_graph_haar(&g)?)
        }
        DictConfig::Ramanujan { length, max_period } => {
            let len = length.or(length_hint).ok_or_else(|| {
                ConfigError::Invalid("ramanujan needs `length` (no data dimension to infer)".into())
            })?;
            Ok(dictio::build_ramanujan(len, *max_period)?)
        }
        DictConfig::Spline { length, basis, degree } => {
            let len = length.or(length_hint).ok_or_else(|| {
                ConfigError::Invalid("spline needs `length` (no data dimension to infer)".into())
            })?;
            Ok(dictio::build_spline(len, basis, *degree)?)
        }
        DictConfig::Csv { path } => Ok(dictio::load_dictionary(path)?),
        DictConfig::Stack { parts } => {
            if parts.is_empty() {
                return Err(ConfigError::Invalid("stack needs at least one part".into()));
            }
            let built: Vec<Dictionary> = parts
                .iter()
                .map(|p| build_dict(p, graph, length_hint))
                .collect::<Result<_, _>>()?;
            Ok(dictio::stack(&built)?)
        }
    }
}

fn resolve_graph(path: Option<&str>, fallback: Option<&GraphSpec>) -> Result<GraphSpec, ConfigError> {
    match path {
        Some(p) => Ok(matio::read_graph_mtx(p)?),
        None => fallback.cloned().ok_or_else(|| {
            ConfigError::Invalid("graph dictionary needs a `graph` path or a data graph".into())
        }),
    }
}
