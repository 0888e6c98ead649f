//! Run configuration: a TOML file merged with command-line overrides.
//!
//! Every run resolves to a full [`RunConfig`] (missing fields take defaults,
//! the seed included), and the resolved config is echoed into the report so
//! that replaying it reproduces the run exactly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use purity_core::channels::QuantumChannel;
use purity_core::linalg::{Complex64, ComplexMatrix, NormOrder};
use purity_core::purity::VIOLATION_TOL_DEFAULT;

/// Maximum joint dimension optimized by default.
pub const DIM_CAP_DEFAULT: usize = 64;

/// Resolved configuration for one run.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Base seed for every random draw in the run.
    pub seed: u64,
    /// Norm orders to evaluate; `"inf"` is accepted.
    pub p: Vec<NormOrder>,
    /// Independent ascent restarts per optimization.
    pub restarts: u32,
    /// Iteration cap per restart.
    pub max_iterations: u32,
    /// Convergence tolerance for the ascent.
    pub tol: f64,
    /// Gap beyond which a multiplicativity comparison becomes a candidate.
    pub violation_tol: f64,
    /// Report format.
    pub format: OutputFormat,
    /// Report destination; stdout when absent.
    pub out: Option<PathBuf>,
    /// Largest joint dimension accepted for optimization.
    pub dim_cap: usize,
    /// Channel specifications consumed by `nu`, `check-mult`, and `validate`.
    pub channels: Vec<ChannelSpec>,
    /// Batch sizes and shapes for `verify-lemma`.
    pub lemma: LemmaConfig,
    /// Sampling plan for `search`.
    pub search: SearchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            p: vec![NormOrder::new(2.0).expect("2 is a valid order")],
            restarts: 64,
            max_iterations: 1000,
            tol: 1e-12,
            violation_tol: VIOLATION_TOL_DEFAULT,
            format: OutputFormat::Json,
            out: None,
            dim_cap: DIM_CAP_DEFAULT,
            channels: Vec::new(),
            lemma: LemmaConfig::default(),
            search: SearchConfig::default(),
        }
    }
}

/// Report serialization format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One channel in the config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// `(1-q) S + (q/d) Tr(S) I`.
    Depolarizing { dim: usize, q: f64 },
    /// Explicit Kraus operators; each matrix is its `dim * dim` entries in
    /// row-major order, every entry an `[re, im]` pair.
    Kraus {
        dim: usize,
        matrices: Vec<Vec<[f64; 2]>>,
    },
    /// Tensor product of factor channels.
    Product { factors: Vec<ChannelSpec> },
}

impl ChannelSpec {
    /// Builds the channel, rejecting dimensions below 2 and malformed
    /// matrices.
    pub fn build(&self) -> Result<QuantumChannel, String> {
        match self {
            ChannelSpec::Depolarizing { dim, q } => {
                check_dim(*dim)?;
                QuantumChannel::depolarizing(*dim, *q).map_err(|e| e.to_string())
            }
            ChannelSpec::Kraus { dim, matrices } => {
                check_dim(*dim)?;
                if matrices.is_empty() {
                    return Err("kraus channel needs at least one matrix".into());
                }
                let operators = matrices
                    .iter()
                    .enumerate()
                    .map(|(k, flat)| {
                        if flat.len() != dim * dim {
                            return Err(format!(
                                "kraus matrix {k} has {} entries, expected {}",
                                flat.len(),
                                dim * dim
                            ));
                        }
                        let entries = flat
                            .iter()
                            .map(|&[re, im]| Complex64::new(re, im))
                            .collect();
                        ComplexMatrix::from_entries(*dim, entries).map_err(|e| e.to_string())
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                QuantumChannel::kraus(operators).map_err(|e| e.to_string())
            }
            ChannelSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err("product channel needs at least one factor".into());
                }
                let built = factors
                    .iter()
                    .map(|f| f.build())
                    .collect::<Result<Vec<_>, String>>()?;
                QuantumChannel::product(built).map_err(|e| e.to_string())
            }
        }
    }
}

fn check_dim(dim: usize) -> Result<(), String> {
    if dim < 2 {
        return Err(format!("channel dimension {dim} is below the minimum of 2"));
    }
    Ok(())
}

/// Batch sizes and instance shapes for `verify-lemma`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    /// Trace-bound instances to sample.
    pub instances: u32,
    /// Expansion-identity instances to sample.
    pub cs_instances: u32,
    /// Upper bound on operators per instance.
    pub max_operators: usize,
    /// Upper bound on tensor factors per instance.
    pub max_factors: usize,
    /// Factor dimensions are drawn from this list.
    pub dims: Vec<usize>,
    /// Ceiling on the enumerated multi-index space per instance.
    pub multiindex_cap: u64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            instances: 1000,
            cs_instances: 200,
            max_operators: 4,
            max_factors: 4,
            dims: vec![2, 3],
            multiindex_cap: 1_000_000,
        }
    }
}

/// Random-channel sampling plan for `search`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    /// Independent channel tuples to try.
    pub samples: u32,
    /// Tensor factors per tuple.
    pub factors: usize,
    /// Dimension of every factor.
    pub dim: usize,
    /// Kraus operators per sampled channel (`kraus` kind only).
    pub kraus_ops: usize,
    /// What to sample: random isometry-column channels or random-q
    /// depolarizing channels.
    pub sample_kind: SampleKind,
    /// Gap beyond which a comparison is recorded as a candidate.
    pub threshold: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            samples: 8,
            factors: 2,
            dim: 2,
            kraus_ops: 4,
            sample_kind: SampleKind::Kraus,
            threshold: VIOLATION_TOL_DEFAULT,
        }
    }
}

/// Channel family sampled by `search`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Kraus,
    Depolarizing,
}

/// Loads a config file, or starts from defaults when no path is given.
pub fn load(path: Option<&Path>) -> Result<RunConfig, String> {
    match path {
        None => Ok(RunConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
        }
    }
}
