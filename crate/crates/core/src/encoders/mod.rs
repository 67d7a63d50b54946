//! The three visual-memory encoders, each of the form `y = f(W · x)`:
//!
//! * **FlyHash**: sparse binary W with `N_KC > N_PN` (expansion), `f` = k-WTA.
//! * **Conventional LSH**: dense Gaussian W, `f` = Heaviside step (`> 0`).
//! * **Perfect memory**: W = I, the raw grayscale input is the memory item.

mod hash;
mod kwta;
mod matrix;

pub use hash::{BitVector, HashVector};
pub use kwta::k_wta;
pub use matrix::{init_flyhash_weights, init_lsh_weights, Layout, ProjectionMatrix};

pub(crate) use matrix::{read_u16, read_u32, read_u64};

use serde::{Deserialize, Serialize};

use crate::analysis::OpTally;
use crate::error::{argument, config, Result};
use crate::exec::{self, Execution};

/// Number of projection neurons: one per pixel of a 22×33 visual field.
pub const N_PN: usize = 726;

/// Average number of inputs per Kenyon cell.
pub const DEFAULT_FANOUT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    FlyHash,
    ConvLsh,
    PerfectMemory,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::FlyHash => "fly_hash",
            Model::ConvLsh => "conv_lsh",
            Model::PerfectMemory => "perfect_memory",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncoderConfig {
    pub model: Model,
    pub n_pn: usize,
    /// Hash length. Ignored by perfect memory, whose output has `n_pn` entries.
    pub n_kc: usize,
    /// Fraction of set bits in a FlyHash code.
    pub kappa: f64,
    /// PN→KC connection probability (FlyHash only).
    pub theta: f64,
    pub seed: u64,
    /// Exactly `round(theta * n_pn)` connections per KC instead of Bernoulli draws.
    pub fixed_fanout: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig {
            model: Model::FlyHash,
            n_pn: N_PN,
            n_kc: 8000,
            kappa: 0.1,
            theta: DEFAULT_FANOUT / N_PN as f64,
            seed: 0,
            fixed_fanout: false,
        }
    }
}

impl EncoderConfig {
    pub fn fly_hash(n_kc: usize, kappa: f64) -> Self {
        EncoderConfig {
            model: Model::FlyHash,
            n_kc,
            kappa,
            ..Default::default()
        }
    }

    pub fn conv_lsh(n_kc: usize) -> Self {
        EncoderConfig {
            model: Model::ConvLsh,
            n_kc,
            kappa: 0.5,
            ..Default::default()
        }
    }

    pub fn perfect_memory() -> Self {
        EncoderConfig {
            model: Model::PerfectMemory,
            n_kc: N_PN,
            ..Default::default()
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        EncoderConfig { seed, ..self }
    }

    /// Number of winners, `round(kappa * n_kc)` but at least 1.
    pub fn k(&self) -> usize {
        ((self.kappa * self.n_kc as f64).round() as usize).max(1)
    }

    /// Connections per KC in fixed fan-out mode.
    pub fn fanout(&self) -> usize {
        ((self.theta * self.n_pn as f64).round() as usize).clamp(1, self.n_pn.max(1))
    }

    /// Length of an encoded item.
    pub fn output_dim(&self) -> usize {
        match self.model {
            Model::PerfectMemory => self.n_pn,
            _ => self.n_kc,
        }
    }

    /// Nominal code sparsity: kappa for FlyHash, 0.5 for LSH, none for raw images.
    pub fn code_sparsity(&self) -> Option<f64> {
        match self.model {
            Model::FlyHash => Some(self.kappa),
            Model::ConvLsh => Some(0.5),
            Model::PerfectMemory => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pn == 0 {
            return config("n_pn must be >= 1");
        }
        if self.model == Model::PerfectMemory {
            return Ok(());
        }
        if self.n_kc == 0 {
            return config("n_kc must be >= 1");
        }
        if self.model == Model::FlyHash {
            if !(self.kappa > 0.0 && self.kappa < 1.0) {
                return config(format!("kappa must lie in (0, 1), got {}", self.kappa));
            }
            if !(self.theta > 0.0 && self.theta < 1.0) {
                return config(format!("theta must lie in (0, 1), got {}", self.theta));
            }
        }
        Ok(())
    }
}

/// A configured encoder: the immutable matrix plus the activation rule.
/// Safe to share between threads; encoding takes `&self`.
#[derive(Debug, Clone)]
pub struct Encoder {
    cfg: EncoderConfig,
    matrix: ProjectionMatrix,
}

impl Encoder {
    pub fn new(cfg: EncoderConfig) -> Result<Self> {
        cfg.validate()?;
        let matrix = match cfg.model {
            Model::FlyHash => init_flyhash_weights(&cfg)?,
            Model::ConvLsh => init_lsh_weights(&cfg)?,
            Model::PerfectMemory => ProjectionMatrix::identity(cfg.n_pn)?,
        };
        Ok(Encoder { cfg, matrix })
    }

    /// Pairs a config with an existing (e.g. imported) matrix.
    pub fn with_matrix(cfg: EncoderConfig, matrix: ProjectionMatrix) -> Result<Self> {
        cfg.validate()?;
        let expected = match cfg.model {
            Model::FlyHash => Layout::SparseBinary,
            Model::ConvLsh => Layout::DenseReal,
            Model::PerfectMemory => Layout::Identity,
        };
        if matrix.layout() != expected {
            return argument(format!("{} needs a {:?} matrix, got {:?}", cfg.model, expected, matrix.layout()));
        }
        if matrix.n_pn() != cfg.n_pn || matrix.rows() != cfg.output_dim() {
            return argument(format!(
                "matrix is {}x{}, config wants {}x{}",
                matrix.rows(),
                matrix.n_pn(),
                cfg.output_dim(),
                cfg.n_pn
            ));
        }
        Ok(Encoder { cfg, matrix })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.cfg
    }

    pub fn matrix(&self) -> &ProjectionMatrix {
        &self.matrix
    }

    pub fn encode(&self, x: &[u8]) -> Result<HashVector> {
        self.encode_with(x, &mut ())
    }

    /// Encodes while reporting every arithmetic operation to `tally`.
    pub fn encode_with<T: OpTally>(&self, x: &[u8], tally: &mut T) -> Result<HashVector> {
        if x.len() != self.cfg.n_pn {
            return argument(format!("input has {} values, encoder expects {}", x.len(), self.cfg.n_pn));
        }
        Ok(match self.cfg.model {
            Model::FlyHash => {
                let pre = self.matrix.sparse_matvec(x, tally);
                tally.kwta();
                HashVector::Binary(kwta::k_wta_u32(&pre, self.cfg.k())?)
            }
            Model::ConvLsh => {
                let pre = self.matrix.dense_matvec(x, tally);
                let ones = pre.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(i, _)| i);
                HashVector::Binary(BitVector::from_indices(pre.len(), ones))
            }
            Model::PerfectMemory => HashVector::Grey(x.to_vec()),
        })
    }

    /// Encodes many inputs, in parallel when `exec` allows it.
    pub fn encode_batch(&self, inputs: &[Vec<u8>], exec: Execution) -> Result<Vec<HashVector>> {
        exec::map(exec, inputs, |x| self.encode(x)).into_iter().collect()
    }
}
