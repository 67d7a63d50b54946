use serde::{Deserialize, Serialize};

use crate::encoders::{Encoder, HashVector, Model};
use crate::error::{argument, state, Result};
use crate::memory::{dissimilarity_with, Metric};

/// Receives operation counts from the encode and novelty paths. The unit
/// type ignores everything, so uninstrumented calls cost nothing.
pub trait OpTally {
    fn encode_mults(&mut self, _n: u64) {}
    fn encode_adds(&mut self, _n: u64) {}
    fn kwta(&mut self) {}
    fn eval_xors(&mut self, _n: u64) {}
    fn eval_squares(&mut self, _n: u64) {}
    fn eval_adds(&mut self, _n: u64) {}
}

impl OpTally for () {}

/// Operation counts for one encode plus one comparison against one stored
/// item. From [`op_counts`], `eval_adds` of the hash models is an upper bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCountReport {
    pub encode_mults: u64,
    pub encode_adds: u64,
    pub encode_kwta: u64,
    pub eval_xor: u64,
    pub eval_square_mults: u64,
    pub eval_adds: u64,
}

impl OpTally for OpCountReport {
    fn encode_mults(&mut self, n: u64) {
        self.encode_mults += n;
    }
    fn encode_adds(&mut self, n: u64) {
        self.encode_adds += n;
    }
    fn kwta(&mut self) {
        self.encode_kwta += 1;
    }
    fn eval_xors(&mut self, n: u64) {
        self.eval_xor += n;
    }
    fn eval_squares(&mut self, n: u64) {
        self.eval_square_mults += n;
    }
    fn eval_adds(&mut self, n: u64) {
        self.eval_adds += n;
    }
}

/// Closed-form operation counts. FlyHash assumes ten inputs per KC (nine
/// additions each); Hamming evaluation counts one addition per differing bit,
/// bounded by `2k` for two k-sparse hashes and by `n_kc` for dense ones.
pub fn op_counts(model: Model, n_pn: usize, n_kc: usize, kappa: f64) -> Result<OpCountReport> {
    if n_pn == 0 || (model != Model::PerfectMemory && n_kc == 0) {
        return argument("op_counts needs positive dimensions");
    }
    let (n_pn, n_kc) = (n_pn as u64, n_kc as u64);
    Ok(match model {
        Model::FlyHash => {
            if !(kappa > 0.0 && kappa < 1.0) {
                return argument(format!("kappa must lie in (0, 1), got {kappa}"));
            }
            let k = ((kappa * n_kc as f64).round() as u64).max(1);
            OpCountReport {
                encode_mults: 0,
                encode_adds: 9 * n_kc,
                encode_kwta: 1,
                eval_xor: n_kc,
                eval_square_mults: 0,
                eval_adds: 2 * k,
            }
        }
        Model::ConvLsh => OpCountReport {
            encode_mults: n_pn * n_kc,
            encode_adds: (n_pn - 1) * n_kc,
            encode_kwta: 0,
            eval_xor: n_kc,
            eval_square_mults: 0,
            eval_adds: n_kc,
        },
        Model::PerfectMemory => OpCountReport {
            eval_square_mults: n_pn + 1,
            eval_adds: 2 * n_pn - 1,
            ..Default::default()
        },
    })
}

/// Live counts from encoding `x` once and comparing the result to `stored`.
/// FlyHash counts only match the closed form with exactly ten inputs per
/// KC, so a Bernoulli-initialised FlyHash encoder is rejected.
pub fn instrumented_counts(encoder: &Encoder, x: &[u8], stored: &HashVector) -> Result<OpCountReport> {
    let cfg = encoder.config();
    if cfg.model == Model::FlyHash && !encoder.matrix().is_fixed_fanout() {
        return state("operation counters need a fixed fan-out FlyHash matrix");
    }
    let mut tally = OpCountReport::default();
    let y = encoder.encode_with(x, &mut tally)?;
    dissimilarity_with(&y, stored, Metric::for_model(cfg.model), &mut tally)?;
    Ok(tally)
}
