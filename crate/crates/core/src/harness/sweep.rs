use serde::{Deserialize, Serialize};

use super::route::RouteScript;
use super::trial::{run_trial, TrialConfig, TrialRecord};
use crate::analysis::entropy_bits_per_item;
use crate::encoders::{EncoderConfig, Model};
use crate::error::{argument, Result};
use crate::exec::{self, Execution};
use crate::simworld::Arena;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Matrix seed of trial `trial` of grid entry `config`. Depends only on the
/// three inputs, so trial order and scheduling never change a result.
pub fn trial_seed(root: u64, config: usize, trial: usize) -> u64 {
    mix(mix(root ^ mix(config as u64)) ^ (trial as u64).wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// One summary line per grid entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: Model,
    pub n_kc: usize,
    pub kappa: Option<f64>,
    pub n_trials: usize,
    pub success_rate: f64,
    pub mean_final_distance: f64,
    /// Lossless lower bound on the size of one stored item, in bits.
    pub entropy_bits_per_item: f64,
}

/// One line per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub config_index: usize,
    pub trial: usize,
    pub model: Model,
    pub n_kc: usize,
    pub kappa: Option<f64>,
    pub seed: u64,
    pub final_x: f64,
    pub final_y: f64,
    pub final_distance: f64,
    pub success: bool,
    pub collided: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// `records[config][trial]`.
    pub records: Vec<Vec<TrialRecord>>,
}

impl SweepResult {
    pub fn trial_rows(&self) -> Vec<TrialRow> {
        self.records
            .iter()
            .enumerate()
            .flat_map(|(ci, recs)| {
                recs.iter().enumerate().map(move |(ti, r)| {
                    let end = r.test_trajectory.last().expect("test trajectory has a start pose");
                    TrialRow {
                        config_index: ci,
                        trial: ti,
                        model: r.model,
                        n_kc: r.n_kc,
                        kappa: r.kappa,
                        seed: r.seed,
                        final_x: end.x,
                        final_y: end.y,
                        final_distance: r.final_distance,
                        success: r.success,
                        collided: r.collided,
                    }
                })
            })
            .collect()
    }
}

/// Runs `n_trials` independent trials for every encoder in `grid`, each with
/// its own projection-matrix seed. Trials are distributed according to
/// `exec`; results are grouped by (grid index, trial index).
pub fn run_sweep(
    arena: &Arena,
    script: &RouteScript,
    grid: &[EncoderConfig],
    base: &TrialConfig,
    n_trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<SweepResult> {
    if grid.is_empty() {
        return argument("sweep grid is empty");
    }
    if n_trials == 0 {
        return argument("n_trials must be >= 1");
    }
    for enc in grid {
        TrialConfig { encoder: *enc, ..*base }.validate()?;
    }
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|c| (0..n_trials).map(move |t| (c, t)))
        .collect();
    let outcomes = exec::map(exec, &jobs, |&(c, t)| {
        let cfg = TrialConfig {
            encoder: grid[c],
            seed: trial_seed(seed, c, t),
            ..*base
        };
        run_trial(arena, script, &cfg)
    });

    let mut records: Vec<Vec<TrialRecord>> = vec![Vec::with_capacity(n_trials); grid.len()];
    for (&(c, _), outcome) in jobs.iter().zip(outcomes) {
        records[c].push(outcome?);
    }
    let rows = grid
        .iter()
        .zip(&records)
        .map(|(enc, recs)| {
            let n = recs.len() as f64;
            Ok(SweepRow {
                model: enc.model,
                n_kc: enc.output_dim(),
                kappa: (enc.model == Model::FlyHash).then_some(enc.kappa),
                n_trials: recs.len(),
                success_rate: recs.iter().filter(|r| r.success).count() as f64 / n,
                mean_final_distance: recs.iter().map(|r| r.final_distance).sum::<f64>() / n,
                entropy_bits_per_item: entropy_bits_per_item(enc.model, enc.n_pn, enc.n_kc, enc.kappa)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows, records })
}
