//! CSV and JSON writers. Column order follows struct field order:
//!
//! * trajectory: `t,x,y,heading`
//! * novelty: `t,d_left,d_right,omega`
//! * sweep summary: `model,n_kc,kappa,n_trials,success_rate,mean_final_distance,entropy_bits_per_item`
//! * sweep trials: `config_index,trial,model,n_kc,kappa,seed,final_x,final_y,final_distance,success,collided`
//!
//! Missing values (e.g. `kappa` for the non-FlyHash models) are empty fields.

use std::io::Write;

use serde::Serialize;

use super::sweep::{SweepRow, TrialRow};
use super::trial::{NoveltySample, TimedPose, TrialRecord};
use crate::error::Result;

pub fn write_csv<W: Write, T: Serialize>(w: W, rows: &[T]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(w: W, trajectory: &[TimedPose]) -> Result<()> {
    write_csv(w, trajectory)
}

pub fn write_novelty_csv<W: Write>(w: W, trace: &[NoveltySample]) -> Result<()> {
    write_csv(w, trace)
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    write_csv(w, rows)
}

pub fn write_trials_csv<W: Write>(w: W, rows: &[TrialRow]) -> Result<()> {
    write_csv(w, rows)
}

pub fn write_record_json<W: Write>(mut w: W, record: &TrialRecord) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, record)?;
    w.write_all(b"\n")?;
    Ok(())
}
