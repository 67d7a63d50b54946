//! The route-following protocol: scripted training, autonomous test, success
//! scoring and parameter sweeps.

pub mod export;
mod route;
mod sweep;
mod trial;

pub use route::{RouteScript, Segment};
pub use sweep::{run_sweep, trial_seed, SweepResult, SweepRow, TrialRow};
pub use trial::{
    distance_to_path, run_test, run_training, run_trial, NoveltySample, TimedPose, TrialConfig, TrialRecord,
};
