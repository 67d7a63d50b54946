//! Visual route following with three memory encoders: sparse expansion
//! hashing (FlyHash), dense random-projection LSH and raw-image "perfect
//! memory", plus the arithmetic for comparing their storage and run-time
//! cost.
//!
//! The crate is organised bottom-up:
//!
//! * [`encoders`]: connection matrices, k-WTA and the three encoders.
//! * [`memory`]: stored items and nearest-item novelty.
//! * [`steering`]: turn rate from left/right novelty.
//! * [`simworld`]: arena, unicycle kinematics, raycast camera, image pipeline.
//! * [`harness`]: training/test trials and sweeps.
//! * [`analysis`]: entropy bounds, capacity, storage and operation counts.
//!
//! Sweeps and batch encoding run on rayon when the `parallel` feature is on
//! (the default); see [`exec`].

pub mod analysis;
pub mod encoders;
mod error;
pub mod exec;
pub mod harness;
pub mod memory;
pub mod simworld;
pub mod steering;

pub use error::{Error, Result};
