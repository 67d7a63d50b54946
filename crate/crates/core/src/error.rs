use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is outside its valid domain.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument to an operation is malformed (dimension mismatch, out of range).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The operation is not valid in the current state (empty store, pose outside the arena).
    #[error("invalid state: {0}")]
    State(String),

    /// Training replay hit a wall.
    #[error("collision during training at t={t:.2}s, pose=({x:.3}, {y:.3})")]
    TrainingCollision { t: f64, x: f64, y: f64 },

    #[error("malformed container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn state<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::State(msg.into()))
}
