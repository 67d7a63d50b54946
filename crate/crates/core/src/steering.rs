//! Lateralised steering: turn rate from the normalised difference between
//! left-field and right-field novelty.

use serde::{Deserialize, Serialize};

use crate::error::{argument, config, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SteeringParams {
    /// Turn gain; bounds |omega|.
    pub alpha: f64,
    /// Constant linear speed during autonomous control, in robot speed units.
    pub v_test: f64,
}

impl Default for SteeringParams {
    fn default() -> Self {
        SteeringParams { alpha: 1.0, v_test: 0.2 }
    }
}

impl SteeringParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return config(format!("alpha must be positive, got {}", self.alpha));
        }
        if !self.v_test.is_finite() {
            return config("v_test must be finite");
        }
        Ok(())
    }
}

/// Linear speed in robot units, angular speed in rad/s (positive = counter-clockwise).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringCommand {
    pub v: f64,
    pub omega: f64,
}

/// `omega = alpha * (d_left - d_right) / (d_left + d_right)`, and zero when
/// both novelties are zero.
pub fn compute_turn(d_left: f64, d_right: f64, params: &SteeringParams) -> Result<SteeringCommand> {
    if !(d_left >= 0.0 && d_right >= 0.0) || d_left.is_infinite() || d_right.is_infinite() {
        return argument(format!("novelty must be finite and non-negative, got ({d_left}, {d_right})"));
    }
    let total = d_left + d_right;
    let omega = if total == 0.0 {
        0.0
    } else {
        params.alpha * (d_left - d_right) / total
    };
    Ok(SteeringCommand {
        v: params.v_test,
        omega,
    })
}
