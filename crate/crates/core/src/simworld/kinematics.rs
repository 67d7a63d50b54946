use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::steering::SteeringCommand;

/// Metres per second for one unit of commanded linear speed
/// (one wheel revolution per second with a 0.0613 m wheel).
pub const SPEED_UNIT_MPS: f64 = 0.3852;

/// Planar robot pose; `heading` is kept in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

pub fn normalize_angle(a: f64) -> f64 {
    let mut h = (a + PI).rem_euclid(TAU) - PI;
    if h <= -PI {
        h += TAU;
    }
    h
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Pose {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn distance_to(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// The pose shifted sideways by `offset` metres; positive is to the
    /// counter-clockwise side of the heading.
    pub fn shifted_left(&self, offset: f64) -> Pose {
        Pose::new(
            self.x - offset * self.heading.sin(),
            self.y + offset * self.heading.cos(),
            self.heading,
        )
    }
}

/// One Euler step of the unicycle model. The heading is updated first and the
/// translation uses the new heading.
pub fn step(pose: &Pose, cmd: &SteeringCommand, dt: f64) -> Result<Pose> {
    if !(dt > 0.0 && dt.is_finite()) {
        return argument(format!("dt must be positive, got {dt}"));
    }
    let heading = normalize_angle(pose.heading + cmd.omega * dt);
    let v = SPEED_UNIT_MPS * cmd.v;
    Ok(Pose {
        x: pose.x + v * heading.cos() * dt,
        y: pose.y + v * heading.sin() * dt,
        heading,
    })
}
