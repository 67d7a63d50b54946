use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::simworld::Pose;

const REFERENCE_ROUTE: &str = include_str!("../../assets/reference_route.json");

/// One piece of a scripted drive. `v` defaults to the trial's training speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    pub omega: f64,
}

/// A manual training drive: start pose plus piecewise-constant commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteScript {
    pub start: Pose,
    pub segments: Vec<Segment>,
}

impl RouteScript {
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return config("route script has no segments");
        }
        for (i, s) in self.segments.iter().enumerate() {
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return config(format!("segment {i} has non-positive duration"));
            }
            if !s.omega.is_finite() || s.v.is_some_and(|v| !v.is_finite()) {
                return config(format!("segment {i} has a non-finite command"));
            }
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut r: RouteScript = serde_json::from_str(text)?;
        r.start = Pose::new(r.start.x, r.start.y, r.start.heading);
        r.validate()?;
        Ok(r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// 12.5 s detour around the pillar of [`crate::simworld::Arena::reference`]:
    /// veer left, swing right past the pillar, straighten out and stop half a
    /// metre short of the east wall.
    pub fn reference() -> Self {
        Self::from_json(REFERENCE_ROUTE).expect("bundled route is valid")
    }
}
