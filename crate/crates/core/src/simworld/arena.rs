use std::path::Path;

use serde::{Deserialize, Serialize};

use super::kinematics::Pose;
use crate::error::{config, Result};

const REFERENCE_ARENA: &str = include_str!("../../assets/reference_arena.json");

/// A vertical wall panel. `texture` selects a procedural pattern and `phase`
/// shifts it along the wall (metres).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wall {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub texture: u8,
    #[serde(default)]
    pub phase: f64,
}

impl Wall {
    pub fn length(&self) -> f64 {
        (self.x2 - self.x1).hypot(self.y2 - self.y1)
    }

    /// Distance from a point to the segment.
    pub fn distance_to(&self, px: f64, py: f64) -> f64 {
        let (dx, dy) = (self.x2 - self.x1, self.y2 - self.y1);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((px - self.x1) * dx + (py - self.y1) * dy) / len2).clamp(0.0, 1.0)
        };
        (px - (self.x1 + t * dx)).hypot(py - (self.y1 + t * dy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

/// Nearest wall hit along a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub distance: f64,
    pub wall: usize,
    /// Distance from the wall's first endpoint to the hit point.
    pub along: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ArenaFile {
    walls: Vec<Wall>,
}

/// A static set of textured walls. Every wall endpoint must be shared with
/// another wall, so the outline and all obstacles are closed polygons.
#[derive(Debug, Clone, PartialEq)]
pub struct Arena {
    walls: Vec<Wall>,
    bounds: Bounds,
}

impl Arena {
    pub fn new(walls: Vec<Wall>) -> Result<Self> {
        if walls.len() < 3 {
            return config("an arena needs at least three walls");
        }
        for (i, w) in walls.iter().enumerate() {
            if ![w.x1, w.y1, w.x2, w.y2, w.phase].iter().all(|v| v.is_finite()) || w.length() == 0.0 {
                return config(format!("wall {i} is degenerate"));
            }
        }
        let ends: Vec<(f64, f64)> = walls.iter().flat_map(|w| [(w.x1, w.y1), (w.x2, w.y2)]).collect();
        for (i, &(x, y)) in ends.iter().enumerate() {
            let shared = ends
                .iter()
                .enumerate()
                .filter(|&(j, &(u, v))| j / 2 != i / 2 && (u - x).abs() < 1e-9 && (v - y).abs() < 1e-9)
                .count();
            if shared == 0 {
                return config(format!("wall {} has a dangling endpoint ({x}, {y})", i / 2));
            }
        }
        let bounds = ends.iter().fold(
            Bounds {
                min_x: f64::INFINITY,
                min_y: f64::INFINITY,
                max_x: f64::NEG_INFINITY,
                max_y: f64::NEG_INFINITY,
            },
            |b, &(x, y)| Bounds {
                min_x: b.min_x.min(x),
                min_y: b.min_y.min(y),
                max_x: b.max_x.max(x),
                max_y: b.max_y.max(y),
            },
        );
        Ok(Arena { walls, bounds })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ArenaFile = serde_json::from_str(text)?;
        Self::new(file.walls)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ArenaFile { walls: self.walls.clone() })?)
    }

    /// The bundled 3.3 m x 3.0 m room with a pillar between the reference
    /// route's start and end.
    pub fn reference() -> Self {
        Self::from_json(REFERENCE_ARENA).expect("bundled arena is valid")
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let b = self.bounds;
        x > b.min_x && x < b.max_x && y > b.min_y && y < b.max_y
    }

    /// Nearest intersection of the ray from `(x, y)` in direction `angle`.
    pub fn cast(&self, x: f64, y: f64, angle: f64) -> Option<RayHit> {
        let (dx, dy) = (angle.cos(), angle.sin());
        let mut best: Option<RayHit> = None;
        for (i, w) in self.walls.iter().enumerate() {
            let (ex, ey) = (w.x2 - w.x1, w.y2 - w.y1);
            let denom = dx * ey - dy * ex;
            if denom.abs() < 1e-12 {
                continue;
            }
            let (qx, qy) = (w.x1 - x, w.y1 - y);
            let t = (qx * ey - qy * ex) / denom;
            let s = (qx * dy - qy * dx) / denom;
            if t > 1e-9 && (0.0..=1.0).contains(&s) && best.is_none_or(|b| t < b.distance) {
                best = Some(RayHit {
                    distance: t,
                    wall: i,
                    along: s * w.length(),
                });
            }
        }
        best
    }

    /// Whether a disc of `radius` around the pose touches any wall (closed test).
    pub fn check_collision(&self, pose: &Pose, radius: f64) -> bool {
        self.walls.iter().any(|w| w.distance_to(pose.x, pose.y) <= radius)
    }

    /// Distance from a point to the nearest wall.
    pub fn clearance(&self, x: f64, y: f64) -> f64 {
        self.walls.iter().map(|w| w.distance_to(x, y)).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Arena {
        let w = |x1, y1, x2, y2| Wall { x1, y1, x2, y2, texture: 0, phase: 0.0 };
        Arena::new(vec![w(0.0, 0.0, 2.0, 0.0), w(2.0, 0.0, 2.0, 2.0), w(2.0, 2.0, 0.0, 2.0), w(0.0, 2.0, 0.0, 0.0)]).unwrap()
    }

    #[test]
    fn reference_arena_loads() {
        let a = Arena::reference();
        assert!(a.walls().len() >= 12);
        let b = a.bounds();
        assert!(!a.check_collision(&Pose::new((b.min_x + b.max_x) / 2.0, 0.6, 0.0), 0.2));
    }

    #[test]
    fn dangling_wall_rejected() {
        let w = |x1, y1, x2, y2| Wall { x1, y1, x2, y2, texture: 0, phase: 0.0 };
        assert!(Arena::new(vec![w(0.0, 0.0, 1.0, 0.0), w(1.0, 0.0, 1.0, 1.0), w(1.0, 1.0, 0.0, 1.5)]).is_err());
        assert!(Arena::from_json("{\"walls\": []}").is_err());
    }

    #[test]
    fn collision_boundaries() {
        let a = square();
        assert!(!a.check_collision(&Pose::new(1.0, 1.0, 0.0), 0.2));
        assert!(a.check_collision(&Pose::new(0.0, 1.0, 0.0), 0.2));
        // exactly `radius` from the wall counts as touching
        assert!(a.check_collision(&Pose::new(0.25, 1.0, 0.0), 0.25));
        assert!(!a.check_collision(&Pose::new(0.25, 1.0, 0.0), 0.2499));
    }

    #[test]
    fn ray_cast_hits_nearest_wall() {
        let a = square();
        let hit = a.cast(0.5, 1.0, 0.0).unwrap();
        assert!((hit.distance - 1.5).abs() < 1e-12);
        assert_eq!(hit.wall, 1);
        assert!((hit.along - 1.0).abs() < 1e-12);
        assert!(a.cast(5.0, 5.0, 0.0).is_none());
    }

    #[test]
    fn json_round_trip() {
        let a = Arena::reference();
        assert_eq!(Arena::from_json(&a.to_json().unwrap()).unwrap(), a);
    }
}
