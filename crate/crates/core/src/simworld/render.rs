//! Column raycaster producing a 99×99 grayscale panorama slice.
//!
//! Rays are spaced evenly in angle across a 150° field of view, and rows use
//! the same angular pitch, so each pixel covers about 1.5° in both
//! directions. Image column indices grow clockwise-to-counter-clockwise:
//! column 0 looks 75° to the robot's right. Walls are textured and the floor
//! is a fixed pattern of irregular grey tiles.

use std::f64::consts::PI;

use super::arena::Arena;
use super::kinematics::Pose;
use crate::error::{state, Result};

pub const RAW_SIZE: usize = 99;
pub const FIELD_OF_VIEW: f64 = 5.0 * PI / 6.0;

const EYE_HEIGHT: f64 = 0.45;
const WALL_HEIGHT: f64 = 1.0;
const SKY: u8 = 200;
const FLOOR_TILE: f64 = 0.5;
const FLOOR_SEED: i64 = 3;
/// Horizontal sub-rays averaged per column.
const SUPERSAMPLE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawView {
    pixels: Vec<u8>,
}

impl RawView {
    pub fn from_pixels(pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != RAW_SIZE * RAW_SIZE {
            return crate::error::argument(format!("raw view needs {} pixels", RAW_SIZE * RAW_SIZE));
        }
        Ok(RawView { pixels })
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * RAW_SIZE + col]
    }

    /// Left-right flip.
    pub fn mirrored(&self) -> RawView {
        let mut pixels = self.pixels.clone();
        for row in pixels.chunks_exact_mut(RAW_SIZE) {
            row.reverse();
        }
        RawView { pixels }
    }
}

/// Procedural wall pattern in [0, 1] at distance `u` along the wall and
/// height `z` above the floor.
pub fn texture(id: u8, u: f64, z: f64) -> f64 {
    let frac = |v: f64| v - v.floor();
    match id % 8 {
        0 => if frac(u / 0.2) < 0.5 { 0.95 } else { 0.25 },
        1 => if frac(u / 0.5) < 0.3 { 0.9 } else { 0.35 },
        2 => if (frac(u / 0.5) < 0.5) ^ (frac(z / 0.5) < 0.5) { 0.9 } else { 0.3 },
        3 => 0.55 + 0.4 * (2.0 * PI * u / 0.6).sin(),
        4 => if frac(z / 0.25) < 0.5 { 0.85 } else { 0.3 },
        5 => 0.2 + 0.75 * frac(u / 0.7),
        6 => {
            let base = if frac(u / 1.0) < 0.5 { 0.9 } else { 0.45 };
            if z < 0.3 { base * 0.5 } else { base }
        }
        _ => if frac((u + z) / 0.3) < 0.5 { 0.9 } else { 0.3 },
    }
}

/// Floor tile brightness in [0, 1] at world point (x, y).
fn floor_pattern(x: f64, y: f64) -> f64 {
    let (i, j) = ((x / FLOOR_TILE).floor() as i64, (y / FLOOR_TILE).floor() as i64);
    let mut h = (i.wrapping_mul(0x9E37_79B9) ^ j.wrapping_mul(0x85EB_CA6B) ^ FLOOR_SEED.wrapping_mul(0x1234_5677)) as u64;
    h ^= h >> 15;
    h = h.wrapping_mul(0x2C1B_3C6D);
    h ^= h >> 12;
    0.1 + 0.27 * (h % 4) as f64
}

fn floor_value(pose: &Pose, angle: f64, elevation: f64) -> f64 {
    let d = EYE_HEIGHT / (-elevation).tan();
    let t = floor_pattern(pose.x + d * angle.cos(), pose.y + d * angle.sin());
    255.0 * t / (1.0 + d)
}

fn shade(arena: &Arena, pose: &Pose, angle: f64, column: &mut [f64]) {
    let hit = arena.cast(pose.x, pose.y, angle);
    let pitch = FIELD_OF_VIEW / RAW_SIZE as f64;
    for (row, px) in column.iter_mut().enumerate() {
        let elevation = ((RAW_SIZE as f64) / 2.0 - (row as f64 + 0.5)) * pitch;
        let value = match hit {
            Some(h) => {
                let z = EYE_HEIGHT + h.distance * elevation.tan();
                if z > WALL_HEIGHT {
                    f64::from(SKY)
                } else if z < 0.0 {
                    floor_value(pose, angle, elevation)
                } else {
                    let w = &arena.walls()[h.wall];
                    255.0 * texture(w.texture, h.along + w.phase, z) / (1.0 + h.distance)
                }
            }
            None if elevation >= 0.0 => f64::from(SKY),
            None => floor_value(pose, angle, elevation),
        };
        *px += value;
    }
}

/// Renders the view from `pose`. Fails if the pose is outside the arena.
pub fn render(arena: &Arena, pose: &Pose) -> Result<RawView> {
    if !arena.contains(pose.x, pose.y) {
        return state(format!("pose ({:.3}, {:.3}) is outside the arena", pose.x, pose.y));
    }
    let mut pixels = vec![0u8; RAW_SIZE * RAW_SIZE];
    let sub = RAW_SIZE * SUPERSAMPLE;
    let mut column = vec![0.0f64; RAW_SIZE];
    for col in 0..RAW_SIZE {
        column.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..SUPERSAMPLE {
            let i = col * SUPERSAMPLE + s;
            let offset = FIELD_OF_VIEW * ((i as f64 + 0.5) / sub as f64 - 0.5);
            shade(arena, pose, pose.heading + offset, &mut column);
        }
        for (row, v) in column.iter().enumerate() {
            pixels[row * RAW_SIZE + col] = (v / SUPERSAMPLE as f64).round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(RawView { pixels })
}
