//! Raw view → 33×33 image → three 22-column visual fields.
//!
//! 1. 3×3 block mean (99×99 → 33×33), rounded half up.
//! 2. 7×7 box blur, either a sliding window with clamped edges or
//!    non-overlapping tiles.
//! 3. Left, middle and right crops at columns 0, 5 and 11, each 22 columns
//!    by 33 rows, flattened row-major to 726 values.

use serde::{Deserialize, Serialize};

use super::render::{RawView, RAW_SIZE};

pub const SIZE: usize = 33;
pub const FIELD_WIDTH: usize = 22;
pub const FIELD_LEN: usize = FIELD_WIDTH * SIZE;
pub const BLUR: usize = 7;
pub const LEFT_COL: usize = 0;
pub const MIDDLE_COL: usize = 5;
pub const RIGHT_COL: usize = 11;

const FACTOR: usize = RAW_SIZE / SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlurMode {
    #[default]
    Sliding,
    Tiled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessedView {
    pub full: Vec<u8>,
    pub left: Vec<u8>,
    pub middle: Vec<u8>,
    pub right: Vec<u8>,
}

/// Integer mean of `sum / n` rounded half up.
#[inline]
fn mean_round(sum: u32, n: u32) -> u8 {
    ((2 * sum + n) / (2 * n)) as u8
}

pub fn downsample(raw: &RawView) -> Vec<u8> {
    let mut out = vec![0u8; SIZE * SIZE];
    for r in 0..SIZE {
        for c in 0..SIZE {
            let mut sum = 0u32;
            for dr in 0..FACTOR {
                for dc in 0..FACTOR {
                    sum += u32::from(raw.get(r * FACTOR + dr, c * FACTOR + dc));
                }
            }
            out[r * SIZE + c] = mean_round(sum, (FACTOR * FACTOR) as u32);
        }
    }
    out
}

pub fn box_blur(img: &[u8], mode: BlurMode) -> Vec<u8> {
    assert_eq!(img.len(), SIZE * SIZE);
    let mut out = vec![0u8; SIZE * SIZE];
    match mode {
        BlurMode::Sliding => {
            let half = (BLUR / 2) as isize;
            let clamp = |v: isize| v.clamp(0, SIZE as isize - 1) as usize;
            for r in 0..SIZE {
                for c in 0..SIZE {
                    let mut sum = 0u32;
                    for dr in -half..=half {
                        for dc in -half..=half {
                            sum += u32::from(img[clamp(r as isize + dr) * SIZE + clamp(c as isize + dc)]);
                        }
                    }
                    out[r * SIZE + c] = mean_round(sum, (BLUR * BLUR) as u32);
                }
            }
        }
        BlurMode::Tiled => {
            for tr in (0..SIZE).step_by(BLUR) {
                for tc in (0..SIZE).step_by(BLUR) {
                    let rows = tr..(tr + BLUR).min(SIZE);
                    let cols = tc..(tc + BLUR).min(SIZE);
                    let n = (rows.len() * cols.len()) as u32;
                    let sum: u32 = rows
                        .clone()
                        .flat_map(|r| cols.clone().map(move |c| u32::from(img[r * SIZE + c])))
                        .sum();
                    let m = mean_round(sum, n);
                    for r in rows.clone() {
                        for c in cols.clone() {
                            out[r * SIZE + c] = m;
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn crop(img: &[u8], first_col: usize) -> Vec<u8> {
    (0..SIZE)
        .flat_map(|r| img[r * SIZE + first_col..r * SIZE + first_col + FIELD_WIDTH].iter().copied())
        .collect()
}

pub fn preprocess(raw: &RawView) -> ProcessedView {
    preprocess_with(raw, BlurMode::Sliding)
}

pub fn preprocess_with(raw: &RawView, mode: BlurMode) -> ProcessedView {
    let full = box_blur(&downsample(raw), mode);
    ProcessedView {
        left: crop(&full, LEFT_COL),
        middle: crop(&full, MIDDLE_COL),
        right: crop(&full, RIGHT_COL),
        full,
    }
}
