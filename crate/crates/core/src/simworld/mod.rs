//! A small deterministic stand-in for a photo-realistic simulator: textured
//! walls in a plane, a unicycle robot and a grayscale raycast camera.

mod arena;
mod kinematics;
mod pipeline;
mod render;

pub use arena::{Arena, Bounds, RayHit, Wall};
pub use kinematics::{normalize_angle, step, Pose, SPEED_UNIT_MPS};
pub use pipeline::{
    box_blur, crop, downsample, preprocess, preprocess_with, BlurMode, ProcessedView, FIELD_LEN, FIELD_WIDTH,
    LEFT_COL, MIDDLE_COL, RIGHT_COL, SIZE,
};
pub use render::{render, texture, RawView, FIELD_OF_VIEW, RAW_SIZE};
