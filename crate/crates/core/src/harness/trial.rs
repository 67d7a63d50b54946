use serde::{Deserialize, Serialize};

use super::route::RouteScript;
use crate::analysis::OpCountReport;
use crate::encoders::{Encoder, EncoderConfig, Model};
use crate::error::{config, state, Error, Result};
use crate::memory::MemoryStore;
use crate::simworld::{preprocess_with, render, step, Arena, BlurMode, Pose};
use crate::steering::{compute_turn, SteeringCommand, SteeringParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub encoder: EncoderConfig,
    pub steering: SteeringParams,
    /// Training speed in robot units, used by segments that do not set their own.
    pub v_train: f64,
    /// Seconds between stored training views.
    pub snapshot_period: f64,
    pub n_snapshots: usize,
    /// A test counts as a success when it ends closer than this to the end of training.
    pub success_radius: f64,
    /// Test length in seconds; defaults to 1.5x the time the training route
    /// takes at test speed.
    pub max_test_time: Option<f64>,
    /// Control tick in seconds.
    pub dt: f64,
    pub robot_radius: f64,
    pub blur: BlurMode,
    /// Lateral displacement of the test start, metres to the left of the start heading.
    pub test_start_offset: f64,
    /// Seeds the projection matrix; overrides `encoder.seed`.
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            encoder: EncoderConfig::default(),
            steering: SteeringParams::default(),
            v_train: 0.5,
            snapshot_period: 0.5,
            n_snapshots: 25,
            success_radius: 2.0,
            max_test_time: None,
            dt: 0.05,
            robot_radius: 0.2,
            blur: BlurMode::Sliding,
            test_start_offset: 0.0,
            seed: 0,
        }
    }
}

impl TrialConfig {
    pub fn with_encoder(encoder: EncoderConfig) -> Self {
        TrialConfig {
            encoder,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.encoder.validate()?;
        self.steering.validate()?;
        let positive = [
            ("v_train", self.v_train),
            ("snapshot_period", self.snapshot_period),
            ("success_radius", self.success_radius),
            ("dt", self.dt),
            ("robot_radius", self.robot_radius),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return config(format!("{name} must be positive, got {v}"));
            }
        }
        if self.n_snapshots == 0 {
            return config("n_snapshots must be >= 1");
        }
        if self.max_test_time.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return config("max_test_time must be positive");
        }
        if self.steering.v_test <= 0.0 {
            return config("v_test must be positive");
        }
        let ratio = self.snapshot_period / self.dt;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return config("snapshot_period must be a whole number of control ticks");
        }
        if !self.test_start_offset.is_finite() {
            return config("test_start_offset must be finite");
        }
        Ok(())
    }

    pub fn test_duration(&self, script: &RouteScript) -> f64 {
        self.max_test_time
            .unwrap_or(script.duration() * (self.v_train / self.steering.v_test) * 1.5)
    }

    fn ticks(&self, seconds: f64) -> usize {
        (seconds / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedPose {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl TimedPose {
    pub fn new(t: f64, p: &Pose) -> Self {
        TimedPose {
            t,
            x: p.x,
            y: p.y,
            heading: p.heading,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose::new(self.x, self.y, self.heading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoveltySample {
    pub t: f64,
    pub d_left: f64,
    pub d_right: f64,
    pub omega: f64,
}

/// Everything recorded for one train + test run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub model: Model,
    pub n_kc: usize,
    pub kappa: Option<f64>,
    pub seed: u64,
    pub n_memories: usize,
    pub train_trajectory: Vec<TimedPose>,
    pub test_trajectory: Vec<TimedPose>,
    pub novelty_trace: Vec<NoveltySample>,
    pub final_distance: f64,
    pub success: bool,
    pub collided: bool,
    /// Operations spent on encoding and novelty during the test session.
    pub test_ops: OpCountReport,
}

/// Replays the training script, storing the encoded middle field every
/// `snapshot_period` seconds starting at t = 0.
pub fn run_training(
    arena: &Arena,
    script: &RouteScript,
    cfg: &TrialConfig,
    encoder: &Encoder,
) -> Result<(MemoryStore, Vec<TimedPose>)> {
    script.validate()?;
    cfg.validate()?;
    let mut commands = Vec::new();
    for s in &script.segments {
        let n = cfg.ticks(s.duration).max(1);
        let cmd = SteeringCommand {
            v: s.v.unwrap_or(cfg.v_train),
            omega: s.omega,
        };
        commands.extend(std::iter::repeat_n(cmd, n));
    }
    let every = cfg.ticks(cfg.snapshot_period);
    if (cfg.n_snapshots - 1) * every > commands.len() {
        return config(format!(
            "route lasts {} ticks, too short for {} snapshots every {} ticks",
            commands.len(),
            cfg.n_snapshots,
            every
        ));
    }

    let mut store = MemoryStore::for_encoder(encoder);
    let mut pose = script.start;
    let mut trajectory = Vec::with_capacity(commands.len() + 1);
    let collision = |t: f64, p: &Pose| Error::TrainingCollision { t, x: p.x, y: p.y };
    if arena.check_collision(&pose, cfg.robot_radius) {
        return Err(collision(0.0, &pose));
    }
    for tick in 0..=commands.len() {
        let t = tick as f64 * cfg.dt;
        trajectory.push(TimedPose::new(t, &pose));
        if tick % every == 0 && store.len() < cfg.n_snapshots {
            let view = preprocess_with(&render(arena, &pose)?, cfg.blur);
            store.store_item(encoder.encode(&view.middle)?)?;
        }
        if let Some(cmd) = commands.get(tick) {
            pose = step(&pose, cmd, cfg.dt)?;
            if arena.check_collision(&pose, cfg.robot_radius) {
                return Err(collision(t + cfg.dt, &pose));
            }
        }
    }
    Ok((store, trajectory))
}

/// Autonomous run from the script's start pose (optionally displaced
/// sideways). Each tick renders the view, measures left- and right-field
/// novelty against `store`, turns accordingly and advances at `v_test`.
/// Stops at the time limit or on the first collision, which freezes the
/// final position.
pub fn run_test(
    arena: &Arena,
    script: &RouteScript,
    store: &MemoryStore,
    train_trajectory: &[TimedPose],
    cfg: &TrialConfig,
    encoder: &Encoder,
) -> Result<TrialRecord> {
    if store.is_empty() {
        return state("cannot run a test session with an empty memory store");
    }
    let Some(train_end) = train_trajectory.last() else {
        return state("training trajectory is empty");
    };
    cfg.validate()?;
    let max_ticks = (cfg.test_duration(script) / cfg.dt).ceil() as usize;
    let mut pose = script.start.shifted_left(cfg.test_start_offset);
    let mut trajectory = vec![TimedPose::new(0.0, &pose)];
    let mut trace = Vec::with_capacity(max_ticks);
    let mut ops = OpCountReport::default();
    let mut collided = arena.check_collision(&pose, cfg.robot_radius);

    for tick in 0..max_ticks {
        if collided {
            break;
        }
        let t = tick as f64 * cfg.dt;
        let view = preprocess_with(&render(arena, &pose)?, cfg.blur);
        let left = encoder.encode_with(&view.left, &mut ops)?;
        let right = encoder.encode_with(&view.right, &mut ops)?;
        let d_left = store.nearest_with(&left, &mut ops)?.d;
        let d_right = store.nearest_with(&right, &mut ops)?.d;
        let cmd = compute_turn(d_left, d_right, &cfg.steering)?;
        trace.push(NoveltySample {
            t,
            d_left,
            d_right,
            omega: cmd.omega,
        });
        pose = step(&pose, &cmd, cfg.dt)?;
        trajectory.push(TimedPose::new(t + cfg.dt, &pose));
        collided = arena.check_collision(&pose, cfg.robot_radius);
    }

    let final_distance = pose.distance_to(&train_end.pose());
    let enc = encoder.config();
    Ok(TrialRecord {
        model: enc.model,
        n_kc: enc.output_dim(),
        kappa: (enc.model == Model::FlyHash).then_some(enc.kappa),
        seed: enc.seed,
        n_memories: store.len(),
        train_trajectory: train_trajectory.to_vec(),
        test_trajectory: trajectory,
        novelty_trace: trace,
        final_distance,
        success: final_distance < cfg.success_radius,
        collided,
        test_ops: ops,
    })
}

/// One complete trial: fresh encoder from `cfg.seed`, training, then test.
pub fn run_trial(arena: &Arena, script: &RouteScript, cfg: &TrialConfig) -> Result<TrialRecord> {
    cfg.validate()?;
    let encoder = Encoder::new(cfg.encoder.with_seed(cfg.seed))?;
    let (store, train) = run_training(arena, script, cfg, &encoder)?;
    run_test(arena, script, &store, &train, cfg, &encoder)
}

/// Distance from a point to the polyline through the trajectory's positions.
pub fn distance_to_path(path: &[TimedPose], x: f64, y: f64) -> f64 {
    if path.len() == 1 {
        return (path[0].x - x).hypot(path[0].y - y);
    }
    path.windows(2)
        .map(|w| {
            let (ax, ay, bx, by) = (w[0].x, w[0].y, w[1].x, w[1].y);
            let (dx, dy) = (bx - ax, by - ay);
            let len2 = dx * dx + dy * dy;
            let s = if len2 == 0.0 {
                0.0
            } else {
                (((x - ax) * dx + (y - ay) * dy) / len2).clamp(0.0, 1.0)
            };
            (x - ax - s * dx).hypot(y - ay - s * dy)
        })
        .fold(f64::INFINITY, f64::min)
}
