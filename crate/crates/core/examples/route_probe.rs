//! Runs a handful of trials on the reference route and prints how closely the
//! test trajectory tracks the training one.

use sparsenav::encoders::EncoderConfig;
use sparsenav::harness::{distance_to_path, run_trial, RouteScript, TrialConfig};
use sparsenav::simworld::Arena;

fn main() -> sparsenav::Result<()> {
    let arena = Arena::reference();
    let script = RouteScript::reference();
    let args: Vec<String> = std::env::args().collect();
    let offset: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(0.0);
    let encoders = [
        EncoderConfig::perfect_memory(),
        EncoderConfig::fly_hash(32000, 0.1),
        EncoderConfig::fly_hash(8000, 0.1),
        EncoderConfig::fly_hash(2000, 0.1),
        EncoderConfig::fly_hash(500, 0.1),
        EncoderConfig::conv_lsh(4000),
    ];
    for enc in encoders {
        let cfg = TrialConfig {
            test_start_offset: offset,
            seed: 7,
            ..TrialConfig::with_encoder(enc)
        };
        let t0 = std::time::Instant::now();
        let r = run_trial(&arena, &script, &cfg)?;
        let worst = r
            .test_trajectory
            .iter()
            .map(|p| distance_to_path(&r.train_trajectory, p.x, p.y))
            .fold(0.0, f64::max);
        let first_close = r
            .test_trajectory
            .iter()
            .find(|p| distance_to_path(&r.train_trajectory, p.x, p.y) < 0.05)
            .map(|p| p.t);
        let end = r.test_trajectory.last().unwrap();
        println!(
            "{:>15} n_kc={:>5} final=({:.2},{:.2}) dist={:.3} success={} collided={} worst_dev={:.3} close_at={:?} ({:.1?})",
            r.model.name(),
            r.n_kc,
            end.x,
            end.y,
            r.final_distance,
            r.success,
            r.collided,
            worst,
            first_close,
            t0.elapsed()
        );
    }
    Ok(())
}
