use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparsenav::analysis::rank_correlation;
use sparsenav::encoders::{Encoder, EncoderConfig, HashVector};
use sparsenav::harness::{run_training, RouteScript, TrialConfig};
use sparsenav::memory::{dissimilarity, Metric};
use sparsenav::simworld::{preprocess, preprocess_with, render, step, Arena, BlurMode, Pose, SPEED_UNIT_MPS};
use sparsenav::steering::SteeringCommand;

fn random_free_pose(arena: &Arena, rng: &mut ChaCha8Rng) -> Pose {
    let b = arena.bounds();
    loop {
        let p = Pose::new(
            rng.random_range(b.min_x..b.max_x),
            rng.random_range(b.min_y..b.max_y),
            rng.random_range(-PI..PI),
        );
        if !arena.check_collision(&p, 0.2) {
            return p;
        }
    }
}

#[test]
fn stored_items_match_rendered_middle_fields() {
    let arena = Arena::reference();
    let script = RouteScript::reference();
    for enc_cfg in [EncoderConfig::perfect_memory(), EncoderConfig::fly_hash(2000, 0.1)] {
        let cfg = TrialConfig::with_encoder(enc_cfg);
        let enc = Encoder::new(cfg.encoder).unwrap();
        let (store, train) = run_training(&arena, &script, &cfg, &enc).unwrap();
        assert_eq!(store.len(), cfg.n_snapshots);
        let every = (cfg.snapshot_period / cfg.dt).round() as usize;
        for (i, item) in store.items().iter().enumerate() {
            let view = preprocess(&render(&arena, &train[i * every].pose()).unwrap());
            assert_eq!(&enc.encode(&view.middle).unwrap(), item, "snapshot {i}");
        }
    }
}

#[test]
fn render_loop_is_bit_reproducible() {
    let arena = Arena::reference();
    let run = || {
        let mut p = Pose::new(0.6, 1.5, 0.0);
        let mut frames = Vec::new();
        for i in 0..40 {
            let v = preprocess(&render(&arena, &p).unwrap());
            frames.push(v.full);
            let cmd = SteeringCommand { v: 0.5, omega: 0.3 * (i as f64 * 0.2).sin() };
            p = step(&p, &cmd, 0.05).unwrap();
        }
        (frames, p)
    };
    assert_eq!(run(), run());
}

#[test]
fn processed_views_have_fixed_shape() {
    let arena = Arena::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let raw = render(&arena, &random_free_pose(&arena, &mut rng)).unwrap();
        for mode in [BlurMode::Sliding, BlurMode::Tiled] {
            let v = preprocess_with(&raw, mode);
            assert_eq!(v.full.len(), 33 * 33);
            for field in [&v.left, &v.middle, &v.right] {
                assert_eq!(field.len(), 726);
            }
            // Blurring never leaves the range spanned by the downsampled image.
            let (lo, hi) = (raw.pixels().iter().min().unwrap(), raw.pixels().iter().max().unwrap());
            assert!(v.full.iter().all(|p| (lo..=hi).contains(&p)));
        }
    }
}

#[test]
fn straight_line_closed_form() {
    let mut p = Pose::new(0.0, 0.0, 0.7);
    let cmd = SteeringCommand { v: 0.2, omega: 0.0 };
    for _ in 0..10_000 {
        p = step(&p, &cmd, 0.005).unwrap();
    }
    let d = SPEED_UNIT_MPS * 0.2 * 50.0;
    assert!((p.x - d * 0.7f64.cos()).abs() < 0.01 * d);
    assert!((p.y - d * 0.7f64.sin()).abs() < 0.01 * d);
}

#[test]
fn half_metre_moves_change_the_view() {
    let arena = Arena::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 20 {
        let p = random_free_pose(&arena, &mut rng);
        let q = Pose::new(p.x + 0.5 * p.heading.cos(), p.y + 0.5 * p.heading.sin(), p.heading);
        if !arena.contains(q.x, q.y) || arena.check_collision(&q, 0.2) {
            continue;
        }
        let a = preprocess(&render(&arena, &p).unwrap()).middle;
        let b = preprocess(&render(&arena, &q).unwrap()).middle;
        assert_ne!(a, b);
        checked += 1;
    }
}

#[test]
fn hashes_preserve_view_similarity_at_2000_kcs() {
    let arena = Arena::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut pairs = Vec::new();
    while pairs.len() < 200 {
        let p = random_free_pose(&arena, &mut rng);
        let q = Pose::new(p.x + rng.random_range(-0.3..0.3), p.y + rng.random_range(-0.3..0.3), p.heading + rng.random_range(-0.5..0.5));
        if !arena.contains(q.x, q.y) || arena.check_collision(&q, 0.2) {
            continue;
        }
        pairs.push((
            preprocess(&render(&arena, &p).unwrap()).middle,
            preprocess(&render(&arena, &q).unwrap()).middle,
        ));
    }
    let input: Vec<f64> = pairs
        .iter()
        .map(|(a, b)| dissimilarity(&HashVector::Grey(a.clone()), &HashVector::Grey(b.clone()), Metric::Euclidean).unwrap())
        .collect();
    for cfg in [EncoderConfig::fly_hash(2000, 0.1), EncoderConfig::fly_hash(2000, 0.05), EncoderConfig::conv_lsh(2000)] {
        let enc = Encoder::new(cfg).unwrap();
        let hashed: Vec<f64> = pairs
            .iter()
            .map(|(a, b)| dissimilarity(&enc.encode(a).unwrap(), &enc.encode(b).unwrap(), Metric::Hamming).unwrap())
            .collect();
        let rho = rank_correlation(&input, &hashed).unwrap();
        assert!(rho > 0.0, "{} rho {rho}", cfg.model);
    }
}
