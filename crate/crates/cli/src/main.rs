//! `sparsenav` command-line front end.
//!
//! ```text
//! sparsenav trial  [--config run.json] [--seed N] [--out DIR] [--fixed-fanout]
//! sparsenav sweep  [--config run.json] [--seed N] [--out DIR] [--jobs N] [--fixed-fanout]
//! sparsenav tables [--n-pn 726] [--n-kc 32000] [--kappa 0.05] [--items 25]
//! ```
//!
//! Exit status: 0 on completion (a lost robot is data, not an error), 2 for a
//! bad configuration or flag, 3 when the training route itself collides,
//! 1 for I/O failures while writing results.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use sparsenav::analysis::{op_counts, storage_size};
use sparsenav::encoders::{EncoderConfig, Model, N_PN};
use sparsenav::exec::{self, Execution};
use sparsenav::harness::export::{
    write_novelty_csv, write_record_json, write_sweep_csv, write_trajectory_csv, write_trials_csv,
};
use sparsenav::harness::{run_sweep, run_trial, RouteScript, TrialConfig};
use sparsenav::simworld::Arena;
use sparsenav::Error;

const SEED_ENV: &str = "SPARSENAV_SEED";

#[derive(Parser)]
#[command(name = "sparsenav", version, about = "Route following with sparse expansion hashes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train on the route once and run one autonomous test.
    Trial(RunArgs),
    /// Run every grid entry for `n_trials` trials and summarise success rates.
    Sweep(SweepArgs),
    /// Print storage sizes and operation counts for the three models.
    Tables(TableArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed and the SPARSENAV_SEED variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exactly ten inputs per KC for every FlyHash encoder.
    #[arg(long)]
    fixed_fanout: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = N_PN)]
    n_pn: usize,
    #[arg(long, default_value_t = 32000)]
    n_kc: usize,
    #[arg(long, default_value_t = 0.05)]
    kappa: f64,
    /// Number of stored items in the total-size column.
    #[arg(long, default_value_t = 25)]
    items: usize,
}

/// Everything one run needs. An empty JSON object gives the reference
/// experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    /// Arena JSON; the bundled reference arena when absent.
    arena: Option<PathBuf>,
    /// Route JSON; the bundled reference route when absent.
    route: Option<PathBuf>,
    trial: TrialConfig,
    grid: Vec<EncoderConfig>,
    n_trials: usize,
    out: PathBuf,
    seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sizes = [500, 1000, 2000, 4000, 8000, 16000, 32000];
        let mut grid = vec![EncoderConfig::perfect_memory()];
        for kappa in [0.05, 0.1, 0.5] {
            grid.extend(sizes.iter().map(|&n| EncoderConfig::fly_hash(n, kappa)));
        }
        grid.extend(sizes.iter().map(|&n| EncoderConfig::conv_lsh(n)));
        RunConfig {
            arena: None,
            route: None,
            trial: TrialConfig::default(),
            grid,
            n_trials: 100,
            out: PathBuf::from("out"),
            seed: 0,
        }
    }
}

enum Failure {
    Usage(String),
    Collision(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Collision(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Collision(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TrainingCollision { .. } => Failure::Collision(e.to_string()),
            Error::Io(_) | Error::Csv(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn resolve(base: Option<&Path>, p: &Path) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

/// Loads the config and applies flag and environment overrides.
/// Seed precedence: `--seed`, then `SPARSENAV_SEED`, then the file.
fn load_config(args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let mut cfg: RunConfig = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let dir = path.parent();
            cfg.arena = cfg.arena.map(|p| resolve(dir, &p));
            cfg.route = cfg.route.map(|p| resolve(dir, &p));
            cfg
        }
        None => RunConfig::default(),
    };
    if let Ok(v) = std::env::var(SEED_ENV) {
        cfg.seed = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got {v:?}")))?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    if args.fixed_fanout {
        cfg.trial.encoder.fixed_fanout = true;
        cfg.grid.iter_mut().for_each(|e| e.fixed_fanout = true);
    }
    cfg.trial.seed = cfg.seed;
    cfg.trial.validate()?;
    Ok(cfg)
}

fn load_world(cfg: &RunConfig) -> Result<(Arena, RouteScript), Failure> {
    let arena = match &cfg.arena {
        Some(p) => Arena::load(p).map_err(|e| Failure::Usage(format!("arena {}: {e}", p.display())))?,
        None => Arena::reference(),
    };
    let route = match &cfg.route {
        Some(p) => RouteScript::load(p).map_err(|e| Failure::Usage(format!("route {}: {e}", p.display())))?,
        None => RouteScript::reference(),
    };
    Ok((arena, route))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    let path = dir.join(name);
    File::create(&path).map(BufWriter::new).map_err(|e| io_failure(&path, e))
}

fn finish(mut w: BufWriter<File>, name: &str) -> Result<(), Failure> {
    w.flush().map_err(|e| io_failure(Path::new(name), e))
}

fn write_manifest(cfg: &RunConfig, command: &str, arena: &Arena, route: &RouteScript) -> Result<(), Failure> {
    let arena_json: serde_json::Value = serde_json::from_str(&arena.to_json()?).map_err(Error::from)?;
    let manifest = json!({
        "tool": "sparsenav",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": cfg.seed,
        "parallel": cfg!(feature = "parallel"),
        "config": cfg,
        "arena": arena_json,
        "route": route,
    });
    let mut w = create(&cfg.out, "manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &manifest).map_err(Error::from)?;
    writeln!(w).map_err(|e| io_failure(&cfg.out, e))?;
    finish(w, "manifest.json")
}

fn cmd_trial(args: &RunArgs) -> Result<(), Failure> {
    let cfg = load_config(args)?;
    let (arena, route) = load_world(&cfg)?;
    let record = run_trial(&arena, &route, &cfg.trial)?;

    fs::create_dir_all(&cfg.out).map_err(|e| io_failure(&cfg.out, e))?;
    let mut w = create(&cfg.out, "train.csv")?;
    write_trajectory_csv(&mut w, &record.train_trajectory)?;
    finish(w, "train.csv")?;
    let mut w = create(&cfg.out, "test.csv")?;
    write_trajectory_csv(&mut w, &record.test_trajectory)?;
    finish(w, "test.csv")?;
    let mut w = create(&cfg.out, "novelty.csv")?;
    write_novelty_csv(&mut w, &record.novelty_trace)?;
    finish(w, "novelty.csv")?;
    let mut w = create(&cfg.out, "record.json")?;
    write_record_json(&mut w, &record)?;
    finish(w, "record.json")?;
    write_manifest(&cfg, "trial", &arena, &route)?;

    println!(
        "{} n_kc={} seed={}: final distance {:.3} m, success {}, collided {}",
        record.model, record.n_kc, record.seed, record.final_distance, record.success, record.collided
    );
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.run)?;
    if cfg.grid.is_empty() {
        return Err(Failure::Usage("sweep grid is empty".into()));
    }
    let (arena, route) = load_world(&cfg)?;
    let result = exec::with_jobs(args.jobs, || {
        run_sweep(&arena, &route, &cfg.grid, &cfg.trial, cfg.n_trials, cfg.seed, Execution::Parallel)
    })?;

    fs::create_dir_all(&cfg.out).map_err(|e| io_failure(&cfg.out, e))?;
    let mut w = create(&cfg.out, "sweep.csv")?;
    write_sweep_csv(&mut w, &result.rows)?;
    finish(w, "sweep.csv")?;
    let mut w = create(&cfg.out, "trials.csv")?;
    write_trials_csv(&mut w, &result.trial_rows())?;
    finish(w, "trials.csv")?;
    write_manifest(&cfg, "sweep", &arena, &route)?;

    println!("{:<15} {:>6} {:>6} {:>8} {:>10}", "model", "n_kc", "kappa", "success", "mean_dist");
    for row in &result.rows {
        let kappa = row.kappa.map_or("-".to_string(), |k| format!("{k}"));
        println!(
            "{:<15} {:>6} {:>6} {:>8.2} {:>10.3}",
            row.model, row.n_kc, kappa, row.success_rate, row.mean_final_distance
        );
    }
    Ok(())
}

fn cmd_tables(args: &TableArgs) -> Result<(), Failure> {
    if !(args.kappa > 0.0 && args.kappa < 1.0) {
        return Err(Failure::Usage(format!("--kappa must lie in (0, 1), got {}", args.kappa)));
    }
    let models = [Model::FlyHash, Model::ConvLsh, Model::PerfectMemory];
    println!("storage (bits), {} items", args.items);
    println!("{:<15} {:>16} {:>10} {:>16}", "model", "W", "y", "total");
    for model in models {
        let s = storage_size(model, args.n_pn, args.n_kc, args.items)?;
        println!("{:<15} {:>16} {:>10} {:>16}", model, s.w_bits, s.y_bits, s.total_bits);
    }
    println!();
    println!("operations per encode and comparison (kappa {})", args.kappa);
    println!(
        "{:<15} {:>12} {:>12} {:>6} {:>8} {:>8} {:>10}",
        "model", "enc_mults", "enc_adds", "k-WTA", "XOR", "squares", "eval_adds"
    );
    for model in models {
        let kappa = if model == Model::ConvLsh { 0.5 } else { args.kappa };
        let o = op_counts(model, args.n_pn, args.n_kc, kappa)?;
        let bound = if model == Model::PerfectMemory { "" } else { "<=" };
        println!(
            "{:<15} {:>12} {:>12} {:>6} {:>8} {:>8} {:>10}",
            model,
            o.encode_mults,
            o.encode_adds,
            o.encode_kwta,
            o.eval_xor,
            o.eval_square_mults,
            format!("{bound}{}", o.eval_adds)
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Trial(args) => cmd_trial(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Tables(args) => cmd_tables(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sparsenav: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
