use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gadkit::run::SEED_ENV;
use gadkit::{parse_config, run, RunOptions};

/// Batch runner for aliasing-decomposition experiments.
#[derive(Debug, Parser)]
#[command(name = "gadkit", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run seed (overrides `seeds` in the config and GADKIT_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the parallel sweep.
    #[arg(long)]
    threads: Option<usize>,
    /// Use full-size training sets and column budgets (n = 1000, 6000 columns).
    #[arg(long)]
    full_scale: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match parse_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("gadkit: {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    if cli.threads == Some(0) {
        eprintln!("gadkit: --threads must be >= 1");
        return ExitCode::from(2);
    }
    let options = RunOptions {
        out_dir: cli.out,
        seed: cli.seed,
        threads: cli.threads,
        full_scale: cli.full_scale,
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    match run(config, &options, env_seed.as_deref()) {
        Ok(dir) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gadkit: {e}");
            ExitCode::FAILURE
        }
    }
}
