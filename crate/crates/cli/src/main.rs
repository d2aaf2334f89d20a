//! Command-line front end: runs a Monte-Carlo experiment from a TOML config
//! and writes metrics, curves, and per-trial tables to an output directory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intrusense::{export_results, run_experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "intrusense",
    version,
    about = "RSS-based intrusion detection and localization simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo detection/localization experiment.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML config file; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the experiment seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the number of trials.
    #[arg(long)]
    trials: Option<usize>,

    /// Output directory for metrics.json and the CSV tables.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also write every generated sweep to sweeps.csv.
    #[arg(long)]
    emit_sweeps: bool,

    /// Override the fading standard deviation (dB).
    #[arg(long, value_name = "DB")]
    sigma_fading: Option<f64>,

    /// Override the fine detection threshold (dB).
    #[arg(long, value_name = "DB")]
    tau: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => match simulate(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => {
                eprintln!("error: {err}");
                let mut source = std::error::Error::source(&err);
                while let Some(cause) = source {
                    eprintln!("  caused by: {cause}");
                    source = cause.source();
                }
                ExitCode::from(2)
            }
        },
    }
}

fn simulate(args: SimulateArgs) -> intrusense::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(sigma) = args.sigma_fading {
        cfg.scenario.radio.sigma_fading = sigma;
    }
    if let Some(tau) = args.tau {
        cfg.detection.tau = tau;
    }
    if args.emit_sweeps {
        cfg.emit_sweeps = true;
    }
    // Surface config problems before anything lands on disk.
    cfg.validate()?;

    let output = run_experiment(&cfg)?;
    export_results(&output.metrics, &output.records, &args.out)?;

    let m = &output.metrics;
    println!(
        "{} trials: accuracy {:.3}, fpr {:.3}, fnr {:.3}, angle rmse {:.4} m",
        m.trials, m.accuracy, m.fpr, m.fnr, m.angle_rmse_m
    );
    println!("results written to {}", args.out.display());
    Ok(())
}
