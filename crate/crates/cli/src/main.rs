use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magheal_core::{PipelineConfig, Stage};

#[derive(Parser, Debug)]
#[command(
    name = "magheal",
    version,
    about = "Self-healing current measurement pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve the scenario and write a raw waveform preview
    Simulate(Opts),
    /// Regenerate the sampled streams and reduce them to phasors
    Extract(Opts),
    /// Fit per-unit scale factors and phase offsets from the sweep
    Calibrate(Opts),
    /// Fit amplitude and phase PCA models on the training windows
    Train(Opts),
    /// Score the test windows against the trained models
    Monitor(Opts),
    /// Pick a reference pair and classify every unit
    Identify(Opts),
    /// Compare conventional and healed current estimates
    Heal(Opts),
    /// Write plot series and a text summary
    Report(Opts),
    /// Run every stage in order
    All(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// TOML config file; built-in defaults when omitted
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Squared-eigenvalue component rule and the as-printed h0 term
    #[arg(long)]
    paper_mode: bool,
}

impl Opts {
    fn config(&self) -> magheal_core::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(kappa) = self.kappa {
            cfg.kappa = kappa;
        }
        if self.paper_mode {
            cfg.paper_mode();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> magheal_core::Result<()> {
    let (stage, opts) = match cli.command {
        Command::Simulate(o) => (Some(Stage::Simulate), o),
        Command::Extract(o) => (Some(Stage::Extract), o),
        Command::Calibrate(o) => (Some(Stage::Calibrate), o),
        Command::Train(o) => (Some(Stage::Train), o),
        Command::Monitor(o) => (Some(Stage::Monitor), o),
        Command::Identify(o) => (Some(Stage::Identify), o),
        Command::Heal(o) => (Some(Stage::Heal), o),
        Command::Report(o) => (Some(Stage::Report), o),
        Command::All(o) => (None, o),
    };
    let cfg = opts.config()?;
    match stage {
        Some(s) => magheal_core::run_stage(s, &cfg),
        None => magheal_core::run_pipeline(&cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
