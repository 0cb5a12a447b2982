//! The `saccade` command-line tool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use saccade_cli::{commands, RunConfig, TuningArgs};

/// Attention-driven image analysis: channel decomposition, co-occurrence
/// segmentation, adaptive interest-map fusion, and simulated pan-tilt
/// scanning sessions.
#[derive(Debug, Parser)]
#[command(name = "saccade", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Input image (PNG or PPM).
    #[arg(long)]
    input: PathBuf,
    /// Config file with `key = value` tuning entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Directory the output files are written into.
    #[arg(long)]
    outdir: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export hue, saturation, intensity, and four directional edge maps.
    Decompose(OutputArgs),
    /// Segment each color channel into labeled regions.
    Segment(OutputArgs),
    /// Export the per-channel region-rarity maps.
    Uncommon(OutputArgs),
    /// Fuse all derived maps into an interest map and extract ranked points.
    Interest {
        #[command(flatten)]
        output: OutputArgs,
        /// Fusion-state file carried across frames (default:
        /// OUTDIR/state.txt). Loaded if present, rewritten after the run.
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Run a scanning session over a mosaic image.
    Session(OutputArgs),
    /// Time the pipeline stages and report medians.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of timed repetitions.
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
}

fn run(cli: Cli) -> saccade_cli::Result<()> {
    match cli.command {
        Command::Decompose(args) => {
            RunConfig::resolve(args.common.config.as_deref(), &args.common.tuning)?;
            commands::decompose(&args.common.input, &args.outdir)
        }
        Command::Segment(args) => {
            let cfg = RunConfig::resolve(args.common.config.as_deref(), &args.common.tuning)?;
            commands::segment_cmd(&args.common.input, &args.outdir, &cfg)
        }
        Command::Uncommon(args) => {
            let cfg = RunConfig::resolve(args.common.config.as_deref(), &args.common.tuning)?;
            commands::uncommon(&args.common.input, &args.outdir, &cfg)
        }
        Command::Interest { output, state } => {
            let cfg = RunConfig::resolve(output.common.config.as_deref(), &output.common.tuning)?;
            commands::interest(&output.common.input, &output.outdir, state.as_deref(), &cfg)
        }
        Command::Session(args) => {
            let cfg = RunConfig::resolve(args.common.config.as_deref(), &args.common.tuning)?;
            commands::session(&args.common.input, &args.outdir, &cfg)
        }
        Command::Bench { common, reps } => {
            let cfg = RunConfig::resolve(common.config.as_deref(), &common.tuning)?;
            commands::bench(&common.input, reps, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
