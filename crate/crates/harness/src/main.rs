use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use czirok_harness::presets::DEFAULT_SEED;
use czirok_harness::{
    emit, preset, run_config_with_threads, ExperimentConfig, ExperimentKind, Format, HarnessError, ResultTable,
};

#[derive(Parser)]
#[command(name = "czirok", version, about = "Simulation and stability analysis of the Czirok model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time series of mean velocity and discrepancy.
    Simulate(RunArgs),
    /// Growth rates of modes 0..=k_range.
    Stability(RunArgs),
    /// Noise threshold of linear stability for each h.
    CriticalSigma(RunArgs),
    /// Per-run summaries over a parameter grid.
    Sweep(RunArgs),
    /// Switching counts between order states over a parameter grid.
    Transitions(RunArgs),
    /// Initial fluctuation covariance check.
    Fluctuation(RunArgs),
    /// Run the config's figure preset.
    FigurePreset(RunArgs),
    /// Reproduce a figure preset (fig1..fig9).
    Figure(FigureArgs),
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override `model.seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FigureArgs {
    id: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override the preset's number of steps.
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    output: Output,
}

fn load(args: &RunArgs, kind: ExperimentKind) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if cfg.experiment.kind != kind {
        return Err(HarnessError::config(
            "experiment.kind",
            format!("config declares `{}` but `{}` was requested", cfg.experiment.kind.name(), kind.name()),
        ));
    }
    if let Some(s) = args.seed {
        cfg.model.seed = s;
    }
    Ok(cfg)
}

fn execute(command: Command) -> Result<ResultTable, HarnessError> {
    let (args, kind) = match command {
        Command::Figure(f) => {
            let p = preset(&f.id, f.seed, f.steps)?;
            let mut table = run_config_with_threads(&p.config, f.output.threads)?;
            p.annotate(&mut table);
            emit(&table, f.output.format, f.output.out.as_deref())?;
            return Ok(table);
        }
        Command::Simulate(a) => (a, ExperimentKind::Simulate),
        Command::Stability(a) => (a, ExperimentKind::Stability),
        Command::CriticalSigma(a) => (a, ExperimentKind::CriticalSigma),
        Command::Sweep(a) => (a, ExperimentKind::Sweep),
        Command::Transitions(a) => (a, ExperimentKind::Transitions),
        Command::Fluctuation(a) => (a, ExperimentKind::Fluctuation),
        Command::FigurePreset(a) => (a, ExperimentKind::FigurePreset),
    };
    let cfg = load(&args, kind)?;
    let table = run_config_with_threads(&cfg, args.output.threads)?;
    emit(&table, args.output.format, args.output.out.as_deref())?;
    Ok(table)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(table) if table.has_failures() => {
            eprintln!("czirok: some rows report numerical failure (column `failed`)");
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("czirok: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}
