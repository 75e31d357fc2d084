// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use natfim_cli::config::{ExperimentConfig, Mode};
use natfim_cli::error::CliResult;
use natfim_cli::experiments::{run_simulate, run_sweep_field, run_sweep_kappa, write_plot_scripts};
use natfim_cli::verify::{run_verify, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "natfim", version, about = "Two-qubit TFIM with nonassociative feedback: runs, sweeps and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (flat key = value).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides run.output_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override a configuration key, e.g. --set integrator.dt=0.025. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Maximum number of trajectories run concurrently.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// One trajectory CSV per κ in sweep.kappa_list.
    Simulate,
    /// Steady-state summary per κ.
    SweepKappa,
    /// Steady-state concurrence over the h/J grid for every κ.
    SweepField,
    /// Run the property suites and reference runs; exit 3 if anything fails.
    Verify {
        /// Flip the sign of the feedback in all trajectory runs.
        #[arg(long)]
        mutate_feedback_sign: bool,
        /// Skip the long reference trajectories.
        #[arg(long)]
        quick: bool,
    },
    /// Write gnuplot scripts for the CSV outputs.
    PlotScripts,
}

fn load_config(cli: &Cli, mode: Mode) -> CliResult<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.mode = mode;
    for o in &cli.overrides {
        cfg.apply_override(o)?;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<()> {
    let mode = match cli.command {
        Command::Simulate | Command::PlotScripts => Mode::Simulate,
        Command::SweepKappa => Mode::SweepKappa,
        Command::SweepField => Mode::SweepField,
        Command::Verify { .. } => Mode::Verify,
    };
    let cfg = load_config(cli, mode)?;
    match cli.command {
        Command::Simulate => {
            for path in run_simulate(&cfg)? {
                println!("{}", path.display());
            }
        }
        Command::SweepKappa => println!("{}", run_sweep_kappa(&cfg)?.display()),
        Command::SweepField => println!("{}", run_sweep_field(&cfg)?.display()),
        Command::PlotScripts => {
            for path in write_plot_scripts(&cfg)? {
                println!("{}", path.display());
            }
        }
        Command::Verify { mutate_feedback_sign, quick } => {
            let mut opts = VerifyOptions::from_config(&cfg);
            opts.skip_trajectories = quick;
            if mutate_feedback_sign {
                opts.feedback_scale = -1.0;
            }
            let report = run_verify(&cfg, &opts)?;
            print!("{}", report.to_csv());
            info!("{} of {} properties passed", report.checks.len() - report.failed().len(), report.checks.len());
            report.into_result()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("natfim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
