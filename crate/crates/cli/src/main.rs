//! `nsflab`: command-line access to the spectral laboratory.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "nsflab",
    version,
    about = "Decay experiments for the compressible Navier-Stokes-Fourier system"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct Groups {
    /// Heat diffusivity β.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Coupling γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Shear fraction μ̃ = μ/ν.
    #[arg(long, default_value_t = 0.5)]
    pub mu_tilde: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mode matrix L(ϱ), its eigenvalues and (optionally) exp(tL(ϱ)).
    Symbol {
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        groups: Groups,
        /// Also report the mode semigroup at this time.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Lyapunov-functional constants K, C0, c0 and comparison rates.
    Lyapunov {
        #[command(flatten)]
        groups: Groups,
        /// Frequency cap ϱ0.
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
    },
    /// Linear decay study: power-law fits plus dyadic block envelopes.
    LinearDecay {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Evolve on the periodic grid instead of the grid-free radial mode.
        #[arg(long)]
        grid: bool,
        /// Override `outputs.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full nonlinear run as described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Besov norms of every component of a checkpoint.
    Norms {
        /// Checkpoint path without extension.
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Summability index; `inf` allowed.
        #[arg(long, default_value = "1")]
        r: String,
        /// Low/high threshold.
        #[arg(long, default_value_t = 0)]
        j0: i32,
    },
    /// Power-law fit of one column of a CSV time series.
    Fit {
        #[arg(long)]
        csv: PathBuf,
        /// Column holding the values; the time column is `t`. A bare norm id
        /// such as `B0_21_low` also matches a single `<run>:B0_21_low` column.
        #[arg(long, visible_alias = "col")]
        column: String,
        /// Fit window, either `A:B` or two values; defaults to every positive time.
        #[arg(long, num_args = 1..=2, value_names = ["T_A", "T_B"], allow_hyphen_values = true)]
        window: Vec<String>,
    },
    /// Invariant suites; exit status 0 iff every check passes.
    Propcheck {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum SuiteArg {
    Spectral,
    Besov,
    Linear,
    Nsf,
    Solver,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
