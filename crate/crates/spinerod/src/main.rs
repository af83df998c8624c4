use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinerod::commands::{cmd_converge, cmd_elongate, cmd_solve, cmd_sweep, Overrides};
use spinerod::{DEFAULT_GRID, OUT_DIR_ENV, SWEEP_PRESSURES, SWEEP_SPINES};
use spinerod_core::study::ELONGATION_PRESET;

/// Static Cosserat rod solver for a soft continuum robot with a growing spine.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = "spinerod-out")]
    out_dir: PathBuf,
    /// Disable distributed self-weight.
    #[arg(long, global = true)]
    no_gravity: bool,
    /// Residual norm tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Newton iteration limit.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Number of grid points.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and write its centerline and summary.
    Solve { file: PathBuf },
    /// Group-pressure sweep over spine lengths.
    Sweep {
        file: PathBuf,
        /// Pressures in Pa.
        #[arg(long, value_delimiter = ',', default_values_t = SWEEP_PRESSURES)]
        pressures: Vec<f64>,
        /// Spine lengths in m.
        #[arg(long, value_delimiter = ',', default_values_t = SWEEP_SPINES)]
        spines: Vec<f64>,
    },
    /// Grid-refinement study of the tip position.
    Converge {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRID)]
        grid: Vec<usize>,
    },
    /// Uniform nine-chamber extension study.
    Elongate {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = ELONGATION_PRESET)]
        pressures: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = SWEEP_SPINES)]
        spines: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let ov = Overrides {
        no_gravity: g.no_gravity,
        tol: g.tol,
        max_iter: g.max_iter,
        grid_n: g.grid_n,
    };
    let out = &g.out_dir;
    let result = match &cli.command {
        Command::Solve { file } => cmd_solve(file, out, &ov),
        Command::Sweep {
            file,
            pressures,
            spines,
        } => cmd_sweep(file, pressures, spines, out, &ov),
        Command::Converge { file, grid } => cmd_converge(file, grid, out, &ov),
        Command::Elongate {
            file,
            pressures,
            spines,
        } => cmd_elongate(file, pressures, spines, out, &ov),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
