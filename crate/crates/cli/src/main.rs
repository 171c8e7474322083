use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsp_cli::sweep::Axis;
use nsp_cli::{admissible, plot, run, sweep, Status};
use nsp_core::admissibility::ExponentPair;

#[derive(Parser)]
#[command(name = "nsp", version, about = "Spherically symmetric Navier-Stokes-Poisson solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration; exit 0 on completion, 2 on blow-up, 1 on error.
    Run {
        config: PathBuf,
        /// Output directory, overriding `[output] dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Cartesian product of up to three axes in parallel (NSP_THREADS caps workers).
    Sweep {
        config: PathBuf,
        /// `dotted.key=lo:hi:n`, repeatable.
        #[arg(long = "axis", required = true)]
        axes: Vec<Axis>,
    },
    /// Print the admissibility report for an exponent set as JSON.
    Admissible {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        kappa: i32,
    },
    /// Write SVG time series of diagnostics fields.
    Plot {
        dir: PathBuf,
        /// Comma-separated field names (dotted for nested maps, e.g. lp_u.2).
        #[arg(long, value_delimiter = ',', required = true)]
        fields: Vec<String>,
        /// Also write a gnuplot script with the data inlined.
        #[arg(long)]
        gnuplot: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => run::cmd_run(&config, out),
        Command::Sweep { config, axes } => sweep::cmd_sweep(&config, &axes),
        Command::Admissible { alpha, gamma, dim, kappa } => {
            admissible::cmd_admissible(&ExponentPair { alpha, gamma, n: dim, kappa })
        }
        Command::Plot { dir, fields, gnuplot } => plot::cmd_plot(&dir, &fields, gnuplot),
    };
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("nsp: {e}");
            ExitCode::from(Status::Failed.code() as u8)
        }
    }
}
