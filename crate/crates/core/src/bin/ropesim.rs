use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ropesim::cli::{
    cmd_bound, cmd_convexify, cmd_optimize, cmd_simulate, cmd_sweep, SweepSpec, THREADS_ENV,
};
use ropesim::config::load_integrator_defaults;
use ropesim::design::GridKind;
use ropesim::dynamics::IntegratorConfig;
use ropesim::Error;

#[derive(Parser)]
#[command(name = "ropesim", version, about = "Climber-fall rope simulator and design toolkit")]
struct Cli {
    /// JSON file of integrator defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Do not report written files on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print b0, a0, v0 and the arrest time T for a scenario
    Bound { file: PathBuf },
    /// Simulate a fall and print its report
    Simulate {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Search for the law with the smallest peak tension
    Optimize {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        knots: usize,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        grid: Grid,
        #[arg(long, default_value = "optimized_law.csv")]
        out: PathBuf,
    },
    /// Lower convex envelope of sampled energies (strain,energy_n)
    Convexify {
        curve: PathBuf,
        #[arg(long, default_value = "envelope.csv")]
        out: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Vary one scenario key over a range and simulate each point
    Sweep {
        file: PathBuf,
        /// key=lo:hi:n
        #[arg(long)]
        vary: String,
        #[arg(long, default_value = "sweep")]
        out: PathBuf,
        /// Worker cap; 0 uses every core
        #[arg(long, env = THREADS_ENV, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Grid {
    Uniform,
    Log,
}

fn print<T: serde::Serialize>(v: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let defaults = match &cli.config {
        Some(p) => load_integrator_defaults(p)?,
        None => IntegratorConfig::default(),
    };
    let note = |msg: String| {
        if !cli.quiet {
            eprintln!("{msg}");
        }
    };
    match &cli.command {
        Command::Bound { file } => print(&cmd_bound(file)?),
        Command::Simulate { file, out, plot } => {
            let report = cmd_simulate(file, &defaults, out.as_deref(), plot.as_deref())?;
            for p in out.iter().chain(plot) {
                note(format!("wrote {}", p.display()));
            }
            print(&report)
        }
        Command::Optimize {
            file,
            knots,
            budget,
            seed,
            grid,
            out,
        } => {
            let grid = match grid {
                Grid::Uniform => GridKind::Uniform,
                Grid::Log => GridKind::Log,
            };
            let summary = cmd_optimize(file, *knots, *budget, *seed, grid, out)?;
            note(format!(
                "wrote {} and {}",
                out.display(),
                out.with_extension("json").display()
            ));
            print(&summary)
        }
        Command::Convexify { curve, out, plot } => {
            let summary = cmd_convexify(curve, out, plot.as_deref())?;
            note(format!("wrote {}", out.display()));
            print(&summary)
        }
        Command::Sweep {
            file,
            vary,
            out,
            threads,
        } => {
            let spec = SweepSpec::parse(vary)?;
            let threads = (*threads > 0).then_some(*threads);
            let rows = cmd_sweep(file, &spec, out, &defaults, threads)?;
            note(format!("wrote {} points to {}", rows.len(), out.display()));
            print(&rows)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
