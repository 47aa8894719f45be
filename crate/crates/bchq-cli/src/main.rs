use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod settings;

use settings::{OutputFormat, Settings};

#[derive(Parser)]
#[command(
    name = "bchq",
    version,
    about = "Exact BCH expansion on two generators, Lyndon-basis projection, quasi-Banach convergence constants, and desk-scale numeric validation"
)]
struct Cli {
    /// Flat JSON config file; command-line flags take precedence over it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact coefficient table: A_n, certified B_n, and the Catalan bound,
    /// with a comparison against the previously published renderings.
    Table(commands::table::TableArgs),
    /// Closed-form constants and radii for a quasi-Banach Lie algebra.
    Bounds(commands::bounds::BoundsArgs),
    /// Run the exact certificates and the seeded numeric checks; exit 0 only
    /// if everything passes.
    Verify(commands::verify::VerifyArgs),
    /// Geometric-decay fit with bootstrap confidence interval.
    Fit(commands::fit::FitArgs),
    /// Contraction-mapping inverse solve for a matrix read from JSON.
    Inverse(commands::inverse::InverseArgs),
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away (e.g. `bchq table | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let settings = match Settings::resolve(cli.config.as_deref(), cli.format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let result = match cli.command {
        Command::Table(args) => commands::table::run(&args, &settings),
        Command::Bounds(args) => commands::bounds::run(&args, &settings),
        Command::Verify(args) => commands::verify::run(&args, &settings),
        Command::Fit(args) => commands::fit::run(&args, &settings),
        Command::Inverse(args) => commands::inverse::run(&args, &settings),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
