//! Command-line driver: parse structure-definition files, dispatch
//! verification and construction commands, and emit deterministic reports.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 the
//! input was invalid.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jacobi_cli::commands::{self, CliError, Inputs, MoserOptions};

#[derive(Parser)]
#[command(
    name = "jacobi",
    about = "Symbolic verification of Jacobi pairs, Dirac-Jacobi transversals and splitting models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem file (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output file for emitted tensors or CSV tables.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Override the evaluation points with a JSON list.
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,
    /// Machine-readable JSON report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the structure equations and graph involutivity of a pair.
    CheckJacobi(CommonArgs),
    /// Build the homogeneous Poisson structure one dimension up.
    Homogenize(CommonArgs),
    /// Recover the Jacobi pair from a homogeneous Poisson structure.
    Dehomogenize(CommonArgs),
    /// Assemble a splitting normal form and verify its defect equivalence.
    Split(CommonArgs),
    /// Classify transversals and compute backwards transforms pointwise.
    Dirac(CommonArgs),
    /// Verify the Moser deformation identities, exactly and numerically.
    Moser {
        #[command(flatten)]
        common: CommonArgs,
        /// Flow-probe step count (enables the probe).
        #[arg(long, value_name = "N")]
        steps: Option<usize>,
        /// Flow drift tolerance.
        #[arg(long, value_name = "R")]
        tol: Option<f64>,
    },
}

fn run() -> Result<(String, i32), CliError> {
    let cli = Cli::parse();
    let (common, report) = match &cli.command {
        Command::CheckJacobi(c) => {
            let inputs = Inputs::load(&c.input, c.out.as_deref(), c.points.as_deref())?;
            (c, commands::cmd_check_jacobi(&inputs)?)
        }
        Command::Homogenize(c) => {
            let inputs = Inputs::load(&c.input, c.out.as_deref(), c.points.as_deref())?;
            (c, commands::cmd_homogenize(&inputs)?)
        }
        Command::Dehomogenize(c) => {
            let inputs = Inputs::load(&c.input, c.out.as_deref(), c.points.as_deref())?;
            (c, commands::cmd_dehomogenize(&inputs)?)
        }
        Command::Split(c) => {
            let inputs = Inputs::load(&c.input, c.out.as_deref(), c.points.as_deref())?;
            (c, commands::cmd_split(&inputs)?)
        }
        Command::Dirac(c) => {
            let inputs = Inputs::load(&c.input, c.out.as_deref(), c.points.as_deref())?;
            (c, commands::cmd_dirac(&inputs)?)
        }
        Command::Moser { common, steps, tol } => {
            let inputs = Inputs::load(
                &common.input,
                common.out.as_deref(),
                common.points.as_deref(),
            )?;
            let opts = MoserOptions {
                steps: *steps,
                tol: *tol,
            };
            (common, commands::cmd_moser(&inputs, &opts)?)
        }
    };
    Ok((report.render(common.json), report.exit_code()))
}

fn main() -> ExitCode {
    match run() {
        Ok((rendered, code)) => {
            print!("{rendered}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
