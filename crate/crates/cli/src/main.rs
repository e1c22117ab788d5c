use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gk_cli::error::{CliError, CliResult};
use gk_cli::scene::{parse_scene, Overrides};
use gk_cli::Command;

#[derive(Parser)]
#[command(
    name = "gk",
    version,
    about = "Exact generalized complex geometry on flat models"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every randomized identity suite.
    Identities(Flags),
    /// Lift the scene deformation, solve for b(t), and certify the family.
    Deform(Flags),
    /// Stratify a chart bivector by type over a grid.
    Typemap(Flags),
    /// Tabulate log(e^a e^b) order by order.
    Cbh(Flags),
    /// Check the majorant coefficient inequalities.
    Majorant(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    mode_cap: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Float tolerance for sampled checks.
    #[arg(long)]
    tolerance: Option<f64>,
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("GK_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Parse(format!("GK_THREADS: `{v}` is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Property(format!("thread pool: {e}")))
}

fn execute(command: Command, flags: &Flags) -> CliResult<bool> {
    configure_threads()?;
    let ov = Overrides {
        order: flags.order,
        mode_cap: flags.mode_cap,
        seed: flags.seed,
        tolerance: flags.tolerance,
    };
    let scene = parse_scene(&flags.scene, &ov)?;
    let report = command.run(&scene)?;
    let text = report.render(command.name(), &scene);
    match &flags.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Property(format!("{}: {e}", path.display())))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Property(format!("stdout: {e}")))?,
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Cmd::Identities(f) => (Command::Identities, f),
        Cmd::Deform(f) => (Command::Deform, f),
        Cmd::Typemap(f) => (Command::Typemap, f),
        Cmd::Cbh(f) => (Command::Cbh, f),
        Cmd::Majorant(f) => (Command::Majorant, f),
    };
    match execute(command, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("gk {}: some checks failed", command.name());
            ExitCode::from(5)
        }
        Err(e) => {
            eprintln!("gk {}: {e}", command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
