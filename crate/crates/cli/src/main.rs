mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

/// Electron-wall decoherence estimates, carrier charging and beam optics.
#[derive(Debug, Parser)]
#[command(name = "ewall", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Directory to write `<command>.<csv|json>` into (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decoherence models against the published comparison table.
    Table1(commands::tables::Table1Args),
    /// Geometric overlap corrections against the published correction table.
    Table2(commands::tables::Table2Args),
    /// Energy loss and decoherence amount for one or all scenarios.
    Report(commands::report::ReportArgs),
    /// Deflection of the probe beam while the laser is scanned across the wall.
    Deflect(commands::carriers::DeflectArgs),
    /// Deflection under chopped illumination.
    Chop(commands::carriers::ChopArgs),
    /// Grating far-field pattern for given decoherence amounts.
    Diffract(commands::optics::DiffractArgs),
    /// Ray transmission through the wedge gap versus tilt.
    Gap(commands::optics::GapArgs),
    /// Model outputs over a parameter grid.
    Sweep(commands::sweep::SweepArgs),
    /// Howie decoherence over the cutoff and wave-vector factor, plus one-knob matches.
    Sensitivity(commands::sweep::SensitivityArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table1(a) => commands::tables::table1(&a),
        Command::Table2(a) => commands::tables::table2(&a),
        Command::Report(a) => commands::report::run(&a),
        Command::Deflect(a) => commands::carriers::deflect(&a),
        Command::Chop(a) => commands::carriers::chop(&a),
        Command::Diffract(a) => commands::optics::diffract(&a),
        Command::Gap(a) => commands::optics::gap(&a),
        Command::Sweep(a) => commands::sweep::sweep(&a),
        Command::Sensitivity(a) => commands::sweep::sensitivity(&a),
    };
    match result {
        Ok(commands::Status::Ok) => ExitCode::SUCCESS,
        Ok(commands::Status::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
