//! Command-line front end of `levyqm-core`: argument parsing, result files
//! and provenance headers.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;

use serde_json::Value;

use cli::{Cli, Command, SpectrumCommand};
use commands::Run;
use error::CliError;
use output::OutputDir;

fn default_stem(command: &Command) -> &'static str {
    match command {
        Command::Spectrum(_) => "spectrum",
        Command::Density(_) => "density",
        Command::LevyMeasure(_) => "levy_measure",
        Command::Evolve(_) => "evolve",
        Command::Propagator(_) => "propagator",
        Command::Loop(_) => "loop",
        Command::Simulate(_) => "simulate",
        Command::ReproduceTables => "reproduce_tables",
    }
}

/// Executes one parsed command line and returns its JSON summary.
pub fn run(cli: &Cli) -> Result<Value, CliError> {
    let mut out = OutputDir::create(&cli.out, cli.precision as usize)?;
    let stem = cli
        .stem
        .clone()
        .unwrap_or_else(|| default_stem(&cli.command).to_string());
    let mut run = Run {
        out: &mut out,
        stem: &stem,
    };
    match &cli.command {
        Command::Spectrum(SpectrumCommand::Fit(a)) => commands::spectrum_fit(&mut run, a),
        Command::Spectrum(SpectrumCommand::Solve(a)) => commands::spectrum_solve(&mut run, a),
        Command::Density(a) => commands::density(&mut run, a),
        Command::LevyMeasure(a) => commands::levy_measure(&mut run, a),
        Command::Evolve(a) => commands::evolve(&mut run, a),
        Command::Propagator(a) => commands::propagator(&mut run, a),
        Command::Loop(a) => commands::loop_sweep(&mut run, a),
        Command::Simulate(a) => commands::simulate(&mut run, a),
        Command::ReproduceTables => commands::reproduce_tables(&mut run),
    }
}
