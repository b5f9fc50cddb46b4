//! Command-line front end: photon-statistics sweeps, energy tables and the
//! oracle verification suite.

pub mod config;
pub mod tables;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{read_config_file, Command, ConfigError, Overrides, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_CONFIG: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coupled-tilt", version, about = "Photon statistics and spectra of two coupled oscillators")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    /// Free frequency (default 4)
    #[arg(long, global = true)]
    omega: Option<f64>,
    /// Coupling magnitude, 0 <= lambda < omega (default 0.5)
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Coupling phase (default 0)
    #[arg(long, global = true, allow_negative_numbers = true)]
    psi: Option<f64>,
    /// Largest principal number N (default 6)
    #[arg(long, global = true)]
    nmax: Option<u32>,
    /// Per-mode Fock cutoff (default 24)
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Output file; standard output if absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value file read before the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Q and g2 over the (N, m) grid as CSV
    Sweep,
    /// Run every oracle check; exit 2 on any failure
    Verify,
    /// Closed-form against numerical energies as CSV
    EnergyTable,
}

fn resolve(cli: Cli) -> Result<SweepConfig, ConfigError> {
    let command = match cli.command {
        CliCommand::Sweep => Command::Sweep,
        CliCommand::Verify => Command::Verify,
        CliCommand::EnergyTable => Command::EnergyTable,
    };
    let file = match &cli.config {
        Some(path) => read_config_file(path)?,
        None => Overrides::default(),
    };
    let flags = Overrides {
        omega: cli.omega,
        lambda: cli.lambda,
        psi: cli.psi,
        nmax: cli.nmax,
        cutoff: cli.cutoff,
        out: cli.out,
    };
    SweepConfig::resolve(command, flags.over(file))
}

fn open_output<'a>(config: &SweepConfig, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
    Ok(match &config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let config = match resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID_CONFIG;
        }
    };
    match execute(&config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID_CONFIG
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Model(#[from] coupled_tilt::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn execute(config: &SweepConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, RunError> {
    match config.command {
        Command::Sweep => {
            let rows = tables::run_sweep(config)?;
            for row in rows.iter().filter(|r| !r.reliable) {
                writeln!(stderr, "warning: {} leaks {:e} past the cutoff", row.q, row.leakage)?;
            }
            tables::write_sweep(&rows, open_output(config, stdout)?)?;
            Ok(EXIT_OK)
        }
        Command::EnergyTable => {
            let rows = tables::run_energy_table(config)?;
            tables::write_energy_table(&rows, open_output(config, stdout)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify => {
            let report = verify::run_verify(config)?;
            for w in &report.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            for f in report.families.iter().filter(|f| f.status == verify::Status::Fail) {
                writeln!(stderr, "verification failed: {} ({})", f.family, f.detail)?;
            }
            report.write_csv(open_output(config, stdout)?)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}
