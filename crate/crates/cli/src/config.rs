//! Run configuration: defaults, an optional `key=value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use coupled_tilt::hamiltonian::{ModelParams, DEFAULT_CUTOFF};
use thiserror::Error;

/// Shells kept clear of the truncation edge by `sweep` and `energy-table`.
pub const SHADOW: usize = 8;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Model(#[from] coupled_tilt::Error),
    #[error("nmax {nmax} must not exceed cutoff - {SHADOW} = {limit}")]
    Shadow { nmax: u32, limit: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Verify,
    EnergyTable,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub omega: Option<f64>,
    pub lambda: Option<f64>,
    pub psi: Option<f64>,
    pub nmax: Option<u32>,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// `self` wins wherever it is set.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            omega: self.omega.or(base.omega),
            lambda: self.lambda.or(base.lambda),
            psi: self.psi.or(base.psi),
            nmax: self.nmax.or(base.nmax),
            cutoff: self.cutoff.or(base.cutoff),
            out: self.out.or(base.out),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub command: Command,
    pub omega: f64,
    pub lambda: f64,
    pub psi: f64,
    pub nmax: u32,
    pub cutoff: usize,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn resolve(command: Command, settings: Overrides) -> Result<Self, ConfigError> {
        let config = Self {
            command,
            omega: settings.omega.unwrap_or(4.0),
            lambda: settings.lambda.unwrap_or(0.5),
            psi: settings.psi.unwrap_or(0.0),
            nmax: settings.nmax.unwrap_or(6),
            cutoff: settings.cutoff.unwrap_or(DEFAULT_CUTOFF),
            out: settings.out,
        };
        config.params()?;
        // verify keeps running on a small cutoff so that it can report the
        // truncation failure itself
        if command != Command::Verify {
            let limit = config.cutoff as i64 - SHADOW as i64;
            if config.nmax as i64 > limit {
                return Err(ConfigError::Shadow {
                    nmax: config.nmax,
                    limit,
                });
            }
        }
        Ok(config)
    }

    pub fn params(&self) -> Result<ModelParams, coupled_tilt::Error> {
        ModelParams::new(self.omega, self.lambda, self.psi, self.cutoff)
    }
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Overrides, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text, path)
}

pub fn parse_config(text: &str, path: &Path) -> Result<Overrides, ConfigError> {
    let mut out = Overrides::default();
    for (i, raw) in text.lines().enumerate() {
        let syntax = |message: String| ConfigError::Syntax {
            path: path.to_owned(),
            line: i + 1,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected key=value, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = || syntax(format!("invalid value {value:?} for {key}"));
        match key {
            "omega" => out.omega = Some(value.parse().map_err(|_| bad())?),
            "lambda" => out.lambda = Some(value.parse().map_err(|_| bad())?),
            "psi" => out.psi = Some(value.parse().map_err(|_| bad())?),
            "nmax" => out.nmax = Some(value.parse().map_err(|_| bad())?),
            "cutoff" => out.cutoff = Some(value.parse().map_err(|_| bad())?),
            "out" => out.out = Some(PathBuf::from(value)),
            _ => return Err(syntax(format!("unknown key {key:?}"))),
        }
    }
    Ok(out)
}
