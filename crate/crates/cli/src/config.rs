//! Run configuration shared by every command.

use std::path::PathBuf;
use std::str::FromStr;

use klo_core::{CartanDatum, CoxeterError};
use num_rational::BigRational;
use thiserror::Error;

/// Problems with the command line itself; these map to exit code 2.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown type {label}: {source}")]
    Type { label: String, source: CoxeterError },
    #[error("--floor must be at least 4, got {0}")]
    Floor(i32),
    #[error("--radius must be at least {min} for {label}, got {got}")]
    Radius { label: String, min: usize, got: usize },
    #[error("{command} does not produce {format:?} output")]
    Format { command: &'static str, format: Format },
    #[error("{command} needs {expected}, got {got}")]
    Unsupported { command: &'static str, expected: &'static str, got: String },
    #[error("--v-value must be a rational p/q, got {0}")]
    VValue(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub datum: CartanDatum,
    /// Truncation floor `N`: vectors are exact above `v^-N`.
    pub floor: i32,
    /// Window radius `R`, in hyperplanes crossed from `A+`.
    pub radius: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
    /// Specialization used to re-confirm window ranks.
    pub v_value: BigRational,
}

impl RunConfig {
    /// Validates `N >= 4` and `R >= l(w0) + 1`; the radius defaults to `2 l(w0) + 2`, enough for the generator rank in every rank-two type.
    pub fn new(
        type_label: &str,
        floor: i32,
        radius: Option<usize>,
        format: Option<Format>,
        out: Option<PathBuf>,
        seed: u64,
        v_value: Option<&str>,
    ) -> Result<Self, ConfigError> {
        let datum = CartanDatum::named(type_label).map_err(|source| ConfigError::Type { label: type_label.to_string(), source })?;
        if floor < 4 {
            return Err(ConfigError::Floor(floor));
        }
        let l0 = datum.longest().length();
        let radius = radius.unwrap_or(2 * l0 + 2);
        if radius < l0 + 1 {
            return Err(ConfigError::Radius { label: type_label.to_string(), min: l0 + 1, got: radius });
        }
        let v_value = match v_value {
            None => BigRational::from_integer(2.into()),
            Some(s) => BigRational::from_str(s).map_err(|_| ConfigError::VValue(s.to_string()))?,
        };
        Ok(RunConfig { datum, floor, radius, out, format, seed, v_value })
    }

    pub fn type_label(&self) -> &str {
        self.datum.label()
    }

    /// The requested format, or `default`; anything outside `allowed` is a usage error.
    pub fn format_for(&self, command: &'static str, default: Format, allowed: &[Format]) -> Result<Format, ConfigError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(ConfigError::Format { command, format: f })
        }
    }
}
