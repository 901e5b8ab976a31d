//! Run configuration: command-line flags layered over an optional JSON file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

/// `min:max:points` axis or a single value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Sweep {
    pub fn fixed(value: f64) -> Self {
        Sweep {
            min: value,
            max: value,
            points: 1,
        }
    }

    pub fn is_sweep(&self) -> bool {
        self.points > 1
    }

    /// Grid values; the last point is exactly `max`.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.max } else { self.min + step * k as f64 })
            .collect()
    }

    /// The single value of a non-sweep.
    pub fn value(&self) -> f64 {
        self.min
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points == 1 {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}:{}:{}", self.min, self.max, self.points)
        }
    }
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let sweep = match parts.as_slice() {
            [v] => Sweep::fixed(num(v)?),
            [lo, hi, n] => {
                let points = n.trim().parse::<usize>().map_err(|e| format!("'{n}': {e}"))?;
                let (min, max) = (num(lo)?, num(hi)?);
                if min == max {
                    // zero-width range collapses to a single point
                    Sweep::fixed(min)
                } else if min.is_nan() || max.is_nan() || min >= max || points < 2 {
                    return Err(format!("sweep '{s}' needs min < max and points >= 2"));
                } else {
                    Sweep { min, max, points }
                }
            }
            _ => return Err(format!("expected a number or min:max:points, got '{s}'")),
        };
        if !(sweep.min.is_finite() && sweep.max.is_finite()) {
            return Err(format!("sweep '{s}' is not finite"));
        }
        Ok(sweep)
    }
}

impl<'de> Deserialize<'de> for Sweep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Sweep::fixed(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Jc,
    Ajc,
    Ar,
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Energy units of the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Energies divided by the fermion frequency `omega0`.
    Omega0,
    /// Energies as computed (`hbar = 1`).
    Absolute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    Closed,
    Numeric,
}

/// Every option of every subcommand; each subcommand reads what it needs.
/// Flags override values loaded with `--config`.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RunConfig {
    /// JSON file with default values for any of these options.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Boson frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Fermion frequency.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// JC coupling, value or min:max:points.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<Sweep>,
    /// Counter-rotating (aJC) coupling, value or min:max:points.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<Sweep>,
    /// Coupling phase.
    #[arg(long)]
    pub theta: Option<f64>,
    /// FAR constant term, value or min:max:points.
    #[arg(long)]
    pub alpha0: Option<Sweep>,
    /// FAR weight of Q-, value or min:max:points.
    #[arg(long = "alphaQ")]
    #[serde(rename = "alphaQ")]
    pub alpha_q: Option<Sweep>,
    /// FAR weight of R-, value or min:max:points.
    #[arg(long = "alphaR")]
    #[serde(rename = "alphaR")]
    pub alpha_r: Option<Sweep>,
    /// Choose |alphaQ| = 1 + sqrt(1 + alphaR^2) so that alphaQ equals the induced omega0.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub self_consistent: Option<bool>,

    /// Number of lowest levels reported.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Fixed Fock truncation.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Grow the truncation until the reported levels converge.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub auto: Option<bool>,
    /// Convergence tolerance for --auto.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Dressed-state branch.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Total excitation number of the dressed state.
    #[arg(long)]
    pub n: Option<usize>,
    /// Use the ground-state critical coupling lambda_N of the requested N.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub critical: Option<bool>,
    /// Half-width of the phase-space window.
    #[arg(long)]
    pub window: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub evaluator: Option<Evaluator>,

    /// Largest excitation number in the crossing table.
    #[arg(long)]
    pub max_n: Option<usize>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub units: Option<Units>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

macro_rules! layer {
    ($top:ident, $base:ident, $($field:ident),+ $(,)?) => {
        RunConfig {
            config: $top.config,
            $($field: $top.$field.or($base.$field)),+
        }
    };
}

impl RunConfig {
    /// Flags in `self` win over values from `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        let top = self;
        layer!(
            top, base, model, omega, omega0, lambda, mu, theta, alpha0, alpha_q, alpha_r, self_consistent, levels,
            n_max, auto, tol, branch, n, critical, window, points, evaluator, max_n, format, units, output,
        )
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Merges the `--config` file, if any, under the flags.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        match self.config.clone() {
            Some(path) => Ok(self.over(RunConfig::load(&path)?)),
            None => Ok(self),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn units(&self) -> Units {
        self.units.unwrap_or(Units::Omega0)
    }

    pub fn omega(&self) -> f64 {
        self.omega.unwrap_or(1.0)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0.unwrap_or(1.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or(0.0)
    }

    /// Fixed truncation or `None` for auto-convergence; both at once is an error.
    pub fn truncation(&self, default_fixed: Option<usize>) -> Result<Option<usize>, CliError> {
        match (self.n_max, self.auto.unwrap_or(false)) {
            (Some(_), true) => Err(CliError::Usage("--n-max and --auto are mutually exclusive".into())),
            (Some(n), false) => Ok(Some(n)),
            (None, true) => Ok(None),
            (None, false) => Ok(default_fixed),
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-10)
    }

    /// Divisor applied to reported energies.
    pub fn energy_scale(&self, omega0: f64) -> Result<f64, CliError> {
        match self.units() {
            Units::Absolute => Ok(1.0),
            Units::Omega0 if omega0 > 0.0 => Ok(omega0),
            Units::Omega0 => Err(CliError::Usage(format!(
                "cannot report in units of omega0 = {omega0}; use --units absolute"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        assert_eq!("2.5".parse::<Sweep>().unwrap(), Sweep::fixed(2.5));
        let s: Sweep = "0:5:200".parse().unwrap();
        assert_eq!(s.values().len(), 200);
        assert_eq!(*s.values().last().unwrap(), 5.0);
        assert_eq!("1:1:7".parse::<Sweep>().unwrap(), Sweep::fixed(1.0));
        assert!("3:1:4".parse::<Sweep>().is_err());
        assert!("0:1:1".parse::<Sweep>().is_err());
        assert!("0:1".parse::<Sweep>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: RunConfig = serde_json::from_str(r#"{"omega": 2.0, "lambda": "0:1:3", "alphaQ": 1.5}"#).unwrap();
        let flags = RunConfig {
            omega: Some(3.0),
            ..RunConfig::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.omega, Some(3.0));
        assert_eq!(merged.lambda.unwrap().points, 3);
        assert_eq!(merged.alpha_q, Some(Sweep::fixed(1.5)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"omegaa": 1}"#).is_err());
    }

    #[test]
    fn truncation_modes() {
        let both = RunConfig {
            n_max: Some(10),
            auto: Some(true),
            ..RunConfig::default()
        };
        assert!(both.truncation(None).is_err());
        assert_eq!(RunConfig::default().truncation(Some(40)).unwrap(), Some(40));
    }
}
