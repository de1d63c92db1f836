//! JSON experiment definitions for `sagnac run`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::experiments::{Request, Sampling, Source, DEFAULT_SEED, DEFAULT_SHOTS, SEED_ENV};
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    DickeWitness,
    DickeTable,
    Wmult,
    CphaseFringe,
    CphaseTruth,
    Tomo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<Format>,
}

/// Experiment definition. Unset fields take the subcommand defaults:
/// `noise_p = 0`, `shots = 10⁴`, `seed` from `SAGNAC_SEED` or 42.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub noise_p: f64,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    /// Correlation source for the Dicke experiments.
    #[serde(default)]
    pub source: Option<Source>,
    #[serde(default)]
    pub phi_r: Option<f64>,
    #[serde(default)]
    pub phi_l: Option<f64>,
    #[serde(default)]
    pub project: Option<u8>,
    #[serde(default)]
    pub phi_start: Option<f64>,
    #[serde(default)]
    pub phi_end: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    /// Counts file for `tomo`, relative to the working directory.
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub target: Option<String>,
    #[serde(default)]
    pub method: Option<sagnac::tomo::Method>,
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

/// `SAGNAC_SEED` if set, else the built-in default.
pub fn env_seed() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid config: {e}")))
    }

    pub fn request(&self) -> CliResult<Request> {
        let sampling = Sampling {
            noise: self.noise_p,
            shots: self.shots,
            seed: self.seed.map_or_else(env_seed, Ok)?,
        };
        let source = self.source.unwrap_or(Source::Model);
        Ok(match self.experiment {
            Experiment::DickeTable => Request::DickeTable { sampling, source },
            Experiment::DickeWitness => Request::DickeWitness { sampling, source },
            Experiment::Wmult => Request::Wmult { sampling, source },
            Experiment::CphaseTruth => Request::CphaseTruth {
                phi_r: self.phi_r.unwrap_or(std::f64::consts::PI),
                phi_l: self.phi_l.unwrap_or(0.0),
            },
            Experiment::CphaseFringe => Request::CphaseFringe {
                sampling,
                project: self.project.unwrap_or(0),
                phi_start: self.phi_start.unwrap_or(0.0),
                phi_end: self.phi_end.unwrap_or(std::f64::consts::TAU),
                steps: self.steps.unwrap_or(32),
            },
            Experiment::Tomo => Request::Tomo {
                input: self
                    .input
                    .clone()
                    .ok_or_else(|| CliError::usage("tomo config needs `input`"))?,
                target: self.target.clone(),
                method: self.method.unwrap_or(sagnac::tomo::Method::MaxLikelihood),
            },
        })
    }
}
