//! Front end of the `sagnac` binary: argument parsing, experiment configs
//! and artifact rendering.

pub mod args;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::Path;

use args::{Command, OutputArgs};
use config::ExperimentConfig;
use error::{CliError, CliResult};
use experiments::{execute, Request};
use output::{emit, Format};

fn produce(req: &Request, out: Option<&Path>, format: Option<Format>) -> CliResult<()> {
    let artifact = execute(req)?;
    let body = artifact.render(format.unwrap_or_else(|| artifact.default_format()))?;
    emit(&body, out)
}

/// Runs one parsed command.
pub fn dispatch(cmd: &Command) -> CliResult<()> {
    if let Some((req, OutputArgs { out, format })) = cmd.request() {
        return produce(&req, out.as_deref(), format);
    }
    let Command::Run(run) = cmd else {
        unreachable!("every other command maps to a request")
    };
    let text = std::fs::read_to_string(&run.config)
        .map_err(|e| CliError::usage(format!("reading {}: {e}", run.config.display())))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let req = cfg.request()?;
    let (out, format) = match &cfg.output {
        Some(o) => (Some(o.path.as_path()), o.format),
        None => (None, None),
    };
    produce(&req, out, format)
}
