use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::experiments::{Request, Sampling, Source, DEFAULT_SEED, DEFAULT_SHOTS, SEED_ENV};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "sagnac",
    version,
    about = "Phased Dicke witnesses and Sagnac C-Phase simulations as CSV/JSON"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 18 pair correlations of the phased Dicke state.
    DickeTable(DickeArgs),
    /// Structural witness report.
    DickeWitness(DickeArgs),
    /// Multipartite witness in collective and expanded form.
    Wmult(DickeArgs),
    /// Conditional target states of the C-Phase gate.
    CphaseTruth(TruthArgs),
    /// Single counts while one glass-plate phase is scanned.
    CphaseFringe(FringeArgs),
    /// Simulated tomography counts of the C-Phase output.
    TomoCounts(TomoCountsArgs),
    /// Density-matrix reconstruction from counts.
    Tomo(TomoArgs),
    /// A named ideal state, optionally with white noise.
    State(StateArgs),
    /// Propagate a state through an element list (the Dicke circuit by default).
    Circuit(CircuitArgs),
    /// Run an experiment described by a JSON config.
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    /// White-noise weight p in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Events per measurement setting.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl SamplingArgs {
    fn sampling(&self) -> Sampling {
        Sampling {
            noise: self.noise,
            shots: self.shots,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DickeArgs {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Draw counts instead of reporting exact values with predicted sigmas.
    #[arg(long, conflicts_with = "measured")]
    pub sample: bool,
    /// Use the built-in measured correlations.
    #[arg(long)]
    pub measured: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TruthArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::PI)]
    pub phi_r: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phi_l: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FringeArgs {
    /// Control projection (0 scans phi-r, 1 scans phi-l).
    #[arg(long, default_value_t = 0)]
    pub project: u8,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phi_start: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::TAU)]
    pub phi_end: f64,
    #[arg(long, default_value_t = 32)]
    pub steps: usize,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TomoCountsArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::PI)]
    pub phi_r: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub phi_l: f64,
    /// Post-select the control and measure only the target; both qubits otherwise.
    #[arg(long)]
    pub project: Option<u8>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ml,
    Linear,
}

impl From<MethodArg> for sagnac::tomo::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ml => sagnac::tomo::Method::MaxLikelihood,
            MethodArg::Linear => sagnac::tomo::Method::Linear,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TomoArgs {
    /// Counts JSON as written by `tomo-counts --format json`.
    #[arg(long)]
    pub input: PathBuf,
    /// Target for the fidelity: one state name per qubit, comma separated
    /// (zero, one, plus, minus, plus-i, minus-i).
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Ml)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// he, xi, dicke or phased-dicke.
    #[arg(long)]
    pub name: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    /// Circuit JSON: `{"input": …, "elements": […], "target": …}`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

fn source(sample: bool, measured: bool) -> Source {
    if measured {
        Source::Measured
    } else if sample {
        Source::Sampled
    } else {
        Source::Model
    }
}

impl Command {
    /// Request and output settings of a direct subcommand; `None` for `run`.
    pub fn request(&self) -> Option<(Request, OutputArgs)> {
        Some(match self {
            Command::DickeTable(a) => (
                Request::DickeTable {
                    sampling: a.sampling.sampling(),
                    source: source(a.sample, a.measured),
                },
                a.output.clone(),
            ),
            Command::DickeWitness(a) => (
                Request::DickeWitness {
                    sampling: a.sampling.sampling(),
                    source: source(a.sample, a.measured),
                },
                a.output.clone(),
            ),
            Command::Wmult(a) => (
                Request::Wmult {
                    sampling: a.sampling.sampling(),
                    source: source(a.sample, a.measured),
                },
                a.output.clone(),
            ),
            Command::CphaseTruth(a) => (
                Request::CphaseTruth {
                    phi_r: a.phi_r,
                    phi_l: a.phi_l,
                },
                a.output.clone(),
            ),
            Command::CphaseFringe(a) => (
                Request::CphaseFringe {
                    sampling: a.sampling.sampling(),
                    project: a.project,
                    phi_start: a.phi_start,
                    phi_end: a.phi_end,
                    steps: a.steps,
                },
                a.output.clone(),
            ),
            Command::TomoCounts(a) => (
                Request::TomoCounts {
                    sampling: a.sampling.sampling(),
                    phi_r: a.phi_r,
                    phi_l: a.phi_l,
                    project: a.project,
                },
                a.output.clone(),
            ),
            Command::Tomo(a) => (
                Request::Tomo {
                    input: a.input.clone(),
                    target: a.target.clone(),
                    method: a.method.into(),
                },
                a.output.clone(),
            ),
            Command::State(a) => (
                Request::State {
                    name: a.name.clone(),
                    gamma: a.gamma,
                    delta: a.delta,
                    noise: a.noise,
                },
                a.output.clone(),
            ),
            Command::Circuit(a) => (
                Request::Circuit {
                    config: a.config.clone(),
                },
                a.output.clone(),
            ),
            Command::Run(_) => return None,
        })
    }
}
