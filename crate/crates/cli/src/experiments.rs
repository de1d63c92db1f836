//! Experiment requests and the artifacts they produce.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use sagnac::cphase::{
    fit_fringe, fringe_scan, phase_grid, project_control, sagnac_evolve, truth_table, FringeFit,
    FringePoint, FringeScan, PathMode, SagnacConfig,
};
use sagnac::elements::{propagate, ElementSpec, OpticalElement};
use sagnac::hilbert::{tensor, DensityMatrix, Register, StateVector};
use sagnac::states::{
    add_white_noise, dicke_circuit, named_qubit_state, named_state, phased_dicke, white_noise,
    PhaseParams,
};
use sagnac::tomo::{
    fidelity_report, interleaved, linear_reconstruct, ml_reconstruct, simulate, Method,
    ReconstructionResult, TomographyInput,
};
use sagnac::witness::{
    correlation_table, four_body_table, measured_four_body_table, measured_pair_table,
    sampled_correlation_table, sampled_four_body_table, structural_witness_from_table,
    wmult_from_tables, CorrelationTable, WitnessForm, WitnessReport,
};

use crate::error::{CliError, CliResult};
use crate::output::{sig6, to_csv, to_json, Format};

pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "SAGNAC_SEED";

/// Noise weight, shots per setting and base seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub noise: f64,
    pub shots: u64,
    pub seed: u64,
}

impl Sampling {
    fn validate(&self) -> CliResult<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(CliError::usage(format!(
                "noise p = {} is outside [0, 1]",
                self.noise
            )));
        }
        if self.shots == 0 {
            return Err(CliError::usage("shots must be positive"));
        }
        Ok(())
    }
}

/// Where correlation values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Exact expectations of the noisy model, sigmas predicted for `shots`.
    Model,
    /// Seeded multinomial counts of the noisy model.
    Sampled,
    /// The built-in measured correlation values.
    Measured,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    DickeTable {
        sampling: Sampling,
        source: Source,
    },
    DickeWitness {
        sampling: Sampling,
        source: Source,
    },
    Wmult {
        sampling: Sampling,
        source: Source,
    },
    CphaseTruth {
        phi_r: f64,
        phi_l: f64,
    },
    CphaseFringe {
        sampling: Sampling,
        project: u8,
        phi_start: f64,
        phi_end: f64,
        steps: usize,
    },
    TomoCounts {
        sampling: Sampling,
        phi_r: f64,
        phi_l: f64,
        project: Option<u8>,
    },
    Tomo {
        input: PathBuf,
        target: Option<String>,
        method: Method,
    },
    State {
        name: String,
        gamma: f64,
        delta: f64,
        noise: f64,
    },
    Circuit {
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct WmultOutput {
    pub collective: WitnessReport<f64>,
    pub expanded: WitnessReport<f64>,
    pub note: &'static str,
}

pub const WMULT_NOTE: &str =
    "collective: expectation of 2 + (J2x + J2y - J4x - J4y)/6 + 31/12 J2z - 7/12 J4z, \
whose exact pair/four-body expansion has constant 21/8; expanded: the literal expansion \
(2 - 2Sxx - 2Syy + Szz - 2XXXX - 2YYYY - 7ZZZZ)/8 with unnormalized structure factors. \
The two differ by 19/8 on every state.";

#[derive(Debug, Clone, Serialize)]
pub struct TruthOut {
    pub control: PathMode,
    pub phase: f64,
    pub probability: f64,
    /// `[re₀, im₀, re₁, im₁]` of the conditional target state.
    pub target: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FringeOut {
    pub project: u8,
    pub shots: u64,
    pub seed: u64,
    pub noise: f64,
    pub points: Vec<FringePoint<f64>>,
    /// `a + b cos φ + c sin φ` fitted on counts.
    pub fit: Option<FringeFit<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoOut {
    pub method: Method,
    pub qubits: Register,
    pub dim: usize,
    /// Row-major interleaved `[re, im, …]`.
    pub rho: Vec<f64>,
    pub fidelity: Option<f64>,
    pub target: Option<String>,
    pub log_likelihood: Option<f64>,
    pub min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateOut {
    pub name: String,
    pub qubits: Register,
    pub noise: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
    pub purity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircuitOut {
    pub qubits: Register,
    pub amplitudes: Vec<f64>,
    /// Product of beam-stop transmission probabilities.
    pub success_probability: f64,
    pub target: Option<String>,
    pub fidelity: Option<f64>,
}

/// Circuit definition read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub input: InputSpec,
    /// Register for a `bits` input; the Dicke register when absent.
    #[serde(default)]
    pub register: Option<Register>,
    pub elements: Vec<ElementSpec>,
    #[serde(default)]
    pub target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Named(String),
    Bits { bits: String },
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Table(CorrelationTable<f64>),
    Witness(WitnessReport<f64>),
    Wmult(WmultOutput),
    Truth(Vec<TruthOut>),
    Fringe(FringeOut),
    Counts(TomographyInput),
    Rho(RhoOut),
    State(StateOut),
    Circuit(CircuitOut),
}

impl Artifact {
    pub fn default_format(&self) -> Format {
        match self {
            Artifact::Table(_) | Artifact::Truth(_) | Artifact::Fringe(_) | Artifact::Counts(_) => {
                Format::Csv
            }
            _ => Format::Json,
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match (self, format) {
            (Artifact::Table(t), Format::Csv) => to_csv(
                &["operator", "qubits", "settings", "value", "sigma"],
                t.rows.iter().map(|r| {
                    vec![
                        r.operator.clone(),
                        r.qubits.clone(),
                        r.settings.clone(),
                        sig6(r.value),
                        sig6(r.sigma),
                    ]
                }),
            ),
            (Artifact::Table(t), Format::Json) => to_json(&t.rows),
            (Artifact::Truth(rows), Format::Csv) => to_csv(
                &[
                    "control",
                    "phase",
                    "probability",
                    "target0_re",
                    "target0_im",
                    "target1_re",
                    "target1_im",
                ],
                rows.iter().map(|r| {
                    let label = match r.control {
                        PathMode::R => "r",
                        PathMode::L => "l",
                    };
                    let mut v = vec![label.to_string(), sig6(r.phase), sig6(r.probability)];
                    v.extend(r.target.iter().map(|&x| sig6(x)));
                    v
                }),
            ),
            (Artifact::Truth(rows), Format::Json) => to_json(rows),
            (Artifact::Fringe(f), Format::Csv) => to_csv(
                &["phi", "probability", "counts", "sigma"],
                f.points.iter().map(|p| {
                    vec![
                        sig6(p.phi),
                        sig6(p.probability),
                        p.counts.to_string(),
                        sig6(p.sigma),
                    ]
                }),
            ),
            (Artifact::Fringe(f), Format::Json) => to_json(f),
            (Artifact::Counts(input), Format::Csv) => to_csv(
                &["setting", "outcome", "count"],
                input.records.iter().flat_map(|rec| {
                    rec.outcome_counts
                        .iter()
                        .map(|(o, n)| vec![rec.setting.clone(), o.clone(), n.to_string()])
                        .collect::<Vec<_>>()
                }),
            ),
            (Artifact::Counts(input), Format::Json) => to_json(input),
            (Artifact::Witness(w), Format::Json) => to_json(w),
            (Artifact::Wmult(w), Format::Json) => to_json(w),
            (Artifact::Rho(r), Format::Json) => to_json(r),
            (Artifact::State(s), Format::Json) => to_json(s),
            (Artifact::Circuit(c), Format::Json) => to_json(c),
            (_, Format::Csv) => Err(CliError::usage("this artifact is only available as JSON")),
        }
    }
}

fn flat(v: &[sagnac::scalar::C<f64>]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn pair_table(s: &Sampling, source: Source) -> CliResult<CorrelationTable<f64>> {
    Ok(match source {
        Source::Measured => measured_pair_table(),
        Source::Model => correlation_table(&add_white_noise(&phased_dicke(), s.noise)?)?
            .with_shot_noise(s.shots)?,
        Source::Sampled => {
            sampled_correlation_table(&add_white_noise(&phased_dicke(), s.noise)?, s.shots, s.seed)?
        }
    })
}

fn four_table(s: &Sampling, source: Source) -> CliResult<CorrelationTable<f64>> {
    Ok(match source {
        Source::Measured => measured_four_body_table(),
        Source::Model => four_body_table(&add_white_noise(&phased_dicke(), s.noise)?)?
            .with_shot_noise(s.shots)?,
        Source::Sampled => {
            sampled_four_body_table(&add_white_noise(&phased_dicke(), s.noise)?, s.shots, s.seed)?
        }
    })
}

fn check_phase(name: &str, phi: f64) -> CliResult<()> {
    if phi.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{name} must be finite")))
    }
}

fn check_project(p: u8) -> CliResult<()> {
    if p > 1 {
        return Err(CliError::usage(format!("projection {p} is not 0 or 1")));
    }
    Ok(())
}

pub fn execute(req: &Request) -> CliResult<Artifact> {
    match req {
        Request::DickeTable { sampling, source } => {
            sampling.validate()?;
            Ok(Artifact::Table(pair_table(sampling, *source)?))
        }
        Request::DickeWitness { sampling, source } => {
            sampling.validate()?;
            Ok(Artifact::Witness(structural_witness_from_table(
                &pair_table(sampling, *source)?,
            )?))
        }
        Request::Wmult { sampling, source } => {
            sampling.validate()?;
            let pairs = pair_table(sampling, *source)?;
            // distinct streams for the two tables when sampling
            let four_sampling = Sampling {
                seed: sampling.seed.wrapping_add(1),
                ..*sampling
            };
            let four = four_table(&four_sampling, *source)?;
            Ok(Artifact::Wmult(WmultOutput {
                collective: wmult_from_tables(&pairs, Some(&four), WitnessForm::Collective)?,
                expanded: wmult_from_tables(&pairs, Some(&four), WitnessForm::Expanded)?,
                note: WMULT_NOTE,
            }))
        }
        Request::CphaseTruth { phi_r, phi_l } => {
            check_phase("phi-r", *phi_r)?;
            check_phase("phi-l", *phi_l)?;
            let rows = truth_table(*phi_r, *phi_l)?
                .into_iter()
                .map(|r| TruthOut {
                    control: if r.control == 0 {
                        PathMode::R
                    } else {
                        PathMode::L
                    },
                    phase: r.phase,
                    probability: r.probability,
                    target: flat(r.target.amplitudes()),
                })
                .collect();
            Ok(Artifact::Truth(rows))
        }
        Request::CphaseFringe {
            sampling,
            project,
            phi_start,
            phi_end,
            steps,
        } => {
            sampling.validate()?;
            check_project(*project)?;
            check_phase("phi-start", *phi_start)?;
            check_phase("phi-end", *phi_end)?;
            if *steps == 0 {
                return Err(CliError::usage("steps must be positive"));
            }
            let scan = FringeScan {
                project: *project,
                phis: phase_grid(*phi_start, *phi_end, *steps),
                shots: sampling.shots,
                seed: sampling.seed,
                noise: sampling.noise,
            };
            let points = fringe_scan(&scan)?;
            let data: Vec<(f64, f64)> = points.iter().map(|p| (p.phi, p.counts as f64)).collect();
            Ok(Artifact::Fringe(FringeOut {
                project: *project,
                shots: sampling.shots,
                seed: sampling.seed,
                noise: sampling.noise,
                fit: fit_fringe(&data).ok(),
                points,
            }))
        }
        Request::TomoCounts {
            sampling,
            phi_r,
            phi_l,
            project,
        } => {
            sampling.validate()?;
            check_phase("phi-r", *phi_r)?;
            check_phase("phi-l", *phi_l)?;
            let out = sagnac_evolve(&SagnacConfig::new(*phi_r, *phi_l, PathMode::R))?;
            let state = match project {
                Some(p) => {
                    check_project(*p)?;
                    project_control(&out, *p)?.0
                }
                None => out,
            };
            let rho = white_noise(&DensityMatrix::from_pure(&state), sampling.noise)?;
            Ok(Artifact::Counts(simulate(
                &rho,
                sampling.shots,
                sampling.seed,
            )?))
        }
        Request::Tomo {
            input,
            target,
            method,
        } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", input.display())))?;
            let data: TomographyInput = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("parsing {}: {e}", input.display())))?;
            let mut result: ReconstructionResult<f64> = match method {
                Method::Linear => linear_reconstruct(&data)?,
                Method::MaxLikelihood => ml_reconstruct(&data)?,
            };
            if let Some(name) = target {
                let t = tomo_target(name, &data.qubits)?;
                fidelity_report(&mut result, &t)?;
            }
            let diag = result.diagnostics.as_ref();
            Ok(Artifact::Rho(RhoOut {
                method: result.method,
                qubits: result.rho.register().clone(),
                dim: result.rho.register().dim(),
                rho: interleaved(result.rho.matrix()),
                fidelity: result.fidelity_vs_target,
                target: target.clone(),
                log_likelihood: result.log_likelihood,
                min_eigenvalue: result.rho.min_eigenvalue(),
                converged: diag.map(|d| d.converged),
                iterations: diag.map(|d| d.iterations),
            }))
        }
        Request::State {
            name,
            gamma,
            delta,
            noise,
        } => {
            check_phase("gamma", *gamma)?;
            check_phase("delta", *delta)?;
            let s = named_state(name, PhaseParams::new(*gamma, *delta))
                .map_err(|e| CliError::usage(e.to_string()))?;
            let rho = add_white_noise(&s, *noise).map_err(|e| CliError::usage(e.to_string()))?;
            let (amplitudes, matrix) = if *noise == 0.0 {
                (Some(flat(s.amplitudes())), None)
            } else {
                (None, Some(interleaved(rho.matrix())))
            };
            Ok(Artifact::State(StateOut {
                name: name.clone(),
                qubits: s.register().clone(),
                noise: *noise,
                amplitudes,
                rho: matrix,
                purity: rho.purity(),
            }))
        }
        Request::Circuit { config } => run_circuit(config.as_ref()),
    }
}

/// Comma-separated single-qubit state names, one per register qubit.
fn tomo_target(names: &str, reg: &Register) -> CliResult<StateVector<f64>> {
    let parts: Vec<&str> = names.split(',').map(str::trim).collect();
    if parts.len() != reg.len() {
        return Err(CliError::usage(format!(
            "target `{names}` names {} qubit state(s) for a {}-qubit register",
            parts.len(),
            reg.len()
        )));
    }
    let states = parts
        .iter()
        .zip(reg.qubits())
        .map(|(n, &q)| named_qubit_state(n, q).map_err(|e| CliError::usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(tensor(&states)?)
}

fn run_circuit(config: Option<&PathBuf>) -> CliResult<Artifact> {
    let (input, elements, target): (StateVector<f64>, Vec<OpticalElement<f64>>, Option<String>) =
        match config {
            None => (
                named_state("xi", PhaseParams::default())?,
                dicke_circuit(true),
                Some("phased-dicke".into()),
            ),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
                let cfg: CircuitConfig = serde_json::from_str(&text)
                    .map_err(|e| CliError::usage(format!("parsing {}: {e}", path.display())))?;
                let usage = |e: sagnac::Error| CliError::usage(e.to_string());
                let input = match (&cfg.input, cfg.register) {
                    (InputSpec::Named(n), None) => {
                        named_state(n, PhaseParams::default()).map_err(usage)?
                    }
                    (InputSpec::Named(_), Some(_)) => {
                        return Err(CliError::usage("`register` applies only to a `bits` input"));
                    }
                    (InputSpec::Bits { bits }, reg) => {
                        StateVector::from_bits(reg.unwrap_or_else(Register::dicke), bits)
                            .map_err(usage)?
                    }
                };
                (
                    input,
                    cfg.elements.iter().map(ElementSpec::to_element).collect(),
                    cfg.target,
                )
            }
        };
    let (out, success_probability) = propagate(&elements, &input)?;
    let fidelity = match &target {
        Some(name) => {
            let t = named_state(name, PhaseParams::default())
                .map_err(|e| CliError::usage(e.to_string()))?;
            Some(out.fidelity(&t.relabel(out.register().clone())?)?)
        }
        None => None,
    };
    Ok(Artifact::Circuit(CircuitOut {
        qubits: out.register().clone(),
        amplitudes: flat(out.amplitudes()),
        success_probability,
        target,
        fidelity,
    }))
}
