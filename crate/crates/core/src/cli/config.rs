//! Run configuration: TOML file, flag overrides, and the resolved manifest
//! echoed next to every command's outputs.
//!
//! Resolution order is flags over config file over built-in defaults. The
//! manifest is itself a valid config with every field materialized (seed
//! included) and the politician table inlined, so re-running a command
//! against the manifest reproduces the outputs byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::calibration;
use crate::netsci::CommunityMethod;
use crate::signaling::{GammaMode, SimulationConfig};
use crate::spatial::{make_electorate, ElectorateSpec, Politician, VoteRule};

use super::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_THETA: f64 = 0.1;
pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_MESSAGES: u32 = 500;
pub const DEFAULT_COALITIONS: u32 = 3;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<CommunityMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_file: Option<PathBuf>,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub electorate: Option<ElectorateSpec>,
    #[serde(default)]
    pub politicians: PoliticiansSection,
    #[serde(default)]
    pub inputs: InputsSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub messages: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vote_rule: Option<VoteRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_mode: Option<GammaMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_sweep: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PoliticiansSection {
    /// CSV with columns id,mu,sigma and optional coalition,gamma.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    /// Coalition count when the file has no coalition column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalitions: Option<u32>,
    /// Inline cast; written by manifests, wins over `file`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Politician>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub survey: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub likes: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub votes: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub following: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalitions: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Later values win field by field.
    pub fn merged_under(self, overrides: RunConfig) -> RunConfig {
        RunConfig {
            seed: overrides.seed.or(self.seed),
            theta: overrides.theta.or(self.theta),
            method: overrides.method.or(self.method),
            out_dir: overrides.out_dir.or(self.out_dir),
            out_file: overrides.out_file.or(self.out_file),
            simulation: SimulationSection {
                omega: overrides.simulation.omega.or(self.simulation.omega),
                messages: overrides.simulation.messages.or(self.simulation.messages),
                vote_rule: overrides.simulation.vote_rule.or(self.simulation.vote_rule),
                gamma_mode: overrides.simulation.gamma_mode.or(self.simulation.gamma_mode),
                gamma_sweep: overrides
                    .simulation
                    .gamma_sweep
                    .or(self.simulation.gamma_sweep),
            },
            electorate: overrides.electorate.or(self.electorate),
            politicians: PoliticiansSection {
                file: overrides.politicians.file.or(self.politicians.file),
                coalitions: overrides
                    .politicians
                    .coalitions
                    .or(self.politicians.coalitions),
                table: overrides.politicians.table.or(self.politicians.table),
            },
            inputs: InputsSection {
                survey: overrides.inputs.survey.or(self.inputs.survey),
                likes: overrides.inputs.likes.or(self.inputs.likes),
                votes: overrides.inputs.votes.or(self.inputs.votes),
                following: overrides.inputs.following.or(self.inputs.following),
                coalitions: overrides.inputs.coalitions.or(self.inputs.coalitions),
                periods: overrides.inputs.periods.or(self.inputs.periods),
                matrix: overrides.inputs.matrix.or(self.inputs.matrix),
            },
        }
    }
}

/// A fully materialized configuration: every knob concrete, the cast
/// loaded, ready to run and to echo as a manifest.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    pub theta: f64,
    pub method: CommunityMethod,
    pub out_dir: PathBuf,
    pub out_file: Option<PathBuf>,
    pub omega: f64,
    pub messages: u32,
    pub vote_rule: VoteRule,
    pub gamma_mode: GammaMode,
    pub gamma_sweep: Vec<f64>,
    pub electorate: ElectorateSpec,
    pub politicians: Vec<Politician>,
    pub coalitions: u32,
    pub inputs: InputsSection,
}

impl Resolved {
    pub fn simulation_config(&self) -> SimulationConfig {
        SimulationConfig {
            omega: self.omega,
            messages_per_politician: self.messages,
            seed: self.seed,
            gamma_mode: self.gamma_mode,
            vote_rule: self.vote_rule,
        }
    }

    /// The manifest: a config that reproduces this resolution exactly.
    pub fn manifest(&self) -> RunConfig {
        RunConfig {
            seed: Some(self.seed),
            theta: Some(self.theta),
            method: Some(self.method),
            out_dir: Some(self.out_dir.clone()),
            out_file: self.out_file.clone(),
            simulation: SimulationSection {
                omega: Some(self.omega),
                messages: Some(self.messages),
                vote_rule: Some(self.vote_rule),
                gamma_mode: Some(self.gamma_mode),
                gamma_sweep: if self.gamma_sweep.is_empty() {
                    None
                } else {
                    Some(self.gamma_sweep.clone())
                },
            },
            electorate: Some(self.electorate.clone()),
            politicians: PoliticiansSection {
                file: None,
                coalitions: Some(self.coalitions),
                table: Some(self.politicians.clone()),
            },
            inputs: self.inputs.clone(),
        }
    }

    pub fn manifest_toml(&self) -> Result<String, CliError> {
        toml::to_string(&self.manifest())
            .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))
    }
}

/// Validates and materializes a merged config.
pub fn resolve(config: RunConfig) -> Result<Resolved, CliError> {
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let theta = config.theta.unwrap_or(DEFAULT_THETA);
    if !(-1.0..=1.0).contains(&theta) {
        return Err(CliError::Config(format!(
            "theta must lie in [-1, 1], got {theta}"
        )));
    }
    let omega = config.simulation.omega.unwrap_or(DEFAULT_OMEGA);
    if omega < 0.0 || !omega.is_finite() {
        return Err(CliError::Config(format!(
            "omega must be non-negative, got {omega}"
        )));
    }
    let messages = config.simulation.messages.unwrap_or(DEFAULT_MESSAGES);
    if messages == 0 {
        return Err(CliError::Config("messages must be at least 1".into()));
    }
    let gamma_mode = config.simulation.gamma_mode.unwrap_or_default();
    match gamma_mode {
        GammaMode::Homogeneous { gamma } if gamma < 0.0 || !gamma.is_finite() => {
            return Err(CliError::Config(format!(
                "gamma must be non-negative, got {gamma}"
            )));
        }
        GammaMode::Heterogeneous { sd, .. } if sd < 0.0 => {
            return Err(CliError::Config("gamma sd must be non-negative".into()));
        }
        _ => {}
    }
    let gamma_sweep = config.simulation.gamma_sweep.clone().unwrap_or_default();
    if gamma_sweep.iter().any(|&g| g < 0.0 || !g.is_finite()) {
        return Err(CliError::Config(
            "gamma sweep values must be non-negative".into(),
        ));
    }

    let coalitions = config.politicians.coalitions.unwrap_or(DEFAULT_COALITIONS);
    if coalitions == 0 {
        return Err(CliError::Config("coalitions must be at least 1".into()));
    }
    let politicians = if let Some(table) = &config.politicians.table {
        if table.is_empty() {
            return Err(CliError::Config("politician table is empty".into()));
        }
        for p in table {
            Politician::new(p.id.clone(), p.mu, p.sigma, p.coalition, p.gamma)
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        table.clone()
    } else if let Some(file) = &config.politicians.file {
        require_exists(file)?;
        calibration::read_politicians_file(file, coalitions)
            .map_err(CliError::Config)?
    } else {
        calibration::default_politicians()
    };

    let electorate = config
        .electorate
        .clone()
        .unwrap_or_else(calibration::default_electorate_spec);
    make_electorate(&electorate).map_err(|e| CliError::Config(e.to_string()))?;

    Ok(Resolved {
        seed,
        theta,
        method: config.method.unwrap_or_default(),
        out_dir: config.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        out_file: config.out_file,
        omega,
        messages,
        vote_rule: config.simulation.vote_rule.unwrap_or_default(),
        gamma_mode,
        gamma_sweep,
        electorate,
        politicians,
        coalitions,
        inputs: config.inputs,
    })
}

pub fn require_exists(path: &Path) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "input path does not exist: {}",
            path.display()
        )))
    }
}
