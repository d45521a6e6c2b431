//! Command-line wiring: one binary, five subcommands, a shared TOML
//! configuration with flag overrides, and stable exit codes.
//!
//! Exit codes: 0 ok, 2 input schema, 3 estimation/analysis, 4 config,
//! 5 internal.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::econometrics::EconError;
use crate::ideology::IdeologyError;
use crate::ingest::IngestError;
use crate::netsci::{CommunityMethod, NetError};
use crate::signaling::GammaMode;
use crate::spatial::SpatialError;
use config::{InputsSection, PoliticiansSection, RunConfig, SimulationSection};

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Estimation(String),
    Config(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Estimation(_) => 3,
            CliError::Config(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Schema(m)
            | CliError::Estimation(m)
            | CliError::Config(m)
            | CliError::Internal(m) => m,
        }
    }
}

impl From<IdeologyError> for CliError {
    fn from(e: IdeologyError) -> Self {
        match e {
            IdeologyError::Schema(_) | IdeologyError::Csv(_) => CliError::Schema(e.to_string()),
            IdeologyError::InsufficientData { .. }
            | IdeologyError::DegenerateRegressor { .. }
            | IdeologyError::DegenerateRange => CliError::Estimation(e.to_string()),
            IdeologyError::Io(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Schema { .. }
            | IngestError::UnknownPolitician { .. }
            | IngestError::DuplicateDyad { .. }
            | IngestError::InvalidPeriod { .. } => CliError::Schema(e.to_string()),
            IngestError::EmptyGroup(_) => CliError::Estimation(e.to_string()),
            IngestError::Io(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<EconError> for CliError {
    fn from(e: EconError) -> Self {
        CliError::Estimation(e.to_string())
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        CliError::Estimation(e.to_string())
    }
}

impl From<SpatialError> for CliError {
    fn from(e: SpatialError) -> Self {
        CliError::Estimation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "agora",
    about = "Spatial-voting signaling simulator and polarization analysis toolkit",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct CommonOpts {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Correlation threshold for network construction.
    #[arg(long)]
    theta: Option<f64>,
    /// Community detection method: louvain or edge-betweenness.
    #[arg(long)]
    method: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate politicians' perceived ideology from an opinion survey.
    EstimateIdeology {
        #[command(flatten)]
        common: CommonOpts,
        /// Long-format survey CSV (respondent_id,self_ideology,politician_id,opinion).
        #[arg(long)]
        survey: Option<PathBuf>,
        /// Output CSV (politician_id,beta,beta_se,mu,sigma).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the calibrated signaling simulation (optionally a gamma sweep).
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// Signal weight omega.
        #[arg(long)]
        omega: Option<f64>,
        /// Messages emitted per politician.
        #[arg(long)]
        messages: Option<u32>,
        /// Homogeneous authenticity level (sets gamma mode to homogeneous).
        #[arg(long)]
        gamma: Option<f64>,
        /// Authenticity mode: homogeneous or heterogeneous.
        #[arg(long)]
        gamma_mode: Option<String>,
        /// Comma-separated homogeneous gamma levels to sweep.
        #[arg(long)]
        gamma_sweep: Option<String>,
        /// Politician table CSV (id,mu,sigma[,coalition][,gamma]).
        #[arg(long)]
        politicians: Option<PathBuf>,
    },
    /// Ingest a panel and run summaries, networks and the regression table.
    Analyze {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        likes: Option<PathBuf>,
        #[arg(long)]
        votes: Option<PathBuf>,
        #[arg(long)]
        following: Option<PathBuf>,
        #[arg(long)]
        coalitions: Option<PathBuf>,
        /// Optional period table (label,votes_start,votes_end,likes_date).
        #[arg(long)]
        periods: Option<PathBuf>,
    },
    /// Ingest a panel and write summary statistics only.
    Summarize {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        likes: Option<PathBuf>,
        #[arg(long)]
        votes: Option<PathBuf>,
        #[arg(long)]
        following: Option<PathBuf>,
        #[arg(long)]
        coalitions: Option<PathBuf>,
        /// Output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and score the correlation network of one interaction matrix.
    Network {
        #[command(flatten)]
        common: CommonOpts,
        /// Interaction matrix CSV (liker_id,sender_id,likes).
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

fn parse_method(s: &str) -> Result<CommunityMethod, CliError> {
    match s {
        "louvain" => Ok(CommunityMethod::Louvain),
        "edge-betweenness" | "edge_betweenness" => Ok(CommunityMethod::EdgeBetweenness),
        other => Err(CliError::Config(format!(
            "unknown method `{other}` (expected louvain or edge-betweenness)"
        ))),
    }
}

fn parse_gamma_mode(s: &str) -> Result<Option<GammaMode>, CliError> {
    match s {
        "heterogeneous" => Ok(Some(GammaMode::Heterogeneous { mean: 0.1, sd: 0.1 })),
        "homogeneous" => Ok(Some(GammaMode::Homogeneous { gamma: 0.0 })),
        other => Err(CliError::Config(format!(
            "unknown gamma mode `{other}` (expected homogeneous or heterogeneous)"
        ))),
    }
}

fn parse_sweep(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad gamma sweep value `{p}`")))
        })
        .collect()
}

/// Turns flags into a partial config that overrides the file.
fn overrides_from(common: &CommonOpts) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        seed: common.seed,
        theta: common.theta,
        method: common.method.as_deref().map(parse_method).transpose()?,
        out_dir: common.out_dir.clone(),
        ..Default::default()
    })
}

fn load_merged(common: &CommonOpts, overrides: RunConfig) -> Result<RunConfig, CliError> {
    let base = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    Ok(base.merged_under(overrides))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::EstimateIdeology {
            common,
            survey,
            out,
        } => {
            let mut overrides = overrides_from(&common)?;
            overrides.inputs.survey = survey;
            overrides.out_file = out;
            let resolved = config::resolve(load_merged(&common, overrides)?)?;
            commands::cmd_estimate_ideology(&resolved)
        }
        Command::Simulate {
            common,
            omega,
            messages,
            gamma,
            gamma_mode,
            gamma_sweep,
            politicians,
        } => {
            let mut overrides = overrides_from(&common)?;
            let mode = match (gamma, gamma_mode.as_deref()) {
                (Some(_), Some("heterogeneous")) => {
                    return Err(CliError::Config(
                        "--gamma conflicts with --gamma-mode heterogeneous".into(),
                    ))
                }
                (Some(g), _) => Some(GammaMode::Homogeneous { gamma: g }),
                (None, Some(s)) => parse_gamma_mode(s)?,
                (None, None) => None,
            };
            overrides.simulation = SimulationSection {
                omega,
                messages,
                vote_rule: None,
                gamma_mode: mode,
                gamma_sweep: gamma_sweep.as_deref().map(parse_sweep).transpose()?,
            };
            overrides.politicians = PoliticiansSection {
                file: politicians,
                coalitions: None,
                table: None,
            };
            let resolved = config::resolve(load_merged(&common, overrides)?)?;
            commands::cmd_simulate(&resolved)
        }
        Command::Analyze {
            common,
            likes,
            votes,
            following,
            coalitions,
            periods,
        } => {
            let mut overrides = overrides_from(&common)?;
            overrides.inputs = InputsSection {
                likes,
                votes,
                following,
                coalitions,
                periods,
                ..Default::default()
            };
            let resolved = config::resolve(load_merged(&common, overrides)?)?;
            commands::cmd_analyze(&resolved)
        }
        Command::Summarize {
            common,
            likes,
            votes,
            following,
            coalitions,
            out,
        } => {
            let mut overrides = overrides_from(&common)?;
            overrides.inputs = InputsSection {
                likes,
                votes,
                following,
                coalitions,
                ..Default::default()
            };
            overrides.out_file = out;
            let resolved = config::resolve(load_merged(&common, overrides)?)?;
            commands::cmd_summarize(&resolved)
        }
        Command::Network { common, matrix } => {
            let mut overrides = overrides_from(&common)?;
            overrides.inputs.matrix = matrix;
            let resolved = config::resolve(load_merged(&common, overrides)?)?;
            commands::cmd_network(&resolved)
        }
    }
}

/// Parses argv, runs the selected command, and returns the process exit
/// code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exits
            let _ = e.print();
            return if e.use_stderr() { 4 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
