use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::grid::Scale;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "qpos", version, about = "Entanglement-enhanced positioning: accuracy, loss and protocol simulations")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form accuracies of one state family.
    Accuracy(AccuracyArgs),
    /// Ordering of entangled, group and unentangled states over (M, η).
    RegionMap(RegionMapArgs),
    /// Gain Λ of entangled over unentangled states over (M, η).
    GainSurface(GridArgs),
    /// Seeded simulation of runs compared with the closed forms.
    Montecarlo(MonteCarloArgs),
    /// Kraus map against the beam-splitter construction.
    KrausVerify(KrausArgs),
    /// Crypto-positioning sessions.
    Protocol(ProtocolArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Accuracy(_) => "accuracy",
            Command::RegionMap(_) => "region-map",
            Command::GainSurface(_) => "gain-surface",
            Command::Montecarlo(_) => "montecarlo",
            Command::KrausVerify(_) => "kraus-verify",
            Command::Protocol(_) => "protocol",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// coherent (classical) pulses
    Cl,
    /// maximally entangled
    En,
    /// unentangled single photons
    Un,
    /// first Q channels entangled
    Partial,
    /// G groups of K entangled photons
    Group,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    /// Channels.
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Photons per channel (en) or mean photon number (cl).
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    /// Entangled channels (partial).
    #[arg(long = "Q")]
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    /// Groups (group).
    #[arg(long = "G")]
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    /// Photons per group (group).
    #[arg(long = "K")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Δω²/ΔΩ² (group).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct AccuracyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Efficiencies, comma separated; one row each.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
    /// Single-photon time width Δτ.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dtau: Option<f64>,
    /// Attempted runs.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GridArgs {
    #[arg(long = "M-min")]
    #[serde(rename = "M-min", skip_serializing_if = "Option::is_none")]
    pub m_min: Option<f64>,
    #[arg(long = "M-max")]
    #[serde(rename = "M-max", skip_serializing_if = "Option::is_none")]
    pub m_max: Option<f64>,
    #[arg(long = "M-points")]
    #[serde(rename = "M-points", skip_serializing_if = "Option::is_none")]
    pub m_points: Option<usize>,
    #[arg(long = "M-scale", value_enum)]
    #[serde(rename = "M-scale", skip_serializing_if = "Option::is_none")]
    pub m_scale: Option<Scale>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_min: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_points: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_scale: Option<Scale>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct RegionMapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Photons per group.
    #[arg(long = "K")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Δω²/ΔΩ².
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Efficiencies, comma separated; one row each.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dtau: Option<f64>,
    /// True arrival-time offset being estimated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct KrausArgs {
    /// Efficiencies, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<f64>>,
    /// Fock-space truncation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// Largest photon number in the compared inputs (default dim − 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_photons: Option<usize>,
    /// Random states used for the trace check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolMode {
    /// only Alice learns her position
    One,
    /// both parties, with eavesdropper checks
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EveArg {
    None,
    MeasureTime,
    MeasureFrequency,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ProtocolArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ProtocolMode>,
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dtau: Option<f64>,
    /// One-way delay between Alice and Bob.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    /// Copies per session (r).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sessions: Option<usize>,
    /// Frequency comparison bin width (default σ_ω/8).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq_bin: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve: Option<EveArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intercept_fraction: Option<f64>,
    /// Period of the public time frame.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame_period: Option<f64>,
}
