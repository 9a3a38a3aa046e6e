//! Experiment configuration. Every report echoes the config it was produced
//! from, and feeding that config back reproduces the report byte for byte.

use bellframe::entanglement::{BellFlavor, CorrelationSource, Message};
use bellframe::qkd::ProtocolVariant;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    GroupTable,
    Entangler,
    Bb84,
    DenseCode,
    Mixedness,
    Directions,
    SourceRate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

/// Default half-width, in radians, of the uniform phase-error window.
pub const DEFAULT_THETA_HALF_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<ProtocolVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<BellFlavor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<Message>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<CorrelationSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_range: Option<[f64; 2]>,
    /// Evenly spaced θ₁ grid instead of random sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<u64>,
    #[serde(default)]
    pub eve: bool,
    #[serde(default)]
    pub flip_prob: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice_state: Option<String>,
    #[serde(default)]
    pub log_rounds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_pair_prob: Option<f64>,
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            seed: 1,
            trials: default_trials(command),
            variant: None,
            flavor: None,
            message: None,
            source: None,
            theta1: None,
            theta2: None,
            theta_range: None,
            grid: None,
            eve: false,
            flip_prob: 0.0,
            alice_state: None,
            log_rounds: false,
            pair_prob: None,
            double_pair_prob: None,
            parallel: false,
            format: OutputFormat::Json,
        }
    }

    pub fn theta_range_or_default(&self) -> [f64; 2] {
        self.theta_range
            .unwrap_or([-DEFAULT_THETA_HALF_WIDTH, DEFAULT_THETA_HALF_WIDTH])
    }
}

pub fn default_trials(command: Command) -> u64 {
    match command {
        Command::GroupTable | Command::Directions => 1,
        Command::Entangler => 1_000,
        Command::Bb84 | Command::DenseCode | Command::Mixedness => 10_000,
        Command::SourceRate => 1_000_000,
    }
}
