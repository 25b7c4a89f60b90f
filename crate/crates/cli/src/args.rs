use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sfq_core::pulses::ClockMode;

#[derive(Debug, Parser)]
#[command(name = "sfq", version, about = "Simulate SFQ pulse-train control of cavities and qubits")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// RNG seed for stochastic experiments.
    #[arg(long, global = true, default_value_t = sfq_core::reproduce::DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated output formats.
    #[arg(long, global = true, value_delimiter = ',', default_value = "csv,svg")]
    pub format: Vec<Format>,
    /// Flat JSON file of flag values; command-line flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cavity excitation by a train of SFQ pulses.
    Oscillator(OscillatorArgs),
    /// Bright/dark cavity pointer states for qubit readout.
    Pointer(PointerArgs),
    /// Two-level gate error for a given pulse shape.
    Gate2(Gate2Args),
    /// Three-level (transmon) gate error and leakage.
    Gate3(Gate3Args),
    /// Monte Carlo gate error under timing jitter.
    JitterMc(JitterMcArgs),
    /// Closed-form per-axis jitter errors versus rotation angle.
    JitterAnalytic(JitterAnalyticArgs),
    /// Single-pulse error versus pulse width.
    PulseWidth(PulseWidthArgs),
    /// Three-level gate error versus number of pulses.
    SweepN(SweepNArgs),
    /// Three-level gate error versus anharmonicity.
    SweepEta(SweepEtaArgs),
    /// Run every acceptance check and write a pass/fail report.
    Reproduce(ReproduceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Oscillator(_) => "oscillator",
            Command::Pointer(_) => "pointer",
            Command::Gate2(_) => "gate2",
            Command::Gate3(_) => "gate3",
            Command::JitterMc(_) => "jitter-mc",
            Command::JitterAnalytic(_) => "jitter-analytic",
            Command::PulseWidth(_) => "pulse-width",
            Command::SweepN(_) => "sweep-n",
            Command::SweepEta(_) => "sweep-eta",
            Command::Reproduce(_) => "reproduce",
        }
    }

    pub fn parameters(&self) -> serde_json::Value {
        let v = match self {
            Command::Oscillator(a) => serde_json::to_value(a),
            Command::Pointer(a) => serde_json::to_value(a),
            Command::Gate2(a) => serde_json::to_value(a),
            Command::Gate3(a) => serde_json::to_value(a),
            Command::JitterMc(a) => serde_json::to_value(a),
            Command::JitterAnalytic(a) => serde_json::to_value(a),
            Command::PulseWidth(a) => serde_json::to_value(a),
            Command::SweepN(a) => serde_json::to_value(a),
            Command::SweepEta(a) => serde_json::to_value(a),
            Command::Reproduce(a) => serde_json::to_value(a),
        };
        v.unwrap_or(serde_json::Value::Null)
    }
}

pub const SUBCOMMANDS: [&str; 10] = [
    "oscillator",
    "pointer",
    "gate2",
    "gate3",
    "jitter-mc",
    "jitter-analytic",
    "pulse-width",
    "sweep-n",
    "sweep-eta",
    "reproduce",
];

/// Parses an angle in radians, accepting multiples of π such as `pi/2`,
/// `3pi/2`, `2*pi` or `0.25pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().map_err(|e| format!("invalid angle '{s}': {e}"));
    };
    let (coef, rest) = (&t[..at], &t[at + 2..]);
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let coef = match coef {
        "" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|e| format!("invalid angle '{s}': {e}"))?,
    };
    let div = match rest {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .ok_or_else(|| format!("invalid angle '{s}'"))?
            .parse::<f64>()
            .map_err(|e| format!("invalid angle '{s}': {e}"))?,
    };
    Ok(coef * std::f64::consts::PI / div)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    External,
    Internal,
}

impl From<Mode> for ClockMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::External => ClockMode::External,
            Mode::Internal => ClockMode::Internal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Delta,
    Rect,
    Gaussian,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct OscillatorArgs {
    /// Cavity frequency (Hz).
    #[arg(long, default_value_t = 5e9)]
    pub f0: f64,
    /// Cavity capacitance (F).
    #[arg(long = "C", default_value_t = 1e-12)]
    pub c: f64,
    /// Coupling capacitance (F).
    #[arg(long = "Cc", default_value_t = 1e-15)]
    pub cc: f64,
    /// Number of pulses.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Pulse spacing (s); defaults to one cavity period.
    #[arg(long)]
    pub period: Option<f64>,
    /// Gaussian pulse width τ (s) for the spectral correction column.
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PointerArgs {
    #[arg(long, default_value_t = 5e9)]
    pub f0: f64,
    #[arg(long = "C", default_value_t = 1e-12)]
    pub c: f64,
    #[arg(long = "Cc", default_value_t = 1e-15)]
    pub cc: f64,
    /// Dispersive shift χ/2π (Hz).
    #[arg(long, default_value_t = 2.5e6)]
    pub chi: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct Gate2Args {
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Qubit frequency (Hz).
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    #[arg(long, value_enum, default_value = "delta")]
    pub shape: Shape,
    /// Rectangular half-width t_c or Gaussian τ (s).
    #[arg(long, default_value_t = 0.0)]
    pub width: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct Gate3Args {
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    /// 1–2 transition frequency (Hz).
    #[arg(long, default_value_t = 4.8e9)]
    pub f21: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct JitterMcArgs {
    #[arg(long, value_enum, default_value = "internal")]
    pub mode: Mode,
    /// Timing jitter standard deviation (s).
    #[arg(long, default_value_t = 0.2e-12)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    /// Junctions in the transmission line between source and qubit (σ grows as √N).
    #[arg(long, default_value_t = 1)]
    pub junctions: u32,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct JitterAnalyticArgs {
    #[arg(long, default_value_t = 0.2e-12)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    /// Θ grid points over (0, 2π].
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PulseWidthArgs {
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    /// Rotation per pulse.
    #[arg(long = "delta-theta", value_parser = parse_angle, default_value = "pi/200")]
    pub delta_theta: f64,
    /// Smallest Gaussian τ (s).
    #[arg(long = "tau-min", default_value_t = 0.25e-12)]
    pub tau_min: f64,
    /// Largest Gaussian τ (s).
    #[arg(long = "tau-max", default_value_t = 8e-12)]
    pub tau_max: f64,
    /// Log-spaced points between the limits.
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    /// Midpoint steps across each Gaussian pulse.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepNArgs {
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    #[arg(long, default_value_t = 4.8e9)]
    pub f21: f64,
    #[arg(long = "n-min", default_value_t = 1)]
    pub n_min: usize,
    #[arg(long = "n-max", default_value_t = 500)]
    pub n_max: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepEtaArgs {
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 5e9)]
    pub f10: f64,
    #[arg(long = "eta-min", default_value_t = 0.005)]
    pub eta_min: f64,
    #[arg(long = "eta-max", default_value_t = 0.6)]
    pub eta_max: f64,
    #[arg(long = "eta-step", default_value_t = 0.0005)]
    pub eta_step: f64,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ReproduceArgs {
    /// Monte Carlo trials per jitter run.
    #[arg(long, default_value_t = sfq_core::reproduce::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Jitter σ (s) for the jitter checks.
    #[arg(long, default_value_t = sfq_core::reproduce::JITTER_SIGMA)]
    pub sigma: f64,
}
