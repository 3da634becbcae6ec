//! Command-line front end: runs scenarios end to end and exports WAV, JSON,
//! and CSV artifacts. Every command is deterministic given its inputs and
//! seed flags; there are no environment overrides.

mod commands;
mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const SCHEMA_HELP: &str = "\
SCENARIO SCHEMA (JSON, unknown keys rejected):
  id                optional label used in reports
  sample_rate_hz    number
  geometry          { num_mics, spacing_m, speed_of_sound_mps }
  fsk               { carriers_hz (lowest first), symbol_duration_s,
                      amplitude? = 1.0 }
  sources           array; each entry has
                      angle_deg    arrival angle in degrees, -90..90
                      role         \"data\" | \"interference\"
                      gain?        amplitude scale, default 1.0
                      start_s?     leading silence in seconds, default 0
                    plus exactly one signal:
                      fsk_frame    { payload: { hex: \"...\" } or
                                     { random: { num_bits, seed } } }
                      fsk_symbols  { num_symbols, seed, alphabet? }
                      tone         { freq_hz, duration_s, amplitude?,
                                     phase_rad? }
                      file         { path }   mono float32 WAV
  noise?            { snr_db, seed }  per-channel AWGN; omit for noiseless
  beamformer?       { algo: \"frost\" | \"delay_and_sum\" | \"single_mic\",
                      steer_angle_deg? (default: the data source angle),
                      num_taps? = 16, alpha? | mu? (normalized or fixed
                      step, mutually exclusive), desired_response?,
                      divergence_bound? = 1e6, mic? = 0 }
  duration_s?       pad every source with trailing silence to this length
  outputs?          { recording_wav?, metadata_json?, beamformed_wav?,
                      weights_csv?, results_json?, pattern_csv?,
                      sweep_csv? }  default paths used when the
                      corresponding flag is omitted

Paths inside a scenario resolve against the working directory.";

#[derive(Parser)]
#[command(
    name = "uplink",
    version,
    about = "Acoustic uplink simulator: M-FSK audio modem, microphone-array \
             reception, delay-and-sum and Frost adaptive beamforming",
    after_long_help = SCHEMA_HELP
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a payload as one framed M-FSK waveform and write it as WAV.
    Modulate(ModulateArgs),
    /// Synthesize the multichannel array recording for a scenario.
    Simulate(SimulateArgs),
    /// Beamform a multichannel recording into a mono waveform.
    Beamform(BeamformArgs),
    /// Find and decode one frame from a recorded waveform.
    Demod(DemodArgs),
    /// Run a scenario end to end and score every receive chain.
    E2e(E2eArgs),
    /// Evaluate the array gain over arrival angle at one frequency.
    Beampattern(BeampatternArgs),
    /// Monte Carlo BER over an SNR grid.
    #[command(name = "ber-sweep", visible_alias = "ber_sweep")]
    BerSweep(BerSweepArgs),
}

/// Modem parameters shared by `modulate` and `demod`.
#[derive(Args)]
struct FskFlags {
    /// Comma-separated carrier frequencies in Hz, lowest first; the count
    /// must be a power of two.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "500,1500,2500,3500",
        conflicts_with = "near_ultrasonic"
    )]
    carriers: Vec<f64>,
    /// Symbol duration in seconds.
    #[arg(long, default_value_t = 0.01)]
    symbol_duration: f64,
    /// Per-carrier amplitude.
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Use the 15.5/17/18.5/20 kHz carrier preset (48 kHz only).
    #[arg(long)]
    near_ultrasonic: bool,
}

#[derive(Args)]
struct ModulateArgs {
    /// Payload as an even-length hex string.
    #[arg(long, conflicts_with = "payload_file")]
    hex: Option<String>,
    /// File whose raw bytes become the payload.
    #[arg(long)]
    payload_file: Option<PathBuf>,
    /// Output WAV path.
    #[arg(long, short)]
    out: PathBuf,
    /// Output sample rate in Hz.
    #[arg(long, default_value_t = 48_000.0)]
    sample_rate: f64,
    #[command(flatten)]
    fsk: FskFlags,
}

#[derive(Args)]
#[command(after_long_help = SCHEMA_HELP)]
struct SimulateArgs {
    /// Scenario JSON path.
    scenario: PathBuf,
    /// Multichannel recording WAV (default: outputs.recording_wav).
    #[arg(long)]
    out_wav: Option<PathBuf>,
    /// Metadata JSON (default: outputs.metadata_json).
    #[arg(long)]
    out_meta: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    /// Adaptive Frost beamformer (tapped delay lines, constrained LMS).
    Frost,
    /// Presteered unit-weight average (delay-and-sum).
    Das,
}

#[derive(Args)]
#[command(after_long_help = SCHEMA_HELP)]
struct BeamformArgs {
    /// Multichannel recording WAV, channel count matching the geometry.
    recording: PathBuf,
    /// Scenario JSON giving geometry, steer angle, and adaptation settings.
    scenario: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Beamformed mono WAV (default: outputs.beamformed_wav).
    #[arg(long)]
    out_wav: Option<PathBuf>,
    /// Weights CSV, mic,tap,weight rows (default: outputs.weights_csv).
    #[arg(long)]
    out_weights: Option<PathBuf>,
}

#[derive(Args)]
struct DemodArgs {
    /// Input WAV; mono or multichannel.
    recording: PathBuf,
    /// Channel to decode when the input has several.
    #[arg(long, default_value_t = 0)]
    mic: usize,
    /// Take the modem parameters from this scenario instead of flags.
    #[arg(long, conflicts_with_all = ["carriers", "near_ultrasonic"])]
    scenario: Option<PathBuf>,
    /// Expected payload hex; prints the bit error rate against it.
    #[arg(long)]
    truth_hex: Option<String>,
    #[command(flatten)]
    fsk: FskFlags,
}

#[derive(Args)]
#[command(after_long_help = SCHEMA_HELP)]
struct E2eArgs {
    /// Scenario JSON path.
    scenario: PathBuf,
    /// Results JSON (default: outputs.results_json; omit both to print
    /// the JSON to stdout only).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(after_long_help = SCHEMA_HELP)]
struct BeampatternArgs {
    /// Scenario JSON path.
    scenario: PathBuf,
    /// Frequency to evaluate, Hz.
    #[arg(long)]
    freq: f64,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Angle grid step in degrees over -90..90.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    /// Pattern CSV, angle_deg,gain_db rows (default: outputs.pattern_csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(after_long_help = SCHEMA_HELP)]
struct BerSweepArgs {
    /// Scenario JSON path.
    scenario: PathBuf,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    snr_grid: Vec<f64>,
    /// Monte Carlo trials per grid point.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Base seed; trial t of point i derives from mix(seed, [i, t]).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sweep CSV, snr_db,num_bits,num_errors,ber rows
    /// (default: outputs.sweep_csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Modulate(a) => commands::modulate(a),
        Cmd::Simulate(a) => commands::simulate(a),
        Cmd::Beamform(a) => commands::beamform(a),
        Cmd::Demod(a) => commands::demod(a),
        Cmd::E2e(a) => commands::e2e(a),
        Cmd::Beampattern(a) => commands::beampattern(a),
        Cmd::BerSweep(a) => commands::ber_sweep(a),
    }
}
