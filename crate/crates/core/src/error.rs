//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency {freq_hz} Hz is at or above Nyquist ({nyquist_hz} Hz)")]
    Aliasing { freq_hz: f64, nyquist_hz: f64 },

    #[error("sample rates differ: {a} Hz vs {b} Hz")]
    SampleRateMismatch { a: f64, b: f64 },

    #[error("empty waveform where samples are required")]
    EmptyWaveform,

    #[error("waveform has zero power; finite SNR is undefined")]
    ZeroPower,

    #[error("delay of {delay_samples:.1} samples does not fit a signal of {len} samples (kernel half-width {half_width})")]
    DelayOutOfRange {
        delay_samples: f64,
        len: usize,
        half_width: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty bit sequence")]
    EmptyBits,

    #[error("symbol window [{start}, {end}) overruns waveform of {len} samples")]
    WindowOverrun { start: usize, end: usize, len: usize },

    #[error("no frame found: peak preamble correlation {peak:.3} below threshold {threshold:.3}")]
    NoFrameFound { peak: f64, threshold: f64 },

    #[error("corrupt frame: CRC mismatch (expected {expected:#06x}, computed {computed:#06x})")]
    CorruptFrame {
        expected: u16,
        computed: u16,
        /// Raw decoded payload bits, kept for diagnostics.
        payload_bits: Vec<bool>,
    },

    #[error("payload of {0} bits exceeds the frame maximum of {1} bits")]
    PayloadTooLong(usize, usize),

    #[error("angle {0} deg outside the supported range [-90, 90]")]
    AngleOutOfRange(f64),

    #[error("recording has {got} channels, geometry expects {expected}")]
    ChannelCountMismatch { got: usize, expected: usize },

    #[error("adaptation diverged: |W| reached {norm:.3e} (bound {bound:.1e}); reduce the step size")]
    AdaptationDiverged { norm: f64, bound: f64 },

    #[error("bit sequences differ in length: {tx} vs {rx}")]
    LengthMismatch { tx: usize, rx: usize },

    #[error("scenario needs exactly one source with role \"data\", found {0}")]
    DataSourceCount(usize),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("WAV error: {0}")]
    Wav(#[from] hound::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
