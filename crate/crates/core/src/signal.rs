//! Sampled-signal type and primitive operations: tone synthesis, mixing,
//! fractional delay, additive noise, power measurement.
//!
//! Amplitudes are dimensionless (nominal range around +-1, not enforced);
//! there is no acoustic pressure calibration. All operations are pure.

use crate::error::{Error, Result};
use crate::rng::GaussianSource;

/// Default sample rate, Hz. High enough for both the audible carrier set
/// and the 15.5-20 kHz near-ultrasonic set under Nyquist.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 48_000.0;

/// Kernel half-width (taps each side) for [`fractional_delay`].
pub const DELAY_KERNEL_HALF_WIDTH: usize = 32;

/// A uniformly sampled real-valued signal.
///
/// Invariants: positive sample rate, every sample finite. Two waveforms may
/// only be combined when their sample rates match exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "waveform contains non-finite sample {bad}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// All-zero waveform of `len` samples.
    pub fn silence(len: usize, sample_rate_hz: f64) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    /// Extends with trailing zeros to at least `len` samples.
    pub fn zero_pad_to(mut self, len: usize) -> Self {
        if self.samples.len() < len {
            self.samples.resize(len, 0.0);
        }
        self
    }

    /// Prefixes `n` zero samples (the tail is kept, so length grows by `n`).
    pub fn with_leading_silence(mut self, n: usize) -> Self {
        let mut v = vec![0.0; n];
        v.append(&mut self.samples);
        self.samples = v;
        self
    }

    fn check_same_rate(&self, other: &Waveform) -> Result<()> {
        if self.sample_rate_hz != other.sample_rate_hz {
            return Err(Error::SampleRateMismatch {
                a: self.sample_rate_hz,
                b: other.sample_rate_hz,
            });
        }
        Ok(())
    }
}

/// Synthesizes `amplitude * sin(2 pi freq_hz k / fs + phase_rad)` for
/// `round(duration_s * fs)` samples.
pub fn tone(
    freq_hz: f64,
    duration_s: f64,
    amplitude: f64,
    phase_rad: f64,
    sample_rate_hz: f64,
) -> Result<Waveform> {
    if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "sample rate must be positive, got {sample_rate_hz}"
        )));
    }
    let nyquist = sample_rate_hz / 2.0;
    if !freq_hz.is_finite() || freq_hz <= 0.0 || freq_hz >= nyquist {
        return Err(Error::Aliasing {
            freq_hz,
            nyquist_hz: nyquist,
        });
    }
    if !duration_s.is_finite() || duration_s <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "duration must be positive and finite, got {duration_s}"
        )));
    }
    if !amplitude.is_finite() || !phase_rad.is_finite() {
        return Err(Error::InvalidConfig(
            "amplitude and phase must be finite".into(),
        ));
    }
    let n = (duration_s * sample_rate_hz).round() as usize;
    let w = std::f64::consts::TAU * freq_hz / sample_rate_hz;
    let samples = (0..n)
        .map(|k| amplitude * (w * k as f64 + phase_rad).sin())
        .collect();
    Waveform::new(samples, sample_rate_hz)
}

/// Weighted sum of waveforms. Output length is the maximum input length;
/// shorter inputs count as zero past their end.
pub fn mix(inputs: &[(&Waveform, f64)]) -> Result<Waveform> {
    let (first, _) = inputs.first().ok_or(Error::EmptyWaveform)?;
    for (w, _) in &inputs[1..] {
        first.check_same_rate(w)?;
    }
    let len = inputs.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
    let mut out = vec![0.0; len];
    for (w, gain) in inputs {
        for (o, s) in out.iter_mut().zip(w.samples()) {
            *o += gain * s;
        }
    }
    Waveform::new(out, first.sample_rate_hz())
}

/// Mean of squared samples.
pub fn power(w: &Waveform) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWaveform);
    }
    Ok(w.samples().iter().map(|s| s * s).sum::<f64>() / w.len() as f64)
}

/// Delays `w` by `delay_s` seconds (negative advances) with the default
/// kernel half-width. See [`fractional_delay_with`].
pub fn fractional_delay(w: &Waveform, delay_s: f64) -> Result<Waveform> {
    fractional_delay_with(w, delay_s, DELAY_KERNEL_HALF_WIDTH)
}

/// Band-limited delay via a Hann-windowed sinc kernel.
///
/// The kernel is h[j] = sinc(j - D) * hann((j - D) / L) for j within L taps
/// of D = delay_s * fs, so a tone of frequency f emerges phase-shifted by
/// 2 pi f delay_s. Output length equals input length; content is zero-filled
/// from beyond the edges, and samples within one kernel width of an edge are
/// unreliable. At 48 kHz and L = 32 the response error stays below 0.16%
/// in amplitude and 1e-3 rad in phase through 21 kHz.
pub fn fractional_delay_with(w: &Waveform, delay_s: f64, half_width: usize) -> Result<Waveform> {
    if half_width == 0 {
        return Err(Error::InvalidConfig(
            "kernel half-width must be at least 1".into(),
        ));
    }
    let delay_samples = delay_s * w.sample_rate_hz();
    if !delay_samples.is_finite() || delay_samples.abs() + half_width as f64 >= w.len() as f64 {
        return Err(Error::DelayOutOfRange {
            delay_samples,
            len: w.len(),
            half_width,
        });
    }

    let l = half_width as f64;
    let j_lo = (delay_samples - l).ceil() as i64;
    let j_hi = (delay_samples + l).floor() as i64;
    let taps: Vec<f64> = (j_lo..=j_hi)
        .map(|j| {
            let u = j as f64 - delay_samples;
            sinc(u) * 0.5 * (1.0 + (std::f64::consts::PI * u / l).cos())
        })
        .collect();

    // Zero-padded source so the convolution needs no bounds checks.
    let pad = taps.len() + j_lo.unsigned_abs() as usize + j_hi.unsigned_abs() as usize + 1;
    let mut padded = vec![0.0; w.len() + 2 * pad];
    padded[pad..pad + w.len()].copy_from_slice(w.samples());

    let out = (0..w.len())
        .map(|k| {
            let base = (k as i64 - j_lo + pad as i64) as usize;
            taps.iter()
                .enumerate()
                .map(|(t, h)| h * padded[base - t])
                .sum()
        })
        .collect();
    Waveform::new(out, w.sample_rate_hz())
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-12 {
        1.0
    } else {
        let pu = std::f64::consts::PI * u;
        pu.sin() / pu
    }
}

/// Adds white Gaussian noise at `snr_db` relative to the power of `w`.
///
/// `f64::INFINITY` is the noiseless sentinel and returns `w` unchanged.
/// The noise stream is ChaCha8 + Box-Muller seeded with `seed` (see the
/// `rng` module); identical arguments give bit-identical output.
pub fn add_awgn(w: &Waveform, snr_db: f64, seed: u64) -> Result<Waveform> {
    if snr_db == f64::INFINITY {
        return Ok(w.clone());
    }
    let p = power(w)?;
    if p <= 0.0 {
        return Err(Error::ZeroPower);
    }
    let sigma = (p / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut g = GaussianSource::new(seed);
    let samples = w
        .samples()
        .iter()
        .map(|s| s + sigma * g.next_gaussian())
        .collect();
    Waveform::new(samples, w.sample_rate_hz())
}
