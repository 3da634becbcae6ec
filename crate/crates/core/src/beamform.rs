//! Spatial filtering: presteering, delay-and-sum, the Frost LCMV adaptive
//! beamformer, and beampattern evaluation.
//!
//! Frost's constrained LMS works on presteered channels, so the look
//! direction needs no angle term in the constraint: C simply ties the
//! per-tap sums of the sensor weights to the desired FIR response f.
//! Update per sample: y = W'X, then W <- P(W - mu y X) + F with
//! P = I - C(C'C)^-1 C' and F = C(C'C)^-1 f. All processing is real-valued
//! broadband time domain.

use num_complex::Complex64;

use crate::array::{steering_delays, ArrayGeometry, MultichannelRecording};
use crate::error::{Error, Result};
use crate::signal::{fractional_delay, Waveform};

/// Regularizer in the normalized step size mu = alpha / (X'X + eps).
const SNAPSHOT_POWER_EPS: f64 = 1e-10;

fn check_steer_angle(angle_deg: f64) -> Result<f64> {
    // Open interval: endfire steering makes the bulk-delay construction
    // degenerate and a linear array cannot resolve front/back there anyway.
    if !angle_deg.is_finite() || angle_deg.abs() >= 90.0 {
        return Err(Error::AngleOutOfRange(angle_deg));
    }
    Ok(angle_deg)
}

/// Bulk delay (whole samples) that [`presteer`] applies on top of the
/// per-channel advance: ceil of the largest steering delay, never negative.
/// Steering at or below broadside needs none.
pub fn presteer_bulk_delay_samples(
    g: &ArrayGeometry,
    steer_angle_deg: f64,
    sample_rate_hz: f64,
) -> Result<usize> {
    check_steer_angle(steer_angle_deg)?;
    let delays = steering_delays(g, steer_angle_deg)?;
    let max_delay = delays.iter().cloned().fold(0.0f64, f64::max);
    Ok((max_delay * sample_rate_hz).ceil() as usize)
}

/// Time-aligns the look direction: channel n is delayed by
/// bulk - tau_n(steer), where the bulk delay is the smallest whole-sample
/// shift keeping every applied delay nonnegative. After presteering, a
/// source from `steer_angle_deg` is identical across channels (within
/// interpolation tolerance) at a known integer offset of `bulk` samples.
pub fn presteer(
    rec: &MultichannelRecording,
    steer_angle_deg: f64,
) -> Result<MultichannelRecording> {
    let (channels, _) = presteer_with_bulk(rec, steer_angle_deg)?;
    Ok(channels)
}

/// [`presteer`] plus the bulk delay it applied, in samples.
pub fn presteer_with_bulk(
    rec: &MultichannelRecording,
    steer_angle_deg: f64,
) -> Result<(MultichannelRecording, usize)> {
    check_steer_angle(steer_angle_deg)?;
    let fs = rec.sample_rate_hz();
    let delays = steering_delays(rec.geometry(), steer_angle_deg)?;
    let bulk_samples = presteer_bulk_delay_samples(rec.geometry(), steer_angle_deg, fs)?;
    let bulk_s = bulk_samples as f64 / fs;
    let channels: Vec<Waveform> = rec
        .channels()
        .iter()
        .zip(&delays)
        .map(|(ch, &tau)| fractional_delay(ch, bulk_s - tau))
        .collect::<Result<_>>()?;
    Ok((
        MultichannelRecording::new(channels, *rec.geometry())?,
        bulk_samples,
    ))
}

/// Mean over channels of the presteered recording.
pub fn delay_and_sum(rec: &MultichannelRecording, steer_angle_deg: f64) -> Result<Waveform> {
    let steered = presteer(rec, steer_angle_deg)?;
    let n = steered.num_channels() as f64;
    let len = steered.len();
    let mut out = vec![0.0; len];
    for ch in steered.channels() {
        for (o, s) in out.iter_mut().zip(ch.samples()) {
            *o += s;
        }
    }
    for o in &mut out {
        *o /= n;
    }
    Waveform::new(out, steered.sample_rate_hz())
}

/// Step-size rule for the Frost update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    /// Constant mu, the classical formulation. Reproducible and scale-law
    /// friendly, but must be chosen against the input power.
    Fixed(f64),
    /// Normalized-LMS style: mu = alpha / (X'X + eps) per snapshot.
    Normalized { alpha: f64 },
}

impl StepSize {
    fn validate(&self) -> Result<()> {
        let v = match self {
            StepSize::Fixed(mu) => *mu,
            StepSize::Normalized { alpha } => *alpha,
        };
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step size must be positive and finite, got {v}"
            )));
        }
        Ok(())
    }
}

/// Frost beamformer parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FrostConfig {
    /// J, taps per sensor in the tapped delay line.
    pub num_taps: usize,
    pub step: StepSize,
    /// Look-direction FIR response f (length J).
    pub desired_response: Vec<f64>,
    pub steer_angle_deg: f64,
    /// Hard error when |W| exceeds this bound.
    pub divergence_bound: f64,
}

impl FrostConfig {
    /// Defaults: J = 16, normalized step alpha = 0.01, unit-impulse desired
    /// response (pure distortionless pass-through), divergence bound 1e6.
    pub fn new(steer_angle_deg: f64) -> Self {
        Self::with_taps(steer_angle_deg, 16)
    }

    pub fn with_taps(steer_angle_deg: f64, num_taps: usize) -> Self {
        let mut f = vec![0.0; num_taps];
        if num_taps > 0 {
            f[0] = 1.0;
        }
        Self {
            num_taps,
            step: StepSize::Normalized { alpha: 0.01 },
            desired_response: f,
            steer_angle_deg,
            divergence_bound: 1e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_taps < 1 {
            return Err(Error::InvalidConfig("need at least one tap".into()));
        }
        if self.desired_response.len() != self.num_taps {
            return Err(Error::InvalidConfig(format!(
                "desired response has {} entries for {} taps",
                self.desired_response.len(),
                self.num_taps
            )));
        }
        self.step.validate()?;
        check_steer_angle(self.steer_angle_deg)?;
        // Infinity is a valid bound: it disables the divergence guard.
        if self.divergence_bound.is_nan() || self.divergence_bound <= 0.0 {
            return Err(Error::InvalidConfig(
                "divergence bound must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Dense row-major matrix, just enough for the constraint algebra checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * out.cols + c] += a * other.at(k, c);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c));
            }
        }
        out
    }
}

/// Frost LCMV state: weight vector W (length N*J, sensor-major: index
/// n*J + j is sensor n, tap j) plus the constraint system.
#[derive(Debug, Clone)]
pub struct FrostState {
    weights: Vec<f64>,
    num_mics: usize,
    num_taps: usize,
    desired_response: Vec<f64>,
    quiescent: Vec<f64>,
    constraint: Mat,
    projection: Mat,
    divergence_bound: f64,
}

impl FrostState {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_mics(&self) -> usize {
        self.num_mics
    }

    pub fn num_taps(&self) -> usize {
        self.num_taps
    }

    pub fn desired_response(&self) -> &[f64] {
        &self.desired_response
    }

    /// F = C (C'C)^-1 f: the quiescent (data-independent) weight vector.
    pub fn quiescent(&self) -> &[f64] {
        &self.quiescent
    }

    /// C, the N*J x J tap-selector constraint matrix.
    pub fn constraint(&self) -> &Mat {
        &self.constraint
    }

    /// P = I - C (C'C)^-1 C', the constraint-null-space projector.
    pub fn projection(&self) -> &Mat {
        &self.projection
    }

    /// C'W: per-tap sums across sensors; equals f when the constraint holds.
    pub fn constraint_response(&self) -> Vec<f64> {
        let (n, j) = (self.num_mics, self.num_taps);
        (0..j)
            .map(|tap| (0..n).map(|mic| self.weights[mic * j + tap]).sum())
            .collect()
    }

    /// One constrained-LMS step: returns y = W'X computed with the current
    /// weights, then updates W <- P(W - mu y X) + F. The projection is
    /// applied in its structured form (subtract the per-tap cross-sensor
    /// mean, add back f_j / N), which equals the dense P exactly.
    pub fn step(&mut self, snapshot: &[f64], mu: f64) -> Result<f64> {
        let (n, j) = (self.num_mics, self.num_taps);
        debug_assert_eq!(snapshot.len(), n * j, "snapshot length must be N*J");
        let y: f64 = self
            .weights
            .iter()
            .zip(snapshot)
            .map(|(w, x)| w * x)
            .sum();

        let scale = mu * y;
        for (w, x) in self.weights.iter_mut().zip(snapshot) {
            *w -= scale * x;
        }
        let inv_n = 1.0 / n as f64;
        for tap in 0..j {
            let mut mean = 0.0;
            for mic in 0..n {
                mean += self.weights[mic * j + tap];
            }
            mean *= inv_n;
            let correction = self.desired_response[tap] * inv_n - mean;
            for mic in 0..n {
                self.weights[mic * j + tap] += correction;
            }
        }

        let norm = self.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        if norm > self.divergence_bound {
            return Err(Error::AdaptationDiverged {
                norm,
                bound: self.divergence_bound,
            });
        }
        Ok(y)
    }
}

/// Builds the initial Frost state: W(0) = F, with the constraint system
/// C, P, F constructed from the tap-selector block structure (C'C = N I).
pub fn frost_init(cfg: &FrostConfig, num_mics: usize) -> Result<FrostState> {
    cfg.validate()?;
    if num_mics < 1 {
        return Err(Error::InvalidConfig("need at least one microphone".into()));
    }
    let (n, j) = (num_mics, cfg.num_taps);
    let nj = n * j;

    let mut constraint = Mat::zeros(nj, j);
    for mic in 0..n {
        for tap in 0..j {
            constraint.set(mic * j + tap, tap, 1.0);
        }
    }
    // C'C = N I by construction; guard the assumption the algebra rests on.
    let gram = constraint.transpose().mul(&constraint);
    for r in 0..j {
        for c in 0..j {
            let expect = if r == c { n as f64 } else { 0.0 };
            assert!(
                (gram.at(r, c) - expect).abs() < 1e-12,
                "constraint Gram matrix is not N*I"
            );
        }
    }

    let inv_n = 1.0 / n as f64;
    let mut projection = Mat::zeros(nj, nj);
    for mic_r in 0..n {
        for tap_r in 0..j {
            let r = mic_r * j + tap_r;
            for mic_c in 0..n {
                let c = mic_c * j + tap_r; // same tap only
                let mut v = if r == c { 1.0 } else { 0.0 };
                v -= inv_n;
                projection.set(r, c, v);
            }
        }
    }

    let quiescent: Vec<f64> = (0..nj)
        .map(|i| cfg.desired_response[i % j] * inv_n)
        .collect();

    Ok(FrostState {
        weights: quiescent.clone(),
        num_mics: n,
        num_taps: j,
        desired_response: cfg.desired_response.clone(),
        quiescent,
        constraint,
        projection,
        divergence_bound: cfg.divergence_bound,
    })
}

/// Tapped-delay-line snapshot of a presteered recording at time k:
/// X[n*J + j] = channel n, sample k - j, zero for k < j.
pub fn fill_snapshot(rec: &MultichannelRecording, num_taps: usize, k: usize, out: &mut [f64]) {
    let n = rec.num_channels();
    debug_assert_eq!(out.len(), n * num_taps);
    for mic in 0..n {
        let samples = rec.channel(mic).samples();
        for tap in 0..num_taps {
            out[mic * num_taps + tap] = if k >= tap { samples[k - tap] } else { 0.0 };
        }
    }
}

/// Allocating convenience wrapper around [`fill_snapshot`].
pub fn snapshot_at(rec: &MultichannelRecording, num_taps: usize, k: usize) -> Vec<f64> {
    let mut out = vec![0.0; rec.num_channels() * num_taps];
    fill_snapshot(rec, num_taps, k, &mut out);
    out
}

/// A completed adaptation run: the output samples and the final state
/// (whose weights feed beampattern evaluation and frozen-weight replays).
#[derive(Debug, Clone)]
pub struct FrostRun {
    pub output: Waveform,
    pub state: FrostState,
}

/// Presteers toward the configured look direction and runs the Frost
/// update over every sample. Deterministic; errors if adaptation diverges.
pub fn frost_process(rec: &MultichannelRecording, cfg: &FrostConfig) -> Result<FrostRun> {
    cfg.validate()?;
    let steered = presteer(rec, cfg.steer_angle_deg)?;
    let mut state = frost_init(cfg, steered.num_channels())?;
    let len = steered.len();
    let mut out = Vec::with_capacity(len);
    let mut snapshot = vec![0.0; steered.num_channels() * cfg.num_taps];
    for k in 0..len {
        fill_snapshot(&steered, cfg.num_taps, k, &mut snapshot);
        let mu = match cfg.step {
            StepSize::Fixed(mu) => mu,
            StepSize::Normalized { alpha } => {
                let p: f64 = snapshot.iter().map(|x| x * x).sum();
                alpha / (p + SNAPSHOT_POWER_EPS)
            }
        };
        out.push(state.step(&snapshot, mu)?);
    }
    Ok(FrostRun {
        output: Waveform::new(out, steered.sample_rate_hz())?,
        state,
    })
}

/// Filters a recording with fixed tapped-delay weights (no adaptation):
/// presteer toward `steer_angle_deg`, then y[k] = W'X[k]. This is the
/// frozen-weight replay used for SINR decomposition.
pub fn filter_with_weights(
    rec: &MultichannelRecording,
    steer_angle_deg: f64,
    weights: &[f64],
    num_taps: usize,
) -> Result<Waveform> {
    if num_taps < 1 || weights.len() != rec.num_channels() * num_taps {
        return Err(Error::InvalidConfig(format!(
            "weight vector of {} entries does not match {} channels x {} taps",
            weights.len(),
            rec.num_channels(),
            num_taps
        )));
    }
    let steered = presteer(rec, steer_angle_deg)?;
    let len = steered.len();
    let mut out = Vec::with_capacity(len);
    let mut snapshot = vec![0.0; weights.len()];
    for k in 0..len {
        fill_snapshot(&steered, num_taps, k, &mut snapshot);
        out.push(weights.iter().zip(&snapshot).map(|(w, x)| w * x).sum());
    }
    Waveform::new(out, steered.sample_rate_hz())
}

/// Weight specification for beampattern evaluation.
#[derive(Debug, Clone)]
pub enum PatternWeights<'a> {
    /// Uniform 1/N weights (classic array factor).
    DelayAndSum,
    /// Tapped-delay-line weights in sensor-major order (n*J + j), as
    /// produced by the Frost beamformer. Tap spacing is one sample.
    TappedDelay { weights: &'a [f64], num_taps: usize },
}

/// Array gain toward `angle_deg` at `freq_hz`, in dB, for a beamformer
/// presteered toward `steer_angle_deg`:
/// gain(theta) = |sum_n sum_j W[nJ+j]
/// exp(-i 2 pi f (j/fs + tau_n(theta) - tau_n(steer)))|.
/// Gains below 1e-12 clamp to -240 dB. Delay-and-sum is evaluated as the
/// coherent unit-weight sum divided by N, which makes the steered-angle
/// gain exactly 0 dB.
pub fn pattern_gain_db(
    g: &ArrayGeometry,
    steer_angle_deg: f64,
    weights: &PatternWeights,
    freq_hz: f64,
    sample_rate_hz: f64,
    angle_deg: f64,
) -> Result<f64> {
    check_steer_angle(steer_angle_deg)?;
    let nyquist = sample_rate_hz / 2.0;
    if !freq_hz.is_finite() || freq_hz <= 0.0 || freq_hz >= nyquist {
        return Err(Error::Aliasing {
            freq_hz,
            nyquist_hz: nyquist,
        });
    }
    let tau_theta = steering_delays(g, angle_deg)?;
    let tau_steer = steering_delays(g, steer_angle_deg)?;
    let n = g.num_mics();
    let omega = std::f64::consts::TAU * freq_hz;
    let uniform;
    let (w, j, divisor): (&[f64], usize, f64) = match weights {
        PatternWeights::DelayAndSum => {
            uniform = vec![1.0; n];
            (&uniform, 1, n as f64)
        }
        PatternWeights::TappedDelay { weights, num_taps } => {
            if *num_taps < 1 || weights.len() != n * num_taps {
                return Err(Error::InvalidConfig(format!(
                    "weight vector of {} entries does not match {} mics x {} taps",
                    weights.len(),
                    n,
                    num_taps
                )));
            }
            (weights, *num_taps, 1.0)
        }
    };
    let mut acc = Complex64::ZERO;
    for mic in 0..n {
        let spatial = tau_theta[mic] - tau_steer[mic];
        for tap in 0..j {
            let phase = -omega * (tap as f64 / sample_rate_hz + spatial);
            acc += w[mic * j + tap] * Complex64::from_polar(1.0, phase);
        }
    }
    Ok(20.0 * (acc.norm() / divisor).max(1e-12).log10())
}

/// [`pattern_gain_db`] over an angle grid, as (angle_deg, gain_db) rows.
pub fn beampattern(
    g: &ArrayGeometry,
    steer_angle_deg: f64,
    weights: &PatternWeights,
    freq_hz: f64,
    sample_rate_hz: f64,
    angles_deg: &[f64],
) -> Result<Vec<(f64, f64)>> {
    angles_deg
        .iter()
        .map(|&a| {
            pattern_gain_db(g, steer_angle_deg, weights, freq_hz, sample_rate_hz, a)
                .map(|gain| (a, gain))
        })
        .collect()
}
