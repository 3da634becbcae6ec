//! Far-field plane-wave simulation: directional sources arriving at a
//! uniform linear array, producing a time-aligned multichannel recording.
//!
//! Mic 0 is the phase reference; a source at angle theta (broadside = 0,
//! positive toward increasing mic index) reaches mic n with delay
//! tau_n = n d sin(theta) / c. No 1/r attenuation, no reverberation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::GaussianSource;
use crate::signal::{fractional_delay, Waveform};

/// Uniform linear array: N mics on a line, equal spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    num_mics: usize,
    spacing_m: f64,
    speed_of_sound_mps: f64,
}

impl ArrayGeometry {
    pub fn new(num_mics: usize, spacing_m: f64, speed_of_sound_mps: f64) -> Result<Self> {
        if num_mics < 1 {
            return Err(Error::InvalidConfig("need at least one microphone".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(spacing_m) || !positive(speed_of_sound_mps) {
            return Err(Error::InvalidConfig(format!(
                "spacing ({spacing_m} m) and speed of sound ({speed_of_sound_mps} m/s) must be positive"
            )));
        }
        Ok(Self {
            num_mics,
            spacing_m,
            speed_of_sound_mps,
        })
    }

    /// The demo array: 10 omnidirectional mics, 0.05 m apart, c = 343 m/s.
    pub fn demo_default() -> Self {
        Self::new(10, 0.05, 343.0).expect("default geometry is valid")
    }

    pub fn num_mics(&self) -> usize {
        self.num_mics
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    pub fn speed_of_sound_mps(&self) -> f64 {
        self.speed_of_sound_mps
    }
}

/// A directional far-field source.
#[derive(Debug, Clone)]
pub struct SourceSpec {
    /// Arrival angle in degrees, in [-90, 90].
    pub angle_deg: f64,
    pub waveform: Waveform,
    pub gain: f64,
}

/// N time-aligned channels, one per microphone, equal length and rate.
#[derive(Debug, Clone)]
pub struct MultichannelRecording {
    channels: Vec<Waveform>,
    geometry: ArrayGeometry,
}

impl MultichannelRecording {
    pub fn new(channels: Vec<Waveform>, geometry: ArrayGeometry) -> Result<Self> {
        if channels.len() != geometry.num_mics() {
            return Err(Error::ChannelCountMismatch {
                got: channels.len(),
                expected: geometry.num_mics(),
            });
        }
        let first = &channels[0];
        for ch in &channels[1..] {
            if ch.sample_rate_hz() != first.sample_rate_hz() {
                return Err(Error::SampleRateMismatch {
                    a: first.sample_rate_hz(),
                    b: ch.sample_rate_hz(),
                });
            }
            if ch.len() != first.len() {
                return Err(Error::InvalidConfig(
                    "channels must have equal length".into(),
                ));
            }
        }
        Ok(Self { channels, geometry })
    }

    pub fn channels(&self) -> &[Waveform] {
        &self.channels
    }

    pub fn channel(&self, n: usize) -> &Waveform {
        &self.channels[n]
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.channels[0].sample_rate_hz()
    }
}

fn check_angle(angle_deg: f64) -> Result<f64> {
    if !(-90.0..=90.0).contains(&angle_deg) || !angle_deg.is_finite() {
        return Err(Error::AngleOutOfRange(angle_deg));
    }
    Ok(angle_deg)
}

/// Plane-wave arrival delays: tau_n = n d sin(theta) / c, tau_0 = 0.
/// Negative values mean the wavefront reaches high-index mics first.
pub fn steering_delays(g: &ArrayGeometry, angle_deg: f64) -> Result<Vec<f64>> {
    check_angle(angle_deg)?;
    let per_mic = g.spacing_m() * angle_deg.to_radians().sin() / g.speed_of_sound_mps();
    Ok((0..g.num_mics()).map(|n| n as f64 * per_mic).collect())
}

/// Narrowband phase representation of [`steering_delays`]:
/// element n = exp(-i 2 pi f tau_n), unit modulus.
pub fn steering_vector(g: &ArrayGeometry, angle_deg: f64, freq_hz: f64) -> Result<Vec<Complex64>> {
    if !freq_hz.is_finite() || freq_hz < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "frequency must be nonnegative and finite, got {freq_hz}"
        )));
    }
    let delays = steering_delays(g, angle_deg)?;
    Ok(delays
        .iter()
        .map(|&tau| Complex64::from_polar(1.0, -std::f64::consts::TAU * freq_hz * tau))
        .collect())
}

/// The additive pieces of a reception: one clean recording per source plus
/// the noise realization, such that their sample-wise sum is exactly the
/// recording [`simulate_reception`] returns.
#[derive(Debug, Clone)]
pub struct ReceptionComponents {
    pub per_source: Vec<MultichannelRecording>,
    /// `None` when the scenario is noiseless.
    pub noise: Option<MultichannelRecording>,
}

impl ReceptionComponents {
    /// Sample-wise sum of all components.
    pub fn total(&self) -> Result<MultichannelRecording> {
        let geometry = *self.per_source[0].geometry();
        let n_ch = geometry.num_mics();
        let len = self.per_source[0].len();
        let fs = self.per_source[0].sample_rate_hz();
        let mut channels = Vec::with_capacity(n_ch);
        for n in 0..n_ch {
            let mut acc = vec![0.0; len];
            for rec in &self.per_source {
                for (a, s) in acc.iter_mut().zip(rec.channel(n).samples()) {
                    *a += s;
                }
            }
            if let Some(noise) = &self.noise {
                for (a, s) in acc.iter_mut().zip(noise.channel(n).samples()) {
                    *a += s;
                }
            }
            channels.push(Waveform::new(acc, fs)?);
        }
        MultichannelRecording::new(channels, geometry)
    }

    /// Sum of the interference sources (everything except `data_index`)
    /// plus the noise realization.
    pub fn interference_plus_noise(&self, data_index: usize) -> Result<MultichannelRecording> {
        let geometry = *self.per_source[0].geometry();
        let n_ch = geometry.num_mics();
        let len = self.per_source[0].len();
        let fs = self.per_source[0].sample_rate_hz();
        let mut channels = Vec::with_capacity(n_ch);
        for n in 0..n_ch {
            let mut acc = vec![0.0; len];
            for (s_ix, rec) in self.per_source.iter().enumerate() {
                if s_ix == data_index {
                    continue;
                }
                for (a, s) in acc.iter_mut().zip(rec.channel(n).samples()) {
                    *a += s;
                }
            }
            if let Some(noise) = &self.noise {
                for (a, s) in acc.iter_mut().zip(noise.channel(n).samples()) {
                    *a += s;
                }
            }
            channels.push(Waveform::new(acc, fs)?);
        }
        MultichannelRecording::new(channels, geometry)
    }
}

/// Simulates reception with the additive components kept separate; see
/// [`simulate_reception`] for the model. Noise variance on channel n is
/// power(clean channel n) / 10^(snr_db/10), i.e. SNR is measured against
/// the summed clean channel, and the noise stream for channel n is seeded
/// with `seed ^ n`.
pub fn simulate_components(
    g: &ArrayGeometry,
    sources: &[SourceSpec],
    snr_db: f64,
    seed: u64,
) -> Result<ReceptionComponents> {
    if sources.is_empty() {
        return Err(Error::InvalidConfig(
            "reception needs at least one source".into(),
        ));
    }
    let fs = sources[0].waveform.sample_rate_hz();
    for s in sources {
        check_angle(s.angle_deg)?;
        if s.waveform.sample_rate_hz() != fs {
            return Err(Error::SampleRateMismatch {
                a: fs,
                b: s.waveform.sample_rate_hz(),
            });
        }
    }
    let len = sources.iter().map(|s| s.waveform.len()).max().unwrap();
    let padded: Vec<Waveform> = sources
        .iter()
        .map(|s| s.waveform.clone().zero_pad_to(len))
        .collect();
    let delays: Vec<Vec<f64>> = sources
        .iter()
        .map(|s| steering_delays(g, s.angle_deg))
        .collect::<Result<_>>()?;

    // Every (source, channel) pair is independent; synthesize in parallel
    // and regroup in index order so the result is deterministic.
    let n_ch = g.num_mics();
    let jobs: Vec<(usize, usize)> = (0..sources.len())
        .flat_map(|s| (0..n_ch).map(move |n| (s, n)))
        .collect();
    let delayed: Vec<Waveform> = jobs
        .par_iter()
        .map(|&(s, n)| {
            let d = fractional_delay(&padded[s], delays[s][n])?;
            let scaled = d.samples().iter().map(|x| sources[s].gain * x).collect();
            Waveform::new(scaled, fs)
        })
        .collect::<Result<_>>()?;

    let per_source: Vec<MultichannelRecording> = delayed
        .chunks(n_ch)
        .map(|chunk| MultichannelRecording::new(chunk.to_vec(), *g))
        .collect::<Result<_>>()?;

    let noise = if snr_db == f64::INFINITY {
        None
    } else {
        let snr_lin = 10f64.powf(snr_db / 10.0);
        let channels: Vec<Waveform> = (0..n_ch)
            .map(|n| {
                let mut clean = vec![0.0; len];
                for rec in &per_source {
                    for (a, s) in clean.iter_mut().zip(rec.channel(n).samples()) {
                        *a += s;
                    }
                }
                let p = clean.iter().map(|x| x * x).sum::<f64>() / len as f64;
                if p <= 0.0 {
                    return Err(Error::ZeroPower);
                }
                let sigma = (p / snr_lin).sqrt();
                let mut gauss = GaussianSource::new(seed ^ n as u64);
                let mut buf = vec![0.0; len];
                gauss.fill_scaled(&mut buf, sigma);
                Waveform::new(buf, fs)
            })
            .collect::<Result<_>>()?;
        Some(MultichannelRecording::new(channels, *g)?)
    };

    Ok(ReceptionComponents { per_source, noise })
}

/// Channel n = sum over sources of gain * fractional_delay(waveform, tau_n)
/// plus independent per-channel AWGN (`f64::INFINITY` SNR = noiseless).
/// Deterministic per (seed, channel index).
pub fn simulate_reception(
    g: &ArrayGeometry,
    sources: &[SourceSpec],
    snr_db: f64,
    seed: u64,
) -> Result<MultichannelRecording> {
    simulate_components(g, sources, snr_db, seed)?.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{power, tone};

    #[test]
    fn delays_broadside_and_oracle_value() {
        let g = ArrayGeometry::demo_default();
        let zero = steering_delays(&g, 0.0).unwrap();
        assert!(zero.iter().all(|&t| t == 0.0));

        // 0.05 * sin(20 deg) / 343, frozen from independent evaluation.
        let d20 = steering_delays(&g, 20.0).unwrap();
        assert!((d20[1] - 4.9857e-5).abs() < 1e-9, "tau_1 = {}", d20[1]);
        assert!((d20[9] - 9.0 * d20[1]).abs() < 1e-18);

        let neg = steering_delays(&g, -20.0).unwrap();
        for (a, b) in neg.iter().zip(&d20) {
            assert_eq!(*a, -b);
        }

        assert!(steering_delays(&g, 90.5).is_err());
    }

    #[test]
    fn steering_vector_properties() {
        let g = ArrayGeometry::demo_default();
        let v0 = steering_vector(&g, 0.0, 3500.0).unwrap();
        assert!(v0.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let v = steering_vector(&g, 35.0, 2500.0).unwrap();
        let vn = steering_vector(&g, -35.0, 2500.0).unwrap();
        for (a, b) in v.iter().zip(&vn) {
            assert!((a - b.conj()).norm() < 1e-12, "v(-theta) = conj(v(theta))");
        }
        for c in &v {
            assert!((c.norm() - 1.0).abs() < 1e-12);
        }
        let dot: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        assert!((dot - 10.0).abs() < 1e-9, "|v|^2 sums to N");
    }

    #[test]
    fn broadside_source_hits_all_channels_identically() {
        let g = ArrayGeometry::demo_default();
        let src = SourceSpec {
            angle_deg: 0.0,
            waveform: tone(1500.0, 0.05, 1.0, 0.0, 48_000.0).unwrap(),
            gain: 1.0,
        };
        let rec = simulate_reception(&g, std::slice::from_ref(&src), f64::INFINITY, 0).unwrap();
        for n in 0..10 {
            for k in 64..rec.len() - 64 {
                let err = (rec.channel(n).samples()[k] - src.waveform.samples()[k]).abs();
                assert!(err < 1e-6, "channel {n} sample {k} error {err}");
            }
        }
    }

    #[test]
    fn tone_source_phase_lags_match_geometry() {
        let g = ArrayGeometry::demo_default();
        let fs = 48_000.0;
        let f = 2500.0;
        let theta: f64 = -10.0;
        let src = SourceSpec {
            angle_deg: theta,
            waveform: tone(f, 0.2, 1.0, 0.3, fs).unwrap(),
            gain: 1.0,
        };
        let rec = simulate_reception(&g, &[src], f64::INFINITY, 0).unwrap();
        let phase_of = |w: &Waveform| -> f64 {
            // Complex bin over an interior window.
            let lo = 200;
            let hi = w.len() - 200;
            let omega = std::f64::consts::TAU * f / fs;
            let (mut re, mut im) = (0.0, 0.0);
            for k in lo..hi {
                re += w.samples()[k] * (omega * k as f64).cos();
                im -= w.samples()[k] * (omega * k as f64).sin();
            }
            im.atan2(re)
        };
        let expected_step = -std::f64::consts::TAU
            * f
            * (g.spacing_m() * theta.to_radians().sin() / g.speed_of_sound_mps());
        let p0 = phase_of(rec.channel(0));
        for n in 1..10 {
            let pn = phase_of(rec.channel(n));
            let mut diff = pn - p0 - n as f64 * expected_step;
            while diff > std::f64::consts::PI {
                diff -= std::f64::consts::TAU;
            }
            while diff < -std::f64::consts::PI {
                diff += std::f64::consts::TAU;
            }
            assert!(
                diff.abs() < 0.02,
                "channel {n} phase error {diff} rad (expected step {expected_step})"
            );
        }
    }

    #[test]
    fn superposition_is_exact() {
        let g = ArrayGeometry::new(4, 0.05, 343.0).unwrap();
        let a = SourceSpec {
            angle_deg: -30.0,
            waveform: tone(900.0, 0.04, 1.0, 0.0, 48_000.0).unwrap(),
            gain: 0.8,
        };
        let b = SourceSpec {
            angle_deg: 20.0,
            waveform: tone(2100.0, 0.04, 1.0, 0.5, 48_000.0).unwrap(),
            gain: 1.2,
        };
        let both = simulate_reception(&g, &[a.clone(), b.clone()], f64::INFINITY, 0).unwrap();
        let only_a = simulate_reception(&g, &[a], f64::INFINITY, 0).unwrap();
        let only_b = simulate_reception(&g, &[b], f64::INFINITY, 0).unwrap();
        for n in 0..4 {
            for k in 0..both.len() {
                let sum = only_a.channel(n).samples()[k] + only_b.channel(n).samples()[k];
                assert_eq!(
                    both.channel(n).samples()[k],
                    sum,
                    "channel {n} sample {k} not an exact sum"
                );
            }
        }
    }

    #[test]
    fn components_sum_to_total_and_carry_noise() {
        let g = ArrayGeometry::new(3, 0.05, 343.0).unwrap();
        let srcs = vec![
            SourceSpec {
                angle_deg: -10.0,
                waveform: tone(1500.0, 0.05, 1.0, 0.0, 48_000.0).unwrap(),
                gain: 1.0,
            },
            SourceSpec {
                angle_deg: 20.0,
                waveform: tone(2500.0, 0.05, 1.0, 0.0, 48_000.0).unwrap(),
                gain: 1.0,
            },
        ];
        let comp = simulate_components(&g, &srcs, 10.0, 42).unwrap();
        assert_eq!(comp.per_source.len(), 2);
        assert!(comp.noise.is_some());
        let total = comp.total().unwrap();
        let direct = simulate_reception(&g, &srcs, 10.0, 42).unwrap();
        for n in 0..3 {
            assert_eq!(total.channel(n).samples(), direct.channel(n).samples());
        }
        let int_noise = comp.interference_plus_noise(0).unwrap();
        for n in 0..3 {
            for k in 0..total.len() {
                let with_data = comp.per_source[0].channel(n).samples()[k]
                    + int_noise.channel(n).samples()[k];
                assert!((with_data - total.channel(n).samples()[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noise_is_deterministic_per_seed_and_decorrelated_per_channel() {
        let g = ArrayGeometry::new(2, 0.05, 343.0).unwrap();
        let src = SourceSpec {
            angle_deg: 0.0,
            waveform: tone(1000.0, 0.1, 1.0, 0.0, 48_000.0).unwrap(),
            gain: 1.0,
        };
        let a = simulate_reception(&g, std::slice::from_ref(&src), 5.0, 7).unwrap();
        let b = simulate_reception(&g, std::slice::from_ref(&src), 5.0, 7).unwrap();
        for n in 0..2 {
            assert_eq!(a.channel(n).samples(), b.channel(n).samples());
        }
        let c = simulate_reception(&g, &[src], 5.0, 8).unwrap();
        assert_ne!(a.channel(0).samples(), c.channel(0).samples());
        assert_ne!(a.channel(0).samples(), a.channel(1).samples());
    }

    #[test]
    fn per_channel_power_within_one_percent_of_source() {
        let g = ArrayGeometry::demo_default();
        let src_wave = tone(3500.0, 0.1, 1.0, 0.0, 48_000.0).unwrap();
        let rec = simulate_reception(
            &g,
            &[SourceSpec {
                angle_deg: 35.0,
                waveform: src_wave.clone(),
                gain: 1.0,
            }],
            f64::INFINITY,
            0,
        )
        .unwrap();
        let interior = |w: &Waveform| {
            Waveform::new(w.samples()[64..w.len() - 64].to_vec(), 48_000.0).unwrap()
        };
        let p_src = power(&interior(&src_wave)).unwrap();
        for n in 0..10 {
            let p = power(&interior(rec.channel(n))).unwrap();
            assert!(
                ((p - p_src) / p_src).abs() < 0.01,
                "channel {n} power {p} vs source {p_src}"
            );
        }
    }

    #[test]
    fn rejects_rate_mismatch_and_empty_sources() {
        let g = ArrayGeometry::demo_default();
        assert!(simulate_reception(&g, &[], f64::INFINITY, 0).is_err());
        let a = SourceSpec {
            angle_deg: 0.0,
            waveform: tone(1000.0, 0.05, 1.0, 0.0, 48_000.0).unwrap(),
            gain: 1.0,
        };
        let b = SourceSpec {
            angle_deg: 10.0,
            waveform: tone(1000.0, 0.05, 1.0, 0.0, 44_100.0).unwrap(),
            gain: 1.0,
        };
        assert!(matches!(
            simulate_reception(&g, &[a, b], f64::INFINITY, 0),
            Err(Error::SampleRateMismatch { .. })
        ));
    }
}
