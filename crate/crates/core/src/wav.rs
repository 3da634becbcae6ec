//! WAV serialization: 32-bit IEEE float, little-endian, mono or interleaved
//! multichannel (channel order = microphone index order).

use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::Waveform;

fn spec_for(sample_rate_hz: f64, channels: u16) -> Result<hound::WavSpec> {
    if sample_rate_hz <= 0.0 || sample_rate_hz.fract() != 0.0 || sample_rate_hz > u32::MAX as f64 {
        return Err(Error::InvalidConfig(format!(
            "WAV headers need an integral positive sample rate, got {sample_rate_hz}"
        )));
    }
    Ok(hound::WavSpec {
        channels,
        sample_rate: sample_rate_hz as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    })
}

pub fn write_mono(path: impl AsRef<Path>, w: &Waveform) -> Result<()> {
    let spec = spec_for(w.sample_rate_hz(), 1)?;
    let mut writer = hound::WavWriter::create(path, spec)?;
    for &s in w.samples() {
        writer.write_sample(s as f32)?;
    }
    writer.finalize()?;
    Ok(())
}

/// Writes channels interleaved: frame k is channel 0..N-1 at time k.
pub fn write_multichannel(path: impl AsRef<Path>, channels: &[Waveform]) -> Result<()> {
    let first = channels.first().ok_or(Error::EmptyWaveform)?;
    for ch in channels {
        if ch.sample_rate_hz() != first.sample_rate_hz() {
            return Err(Error::SampleRateMismatch {
                a: first.sample_rate_hz(),
                b: ch.sample_rate_hz(),
            });
        }
        if ch.len() != first.len() {
            return Err(Error::InvalidConfig(
                "all channels must have equal length".into(),
            ));
        }
    }
    let spec = spec_for(first.sample_rate_hz(), channels.len() as u16)?;
    let mut writer = hound::WavWriter::create(path, spec)?;
    for k in 0..first.len() {
        for ch in channels {
            writer.write_sample(ch.samples()[k] as f32)?;
        }
    }
    writer.finalize()?;
    Ok(())
}

/// Reads any float32 WAV into per-channel waveforms.
pub fn read_channels(path: impl AsRef<Path>) -> Result<Vec<Waveform>> {
    let mut reader = hound::WavReader::open(path)?;
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Float || spec.bits_per_sample != 32 {
        return Err(Error::InvalidConfig(format!(
            "expected 32-bit float WAV, got {}-bit {:?}",
            spec.bits_per_sample, spec.sample_format
        )));
    }
    let n_ch = spec.channels as usize;
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); n_ch];
    for (i, s) in reader.samples::<f32>().enumerate() {
        channels[i % n_ch].push(s? as f64);
    }
    channels
        .into_iter()
        .map(|c| Waveform::new(c, spec.sample_rate as f64))
        .collect()
}

pub fn read_mono(path: impl AsRef<Path>) -> Result<Waveform> {
    let mut channels = read_channels(path)?;
    if channels.len() != 1 {
        return Err(Error::InvalidConfig(format!(
            "expected a mono WAV, got {} channels",
            channels.len()
        )));
    }
    Ok(channels.remove(0))
}
