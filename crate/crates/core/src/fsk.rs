//! M-ary FSK modem: bit-to-symbol mapping, tone-burst modulation,
//! preamble-based synchronization, Goertzel-energy demodulation, and a
//! simple frame format.
//!
//! Frame bit layout, most significant bit first:
//! preamble (13 symbols, Barker-13 derived, see [`BARKER_13`]) | length: 16
//! bits | payload | CRC-16/CCITT-FALSE over the length and payload bits.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::Waveform;

/// Maximum payload size accepted by [`encode_frame`], in bits.
pub const MAX_PAYLOAD_BITS: usize = 4096;

/// Default peak-correlation threshold below which [`synchronize`] reports
/// that no frame is present.
pub const SYNC_THRESHOLD: f64 = 0.5;

/// Barker-13 code. The preamble maps each 1 to the highest carrier and each
/// 0 to the lowest, giving the sharp self-correlation Barker codes exist for.
pub const BARKER_13: [bool; 13] = [
    true, true, true, true, true, false, false, true, true, false, true, false, true,
];

/// Modem parameters: carrier set, symbol duration, sample rate, amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct FskConfig {
    carriers_hz: Vec<f64>,
    symbol_duration_s: f64,
    sample_rate_hz: f64,
    amplitude: f64,
}

impl FskConfig {
    /// Validates the orthogonality and Nyquist guards:
    /// M is a power of two (at least 2), carriers strictly increasing and
    /// below Nyquist, adjacent spacing at least 1/symbol_duration.
    pub fn new(
        carriers_hz: Vec<f64>,
        symbol_duration_s: f64,
        sample_rate_hz: f64,
        amplitude: f64,
    ) -> Result<Self> {
        let m = carriers_hz.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "carrier count must be a power of two of at least 2, got {m}"
            )));
        }
        if !sample_rate_hz.is_finite() || sample_rate_hz <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if !symbol_duration_s.is_finite() || symbol_duration_s <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "symbol duration must be positive and finite, got {symbol_duration_s}"
            )));
        }
        if !amplitude.is_finite() || amplitude <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "amplitude must be positive and finite, got {amplitude}"
            )));
        }
        let nyquist = sample_rate_hz / 2.0;
        let min_spacing = 1.0 / symbol_duration_s;
        for (i, &c) in carriers_hz.iter().enumerate() {
            if !c.is_finite() || c <= 0.0 || c >= nyquist {
                return Err(Error::Aliasing {
                    freq_hz: c,
                    nyquist_hz: nyquist,
                });
            }
            if i > 0 {
                let gap = c - carriers_hz[i - 1];
                if gap <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "carriers must be strictly increasing".into(),
                    ));
                }
                if gap < min_spacing - 1e-9 {
                    return Err(Error::InvalidConfig(format!(
                        "carrier spacing {gap} Hz below orthogonality minimum {min_spacing} Hz"
                    )));
                }
            }
        }
        let cfg = Self {
            carriers_hz,
            symbol_duration_s,
            sample_rate_hz,
            amplitude,
        };
        if cfg.samples_per_symbol() == 0 {
            return Err(Error::InvalidConfig(
                "symbol duration rounds to zero samples".into(),
            ));
        }
        Ok(cfg)
    }

    /// The 4-FSK audible demo set: 0.5/1.5/2.5/3.5 kHz, 10 ms symbols,
    /// 48 kHz sampling, unit amplitude.
    pub fn audible_default() -> Self {
        Self::new(vec![500.0, 1500.0, 2500.0, 3500.0], 0.01, 48_000.0, 1.0)
            .expect("default config is valid")
    }

    /// Near-ultrasonic preset: 15.5/17.0/18.5/20.0 kHz, same timing.
    pub fn near_ultrasonic() -> Self {
        Self::new(
            vec![15_500.0, 17_000.0, 18_500.0, 20_000.0],
            0.01,
            48_000.0,
            1.0,
        )
        .expect("preset is valid")
    }

    pub fn carriers_hz(&self) -> &[f64] {
        &self.carriers_hz
    }

    pub fn symbol_duration_s(&self) -> f64 {
        self.symbol_duration_s
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// M, the symbol alphabet size.
    pub fn order(&self) -> usize {
        self.carriers_hz.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order().trailing_zeros() as usize
    }

    pub fn samples_per_symbol(&self) -> usize {
        (self.symbol_duration_s * self.sample_rate_hz).round() as usize
    }

    /// Preamble symbol sequence: Barker-13 mapped onto the carrier extremes.
    pub fn preamble_symbols(&self) -> Vec<u16> {
        let hi = (self.order() - 1) as u16;
        BARKER_13.iter().map(|&b| if b { hi } else { 0 }).collect()
    }

    pub fn preamble_len_samples(&self) -> usize {
        BARKER_13.len() * self.samples_per_symbol()
    }
}

/// Packs bits (MSB first) into symbols of `bits_per_symbol` bits, zero
/// padding the final symbol.
pub fn bits_to_symbols(bits: &[bool], bits_per_symbol: usize) -> Vec<u16> {
    bits.chunks(bits_per_symbol)
        .map(|chunk| {
            let mut s = 0u16;
            for i in 0..bits_per_symbol {
                s <<= 1;
                s |= chunk.get(i).copied().unwrap_or(false) as u16;
            }
            s
        })
        .collect()
}

/// Inverse of [`bits_to_symbols`] without pad removal.
pub fn symbols_to_bits(symbols: &[u16], bits_per_symbol: usize) -> Vec<bool> {
    let mut bits = Vec::with_capacity(symbols.len() * bits_per_symbol);
    for &s in symbols {
        for i in (0..bits_per_symbol).rev() {
            bits.push((s >> i) & 1 == 1);
        }
    }
    bits
}

/// Bytes to bits, MSB first within each byte.
pub fn bits_from_bytes(bytes: &[u8]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        for i in (0..8).rev() {
            bits.push((b >> i) & 1 == 1);
        }
    }
    bits
}

/// Bits to bytes, MSB first; the final byte is zero padded.
pub fn bytes_from_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            let mut b = 0u8;
            for i in 0..8 {
                b <<= 1;
                b |= chunk.get(i).copied().unwrap_or(false) as u8;
            }
            b
        })
        .collect()
}

/// Modulates a symbol sequence as concatenated tone bursts, each starting
/// at phase 0 (discontinuous-phase FSK).
pub fn modulate_symbols(symbols: &[u16], cfg: &FskConfig) -> Result<Waveform> {
    if symbols.is_empty() {
        return Err(Error::EmptyBits);
    }
    let sps = cfg.samples_per_symbol();
    let mut samples = Vec::with_capacity(symbols.len() * sps);
    for &s in symbols {
        let f = *cfg
            .carriers_hz
            .get(s as usize)
            .ok_or_else(|| Error::InvalidConfig(format!("symbol {s} out of range")))?;
        let w = std::f64::consts::TAU * f / cfg.sample_rate_hz;
        for k in 0..sps {
            samples.push(cfg.amplitude * (w * k as f64).sin());
        }
    }
    Waveform::new(samples, cfg.sample_rate_hz)
}

/// Modulates a bit sequence; symbol values use big-endian bit grouping and
/// map in natural binary order onto the ascending carrier list.
pub fn modulate(bits: &[bool], cfg: &FskConfig) -> Result<Waveform> {
    if bits.is_empty() {
        return Err(Error::EmptyBits);
    }
    modulate_symbols(&bits_to_symbols(bits, cfg.bits_per_symbol()), cfg)
}

/// Single-frequency spectral energy of a sample slice by the Goertzel
/// recurrence: |sum_k x[k] e^{-i w k}|^2 / N^2 with w = 2 pi f / fs.
/// Valid for any frequency below Nyquist, not just integer bins.
fn goertzel_energy_slice(samples: &[f64], sample_rate_hz: f64, freq_hz: f64) -> f64 {
    let n = samples.len();
    let w = std::f64::consts::TAU * freq_hz / sample_rate_hz;
    let coeff = 2.0 * w.cos();
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for &x in samples {
        let s0 = x + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    (s1 * s1 + s2 * s2 - coeff * s1 * s2) / (n as f64 * n as f64)
}

/// Goertzel bin energy of a whole waveform (see [`demodulate`] for the
/// windowed use). A whole-period pure tone of amplitude A at `freq_hz`
/// yields (A/2)^2.
pub fn goertzel_energy(segment: &Waveform, freq_hz: f64) -> Result<f64> {
    if segment.is_empty() {
        return Err(Error::EmptyWaveform);
    }
    let nyquist = segment.sample_rate_hz() / 2.0;
    if !freq_hz.is_finite() || freq_hz < 0.0 || freq_hz >= nyquist {
        return Err(Error::Aliasing {
            freq_hz,
            nyquist_hz: nyquist,
        });
    }
    Ok(goertzel_energy_slice(
        segment.samples(),
        segment.sample_rate_hz(),
        freq_hz,
    ))
}

/// Demodulates `num_symbols` symbol windows starting at `start_sample` by
/// carrier-energy argmax. Ties break toward the lowest carrier index.
pub fn demodulate_symbols(
    w: &Waveform,
    cfg: &FskConfig,
    start_sample: usize,
    num_symbols: usize,
) -> Result<Vec<u16>> {
    let sps = cfg.samples_per_symbol();
    let end = start_sample + num_symbols * sps;
    if end > w.len() {
        return Err(Error::WindowOverrun {
            start: start_sample,
            end,
            len: w.len(),
        });
    }
    let mut symbols = Vec::with_capacity(num_symbols);
    for s in 0..num_symbols {
        let window = &w.samples()[start_sample + s * sps..start_sample + (s + 1) * sps];
        let mut best = 0u16;
        let mut best_energy = f64::NEG_INFINITY;
        for (i, &f) in cfg.carriers_hz.iter().enumerate() {
            let e = goertzel_energy_slice(window, cfg.sample_rate_hz, f);
            if e > best_energy {
                best_energy = e;
                best = i as u16;
            }
        }
        symbols.push(best);
    }
    Ok(symbols)
}

/// [`demodulate_symbols`] with the symbols unpacked to bits.
pub fn demodulate(
    w: &Waveform,
    cfg: &FskConfig,
    start_sample: usize,
    num_symbols: usize,
) -> Result<Vec<bool>> {
    Ok(symbols_to_bits(
        &demodulate_symbols(w, cfg, start_sample, num_symbols)?,
        cfg.bits_per_symbol(),
    ))
}

/// Where a frame was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncPoint {
    /// First sample of the preamble.
    pub frame_start: usize,
    /// First sample after the preamble (length field onward).
    pub payload_start: usize,
    /// Peak normalized correlation in [0, 1].
    pub correlation: f64,
}

/// Locates the frame preamble by normalized cross-correlation against the
/// modulated preamble waveform, with the default detection threshold.
pub fn synchronize(w: &Waveform, cfg: &FskConfig) -> Result<SyncPoint> {
    synchronize_with_threshold(w, cfg, SYNC_THRESHOLD)
}

pub fn synchronize_with_threshold(
    w: &Waveform,
    cfg: &FskConfig,
    threshold: f64,
) -> Result<SyncPoint> {
    let preamble = modulate_symbols(&cfg.preamble_symbols(), cfg)?;
    if w.sample_rate_hz() != preamble.sample_rate_hz() {
        return Err(Error::SampleRateMismatch {
            a: w.sample_rate_hz(),
            b: preamble.sample_rate_hz(),
        });
    }
    if w.len() < preamble.len() {
        return Err(Error::NoFrameFound {
            peak: 0.0,
            threshold,
        });
    }
    let corr = normalized_correlation(w.samples(), preamble.samples());
    let (best_lag, peak) = corr
        .iter()
        .copied()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    if peak < threshold {
        return Err(Error::NoFrameFound { peak, threshold });
    }
    Ok(SyncPoint {
        frame_start: best_lag,
        payload_start: best_lag + preamble.len(),
        correlation: peak,
    })
}

/// Normalized cross-correlation of `pattern` against every lag of `signal`:
/// c[k] = sum_i signal[k+i] pattern[i] / sqrt(E_signal(k) E_pattern).
/// The numerator is computed via FFT (correlation theorem); the sliding
/// window energy via prefix sums. Windows with nearly zero energy score 0.
fn normalized_correlation(signal: &[f64], pattern: &[f64]) -> Vec<f64> {
    let n = signal.len();
    let p = pattern.len();
    debug_assert!(p <= n);
    let lags = n - p + 1;

    let size = (n + p).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(size);
    let ifft = planner.plan_fft_inverse(size);

    let mut fs: Vec<Complex64> = signal
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(std::iter::repeat(Complex64::ZERO))
        .take(size)
        .collect();
    let mut fp: Vec<Complex64> = pattern
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .chain(std::iter::repeat(Complex64::ZERO))
        .take(size)
        .collect();
    fft.process(&mut fs);
    fft.process(&mut fp);
    for (a, b) in fs.iter_mut().zip(&fp) {
        *a *= b.conj();
    }
    ifft.process(&mut fs);
    let scale = 1.0 / size as f64;

    let pattern_energy: f64 = pattern.iter().map(|x| x * x).sum();
    let mut prefix = vec![0.0f64];
    let mut acc = 0.0;
    for &x in signal {
        acc += x * x;
        prefix.push(acc);
    }

    (0..lags)
        .map(|k| {
            let window_energy = prefix[k + p] - prefix[k];
            let denom = (window_energy * pattern_energy).sqrt();
            if denom < 1e-12 {
                0.0
            } else {
                fs[k].re * scale / denom
            }
        })
        .collect()
}

/// CRC-16/CCITT-FALSE over a bit sequence, MSB-first: polynomial 0x1021,
/// initial value 0xFFFF, no reflection, no final XOR.
pub fn crc16_ccitt_false(bits: &[bool]) -> u16 {
    let mut reg = 0xFFFFu16;
    for &bit in bits {
        let msb = (reg >> 15) & 1 == 1;
        reg <<= 1;
        if msb != bit {
            reg ^= 0x1021;
        }
    }
    reg
}

/// Big-endian 16-bit field, as used by the frame length and CRC.
pub fn u16_to_bits(v: u16) -> Vec<bool> {
    (0..16).rev().map(|i| (v >> i) & 1 == 1).collect()
}

/// Inverse of [`u16_to_bits`]; reads at most 16 bits, MSB first.
pub fn bits_to_u16(bits: &[bool]) -> u16 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u16)
}

/// Encodes payload bits as a complete frame waveform:
/// preamble | 16-bit length | payload | CRC-16, zero padded to a whole
/// number of symbols.
pub fn encode_frame(payload: &[bool], cfg: &FskConfig) -> Result<Waveform> {
    if payload.len() > MAX_PAYLOAD_BITS {
        return Err(Error::PayloadTooLong(payload.len(), MAX_PAYLOAD_BITS));
    }
    let mut content = u16_to_bits(payload.len() as u16);
    content.extend_from_slice(payload);
    let crc = crc16_ccitt_false(&content);
    content.extend(u16_to_bits(crc));

    let mut symbols = cfg.preamble_symbols();
    symbols.extend(bits_to_symbols(&content, cfg.bits_per_symbol()));
    modulate_symbols(&symbols, cfg)
}

/// Synchronizes, demodulates, and CRC-checks one frame, returning the
/// payload bits. A CRC failure carries the raw decoded payload bits for
/// diagnostics.
pub fn decode_frame(w: &Waveform, cfg: &FskConfig) -> Result<Vec<bool>> {
    let sync = synchronize(w, cfg)?;
    decode_frame_at(w, cfg, sync.payload_start)
}

/// [`decode_frame`] with synchronization bypassed: `content_start` is the
/// first sample of the length field (as returned in `SyncPoint::payload_start`).
pub fn decode_frame_at(w: &Waveform, cfg: &FskConfig, content_start: usize) -> Result<Vec<bool>> {
    let bps = cfg.bits_per_symbol();
    let header_symbols = 16usize.div_ceil(bps);
    let header_bits = demodulate(w, cfg, content_start, header_symbols)?;
    let payload_len = bits_to_u16(&header_bits[..16]) as usize;
    if payload_len > MAX_PAYLOAD_BITS {
        // A length this large cannot come from a well-formed frame; the
        // header itself is corrupt. Report with the header bits we saw.
        return Err(Error::CorruptFrame {
            expected: 0,
            computed: 0,
            payload_bits: header_bits,
        });
    }
    let content_bits = 16 + payload_len + 16;
    let content_symbols = content_bits.div_ceil(bps);
    let bits = demodulate(w, cfg, content_start, content_symbols)?;
    let payload = bits[16..16 + payload_len].to_vec();
    let expected = bits_to_u16(&bits[16 + payload_len..content_bits]);
    let computed = crc16_ccitt_false(&bits[..16 + payload_len]);
    if computed != expected {
        return Err(Error::CorruptFrame {
            expected,
            computed,
            payload_bits: payload,
        });
    }
    Ok(payload)
}
