//! One function per subcommand. Each resolves its inputs, drives the
//! library, writes the declared artifacts, and prints a short summary.

use std::fs;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use uplink_core::array::{simulate_components, simulate_reception, MultichannelRecording};
use uplink_core::beamform::{delay_and_sum, frost_process, PatternWeights};
use uplink_core::fsk::{bits_from_bytes, decode_frame_at, encode_frame, synchronize, FskConfig};
use uplink_core::metrics::{evaluate_scenario, run_pipeline, Pipeline, PipelineOutcome};
use uplink_core::scenario::{DataTruth, Role, Scenario};
use uplink_core::wav;

use crate::io;
use crate::{
    AlgoArg, BeamformArgs, BeampatternArgs, BerSweepArgs, DemodArgs, E2eArgs, FskFlags,
    ModulateArgs, SimulateArgs,
};

impl FskFlags {
    fn config(&self, sample_rate_hz: f64) -> Result<FskConfig> {
        if self.near_ultrasonic {
            let cfg = FskConfig::near_ultrasonic();
            if cfg.sample_rate_hz() != sample_rate_hz {
                bail!(
                    "the near-ultrasonic preset is defined at {} Hz, not {} Hz",
                    cfg.sample_rate_hz(),
                    sample_rate_hz
                );
            }
            return Ok(cfg);
        }
        FskConfig::new(
            self.carriers.clone(),
            self.symbol_duration,
            sample_rate_hz,
            self.amplitude,
        )
        .map_err(Into::into)
    }
}

fn load_scenario(path: &std::path::Path) -> Result<Scenario> {
    Scenario::from_path(path).with_context(|| format!("loading scenario {}", path.display()))
}

pub fn modulate(args: ModulateArgs) -> Result<()> {
    let payload = match (&args.hex, &args.payload_file) {
        (Some(hex), None) => io::hex_to_bits(hex)?,
        (None, Some(path)) => {
            let bytes =
                fs::read(path).with_context(|| format!("reading payload {}", path.display()))?;
            bits_from_bytes(&bytes)
        }
        (None, None) => bail!("give the payload with --hex or --payload-file"),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if payload.is_empty() {
        bail!("payload must not be empty");
    }

    let cfg = args.fsk.config(args.sample_rate)?;
    let wave = encode_frame(&payload, &cfg)?;
    wav::write_mono(&args.out, &wave)?;

    let carriers = cfg.carriers_hz();
    println!(
        "wrote {}: {} payload bits in {} symbols, {:.3} s at {} Hz, band {:.0}-{:.0} Hz",
        args.out.display(),
        payload.len(),
        wave.len() / cfg.samples_per_symbol(),
        wave.duration_s(),
        cfg.sample_rate_hz(),
        carriers[0],
        carriers[carriers.len() - 1],
    );
    Ok(())
}

#[derive(Serialize)]
struct SourceMeta {
    angle_deg: f64,
    role: Role,
    gain: f64,
}

#[derive(Serialize)]
struct DataMeta {
    source_index: usize,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    num_payload_bits: Option<usize>,
    /// Zero padded up to a whole trailing byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    payload_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    frame_start_sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    content_start_sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    num_symbols: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_symbol_sample: Option<usize>,
}

#[derive(Serialize)]
struct SimulateMeta {
    scenario_id: String,
    sample_rate_hz: f64,
    num_channels: usize,
    num_samples: usize,
    duration_s: f64,
    /// Null when the scenario is noiseless.
    snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_seed: Option<u64>,
    sources: Vec<SourceMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<DataMeta>,
}

pub fn simulate(args: SimulateArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let outputs = scenario.outputs.clone().unwrap_or_default();
    let out_wav = io::resolve_out(
        args.out_wav,
        outputs.recording_wav.as_ref(),
        "--out-wav",
        "recording_wav",
    )?;
    let out_meta = io::resolve_out(
        args.out_meta,
        outputs.metadata_json.as_ref(),
        "--out-meta",
        "metadata_json",
    )?;

    let realized = scenario.realize()?;
    let rec = simulate_reception(
        &realized.geometry,
        &realized.sources,
        realized.snr_db,
        realized.noise_seed,
    )?;
    wav::write_multichannel(&out_wav, rec.channels())?;

    let noiseless = realized.snr_db == f64::INFINITY;
    let data = realized.truth.as_ref().map(|t| {
        let ix = realized.data_index.expect("truth implies a data source");
        match t {
            DataTruth::Frame {
                payload_bits,
                frame_start_sample,
                content_start_sample,
            } => DataMeta {
                source_index: ix,
                kind: "frame",
                num_payload_bits: Some(payload_bits.len()),
                payload_hex: Some(io::bits_to_hex(payload_bits)),
                frame_start_sample: Some(*frame_start_sample),
                content_start_sample: Some(*content_start_sample),
                num_symbols: None,
                first_symbol_sample: None,
            },
            DataTruth::RawSymbols {
                symbols,
                first_symbol_sample,
                ..
            } => DataMeta {
                source_index: ix,
                kind: "symbols",
                num_payload_bits: None,
                payload_hex: None,
                frame_start_sample: None,
                content_start_sample: None,
                num_symbols: Some(symbols.len()),
                first_symbol_sample: Some(*first_symbol_sample),
            },
        }
    });
    let meta = SimulateMeta {
        scenario_id: realized.id.clone(),
        sample_rate_hz: rec.sample_rate_hz(),
        num_channels: rec.num_channels(),
        num_samples: rec.len(),
        duration_s: rec.len() as f64 / rec.sample_rate_hz(),
        snr_db: (!noiseless).then_some(realized.snr_db),
        noise_seed: (!noiseless).then_some(realized.noise_seed),
        sources: realized
            .sources
            .iter()
            .zip(&realized.roles)
            .map(|(s, &role)| SourceMeta {
                angle_deg: s.angle_deg,
                role,
                gain: s.gain,
            })
            .collect(),
        data,
    };
    let mut json = serde_json::to_string_pretty(&meta)?;
    json.push('\n');
    io::save_text(&out_meta, &json)?;

    println!(
        "wrote {} ({} channels x {} samples at {} Hz) and {}",
        out_wav.display(),
        rec.num_channels(),
        rec.len(),
        rec.sample_rate_hz(),
        out_meta.display(),
    );
    Ok(())
}

pub fn beamform(args: BeamformArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let outputs = scenario.outputs.clone().unwrap_or_default();
    let out_wav = io::resolve_out(
        args.out_wav,
        outputs.beamformed_wav.as_ref(),
        "--out-wav",
        "beamformed_wav",
    )?;
    let out_weights = io::resolve_out(
        args.out_weights,
        outputs.weights_csv.as_ref(),
        "--out-weights",
        "weights_csv",
    )?;

    let channels = wav::read_channels(&args.recording)
        .with_context(|| format!("reading {}", args.recording.display()))?;
    let rec = MultichannelRecording::new(channels, scenario.geometry()?)?;
    let steer = scenario.steer_angle_deg()?;

    let (label, output, weights, num_taps) = match args.algo {
        AlgoArg::Frost => {
            let cfg = scenario.frost_config()?;
            let run = frost_process(&rec, &cfg)?;
            (
                "frost",
                run.output,
                run.state.weights().to_vec(),
                cfg.num_taps,
            )
        }
        AlgoArg::Das => {
            let output = delay_and_sum(&rec, steer)?;
            let n = rec.num_channels();
            ("delay-and-sum", output, vec![1.0 / n as f64; n], 1)
        }
    };
    wav::write_mono(&out_wav, &output)?;
    io::save_text(&out_weights, &io::weights_csv(&weights, num_taps))?;

    println!(
        "{label} steered to {steer} deg: wrote {} ({} samples) and {} ({} weights)",
        out_wav.display(),
        output.len(),
        out_weights.display(),
        weights.len(),
    );
    Ok(())
}

pub fn demod(args: DemodArgs) -> Result<()> {
    let channels = wav::read_channels(&args.recording)
        .with_context(|| format!("reading {}", args.recording.display()))?;
    if args.mic >= channels.len() {
        bail!(
            "--mic {} out of range: {} has {} channel(s)",
            args.mic,
            args.recording.display(),
            channels.len()
        );
    }
    let wave = &channels[args.mic];

    let cfg = match &args.scenario {
        Some(path) => {
            let cfg = load_scenario(path)?.fsk_config()?;
            if cfg.sample_rate_hz() != wave.sample_rate_hz() {
                bail!(
                    "scenario sample rate {} Hz does not match the recording's {} Hz",
                    cfg.sample_rate_hz(),
                    wave.sample_rate_hz()
                );
            }
            cfg
        }
        None => args.fsk.config(wave.sample_rate_hz())?,
    };

    let sync = synchronize(wave, &cfg).context("no frame found")?;
    println!(
        "frame at sample {} (preamble correlation {:.3})",
        sync.frame_start, sync.correlation
    );

    let truth = args.truth_hex.as_deref().map(io::hex_to_bits).transpose()?;
    let report_ber = |decoded: &[bool]| -> Result<()> {
        if let Some(tx) = &truth {
            if tx.len() != decoded.len() {
                bail!(
                    "truth is {} bits but the decoded payload is {} bits",
                    tx.len(),
                    decoded.len()
                );
            }
            let r = uplink_core::metrics::ber(tx, decoded)?;
            println!("BER vs truth: {:.4e} ({}/{})", r.ber, r.num_errors, r.num_bits);
        }
        Ok(())
    };

    match decode_frame_at(wave, &cfg, sync.payload_start) {
        Ok(payload) => {
            println!("payload {} bits: {}", payload.len(), io::bits_to_hex(&payload));
            println!("crc ok");
            report_ber(&payload)
        }
        Err(uplink_core::Error::CorruptFrame {
            expected,
            computed,
            payload_bits,
        }) => {
            println!(
                "payload (unverified) {} bits: {}",
                payload_bits.len(),
                io::bits_to_hex(&payload_bits)
            );
            report_ber(&payload_bits)?;
            bail!("frame failed CRC validation (expected {expected:#06x}, computed {computed:#06x})");
        }
        Err(e) => Err(e.into()),
    }
}

fn outcome_line(outcome: &PipelineOutcome) {
    let ber = match &outcome.ber {
        Some(b) => format!("{:.4} ({}/{})", b.ber, b.num_errors, b.num_bits),
        None => "-".into(),
    };
    let crc = match outcome.crc_ok {
        Some(true) => "ok",
        Some(false) => "BAD",
        None => "-",
    };
    println!(
        "{:>14}  SINR {:>8.2} dB  BER {ber:<18}  crc {crc}",
        outcome.label, outcome.sinr.sinr_db
    );
}

pub fn e2e(args: E2eArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let eval = evaluate_scenario(&scenario)?;

    for m in &eval.per_mic {
        outcome_line(m);
    }
    outcome_line(&eval.delay_and_sum);
    outcome_line(&eval.frost);
    if let Some(sync) = &eval.frost.sync {
        match sync.frame_start {
            Some(at) => println!(
                "frost sync: frame at sample {at} (expected {}, correlation {:.3})",
                sync.expected_frame_start, sync.correlation
            ),
            None => println!(
                "frost sync: no frame found (peak correlation {:.3})",
                sync.correlation
            ),
        }
    }
    if let Some(best) = eval.best_mic_ber {
        println!("best single-mic BER {best:.4}");
    }
    println!(
        "frost SINR gain over best mic: {:+.2} dB",
        eval.frost_sinr_gain_over_best_mic_db
    );

    let mut json = serde_json::to_string_pretty(&eval)?;
    json.push('\n');
    let fallback = scenario.outputs.as_ref().and_then(|o| o.results_json.clone());
    match (args.out, fallback) {
        (Some(p), _) => {
            io::save_text(&p, &json)?;
            println!("wrote {}", p.display());
        }
        (None, Some(p)) => {
            let p = std::path::PathBuf::from(p);
            io::save_text(&p, &json)?;
            println!("wrote {}", p.display());
        }
        (None, None) => print!("{json}"),
    }
    Ok(())
}

pub fn beampattern(args: BeampatternArgs) -> Result<()> {
    if !(args.step > 0.0 && args.step <= 180.0) {
        bail!("--step must be in (0, 180], got {}", args.step);
    }
    let scenario = load_scenario(&args.scenario)?;
    let out = io::resolve_out(
        args.out,
        scenario
            .outputs
            .as_ref()
            .and_then(|o| o.pattern_csv.as_ref()),
        "--out",
        "pattern_csv",
    )?;
    let geometry = scenario.geometry()?;
    let steer = scenario.steer_angle_deg()?;
    let fs = scenario.sample_rate_hz;

    let steps = (180.0 / args.step).floor() as usize;
    let angles: Vec<f64> = (0..=steps).map(|i| -90.0 + i as f64 * args.step).collect();

    let rows = match args.algo {
        AlgoArg::Das => uplink_core::beamform::beampattern(
            &geometry,
            steer,
            &PatternWeights::DelayAndSum,
            args.freq,
            fs,
            &angles,
        )?,
        AlgoArg::Frost => {
            // Adapt on the scenario first; the pattern is the frozen result.
            let realized = scenario.realize()?;
            let comp = simulate_components(
                &realized.geometry,
                &realized.sources,
                realized.snr_db,
                realized.noise_seed,
            )?;
            let run = run_pipeline(
                &realized,
                &comp,
                &Pipeline::Frost(scenario.frost_config()?),
            )?;
            let weights = run.weights.as_ref().expect("frost pipeline yields weights");
            uplink_core::beamform::beampattern(
                &geometry,
                steer,
                &PatternWeights::TappedDelay {
                    weights,
                    num_taps: run.num_taps,
                },
                args.freq,
                fs,
                &angles,
            )?
        }
    };

    let mut csv = String::from("angle_deg,gain_db\n");
    for (angle, gain) in &rows {
        csv.push_str(&format!("{angle:.4},{gain:.6}\n"));
    }
    io::save_text(&out, &csv)?;
    println!(
        "wrote {} ({} angles at {} Hz, steered to {steer} deg)",
        out.display(),
        rows.len(),
        args.freq
    );
    Ok(())
}

pub fn ber_sweep(args: BerSweepArgs) -> Result<()> {
    let scenario = load_scenario(&args.scenario)?;
    let out = io::resolve_out(
        args.out,
        scenario.outputs.as_ref().and_then(|o| o.sweep_csv.as_ref()),
        "--out",
        "sweep_csv",
    )?;

    let reports =
        uplink_core::metrics::ber_sweep(&scenario, &args.snr_grid, args.trials, args.seed)?;

    let mut csv = String::from("snr_db,num_bits,num_errors,ber\n");
    for r in &reports {
        let snr = r.snr_db.expect("sweep points carry their SNR");
        println!(
            "snr {snr:+.1} dB: BER {:.4e} ({}/{})",
            r.ber, r.num_errors, r.num_bits
        );
        csv.push_str(&format!(
            "{snr:.4},{},{},{:.8e}\n",
            r.num_bits, r.num_errors, r.ber
        ));
    }
    io::save_text(&out, &csv)?;
    println!(
        "wrote {} ({} points x {} trials, seed {})",
        out.display(),
        reports.len(),
        args.trials,
        args.seed
    );
    Ok(())
}
