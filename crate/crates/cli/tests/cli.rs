//! Behavioral tests of the binary itself: each subcommand is run as a child
//! process against small scenarios in a temp directory.

use std::path::Path;
use std::process::{Command, Output};

use uplink_core::wav;

fn uplink(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uplink"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn uplink")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = uplink(dir, args);
    assert!(
        out.status.success(),
        "uplink {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fails(dir: &Path, args: &[&str]) -> String {
    let out = uplink(dir, args);
    assert!(
        !out.status.success(),
        "uplink {args:?} unexpectedly succeeded: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn modulate_frame_length_matches_payload_arithmetic() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &[
            "modulate",
            "--hex",
            "000102030405060708090a0b0c0d0e0f",
            "--out",
            "frame.wav",
        ],
    );
    let wave = wav::read_mono(tmp.path().join("frame.wav")).unwrap();
    // 13 preamble + 8 length + 64 payload + 8 CRC symbols at 10 ms each.
    assert_eq!(wave.len(), 93 * 480);
    assert_eq!(wave.sample_rate_hz(), 48_000.0);
}

#[test]
fn modulate_rejects_degenerate_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert!(fails(dir, &["modulate", "--out", "x.wav"]).contains("--hex or --payload-file"));
    assert!(fails(dir, &["modulate", "--hex", "", "--out", "x.wav"]).contains("nonempty"));
    fails(dir, &["modulate", "--hex", "zz", "--out", "x.wav"]);
    // 30 kHz carrier at a 48 kHz rate violates Nyquist.
    fails(
        dir,
        &[
            "modulate",
            "--hex",
            "ab",
            "--carriers",
            "500,30000",
            "--out",
            "x.wav",
        ],
    );
    assert!(!dir.join("x.wav").exists());
}

#[test]
fn near_ultrasonic_preset_confines_energy_above_15_khz() {
    let tmp = tempfile::tempdir().unwrap();
    ok(
        tmp.path(),
        &[
            "modulate",
            "--near-ultrasonic",
            "--hex",
            "00112233445566778899aabbccddeeff",
            "--out",
            "ultra.wav",
        ],
    );
    let wave = wav::read_mono(tmp.path().join("ultra.wav")).unwrap();
    let fs = wave.sample_rate_hz();

    // Direct DFT per 480-sample symbol window; every carrier completes a
    // whole number of cycles per symbol, so bin energies are leakage-free.
    let n = 480;
    let (mut total, mut high) = (0.0f64, 0.0f64);
    for window in wave.samples().chunks_exact(n) {
        for k in 0..n {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (m, &x) in window.iter().enumerate() {
                let ph = -std::f64::consts::TAU * k as f64 * m as f64 / n as f64;
                re += x * ph.cos();
                im += x * ph.sin();
            }
            let e = re * re + im * im;
            total += e;
            let freq = k.min(n - k) as f64 * fs / n as f64;
            if freq >= 15_000.0 {
                high += e;
            }
        }
    }
    let fraction = high / total;
    assert!(fraction > 0.99, "high-band fraction {fraction}");
}

#[test]
fn demod_recovers_payload_and_scores_against_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let hex = "cafef00dcafef00d";
    ok(dir, &["modulate", "--hex", hex, "--out", "frame.wav"]);
    let stdout = ok(
        dir,
        &["demod", "frame.wav", "--truth-hex", hex],
    );
    assert!(stdout.contains(&format!("payload 64 bits: {hex}")), "{stdout}");
    assert!(stdout.contains("crc ok"), "{stdout}");
    assert!(stdout.contains("BER vs truth: 0"), "{stdout}");
}

const TONE_ARRAY_SCENARIO: &str = r#"{
  "id": "tone-array",
  "sample_rate_hz": 48000.0,
  "geometry": { "num_mics": 4, "spacing_m": 0.05, "speed_of_sound_mps": 343.0 },
  "fsk": { "carriers_hz": [500.0, 1500.0, 2500.0, 3500.0], "symbol_duration_s": 0.01 },
  "sources": [
    { "angle_deg": -10.0, "role": "data",
      "tone": { "freq_hz": 1500.0, "duration_s": 0.3 } }
  ],
  "noise": { "snr_db": 20.0, "seed": 3 }
}"#;

#[test]
fn beamform_writes_wav_and_weights_for_both_algorithms() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("sc.json"), TONE_ARRAY_SCENARIO).unwrap();
    ok(
        dir,
        &["simulate", "sc.json", "--out-wav", "rec.wav", "--out-meta", "meta.json"],
    );

    ok(
        dir,
        &[
            "beamform", "rec.wav", "sc.json", "--algo", "das",
            "--out-wav", "das.wav", "--out-weights", "das.csv",
        ],
    );
    let das_csv = std::fs::read_to_string(dir.join("das.csv")).unwrap();
    let rows: Vec<&str> = das_csv.lines().collect();
    assert_eq!(rows[0], "mic,tap,weight");
    assert_eq!(rows.len(), 1 + 4);
    for (mic, row) in rows[1..].iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], mic.to_string());
        assert_eq!(fields[1], "0");
        assert_eq!(fields[2].parse::<f64>().unwrap(), 0.25);
    }
    assert_eq!(
        wav::read_mono(dir.join("das.wav")).unwrap().len(),
        wav::read_channels(dir.join("rec.wav")).unwrap()[0].len()
    );

    ok(
        dir,
        &[
            "beamform", "rec.wav", "sc.json", "--algo", "frost",
            "--out-wav", "frost.wav", "--out-weights", "frost.csv",
        ],
    );
    let frost_csv = std::fs::read_to_string(dir.join("frost.csv")).unwrap();
    // 4 mics x 16 default taps, plus the header.
    assert_eq!(frost_csv.lines().count(), 1 + 64);
}

#[test]
fn beampattern_das_gain_is_unity_toward_steer() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("sc.json"), TONE_ARRAY_SCENARIO).unwrap();
    ok(
        dir,
        &[
            "beampattern", "sc.json", "--freq", "1500", "--algo", "das",
            "--out", "pattern.csv",
        ],
    );
    let csv = std::fs::read_to_string(dir.join("pattern.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "angle_deg,gain_db");
    let mut steer_gain = None;
    let mut count = 0;
    for line in lines {
        let (angle, gain) = line.split_once(',').unwrap();
        if angle.parse::<f64>().unwrap() == -10.0 {
            steer_gain = Some(gain.parse::<f64>().unwrap());
        }
        count += 1;
    }
    assert_eq!(count, 181);
    assert_eq!(steer_gain, Some(0.0));
}

const FRAMED_MIC_SCENARIO: &str = r#"{
  "id": "framed-mic",
  "sample_rate_hz": 48000.0,
  "geometry": { "num_mics": 1, "spacing_m": 0.05, "speed_of_sound_mps": 343.0 },
  "fsk": { "carriers_hz": [500.0, 1500.0, 2500.0, 3500.0], "symbol_duration_s": 0.01 },
  "sources": [
    { "angle_deg": 0.0, "role": "data", "start_s": 0.05,
      "fsk_frame": { "payload": { "hex": "abcd" } } }
  ],
  "noise": { "snr_db": 18.0, "seed": 4 },
  "duration_s": 0.55,
  "outputs": { "results_json": "results.json", "sweep_csv": "fallback_sweep.csv" }
}"#;

#[test]
fn e2e_writes_parseable_results_json() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("sc.json"), FRAMED_MIC_SCENARIO).unwrap();
    let stdout = ok(dir, &["e2e", "sc.json"]);
    assert!(stdout.contains("frost"), "{stdout}");

    let results: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("results.json")).unwrap()).unwrap();
    assert_eq!(results["scenario_id"], "framed-mic");
    assert!(results["per_mic"].is_array());
    assert!(results["frost"]["sinr"]["sinr_db"].is_number());
    assert_eq!(results["frost"]["ber"]["num_bits"], 16);
}

#[test]
fn output_paths_fall_back_to_the_scenario_block() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    std::fs::write(dir.join("sc.json"), FRAMED_MIC_SCENARIO).unwrap();
    ok(
        dir,
        &["ber-sweep", "sc.json", "--snr-grid", "10", "--trials", "2"],
    );
    let csv = std::fs::read_to_string(dir.join("fallback_sweep.csv")).unwrap();
    assert!(csv.starts_with("snr_db,num_bits,num_errors,ber\n"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn unknown_scenario_fields_are_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let broken = TONE_ARRAY_SCENARIO.replacen("\"id\"", "\"rate\": 1, \"id\"", 1);
    std::fs::write(dir.join("sc.json"), broken).unwrap();
    let stderr = fails(
        dir,
        &["simulate", "sc.json", "--out-wav", "r.wav", "--out-meta", "m.json"],
    );
    assert!(stderr.contains("unknown field"), "{stderr}");
}
