//! Path fallbacks, hex payload parsing, and the CSV assembly used by the
//! subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use uplink_core::fsk::{bits_from_bytes, bytes_from_bits};

/// Picks the explicit flag if given, otherwise the scenario's `outputs`
/// entry; complains with the name of both knobs when neither is set.
pub fn resolve_out(
    flag: Option<PathBuf>,
    fallback: Option<&String>,
    flag_name: &str,
    outputs_key: &str,
) -> Result<PathBuf> {
    match (flag, fallback) {
        (Some(p), _) => Ok(p),
        (None, Some(p)) => Ok(PathBuf::from(p)),
        (None, None) => bail!(
            "no output path: pass {flag_name} or set outputs.{outputs_key} in the scenario"
        ),
    }
}

pub fn save_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Whole-byte hex to bits, MSB first. Whitespace is ignored, same as hex
/// payloads inside scenarios.
pub fn hex_to_bits(hex: &str) -> Result<Vec<bool>> {
    let clean: String = hex.chars().filter(|c| !c.is_whitespace()).collect();
    if clean.is_empty() || !clean.len().is_multiple_of(2) {
        bail!(
            "payload hex must be a nonempty even-length hex string, got {} digits",
            clean.len()
        );
    }
    let mut bytes = Vec::with_capacity(clean.len() / 2);
    for pair in clean.as_bytes().chunks(2) {
        let s = std::str::from_utf8(pair).expect("hex substring");
        bytes.push(u8::from_str_radix(s, 16).with_context(|| format!("invalid hex byte {s:?}"))?);
    }
    Ok(bits_from_bytes(&bytes))
}

/// Bits to hex, zero padded up to a whole trailing byte.
pub fn bits_to_hex(bits: &[bool]) -> String {
    bytes_from_bits(bits)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `mic,tap,weight` rows in sensor-major order (all taps of mic 0, then
/// mic 1, ...), matching the weight vector layout.
pub fn weights_csv(weights: &[f64], num_taps: usize) -> String {
    let mut out = String::from("mic,tap,weight\n");
    for (i, w) in weights.iter().enumerate() {
        let (mic, tap) = (i / num_taps, i % num_taps);
        out.push_str(&format!("{mic},{tap},{w:.17e}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_roundtrip_and_validation() {
        let bits = hex_to_bits("de ad BE ef").unwrap();
        assert_eq!(bits.len(), 32);
        assert_eq!(bits_to_hex(&bits), "deadbeef");
        assert!(hex_to_bits("abc").is_err());
        assert!(hex_to_bits("").is_err());
        assert!(hex_to_bits("zz").is_err());
    }

    #[test]
    fn weights_csv_is_sensor_major() {
        let csv = weights_csv(&[0.5, -0.25, 0.125, 1.0], 2);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "mic,tap,weight");
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines[2].starts_with("0,1,"));
        assert!(lines[3].starts_with("1,0,"));
        assert!(lines[4].starts_with("1,1,"));
    }
}
