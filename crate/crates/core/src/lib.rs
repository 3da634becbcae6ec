//! Simulation and processing for an acoustic data uplink: an M-FSK audio
//! modem, far-field propagation onto a uniform linear microphone array,
//! delay-and-sum and Frost adaptive beamforming, and the metrics used to
//! compare them (BER, output SINR, beampatterns).
//!
//! The pieces compose in transmission order:
//!
//! 1. [`fsk`] turns bits into a waveform ([`fsk::encode_frame`]) and back
//!    ([`fsk::decode_frame`]).
//! 2. [`array`] propagates directional sources onto the microphones
//!    ([`array::simulate_reception`]) with per-channel AWGN.
//! 3. [`beamform`] reduces the channels to one waveform, either fixed
//!    ([`beamform::delay_and_sum`]) or adaptively
//!    ([`beamform::frost_process`]).
//! 4. [`metrics`] scores the result against the known transmission.
//!
//! [`scenario`] describes a whole experiment as a strict JSON document, and
//! everything randomized is seeded explicitly, so a scenario file plus a
//! seed reproduces a simulation bit for bit (see [`rng`]).

pub mod array;
pub mod beamform;
pub mod error;
pub mod fsk;
pub mod metrics;
pub mod rng;
pub mod scenario;
pub mod signal;
pub mod wav;

pub use error::{Error, Result};
pub use signal::Waveform;
