//! Deterministic random substreams.
//!
//! A stream is identified by the run coordinates (master seed, vehicle count,
//! repetition), a purpose, and an index within that purpose (usually a
//! vehicle id). Every combination maps to its own ChaCha8 stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Purpose {
    /// Initial vehicle-to-location assignment.
    Placement,
    /// Vehicle-to-application assignment.
    Apps,
    /// Inter-arrival gaps and task lengths.
    Workload,
    /// Dwell times and relocation targets.
    Mobility,
}

impl Purpose {
    pub fn label(self) -> &'static str {
        match self {
            Purpose::Placement => "placement",
            Purpose::Apps => "apps",
            Purpose::Workload => "workload",
            Purpose::Mobility => "mobility",
        }
    }
}

/// Coordinates of one run inside a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    pub master_seed: u64,
    pub n_vehicles: u64,
    pub rep_index: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Builds the stream for `purpose`/`index` under `key`.
pub fn derive_stream(key: StreamKey, purpose: Purpose, index: u64) -> Stream {
    let mut state = key.master_seed;
    for word in [key.n_vehicles, key.rep_index, fnv1a(purpose.label())] {
        state = splitmix64(&mut state) ^ word;
    }
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(index);
    rng
}
