//! Counter-based random substreams.
//!
//! Every Monte-Carlo trial owns a ChaCha8 stream selected by
//! `(master_seed, snr_db, trial)`: the seed and SNR pick the key, the trial
//! index picks the stream. Results therefore do not depend on how trials are
//! scheduled, and the same SNR value always replays the same draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct StreamFactory {
    master_seed: u64,
}

impl StreamFactory {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    /// Streams for one SNR point. `-0.0` and `0.0` share a key.
    pub fn for_snr(&self, snr_db: f64) -> TrialStreams {
        let bits = if snr_db == 0.0 { 0 } else { snr_db.to_bits() };
        TrialStreams {
            base: ChaCha8Rng::seed_from_u64(mix(self.master_seed) ^ mix(bits ^ 0x5eed)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialStreams {
    base: ChaCha8Rng,
}

impl TrialStreams {
    /// Independent generator for one trial.
    pub fn trial(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(trial);
        rng.set_word_pos(0);
        rng
    }
}
