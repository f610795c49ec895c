//! Counter-based stream splitting.
//!
//! Every Monte Carlo draw in a campaign is indexed by `(master seed, stream)`;
//! the stream id selects an independent ChaCha keystream, so results do not
//! depend on how streams are distributed over worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for stream `stream` of master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for sample `index` of sub-campaign `group` (e.g. one per height law).
pub fn stream_id(group: u32, index: u64) -> u64 {
    ((group as u64) << 40) | (index & ((1u64 << 40) - 1))
}
