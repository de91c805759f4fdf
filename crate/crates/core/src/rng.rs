//! Seeded substreams for deterministic parallel sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of logical work chunks used by every parallel sampler.
/// Fixed so that results do not depend on the thread count.
pub const CHUNKS: usize = 64;

pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `total` items into `CHUNKS` contiguous ranges.
pub fn chunk_ranges(total: usize) -> Vec<std::ops::Range<usize>> {
    let base = total / CHUNKS;
    let extra = total % CHUNKS;
    let mut out = Vec::with_capacity(CHUNKS);
    let mut start = 0;
    for i in 0..CHUNKS {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}
