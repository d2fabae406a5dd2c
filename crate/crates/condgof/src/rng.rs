//! Seeded random streams.
//!
//! Every randomized routine in this crate takes an explicit generator, and
//! the engine derives one independent stream per unit of parallel work from a
//! `(seed, stream)` pair. ChaCha exposes exactly that: the seed fixes the key
//! and the stream id selects a disjoint counter range, so results do not
//! depend on how work is scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// An independent random stream fully determined by `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
