//! Seeded, counter-addressable random streams.
//!
//! Every stochastic routine derives its generator from a `(seed, stream)`
//! pair so that results do not depend on thread scheduling or on the order
//! in which frames, rounds or restarts are processed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` under master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator addressed by a two-level index, e.g. (grid point, frame).
pub fn indexed_rng(seed: u64, outer: u64, inner: u64) -> ChaCha8Rng {
    // Outer index selects the key, inner index the stream.
    let mixed = seed ^ outer.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    rng.set_stream(inner);
    rng
}
