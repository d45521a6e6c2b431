//! Named random sub-streams derived from a single root seed.
//!
//! Every source of randomness in the crate draws from a ChaCha stream keyed
//! by the root seed and selected by a stable name (e.g. `"messages.d07"`).
//! Streams are independent, so adding a consumer never perturbs the draws
//! seen by existing ones, and a run is fully reproducible from the root seed
//! alone.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a, used to map stream names onto ChaCha stream ids. Stable across
/// platforms and Rust versions, unlike `DefaultHasher`.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// An RNG for the sub-stream `name` of the given root seed.
pub fn substream(root_seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(fnv1a(name.as_bytes()));
    rng
}
